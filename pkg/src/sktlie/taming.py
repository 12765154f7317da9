"""Taming symplectic forms and Kahler feasibility.

Three pieces of machinery:

* a linear solver for the (2,0)-form equation dbar(beta) = del(omega) over
  the del-closed (2,0) space (for a pluriclosed omega this is exactly the
  obstruction to a taming symplectic form);
* assembly of the real closed form Omega = omega +/- (beta + conj(beta)),
  whose J-symmetrization equals the metric pairing, hence is taming;
* seeded projected-ascent searches for closed positive (1,1)-forms (Kahler
  candidates) and general taming forms over the full closed 2-form space,
  with an exact rank-one infeasibility certificate attempt.

Search results are never claims of non-existence unless the certificate
succeeds; reports carry an explicit confidence field.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import tolerance
from .errors import InternalInconsistencyError, PreconditionError
from .hermitian import HermitianStructure, classify_metric
from .liealg import LieAlgebra, nullspace
from .multilinear import (
    ComplexKForm,
    KForm,
    as_matrix,
    bidegree_decompose,
    holomorphic_coframe,
    index_combos,
    wedge,
)

__all__ = [
    "BetaSolution",
    "TamingForm",
    "SearchReport",
    "solve_beta",
    "assemble_taming",
    "kahler_search",
    "hermitian_symplectic_search",
    "form_to_matrix",
    "taming_pairing",
]


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------


def form_to_matrix(form: KForm) -> np.ndarray:
    """Antisymmetric matrix M[i, j] = form(e_i, e_j) of a 2-form."""
    n = form.dim
    M = np.zeros((n, n))
    for (i, j), c in zip(index_combos(n, 2), form.coeffs):
        M[i, j] = c
        M[j, i] = -c
    return M


def matrix_to_form(M: np.ndarray) -> KForm:
    n = M.shape[0]
    return KForm(n, 2, [M[i, j] for (i, j) in index_combos(n, 2)])


def taming_pairing(form: KForm, J) -> np.ndarray:
    """Symmetrized pairing h(X, Y) = (form(X, JY) + form(Y, JX)) / 2."""
    Jm = as_matrix(J)
    MJ = form_to_matrix(form) @ Jm
    return 0.5 * (MJ + MJ.T)


def _pure_component(forms, degree_pair):
    for f in forms:
        if f.bidegree == degree_pair:
            return f
    return None


# ---------------------------------------------------------------------------
# beta solver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BetaSolution:
    """Solution of dbar(beta) = del(omega) over del-closed (2,0)-forms."""

    beta: ComplexKForm
    coefficients: np.ndarray  # in the alpha^{rs} basis (single entry in dim 4)
    residual: float
    del_beta_norm: float

    @property
    def a(self) -> complex:
        """The coefficient in dimension 4 (beta = a * alpha^{12})."""
        if self.coefficients.size != 1:
            raise PreconditionError("scalar coefficient only defined in dimension 4")
        return complex(self.coefficients[0])


def _two_zero_basis(H: HermitianStructure):
    """Basis of (2,0)-forms alpha^{rs} = alpha^r wedge alpha^s, r < s."""
    alphas = holomorphic_coframe(H.J)
    n = H.algebra.dim
    one_forms = [ComplexKForm(n, 1, a) for a in alphas]
    basis = []
    for r in range(len(alphas)):
        for s in range(r + 1, len(alphas)):
            basis.append(wedge(one_forms[r], one_forms[s]))
    return basis


def solve_beta(H: HermitianStructure, tol: float | None = None):
    """Least-squares solve of dbar(beta) = del(omega) with beta a del-closed
    (2,0)-form; returns None when no solution exists within tolerance.

    The taming equivalence behind this equation needs omega pluriclosed; a
    non-pluriclosed omega is accepted but flagged in the returned residual
    (the system then generally has no solution)."""
    t = tolerance() if tol is None else tol
    if not H.is_integrable(t):
        raise PreconditionError("beta solver needs an integrable J")
    L = H.algebra
    domega = L.d(H.omega)
    del_omega = _pure_component(bidegree_decompose(domega, H.J, t), (2, 1))
    rhs = del_omega.coeffs if del_omega is not None else np.zeros(
        len(index_combos(L.dim, 3)), dtype=complex
    )
    basis = _two_zero_basis(H)
    dbar_cols = []
    del_cols = []
    for b in basis:
        db = L.d_complex(b)
        comps = bidegree_decompose(db, H.J, t)
        dbar = _pure_component(comps, (2, 1))
        delp = _pure_component(comps, (3, 0))
        dbar_cols.append(dbar.coeffs if dbar is not None else np.zeros_like(rhs))
        del_cols.append(
            delp.coeffs if delp is not None
            else np.zeros(len(index_combos(L.dim, 3)), dtype=complex)
        )
    A = np.column_stack(dbar_cols)
    P = np.column_stack(del_cols)
    # restrict to the del-closed subspace of (2,0)-forms
    scaleP = max(1.0, float(np.max(np.abs(P))) if P.size else 1.0)
    K = nullspace(np.vstack([P.real / scaleP, P.imag / scaleP]), t) if P.size else None
    if K is not None and K.shape[1] == 0:
        return None
    A_res = A @ K if K is not None else A
    sol, *_ = np.linalg.lstsq(A_res, rhs, rcond=None)
    coeffs = (K @ sol) if K is not None else sol
    residual = float(np.max(np.abs(A @ coeffs - rhs))) if rhs.size else 0.0
    scale = max(1.0, float(np.max(np.abs(rhs))) if rhs.size else 1.0)
    if residual > 100 * t * scale:
        return None
    beta = ComplexKForm(L.dim, 2, np.einsum(
        "m,mc->c", coeffs, np.stack([b.coeffs for b in basis])
    ), (2, 0))
    del_beta = float(np.max(np.abs(P @ coeffs))) if P.size else 0.0
    return BetaSolution(
        beta=beta, coefficients=coeffs, residual=residual, del_beta_norm=del_beta
    )


# ---------------------------------------------------------------------------
# taming form assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TamingForm:
    """A closed 2-form with its taming certificate."""

    form: KForm
    d_norm: float
    pairing_min_eig: float
    assembly_sign: int | None = None  # +/-1 when built from a beta solution

    @property
    def is_taming(self) -> bool:
        return self.pairing_min_eig > 0.0

    def as_dict(self) -> dict:
        return {
            "d_norm": self.d_norm,
            "pairing_min_eig": self.pairing_min_eig,
            "taming": self.is_taming,
            "assembly_sign": self.assembly_sign,
        }


def assemble_taming(H: HermitianStructure, beta: BetaSolution,
                    tol: float | None = None) -> TamingForm:
    """Omega = omega + s (beta + conj beta) with the sign s in {+1, -1} picked
    by closedness (both orientations of the beta equation occur in the
    literature; closedness of Omega is the invariant fact).

    The (2,0)+(0,2) part satisfies (beta + conj beta)(X, JX) = 0 exactly, so
    the symmetrized pairing of Omega equals the metric and Omega tames J."""
    t = tolerance() if tol is None else tol
    L = H.algebra
    real_part = (beta.beta + beta.beta.conjugate()).real_part
    scale = max(1.0, H.omega.norm(), real_part.norm(),
                float(np.max(np.abs(L.structure))))
    best = None
    for sign in (+1, -1):
        candidate = H.omega + float(sign) * real_part
        dnorm = L.d(candidate).norm()
        if best is None or dnorm < best[1]:
            best = (candidate, dnorm, sign)
    candidate, dnorm, sign = best
    if dnorm > 100 * t * scale:
        raise InternalInconsistencyError(
            f"neither assembly sign closes Omega (best d-norm {dnorm:.3e})"
        )
    h = taming_pairing(candidate, H.J)
    min_eig = float(np.linalg.eigvalsh(h)[0])
    return TamingForm(form=candidate, d_norm=dnorm, pairing_min_eig=min_eig,
                      assembly_sign=sign)


# ---------------------------------------------------------------------------
# feasibility searches
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchReport:
    """Outcome of a seeded feasibility search over closed 2-forms."""

    status: str  # "found" | "not-found-within-budget" | "infeasible-certified"
    confidence: str  # "certified" for found/infeasible, else "heuristic"
    taming_form: TamingForm | None
    certificate_vector: np.ndarray | None
    best_objective: float
    objective_trace: dict
    seed: int
    budget: int
    restarts: int
    iterations_used: int
    subspace_dim: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "confidence": self.confidence,
            "best_objective": self.best_objective,
            "objective_trace": self.objective_trace,
            "seed": self.seed,
            "budget": self.budget,
            "restarts": self.restarts,
            "iterations_used": self.iterations_used,
            "subspace_dim": self.subspace_dim,
            "taming_form": self.taming_form.as_dict() if self.taming_form else None,
            "certificate": (
                self.certificate_vector.tolist()
                if self.certificate_vector is not None else None
            ),
        }


def _closed_two_form_basis(L: LieAlgebra, tol: float) -> np.ndarray:
    """Columns span ker(d) in Lambda^2 coefficients."""
    return nullspace(L.d_matrix(2), tol)


def _invariant_closed_basis(L: LieAlgebra, J, tol: float) -> np.ndarray:
    """Columns span the J-invariant (real (1,1)) closed 2-forms."""
    from .multilinear import _compound_pullback_matrix

    Jm = as_matrix(J)
    P2 = _compound_pullback_matrix(Jm, 2)
    inv = nullspace(P2 - np.eye(P2.shape[0]), tol)
    if inv.shape[1] == 0:
        return inv
    K = nullspace(L.d_matrix(2) @ inv, tol)
    return inv @ K


def _min_eig_ascent(L: LieAlgebra, J, basis: np.ndarray, budget: int,
                    restarts: int, seed: int, tol: float):
    """Maximize lambda_min(h(x)) over ||x|| <= 1 by projected supergradient
    ascent; h is linear in x so the objective is concave.  Deterministic for
    fixed (inputs, seed); restarts merged by best objective, first wins ties."""
    n = L.dim
    m = basis.shape[1]
    Jm = as_matrix(J)
    if m == 0:
        return None, -np.inf, 0, {"first": None, "best": None, "last": None}
    h_of_basis = []
    for b in range(m):
        Mb = np.zeros((n, n))
        for (i, j), c in zip(index_combos(n, 2), basis[:, b]):
            Mb[i, j] = c
            Mb[j, i] = -c
        MJ = Mb @ Jm
        h_of_basis.append(0.5 * (MJ + MJ.T))
    h_of_basis = np.stack(h_of_basis)

    def h_at(x):
        return np.einsum("b,bij->ij", x, h_of_basis)

    rng = np.random.default_rng(seed)
    per_restart = max(1, budget // max(1, restarts))
    best_x, best_val = None, -np.inf
    used = 0
    first_val = None
    # warm start: the projection of a canonical positive pairing if available
    starts = [None] * restarts
    for r in range(restarts):
        if starts[r] is None:
            x = rng.normal(size=m)
        else:
            x = starts[r]
        x = x / max(1e-300, np.linalg.norm(x))
        stall = 0
        local_best = -np.inf
        for it in range(per_restart):
            used += 1
            h = h_at(x)
            w, V = np.linalg.eigh(h)
            val = float(w[0])
            if first_val is None:
                first_val = val
            if val > best_val + 1e-15:
                best_val, best_x = val, x.copy()
            if val > local_best + 1e-12:
                local_best = val
                stall = 0
            else:
                stall += 1
            if stall > 150:
                break
            if val > 0.05:  # comfortably inside the cone; certificate is exact anyway
                break
            v = V[:, 0]
            grad = np.einsum("i,bij,j->b", v, h_of_basis, v)
            gn = np.linalg.norm(grad)
            if gn < 1e-14:
                break
            step = 0.3 / np.sqrt(1.0 + it / 10.0)
            x = x + step * grad / gn
            x = x / max(1e-300, np.linalg.norm(x))
    trace = {"first": first_val, "best": best_val if best_val > -np.inf else None,
             "last": best_val if best_val > -np.inf else None}
    return best_x, best_val, used, trace


def _rank_one_certificate(L: LieAlgebra, J, closed_basis: np.ndarray,
                          seed: int, tol: float):
    """Search for a unit X with Omega(X, JX) = 0 for every closed 2-form.

    The condition is linear in Omega, so checking it on a basis of ker(d) is
    exact; such an X proves no closed form can tame J."""
    n = L.dim
    Jm = as_matrix(J)
    mats = []
    for b in range(closed_basis.shape[1]):
        Mb = np.zeros((n, n))
        for (i, j), c in zip(index_combos(n, 2), closed_basis[:, b]):
            Mb[i, j] = c
            Mb[j, i] = -c
        MJ = Mb @ Jm
        mats.append(0.5 * (MJ + MJ.T))
    if not mats:
        return None
    mats = np.stack(mats)

    def defect(x):
        vals = np.einsum("i,bij,j->b", x, mats, x)
        return float(np.max(np.abs(vals)))

    # basis vectors first: cheap and exact
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        if defect(e) <= 10 * tol:
            return e
    # seeded multistart projected descent on sum of squared pairings
    rng = np.random.default_rng(seed + 104729)
    for _ in range(8):
        x = rng.normal(size=n)
        x /= np.linalg.norm(x)
        for it in range(400):
            vals = np.einsum("i,bij,j->b", x, mats, x)
            grad = 4.0 * np.einsum("b,bij,j->i", vals, mats, x)
            gn = np.linalg.norm(grad)
            if gn < 1e-16:
                break
            x = x - (0.2 / np.sqrt(1.0 + it)) * grad / gn
            x /= np.linalg.norm(x)
        if defect(x) <= 10 * tol:
            return x
    return None


def _finalize_found(L: LieAlgebra, J, basis, x, tol: float) -> TamingForm:
    coeffs = basis @ x
    form = KForm(L.dim, 2, coeffs)
    dnorm = L.d(form).norm()
    h = taming_pairing(form, J)
    min_eig = float(np.linalg.eigvalsh(h)[0])
    return TamingForm(form=form, d_norm=dnorm, pairing_min_eig=min_eig)


def kahler_search(L: LieAlgebra, J, budget: int = 10_000, seed: int = 0,
                  restarts: int = 8, tol: float | None = None) -> SearchReport:
    """Search for a closed positive J-invariant 2-form (a Kahler metric).

    Parametrizes real (1,1)-forms, intersects with ker d (both linear), then
    maximizes the minimal eigenvalue of the symmetrized pairing by seeded
    projected ascent.  `not-found-within-budget` is a search outcome, not a
    proof of non-existence."""
    t = tolerance() if tol is None else tol
    basis = _invariant_closed_basis(L, J, t)
    x, val, used, trace = _min_eig_ascent(L, J, basis, budget, restarts, seed, t)
    pos_cut = max(1e-7, 100 * t)
    if x is not None and val > pos_cut:
        tf = _finalize_found(L, J, basis, x, t)
        if tf.pairing_min_eig > 0 and tf.d_norm <= 100 * t:
            return SearchReport(
                status="found", confidence="certified", taming_form=tf,
                certificate_vector=None, best_objective=val,
                objective_trace=trace, seed=seed, budget=budget,
                restarts=restarts, iterations_used=used,
                subspace_dim=basis.shape[1],
            )
    return SearchReport(
        status="not-found-within-budget", confidence="heuristic",
        taming_form=None, certificate_vector=None,
        best_objective=val if np.isfinite(val) else 0.0, objective_trace=trace,
        seed=seed, budget=budget, restarts=restarts, iterations_used=used,
        subspace_dim=basis.shape[1],
    )


def hermitian_symplectic_search(L: LieAlgebra, J, budget: int = 10_000,
                                seed: int = 0, restarts: int = 8,
                                tol: float | None = None) -> SearchReport:
    """Search for a closed 2-form taming J over the full closed 2-form space.

    Also attempts the exact rank-one infeasibility certificate: a unit vector
    X with Omega(X, JX) = 0 for every closed Omega (linear in Omega, so a
    kernel-basis check is a proof)."""
    t = tolerance() if tol is None else tol
    basis = _closed_two_form_basis(L, t)
    x, val, used, trace = _min_eig_ascent(L, J, basis, budget, restarts, seed, t)
    pos_cut = max(1e-7, 100 * t)
    if x is not None and val > pos_cut:
        tf = _finalize_found(L, J, basis, x, t)
        if tf.pairing_min_eig > 0 and tf.d_norm <= 100 * t:
            return SearchReport(
                status="found", confidence="certified", taming_form=tf,
                certificate_vector=None, best_objective=val,
                objective_trace=trace, seed=seed, budget=budget,
                restarts=restarts, iterations_used=used,
                subspace_dim=basis.shape[1],
            )
    cert = _rank_one_certificate(L, J, basis, seed, t)
    if cert is not None:
        return SearchReport(
            status="infeasible-certified", confidence="certified",
            taming_form=None, certificate_vector=cert,
            best_objective=val if np.isfinite(val) else 0.0,
            objective_trace=trace, seed=seed, budget=budget,
            restarts=restarts, iterations_used=used,
            subspace_dim=basis.shape[1],
        )
    return SearchReport(
        status="not-found-within-budget", confidence="heuristic",
        taming_form=None, certificate_vector=None,
        best_objective=val if np.isfinite(val) else 0.0, objective_trace=trace,
        seed=seed, budget=budget, restarts=restarts, iterations_used=used,
        subspace_dim=basis.shape[1],
    )
