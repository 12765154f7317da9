"""Finite-dimensional Lie algebras given by coframe differentials.

A Lie algebra is entered the way structure equations are usually printed:
one 2-form de^k per coframe element, e.g. (e^{24}, -e^{14}, e^{12}, 0).
Bracket constants are derived through de^k(X, Y) = -e^k([X, Y]), and the
Chevalley-Eilenberg differential is the degree-+1 derivation extending the
coframe data.  Numerical rank decisions use the global tolerance; singular
values that sit on the cut line trigger a warning rather than failing
silently.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import tolerance
from .errors import InvalidInputError
from .multilinear import (
    ComplexKForm,
    KForm,
    combo_rank,
    dim_forms,
    index_combos,
    merge_indices,
)


class RankAmbiguityWarning(UserWarning):
    """A singular value sits within tolerance of the rank cut."""


def numerical_rank(M: np.ndarray, tol: float | None = None, warn: bool = True) -> int:
    """Rank by SVD: singular values below tol * max(1, sigma_max) count as zero."""
    if M.size == 0:
        return 0
    t = tolerance() if tol is None else tol
    sv = np.linalg.svd(M, compute_uv=False)
    cut = t * max(1.0, float(sv[0]) if sv.size else 1.0)
    if warn and np.any((sv > 0) & (np.abs(sv - cut) <= t)):
        warnings.warn(
            f"singular value within {t:.1e} of the rank threshold {cut:.3e}",
            RankAmbiguityWarning,
            stacklevel=2,
        )
    return int(np.sum(sv > cut))


def nullspace(M: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of M."""
    if M.size == 0:
        return np.eye(M.shape[1])
    t = tolerance() if tol is None else tol
    _, sv, Vt = np.linalg.svd(M)
    cut = t * max(1.0, float(sv[0]) if sv.size else 1.0)
    r = int(np.sum(sv > cut))
    return Vt[r:].T.copy()


def column_span(M: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the column space of M."""
    if M.size == 0 or M.shape[1] == 0:
        return np.zeros((M.shape[0], 0))
    t = tolerance() if tol is None else tol
    U, sv, _ = np.linalg.svd(M, full_matrices=False)
    cut = t * max(1.0, float(sv[0]) if sv.size else 1.0)
    r = int(np.sum(sv > cut))
    return U[:, :r].copy()


class LieAlgebra:
    """Lie algebra from coframe differentials (a list of degree-2 KForms)."""

    def __init__(self, differentials: list[KForm], check: bool = True,
                 tol: float | None = None):
        if not differentials:
            raise InvalidInputError("empty structure data")
        n = len(differentials)
        for k, form in enumerate(differentials):
            if not isinstance(form, KForm) or form.dim != n or form.degree != 2:
                raise InvalidInputError(
                    f"de^{k + 1} must be a degree-2 form on R^{n}"
                )
        self.dim = n
        self.differentials = list(differentials)
        # brackets: c[k, i, j] with [e_i, e_j] = sum_k c[k, i, j] e_k
        c = np.zeros((n, n, n))
        rank2 = combo_rank(n, 2)
        for k, form in enumerate(differentials):
            for (i, j), r in rank2.items():
                val = -form.coeffs[r]
                c[k, i, j] = val
                c[k, j, i] = -val
        c.flags.writeable = False
        self.structure = c
        self._d_matrices: dict[int, np.ndarray] = {}
        if check:
            defect = self.jacobi_defect()
            t = tolerance() if tol is None else tol
            scale = max(1.0, float(np.max(np.abs(c)))) ** 2
            if defect > t * scale:
                raise InvalidInputError(
                    f"structure constants violate the Jacobi identity "
                    f"(defect {defect:.3e})"
                )

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_terms(cls, dim: int, d_terms: dict[int, dict], **kw) -> "LieAlgebra":
        """Structure equations as {k: {(i, j): coeff}} with 1-based labels."""
        forms = []
        for k in range(1, dim + 1):
            forms.append(KForm.from_terms(dim, 2, d_terms.get(k, {})))
        return cls(forms, **kw)

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebra":
        return cls([KForm(dim, 2) for _ in range(dim)])

    @classmethod
    def from_brackets(cls, structure: np.ndarray, **kw) -> "LieAlgebra":
        """From c[k, i, j] bracket constants ([e_i, e_j] = sum_k c[k,i,j] e_k)."""
        c = np.asarray(structure, dtype=float)
        n = c.shape[0]
        forms = []
        for k in range(n):
            terms = {}
            for (i, j) in index_combos(n, 2):
                terms[(i + 1, j + 1)] = -c[k, i, j]
            forms.append(KForm.from_terms(n, 2, terms))
        return cls(forms, **kw)

    # -- core data -------------------------------------------------------------

    def bracket(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.einsum("kij,i,j->k", self.structure, x, y)

    @cached_property
    def ad(self) -> np.ndarray:
        """ad[i] = matrix of ad_{e_i} (acting as ad_X Y = [X, Y])."""
        n = self.dim
        mats = np.empty((n, n, n))
        for i in range(n):
            mats[i] = self.structure[:, i, :]
        mats.flags.writeable = False
        return mats

    def jacobi_defect(self) -> float:
        """Max norm over basis triples of [[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y]."""
        n = self.dim
        c = self.structure
        worst = 0.0
        for i, j, k in index_combos(n, 3):
            # [[e_i, e_j], e_k]_l = sum_m c[l, m, k] c[m, i, j]
            v = (
                c[:, :, k] @ c[:, i, j]
                + c[:, :, i] @ c[:, j, k]
                + c[:, :, j] @ c[:, k, i]
            )
            worst = max(worst, float(np.max(np.abs(v))))
        return worst

    # -- Chevalley-Eilenberg differential ---------------------------------------

    def d_matrix(self, k: int) -> np.ndarray:
        """Matrix of d: Λ^k -> Λ^{k+1} on coefficient vectors."""
        if k in self._d_matrices:
            return self._d_matrices[k]
        n = self.dim
        rows, cols = dim_forms(n, k + 1), dim_forms(n, k)
        M = np.zeros((rows, cols))
        if k >= 1 and rows:
            rank_out = combo_rank(n, k + 1)
            for r, combo in enumerate(index_combos(n, k)):
                # d(e^{i_1...i_k}) = sum_s (-1)^{s-1} de^{i_s} ∧ e^{rest}
                for s, i_s in enumerate(combo):
                    rest = combo[:s] + combo[s + 1 :]
                    sgn_slot = -1.0 if s % 2 else 1.0
                    dform = self.differentials[i_s]
                    for (a, b), rank_ab in combo_rank(n, 2).items():
                        cval = dform.coeffs[rank_ab]
                        if cval == 0.0:
                            continue
                        merged = merge_indices((a, b), rest)
                        if merged is None:
                            continue
                        sgn, cout = merged
                        M[rank_out[cout], r] += sgn_slot * sgn * cval
        M.flags.writeable = False
        self._d_matrices[k] = M
        return M

    def d(self, form: KForm) -> KForm:
        """Chevalley-Eilenberg differential of an invariant form."""
        if form.dim != self.dim:
            raise InvalidInputError("form lives on a different dimension")
        if form.degree >= self.dim:
            return KForm(self.dim, form.degree + 1)
        return KForm(self.dim, form.degree + 1, self.d_matrix(form.degree) @ form.coeffs)

    def d_complex(self, form: ComplexKForm) -> ComplexKForm:
        if form.degree >= self.dim:
            return ComplexKForm(self.dim, form.degree + 1)
        M = self.d_matrix(form.degree)
        return ComplexKForm(self.dim, form.degree + 1, M @ form.coeffs)

    def d_squared_norm(self) -> float:
        """max_k ||d_{k+1} d_k|| (0 iff Jacobi holds)."""
        worst = 0.0
        for k in range(1, self.dim):
            prod = self.d_matrix(k) @ self.d_matrix(k - 1)
            if prod.size:
                worst = max(worst, float(np.max(np.abs(prod))))
        return worst

    # -- cohomology --------------------------------------------------------------

    def cohomology_dims(self, max_degree: int | None = None,
                        tol: float | None = None) -> list[int]:
        """Invariant Betti numbers b_0..b_n (or up to max_degree)."""
        n = self.dim
        top = n if max_degree is None else min(max_degree, n)
        betti = []
        prev_rank = 0
        for k in range(top + 1):
            rk = numerical_rank(self.d_matrix(k), tol)
            betti.append(dim_forms(n, k) - rk - prev_rank)
            prev_rank = rk
        return betti

    # -- structural series ---------------------------------------------------------

    def bracket_span(self, A: np.ndarray, B: np.ndarray, tol: float | None = None) -> np.ndarray:
        """Orthonormal basis of span{[a, b]: a in col(A), b in col(B)}."""
        if A.shape[1] == 0 or B.shape[1] == 0:
            return np.zeros((self.dim, 0))
        prods = np.einsum("kij,ia,jb->kab", self.structure, A, B)
        return column_span(prods.reshape(self.dim, -1), tol)

    def derived_series(self, tol: float | None = None) -> list[np.ndarray]:
        out = [np.eye(self.dim)]
        while out[-1].shape[1]:
            nxt = self.bracket_span(out[-1], out[-1], tol)
            if nxt.shape[1] == out[-1].shape[1]:
                out.append(nxt)
                break
            out.append(nxt)
        return out

    def lower_central_series(self, tol: float | None = None) -> list[np.ndarray]:
        out = [np.eye(self.dim)]
        while out[-1].shape[1]:
            nxt = self.bracket_span(np.eye(self.dim), out[-1], tol)
            if nxt.shape[1] == out[-1].shape[1]:
                out.append(nxt)
                break
            out.append(nxt)
        return out

    def derived_algebra(self, tol: float | None = None) -> np.ndarray:
        return self.bracket_span(np.eye(self.dim), np.eye(self.dim), tol)

    def center(self, tol: float | None = None) -> np.ndarray:
        # kernel of X -> ([e_1, X], ..., [e_n, X]) stacked
        stacked = np.vstack([self.ad[i] for i in range(self.dim)])
        return nullspace(stacked, tol)

    def is_unimodular(self, tol: float | None = None) -> bool:
        t = tolerance() if tol is None else tol
        scale = max(1.0, float(np.max(np.abs(self.structure))))
        return all(abs(float(np.trace(self.ad[i]))) <= t * scale for i in range(self.dim))

    def is_perfect(self, tol: float | None = None) -> bool:
        return self.derived_algebra(tol).shape[1] == self.dim

    def fingerprint(self, tol: float | None = None, betti_max_dim: int = 12) -> "Fingerprint":
        derived = [S.shape[1] for S in self.derived_series(tol)]
        lower = [S.shape[1] for S in self.lower_central_series(tol)]
        solv = derived.index(0) if derived[-1] == 0 else None
        nilp = lower.index(0) if lower[-1] == 0 else None
        betti = (
            self.cohomology_dims(tol=tol) if self.dim <= betti_max_dim else None
        )
        return Fingerprint(
            dim=self.dim,
            derived_dims=tuple(derived),
            lower_central_dims=tuple(lower),
            center_dim=self.center(tol).shape[1],
            solvable_step=solv,
            nilpotent_step=nilp,
            unimodular=self.is_unimodular(tol),
            betti=tuple(betti) if betti is not None else None,
        )

    def __repr__(self):
        eqs = ", ".join(form_to_string(f) for f in self.differentials)
        return f"LieAlgebra(dim={self.dim}: ({eqs}))"


@dataclass(frozen=True)
class Fingerprint:
    """Cheap isomorphism invariants (a fingerprint, not a full iso test)."""

    dim: int
    derived_dims: tuple[int, ...]
    lower_central_dims: tuple[int, ...]
    center_dim: int
    solvable_step: int | None
    nilpotent_step: int | None
    unimodular: bool
    betti: tuple[int, ...] | None = None

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "derived_series_dims": list(self.derived_dims),
            "lower_central_series_dims": list(self.lower_central_dims),
            "center_dim": self.center_dim,
            "solvable_step": self.solvable_step,
            "nilpotent_step": self.nilpotent_step,
            "unimodular": self.unimodular,
            "betti": list(self.betti) if self.betti is not None else None,
        }


def jacobi_defect(L: LieAlgebra) -> float:
    return L.jacobi_defect()


def ce_differential(L: LieAlgebra, form: KForm) -> KForm:
    return L.d(form)


def cohomology_dims(L: LieAlgebra, tol: float | None = None) -> list[int]:
    return L.cohomology_dims(tol=tol)


def fingerprint(L: LieAlgebra, tol: float | None = None) -> Fingerprint:
    return L.fingerprint(tol)


def form_to_string(form: KForm, places: int = 6) -> str:
    """Compact e^{ij}-style rendering, used in reports and demos."""
    parts = []
    for idx, c in form.terms():
        label = "e^{" + "".join(str(i) for i in idx) + "}"
        if abs(c - 1.0) <= 10 ** -places:
            parts.append(f"+{label}")
        elif abs(c + 1.0) <= 10 ** -places:
            parts.append(f"-{label}")
        else:
            parts.append(f"{c:+.{places}g}*{label}")
    if not parts:
        return "0"
    out = " ".join(parts)
    return out[1:] if out.startswith("+") else out


def koszul_two_form_differential(L: LieAlgebra, omega: KForm) -> KForm:
    """Independent oracle for d on 2-forms:

    d w(X,Y,Z) = -w([X,Y],Z) - w([Y,Z],X) - w([Z,X],Y), assembled over basis
    triples.  Kept separate from the derivation-rule path on purpose.
    """
    n = L.dim
    terms = {}
    eye = np.eye(n)
    for (i, j, k) in index_combos(n, 3):
        x, y, z = eye[i], eye[j], eye[k]
        val = (
            -omega.evaluate(L.bracket(x, y), z)
            - omega.evaluate(L.bracket(y, z), x)
            - omega.evaluate(L.bracket(z, x), y)
        )
        terms[(i + 1, j + 1, k + 1)] = val
    return KForm.from_terms(n, 3, terms)
