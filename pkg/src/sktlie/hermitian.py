"""Hermitian structures on Lie algebras: compatibility, the canonical
skew-torsion Hermitian connection, its torsion 3-form, and the metric
classifiers (Kahler / pluriclosed / neither).

Conventions (fixed throughout the library):

* vector-level complex structure: the block-standard J acts as
  J e_1 = e_2, J e_2 = -e_1, J e_3 = e_4, J e_4 = -e_3, ...;
* fundamental form omega(X, Y) = g(J X, Y);
* torsion 3-form c(X, Y, Z) = -d omega(J X, J Y, J Z), i.e. the negated
  pullback of d omega by J;
* d^c = i (dbar - del); with the conventions above d^c omega equals c,
  and the library checks that identity on every call that computes both.

"pluriclosed" below means d c = 0 (equivalently del dbar omega = 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import tolerance
from .connections import Connection
from .errors import InternalInconsistencyError, InvalidInputError, PreconditionError
from .liealg import LieAlgebra
from .multilinear import (
    ComplexKForm,
    KForm,
    as_matrix,
    bidegree_decompose,
    check_almost_complex,
    index_combos,
    pullback,
)

__all__ = [
    "ComplexStructure",
    "HermitianStructure",
    "MetricClass",
    "nijenhuis_norm",
    "fundamental_form",
    "bismut_connection",
    "connection_torsion_form",
    "torsion_three_form",
    "dc_form",
    "del_delbar_omega_norm",
    "classify_metric",
    "generalized_kahler_check",
    "GeneralizedKahlerResult",
    "adjoint_admissible",
    "standard_complex_structure",
]


def standard_complex_structure(n: int) -> np.ndarray:
    """Block-standard J: J e_{2i-1} = e_{2i}, J e_{2i} = -e_{2i-1}."""
    if n % 2:
        raise InvalidInputError("complex structure needs even dimension")
    J = np.zeros((n, n))
    for i in range(0, n, 2):
        J[i + 1, i] = 1.0
        J[i, i + 1] = -1.0
    return J


@dataclass(frozen=True)
class ComplexStructure:
    """An endomorphism with J^2 = -id; integrability is a separate predicate."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(as_matrix(self.matrix), dtype=float)
        check_almost_complex(m)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _j_matrix(J) -> np.ndarray:
    if isinstance(J, ComplexStructure):
        return J.matrix
    m = as_matrix(J)
    check_almost_complex(m)
    return m


def nijenhuis_norm(L: LieAlgebra, J) -> float:
    """max over basis pairs of ||N(X,Y)||, N = J([X,Y]-[JX,JY]) - ([JX,Y]+[X,JY])."""
    Jm = _j_matrix(J)
    if Jm.shape[0] != L.dim:
        raise InvalidInputError("J/algebra dimension mismatch")
    c = L.structure
    br = c  # br[:, i, j] = [e_i, e_j]
    br_JJ = np.einsum("kab,ai,bj->kij", c, Jm, Jm)
    br_Jl = np.einsum("kaj,ai->kij", c.transpose(0, 1, 2), Jm)  # [J e_i, e_j]
    br_Jr = np.einsum("kib,bj->kij", c.transpose(0, 1, 2), Jm)  # [e_i, J e_j]
    N = np.einsum("km,mij->kij", Jm, br - br_JJ) - (br_Jl + br_Jr)
    return float(np.max(np.abs(N))) if N.size else 0.0


class HermitianStructure:
    """A Lie algebra with a compatible pair (J, g) and its fundamental form."""

    def __init__(self, L: LieAlgebra, J, g, tol: float | None = None,
                 require_integrable: bool = False):
        t = tolerance() if tol is None else tol
        Jm = _j_matrix(J)
        G = np.array(as_matrix(g), dtype=float)
        n = L.dim
        if Jm.shape[0] != n or G.shape[0] != n:
            raise InvalidInputError("dimension mismatch among (L, J, g)")
        if np.max(np.abs(G - G.T)) > t * max(1.0, float(np.max(np.abs(G)))):
            raise InvalidInputError("metric must be symmetric")
        eig = np.linalg.eigvalsh(0.5 * (G + G.T))
        if eig[0] <= t:
            raise InvalidInputError(f"metric not positive definite (min eig {eig[0]:.3e})")
        scale = max(1.0, float(np.max(np.abs(G))))
        if np.max(np.abs(Jm.T @ G @ Jm - G)) > 100 * t * scale:
            raise InvalidInputError("metric not compatible with J: g(JX,JY) != g(X,Y)")
        G.flags.writeable = False
        Jm = Jm.copy()
        Jm.flags.writeable = False
        self.algebra = L
        self.J = Jm
        self.metric = G
        if require_integrable and not self.is_integrable(t):
            raise PreconditionError(
                f"J is not integrable (Nijenhuis norm {self.nijenhuis:.3e})"
            )

    @cached_property
    def nijenhuis(self) -> float:
        return nijenhuis_norm(self.algebra, self.J)

    def is_integrable(self, tol: float | None = None) -> bool:
        t = tolerance() if tol is None else tol
        scale = max(1.0, float(np.max(np.abs(self.algebra.structure))))
        return self.nijenhuis <= 100 * t * scale

    @cached_property
    def omega(self) -> KForm:
        """omega(X, Y) = g(JX, Y) as a 2-form (matrix J^T G)."""
        M = self.J.T @ self.metric
        n = self.algebra.dim
        t = tolerance()
        if np.max(np.abs(M + M.T)) > 100 * t * max(1.0, float(np.max(np.abs(M)))):
            raise InvalidInputError("fundamental form failed antisymmetry")
        terms = {(i + 1, j + 1): M[i, j] for (i, j) in index_combos(n, 2)}
        return KForm.from_terms(n, 2, terms)

    def compatibility_defect(self) -> float:
        return float(np.max(np.abs(self.J.T @ self.metric @ self.J - self.metric)))

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.metric @ np.asarray(y))


def fundamental_form(H: HermitianStructure) -> KForm:
    return H.omega


# ---------------------------------------------------------------------------
# Bismut connection and torsion
# ---------------------------------------------------------------------------


def bismut_connection(H: HermitianStructure) -> Connection:
    """The unique Hermitian connection with totally skew torsion, computed by
    solving its defining metric identity over all basis triples:

    2 g(D_X Y, Z) = g([X,Y] - [JX,JY], Z) - g([Y,Z] + [JY,JZ], X)
                    - g([X,Z] - [JX,JZ], Y)

    Under this library's conventions the extracted torsion equals
    +(J* d omega), which is -d^c omega; see `torsion_three_form`.
    """
    L, Jm, G = H.algebra, H.J, H.metric
    n = L.dim
    c = L.structure
    br_JJ = np.einsum("kab,ai,bj->kij", c, Jm, Jm)
    minus = c - br_JJ  # [e_i, e_j] - [J e_i, J e_j]
    plus = c + br_JJ
    Gminus = np.einsum("ab,bij->aij", G, minus)  # Gminus[a,i,j] = g(minus[:,i,j], e_a)
    Gplus = np.einsum("ab,bij->aij", G, plus)
    # rhs[i,j,k] = 2 g(D_{e_i} e_j, e_k)
    #            = g(minus[:,i,j], e_k) - g(plus[:,j,k], e_i) - g(minus[:,i,k], e_j)
    rhs = Gminus.transpose(1, 2, 0) - Gplus - Gminus.transpose(1, 0, 2)
    Ginv = np.linalg.inv(G)
    mats = tuple(Ginv @ (0.5 * rhs[i].T) for i in range(n))
    return Connection(mats)


def connection_torsion_tensor(L: LieAlgebra, D: Connection, g) -> np.ndarray:
    """c[i, j, k] = g(e_i, T(e_j, e_k)) with T(Y,Z) = D_Y Z - D_Z Y - [Y,Z]."""
    G = as_matrix(g)
    n = L.dim
    mats = np.stack(D.matrices)
    T = np.empty((n, n, n))
    for j in range(n):
        for k in range(n):
            tv = mats[j, :, k] - mats[k, :, j] - L.structure[:, j, k]
            T[:, j, k] = G @ tv
    return T


def connection_torsion_form(H: HermitianStructure, D: Connection):
    """Extract the torsion 3-form from a connection; returns (form, skew_defect).

    skew_defect measures how far the raw torsion tensor is from being totally
    antisymmetric (it should vanish for the skew-torsion connection)."""
    L = H.algebra
    n = L.dim
    T = connection_torsion_tensor(L, D, H.metric)
    terms = {}
    worst = 0.0
    for (i, j, k) in index_combos(n, 3):
        vals = [
            T[i, j, k], -T[i, k, j], -T[j, i, k],
            T[j, k, i], T[k, i, j], -T[k, j, i],
        ]
        avg = float(np.mean(vals))
        worst = max(worst, float(np.max(np.abs(np.array(vals) - avg))))
        terms[(i + 1, j + 1, k + 1)] = avg
    # diagonal-slot entries must vanish for a skew tensor
    for i in range(n):
        worst = max(worst, float(np.max(np.abs(T[:, i, i]))))
        worst = max(worst, float(np.max(np.abs(T[i, i, :]))))
    return KForm.from_terms(n, 3, terms), worst


def torsion_three_form(H: HermitianStructure) -> KForm:
    """Torsion 3-form of the skew-torsion Hermitian connection, via pullback.

    Under the library's conventions c(X,Y,Z) = d omega(JX, JY, JZ); writing
    the classical display c = -d omega(J^{-1} ., ...) gives the same form
    since J^{-1} = -J flips an odd number of slots.  Valid for any almost
    complex J and independent of the connection-extraction code path, which
    the test suite cross-checks against this one.  Note c = -d^c(omega):
    all pluriclosed (dc = 0) and opposition (c_- = -c_+) predicates are
    insensitive to that global sign."""
    domega = H.algebra.d(H.omega)
    return pullback(domega, H.J)


# ---------------------------------------------------------------------------
# d^c and bidegree-based cross checks
# ---------------------------------------------------------------------------


def _split_d_by_bidegree(H: HermitianStructure, comp: ComplexKForm, tol: float):
    """d of a pure (p, q) component, split into its (p+1, q) and (p, q+1)
    parts; anything outside those bidegrees is returned as leakage."""
    L, Jm = H.algebra, H.J
    p, q = comp.bidegree
    dcomp = L.d_complex(comp)
    del_part = ComplexKForm(L.dim, dcomp.degree)
    dbar_part = ComplexKForm(L.dim, dcomp.degree)
    leak = 0.0
    if dcomp.degree <= L.dim:
        for sub in bidegree_decompose(dcomp, Jm, tol):
            if sub.bidegree == (p + 1, q):
                del_part = del_part + sub
            elif sub.bidegree == (p, q + 1):
                dbar_part = dbar_part + sub
            else:
                leak = max(leak, sub.norm())
    return del_part, dbar_part, leak


def dc_form(H: HermitianStructure, form: KForm | None = None,
            tol: float | None = None, check_identity: bool = True) -> KForm:
    """d^c(form) = i (dbar - del)(form) via bidegree decomposition.

    Requires integrable J (otherwise the del/dbar split of d is ill-defined).
    For the fundamental form the result is verified against the pullback
    identity d^c omega = -(J* d omega)."""
    t = tolerance() if tol is None else tol
    if not H.is_integrable(t):
        raise PreconditionError(
            f"d^c needs integrable J (Nijenhuis norm {H.nijenhuis:.3e})"
        )
    is_omega = form is None
    target = H.omega if form is None else form
    L = H.algebra
    out = ComplexKForm(L.dim, target.degree + 1)
    scale = max(1.0, target.norm(), float(np.max(np.abs(L.structure))))
    for comp in bidegree_decompose(target, H.J, t):
        if comp.is_zero(t, scale):
            continue
        del_p, dbar_p, leak = _split_d_by_bidegree(H, comp, t)
        if leak > 1000 * t * scale:
            raise PreconditionError(
                f"d leaks outside (p+1,q)/(p,q+1) by {leak:.3e}; J not integrable enough"
            )
        out = out + 1j * (dbar_p - del_p)
    if out.imag_part.norm() > 1000 * t * scale:
        raise InternalInconsistencyError(
            f"d^c of a real form came out non-real ({out.imag_part.norm():.3e})"
        )
    result = out.real_part
    if is_omega and check_identity:
        # d^c omega = -(J* d omega) = -c under the library conventions
        alt = torsion_three_form(H)
        if (result + alt).norm() > 1000 * t * max(1.0, alt.norm()):
            raise InternalInconsistencyError(
                "bidegree d^c omega disagrees with -(J* d omega); convention bug"
            )
    return result


def del_delbar_omega_norm(H: HermitianStructure, tol: float | None = None) -> float:
    """Norm of del dbar omega, computed purely through bidegree projections."""
    t = tolerance() if tol is None else tol
    if not H.is_integrable(t):
        raise PreconditionError("del dbar omega needs integrable J")
    L = H.algebra
    omega_11 = None
    for comp in bidegree_decompose(H.omega, H.J, t):
        if comp.bidegree == (1, 1):
            omega_11 = comp
            break
    if omega_11 is None:
        raise InternalInconsistencyError("fundamental form has no (1,1) part")
    _, dbar, _ = _split_d_by_bidegree(H, omega_11, t)
    if dbar.degree > L.dim:
        return 0.0
    ddbar, _, _ = _split_d_by_bidegree(H, ComplexKForm(L.dim, dbar.degree, dbar.coeffs,
                                                       (1, 2)), t)
    return ddbar.norm()


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricClass:
    """Classification with its numeric certificates."""

    kind: str  # "kahler" | "skt_not_kahler" | "not_skt"
    domega: KForm
    torsion: KForm
    dtorsion: KForm
    domega_norm: float
    dtorsion_norm: float
    ddbar_omega_norm: float | None
    cross_check_agrees: bool

    @property
    def is_kahler(self) -> bool:
        return self.kind == "kahler"

    @property
    def is_skt(self) -> bool:
        return self.kind in ("kahler", "skt_not_kahler")

    def as_dict(self) -> dict:
        return {
            "class": self.kind,
            "domega_norm": self.domega_norm,
            "dtorsion_norm": self.dtorsion_norm,
            "ddbar_omega_norm": self.ddbar_omega_norm,
            "cross_check_agrees": self.cross_check_agrees,
        }


def classify_metric(H: HermitianStructure, tol: float | None = None,
                    cross_check: bool = True) -> MetricClass:
    """Kahler iff d omega = 0; pluriclosed (SKT) iff d c = 0.

    The d c = 0 decision is cross-checked against del dbar omega = 0 computed
    through the bidegree machinery (two independent code paths)."""
    t = tolerance() if tol is None else tol
    L = H.algebra
    domega = L.d(H.omega)
    c = pullback(domega, H.J)
    dc = L.d(c)
    scale = max(1.0, H.omega.norm(), float(np.max(np.abs(L.structure))) ** 2)
    kahler = domega.norm() <= t * scale
    skt = dc.norm() <= t * scale
    ddbar = None
    agrees = True
    if cross_check and H.is_integrable(t):
        ddbar = del_delbar_omega_norm(H, t)
        # d c = -d(J* d omega) and 4 del dbar omega differ by a fixed factor
        agrees = (ddbar <= 1000 * t * scale) == skt
    kind = "kahler" if kahler else ("skt_not_kahler" if skt else "not_skt")
    return MetricClass(
        kind=kind,
        domega=domega,
        torsion=c,
        dtorsion=dc,
        domega_norm=domega.norm(),
        dtorsion_norm=dc.norm(),
        ddbar_omega_norm=ddbar,
        cross_check_agrees=agrees,
    )


@dataclass(frozen=True)
class GeneralizedKahlerResult:
    ok: bool
    plus_integrable: bool
    minus_integrable: bool
    plus_skt: bool
    minus_skt: bool
    torsion_plus: KForm
    torsion_minus: KForm
    opposition_defect: float  # || c_+ + c_- ||

    def as_dict(self) -> dict:
        return {
            "generalized_kahler": self.ok,
            "plus_integrable": self.plus_integrable,
            "minus_integrable": self.minus_integrable,
            "plus_skt": self.plus_skt,
            "minus_skt": self.minus_skt,
            "opposition_defect": self.opposition_defect,
        }


def generalized_kahler_check(L: LieAlgebra, J_plus, J_minus, g,
                             tol: float | None = None) -> GeneralizedKahlerResult:
    """True iff (J+, g) and (J-, g) are both pluriclosed with opposite torsion."""
    t = tolerance() if tol is None else tol
    Hp = HermitianStructure(L, J_plus, g, t)
    Hm = HermitianStructure(L, J_minus, g, t)
    scale = max(1.0, float(np.max(np.abs(L.structure))) ** 2)
    plus_int = Hp.is_integrable(t)
    minus_int = Hm.is_integrable(t)
    cp = torsion_three_form(Hp)
    cm = torsion_three_form(Hm)
    plus_skt = L.d(cp).norm() <= t * scale
    minus_skt = L.d(cm).norm() <= t * scale
    defect = (cp + cm).norm()
    ok = plus_int and minus_int and plus_skt and minus_skt and defect <= t * scale
    return GeneralizedKahlerResult(
        ok=ok,
        plus_integrable=plus_int,
        minus_integrable=minus_int,
        plus_skt=plus_skt,
        minus_skt=minus_skt,
        torsion_plus=cp,
        torsion_minus=cm,
        opposition_defect=defect,
    )


def adjoint_admissible(L: LieAlgebra, J, g, tol: float | None = None) -> bool:
    """True iff ad_{JX} = J ad_X for all X and g is bi-invariant.

    Exactly the condition under which the adjoint representation serves as a
    Hermitian flat connection for the tangent construction."""
    t = tolerance() if tol is None else tol
    Jm = _j_matrix(J)
    G = as_matrix(g)
    c = L.structure
    lhs = np.einsum("kaj,ai->kij", c, Jm)  # [J e_i, e_j]
    rhs = np.einsum("km,mij->kij", Jm, c)  # J [e_i, e_j]
    scale = max(1.0, float(np.max(np.abs(c))))
    if np.max(np.abs(lhs - rhs)) > t * scale:
        return False
    T1 = np.einsum("ab,bij->ija", G, c)  # g([e_i, e_j], e_k) at [i, j, k]
    # bi-invariance: g([X,Y],Z) + g(Y,[X,Z]) = 0
    T2 = np.transpose(T1, (0, 2, 1))  # g([e_i, e_k], e_j) at [i, j, k]
    gs = max(1.0, float(np.max(np.abs(G)))) * scale
    return bool(np.max(np.abs(T1 + T2)) <= t * gs)
