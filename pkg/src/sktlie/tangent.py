"""Tangent Lie algebras: the semidirect product of an algebra with its
abelian fiber R^{2n} through a flat connection, with lifted Hermitian data.

For a flat connection D on g the bracket

    [(X1, X2), (Y1, Y2)] = ([X1, Y1], D_{X1} Y2 - D_{Y1} X2)

satisfies Jacobi; when additionally D J = D g = 0 the block-diagonal lifts
of J and g are a Hermitian structure on the double-dimensional algebra, and
pluriclosed-ness transfers both ways between base and total space.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .config import tolerance
from .connections import Connection, curvature_norm, parallelism_defect
from .errors import PreconditionError
from .hermitian import (
    HermitianStructure,
    classify_metric,
    generalized_kahler_check,
    GeneralizedKahlerResult,
    MetricClass,
    torsion_three_form,
)
from .liealg import LieAlgebra, form_to_string
from .multilinear import KForm, as_matrix, combo_rank, index_combos

__all__ = [
    "TangentAlgebra",
    "TangentLiftWarning",
    "build_tangent",
    "skt_transfer_report",
    "gk_transfer_report",
    "SktTransferReport",
    "GkTransferReport",
]


class TangentLiftWarning(UserWarning):
    """The Hermitian lift was refused (connection not Hermitian-parallel)."""


@dataclass(frozen=True)
class TangentAlgebra:
    """Semidirect product of a base algebra with its abelian fiber copy.

    Basis order: base vectors first, then fiber vectors; coframe labels in
    reports run f^1..f^{2n} over the whole doubled space."""

    base: LieAlgebra
    connection: Connection
    total: LieAlgebra
    J_lift: np.ndarray | None
    metric_lift: np.ndarray | None
    hermitian_lift: bool
    provenance: dict

    @property
    def dim(self) -> int:
        return self.total.dim

    def lift_base(self, x) -> np.ndarray:
        out = np.zeros(self.dim)
        out[: self.base.dim] = np.asarray(x, dtype=float)
        return out

    def lift_fiber(self, x) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.base.dim :] = np.asarray(x, dtype=float)
        return out

    def hermitian_structure(self) -> HermitianStructure:
        if not self.hermitian_lift:
            raise PreconditionError("tangent algebra was built without a Hermitian lift")
        return HermitianStructure(self.total, self.J_lift, self.metric_lift)

    def structure_equation_strings(self) -> list[str]:
        """Coframe differentials rendered with f^{..} labels."""
        out = []
        for form in self.total.differentials:
            out.append(form_to_string(form).replace("e^", "f^"))
        return out


def build_tangent(L: LieAlgebra, D: Connection, J=None, g=None,
                  tol: float | None = None, require_hermitian: bool = False
                  ) -> TangentAlgebra:
    """Assemble the tangent algebra of (L, D) with optional Hermitian lift.

    The connection must be flat (otherwise the bracket fails Jacobi and the
    construction is refused).  If (J, g) are supplied but D is not
    Hermitian-parallel for them, the Hermitian lift is refused: with
    require_hermitian=True this is an error, otherwise the raw semidirect
    product is returned with a structured warning.
    """
    t = tolerance() if tol is None else tol
    n = L.dim
    scale = max(1.0, max(float(np.max(np.abs(m))) for m in D.matrices), 1.0) ** 2
    curv = curvature_norm(L, D)
    if curv > 100 * t * max(scale, float(np.max(np.abs(L.structure))) ** 2):
        raise PreconditionError(
            f"connection is not flat (curvature {curv:.3e}); bracket would fail Jacobi"
        )
    N = 2 * n
    # base coframe differentials, re-indexed into the doubled space
    forms = []
    rank2N = combo_rank(N, 2)
    for k in range(n):
        arr = np.zeros(len(rank2N))
        for (i, j), c in zip(index_combos(n, 2), L.differentials[k].coeffs):
            arr[rank2N[(i, j)]] = c
        forms.append(KForm(N, 2, arr))
    # fiber coframe differentials: df^k(e_i, f_j) = -D_i[k, j]
    for k in range(n):
        arr = np.zeros(len(rank2N))
        for i in range(n):
            Di = D.matrices[i]
            for j in range(n):
                val = -Di[k, j]
                if val != 0.0:
                    a, b = i, n + j
                    arr[rank2N[(a, b)]] += val
        forms.append(KForm(N, 2, arr))
    total = LieAlgebra(forms, check=True, tol=max(t, 1e-12))

    J_lift = metric_lift = None
    hermitian = False
    if J is not None and g is not None:
        Jm, G = as_matrix(J), as_matrix(g)
        pdef = parallelism_defect(L, D, Jm, G)
        if pdef <= 100 * t * scale:
            J_lift = np.block([[Jm, np.zeros((n, n))], [np.zeros((n, n)), Jm]])
            metric_lift = np.block([[G, np.zeros((n, n))], [np.zeros((n, n)), G]])
            hermitian = True
        elif require_hermitian:
            raise PreconditionError(
                f"connection is not Hermitian-parallel (defect {pdef:.3e}); "
                "cannot lift (J, g)"
            )
        else:
            warnings.warn(
                f"Hermitian lift refused (parallelism defect {pdef:.3e}); "
                "returning the raw semidirect product",
                TangentLiftWarning,
                stacklevel=2,
            )
    prov = {
        "base_dim": n,
        "curvature_norm": curv,
        "hermitian_lift": hermitian,
    }
    return TangentAlgebra(
        base=L,
        connection=D,
        total=total,
        J_lift=J_lift,
        metric_lift=metric_lift,
        hermitian_lift=hermitian,
        provenance=prov,
    )


def _restriction_residuals(T: TangentAlgebra, base_form: KForm, lifted_form: KForm):
    """Residuals of: lifted form restricted to base slots equals the base form,
    and lifted form vanishes as soon as one slot is a fiber direction."""
    n = T.base.dim
    k = base_form.degree
    base_resid = 0.0
    mixed_resid = 0.0
    rank_base = combo_rank(n, k)
    for combo, coeff in zip(index_combos(T.dim, k), lifted_form.coeffs):
        if all(i < n for i in combo):
            base_resid = max(base_resid, abs(coeff - base_form.coeffs[rank_base[combo]]))
        else:
            mixed_resid = max(mixed_resid, abs(coeff))
    return base_resid, mixed_resid


@dataclass(frozen=True)
class SktTransferReport:
    base_class: MetricClass
    tangent_class: MetricClass
    torsion_restriction_residual: float
    torsion_fiber_residual: float
    dtorsion_restriction_residual: float
    dtorsion_fiber_residual: float
    tol: float

    @property
    def restrictions_ok(self) -> bool:
        worst = max(
            self.torsion_restriction_residual,
            self.torsion_fiber_residual,
            self.dtorsion_restriction_residual,
            self.dtorsion_fiber_residual,
        )
        return worst <= self.tol

    @property
    def transfer_consistent(self) -> bool:
        return self.base_class.is_skt == self.tangent_class.is_skt

    def as_dict(self) -> dict:
        return {
            "base_class": self.base_class.kind,
            "tangent_class": self.tangent_class.kind,
            "torsion_restriction_residual": self.torsion_restriction_residual,
            "torsion_fiber_residual": self.torsion_fiber_residual,
            "dtorsion_restriction_residual": self.dtorsion_restriction_residual,
            "dtorsion_fiber_residual": self.dtorsion_fiber_residual,
            "restrictions_ok": self.restrictions_ok,
            "transfer_consistent": self.transfer_consistent,
        }


def skt_transfer_report(L: LieAlgebra, J, g, D: Connection,
                        tol: float | None = None) -> SktTransferReport:
    """Classify base and tangent metrics and verify the torsion restriction
    identities: the lifted torsion evaluated on lifted base tuples equals the
    base torsion and vanishes whenever a fiber direction enters (same for
    its differential)."""
    t = tolerance() if tol is None else tol
    H = HermitianStructure(L, J, g, t)
    T = build_tangent(L, D, J, g, t, require_hermitian=True)
    Ht = T.hermitian_structure()
    base_class = classify_metric(H, t)
    tangent_class = classify_metric(Ht, t)
    c_base = torsion_three_form(H)
    c_tan = torsion_three_form(Ht)
    c_rest, c_fiber = _restriction_residuals(T, c_base, c_tan)
    dc_base = L.d(c_base)
    dc_tan = T.total.d(c_tan)
    dc_rest, dc_fiber = _restriction_residuals(T, dc_base, dc_tan)
    return SktTransferReport(
        base_class=base_class,
        tangent_class=tangent_class,
        torsion_restriction_residual=c_rest,
        torsion_fiber_residual=c_fiber,
        dtorsion_restriction_residual=dc_rest,
        dtorsion_fiber_residual=dc_fiber,
        tol=max(100 * t, 1e-9),
    )


@dataclass(frozen=True)
class GkTransferReport:
    base: GeneralizedKahlerResult
    tangent: GeneralizedKahlerResult

    @property
    def ok(self) -> bool:
        return self.base.ok and self.tangent.ok

    def as_dict(self) -> dict:
        return {"base": self.base.as_dict(), "tangent": self.tangent.as_dict()}


def gk_transfer_report(L: LieAlgebra, J_plus, J_minus, g, D: Connection,
                       tol: float | None = None) -> GkTransferReport:
    """Lift a generalized Kahler pair through a flat connection that is
    parallel for both complex structures, and check the lifted pair."""
    t = tolerance() if tol is None else tol
    Jp, Jm, G = as_matrix(J_plus), as_matrix(J_minus), as_matrix(g)
    base = generalized_kahler_check(L, Jp, Jm, G, t)
    if not base.ok:
        raise PreconditionError("base structure is not generalized Kahler")
    for name, Jx in (("J+", Jp), ("J-", Jm)):
        pdef = parallelism_defect(L, D, Jx, G)
        if pdef > 100 * t:
            raise PreconditionError(
                f"connection is not parallel for {name} (defect {pdef:.3e})"
            )
    T = build_tangent(L, D, Jp, G, t, require_hermitian=True)
    n = L.dim
    Jm_lift = np.block([[Jm, np.zeros((n, n))], [np.zeros((n, n)), Jm]])
    tangent = generalized_kahler_check(T.total, T.J_lift, Jm_lift, T.metric_lift, t)
    return GkTransferReport(base=base, tangent=tangent)
