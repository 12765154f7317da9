"""Linear connections on Lie algebras: flatness, Hermitian parallelism, and
the concrete flat families used by the example catalog.

A connection is the data of one endomorphism D_{e_i} per basis vector,
extended linearly in the lower slot: D_X = sum_i x_i D_{e_i}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import tolerance
from .errors import InvalidInputError, NoSuchConnectionError
from .liealg import LieAlgebra
from .multilinear import as_matrix

__all__ = [
    "Connection",
    "curvature_norm",
    "hermitian_parallel_check",
    "canonical_flat_connection",
    "flat_family_g1",
    "flat_family_g3",
    "g3_family_constraints",
]


@dataclass(frozen=True)
class Connection:
    """Per-basis endomorphisms D_{e_1}, ..., D_{e_n}."""

    matrices: tuple

    def __post_init__(self):
        mats = tuple(np.ascontiguousarray(as_matrix(m)) for m in self.matrices)
        n = len(mats)
        for m in mats:
            if m.shape != (n, n):
                raise InvalidInputError(
                    f"connection needs {n} matrices of shape ({n},{n}); got {m.shape}"
                )
            m.flags.writeable = False
        object.__setattr__(self, "matrices", mats)

    @property
    def dim(self) -> int:
        return len(self.matrices)

    def along(self, x) -> np.ndarray:
        """D_x as a matrix for an arbitrary vector x (linear in the lower slot)."""
        x = np.asarray(x, dtype=float)
        return np.einsum("i,ijk->jk", x, np.stack(self.matrices))

    def apply(self, x, y) -> np.ndarray:
        return self.along(x) @ np.asarray(y, dtype=float)

    @classmethod
    def zero(cls, n: int) -> "Connection":
        return cls(tuple(np.zeros((n, n)) for _ in range(n)))


def curvature_norm(L: LieAlgebra, D: Connection) -> float:
    """max over basis pairs of ||D_X D_Y - D_Y D_X - D_{[X,Y]}||_inf; 0 iff flat."""
    if D.dim != L.dim:
        raise InvalidInputError("connection/algebra dimension mismatch")
    mats = np.stack(D.matrices)
    worst = 0.0
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            bracket = L.structure[:, i, j]
            R = mats[i] @ mats[j] - mats[j] @ mats[i] - np.einsum("k,kab->ab", bracket, mats)
            worst = max(worst, float(np.max(np.abs(R))))
    return worst


def hermitian_parallel_check(L: LieAlgebra, D: Connection, J, g,
                             tol: float | None = None) -> bool:
    """True iff every D_{e_i} is g-skew and commutes with J (Dg = DJ = 0)."""
    t = tolerance() if tol is None else tol
    Jm = as_matrix(J)
    G = as_matrix(g)
    ok = True
    for m in D.matrices:
        scale = max(1.0, float(np.max(np.abs(m)))) * max(1.0, float(np.max(np.abs(G))))
        if np.max(np.abs(m.T @ G + G @ m)) > t * scale:
            ok = False
        if np.max(np.abs(m @ Jm - Jm @ m)) > t * max(1.0, float(np.max(np.abs(m)))):
            ok = False
    return ok


def parallelism_defect(L: LieAlgebra, D: Connection, J, g) -> float:
    Jm, G = as_matrix(J), as_matrix(g)
    worst = 0.0
    for m in D.matrices:
        worst = max(worst, float(np.max(np.abs(m.T @ G + G @ m))))
        worst = max(worst, float(np.max(np.abs(m @ Jm - Jm @ m))))
    return worst


def canonical_flat_connection(L: LieAlgebra, J, g, tol: float | None = None) -> Connection:
    """The one-direction flat Hermitian connection available off the commutator.

    Requires [L, L] strictly smaller than L.  A covector phi vanishing on
    [L, L] is chosen (dual, via g, to the basis vector farthest from the
    commutator; deterministic lowest-index tie-break), and the connection is
    D_Y = phi(Y) * (-J).  Every D_Y then commutes, kills [L, L], is g-skew
    and commutes with J, so the result is flat and Hermitian-parallel.

    For the standard catalog data this reduces to D_{e_n} = -J with all other
    D_{e_i} = 0, which reproduces the expected tangent-algebra structure
    equations exactly.
    """
    t = tolerance() if tol is None else tol
    Jm = as_matrix(J)
    G = as_matrix(g)
    n = L.dim
    derived = L.derived_algebra(tol)
    if derived.shape[1] >= n:
        raise NoSuchConnectionError(
            "algebra is perfect ([L, L] = L); no such flat Hermitian connection"
        )
    # distance of each basis vector from [L, L] in the g-inner product
    # phi = g-dual of the normal component of the best basis vector
    Gs = 0.5 * (G + G.T)
    if derived.shape[1]:
        # g-orthogonal projector onto derived: P = B (B^T G B)^{-1} B^T G
        B = derived
        P = B @ np.linalg.solve(B.T @ Gs @ B, B.T @ Gs)
    else:
        P = np.zeros((n, n))
    best_i, best_dist = None, -1.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        r = e - P @ e
        dist = float(np.sqrt(max(0.0, r @ Gs @ r)))
        if dist > best_dist + t:
            best_i, best_dist = i, dist
    if best_dist <= t:
        raise NoSuchConnectionError("no basis direction clears the commutator")
    e = np.zeros(n)
    e[best_i] = 1.0
    normal = e - P @ e
    phi = Gs @ normal
    phi = phi / phi[best_i]  # normalize so phi(e_{best}) = 1
    K = -Jm
    mats = tuple(phi[i] * K for i in range(n))
    return Connection(mats)


def _rotation_block_matrix(a12: float, a13: float, a14: float, a34: float) -> np.ndarray:
    return np.array(
        [
            [0.0, a12, a13, a14],
            [-a12, 0.0, -a14, a13],
            [-a13, a14, 0.0, a34],
            [-a14, -a13, -a34, 0.0],
        ]
    )


def flat_family_g1(a12: float, a13: float, a14: float, a34: float) -> Connection:
    """The 4-parameter flat Hermitian connection family on the g1/g2 catalog
    algebras: D_{e_1} = D_{e_2} = D_{e_3} = 0 and D_{e_4} the displayed
    skew block matrix.  At (1, 0, 0, 1) this is the canonical connection."""
    z = np.zeros((4, 4))
    return Connection((z, z, z, _rotation_block_matrix(a12, a13, a14, a34)))


def _g3_block(a1: float, a2: float, a3: float, a4: float) -> np.ndarray:
    return np.array(
        [
            [0.0, a1, a2, a3],
            [-a1, 0.0, -a3, a2],
            [-a2, a3, 0.0, a4],
            [-a3, -a2, -a4, 0.0],
        ]
    )


def g3_family_constraints(params: dict) -> list[float]:
    """Residuals of the four admissibility equations of the g3 connection
    family (zero on the flat locus, generically)."""
    a = {(i, j): float(params.get((i, j), 0.0)) for i in (1, 2, 4) for j in (1, 2, 3, 4)}
    return [
        a[2, 2] * (a[1, 1] - a[1, 4]) - a[1, 2] * (a[2, 1] - a[2, 4]),
        a[1, 3] * a[2, 2] - a[1, 2] * a[2, 3],
        a[4, 3] * a[2, 2] - a[4, 2] * a[2, 3],
        a[2, 2] * (a[4, 1] - a[4, 4]) - a[4, 2] * (a[2, 1] - a[2, 4]),
    ]


def flat_family_g3(params: dict, tol: float | None = None):
    """Connection family on the g3 catalog algebra: D_{e_3} = 0 and one skew
    block matrix each for e_1, e_2, e_4, with entries params[(i, j)].

    Returns (connection, admissible) where `admissible` reports whether the
    four constraint equations hold within tolerance.  On generic admissible
    parameters the connection is flat and Hermitian-parallel.
    """
    t = tolerance() if tol is None else tol
    a = {(i, j): float(params.get((i, j), 0.0)) for i in (1, 2, 4) for j in (1, 2, 3, 4)}
    z = np.zeros((4, 4))
    mats = (
        _g3_block(a[1, 1], a[1, 2], a[1, 3], a[1, 4]),
        _g3_block(a[2, 1], a[2, 2], a[2, 3], a[2, 4]),
        z,
        _g3_block(a[4, 1], a[4, 2], a[4, 3], a[4, 4]),
    )
    scale = max(1.0, max(abs(v) for v in a.values())) ** 2
    residuals = g3_family_constraints(a)
    admissible = all(abs(r) <= t * scale for r in residuals)
    return Connection(mats), admissible
