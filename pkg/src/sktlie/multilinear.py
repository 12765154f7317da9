"""Alternating multilinear algebra on a fixed R^n.

Forms are stored densely: a k-form keeps one coefficient per strictly
increasing multi-index (i_1 < ... < i_k), ordered lexicographically.  All
public constructors take 1-based indices (matching the usual e^{24} style of
structure-equation notation); storage is 0-based.  Degrees above the ambient
dimension are legal and carry empty storage, so top-degree overflow wedges
are identically zero without special-casing.

Conventions
-----------
* Endomorphism matrices act on column vectors: entry (a, b) is the
  coefficient of e_a in the image of e_b.
* ``pullback(form, A)`` realizes (A*alpha)(X_1, ..., X_k)
  = alpha(A X_1, ..., A X_k); on coefficients this is the transposed k-th
  compound matrix of A.
* A real 1-form alpha is of type (1,0) for an almost complex J when
  alpha(J X) = i alpha(X); for the block-standard J (J e_1 = e_2,
  J e_2 = -e_1, ...) the forms e^1 + i e^2, e^3 + i e^4, ... are (1, 0).
* The (p, q) split of a complex k-form is computed from the derivation
  extension of the coframe J-action, whose eigenvalue on a (p, q)-form is
  i (p - q).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import tolerance
from .errors import InvalidInputError

# ---------------------------------------------------------------------------
# multi-index bookkeeping
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def index_combos(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All strictly increasing k-tuples from range(n), lexicographic."""
    return tuple(itertools.combinations(range(n), k))


@lru_cache(maxsize=None)
def combo_rank(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {c: r for r, c in enumerate(index_combos(n, k))}


def dim_forms(n: int, k: int) -> int:
    return len(index_combos(n, k))


def merge_indices(a: tuple[int, ...], b: tuple[int, ...]):
    """Merge two strictly increasing tuples.

    Returns (sign, merged) where sign is the parity of the shuffle putting
    the concatenation in increasing order, or None if an index repeats.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            if (len(a) - i) % 2:  # b[j] jumps over the tail of a
                sign = -sign
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return sign, tuple(merged)


def permutation_sign(indices) -> int:
    """Parity sign of the permutation sorting `indices` (distinct entries)."""
    sign = 1
    idx = list(indices)
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


def _check_finite(arr: np.ndarray) -> None:
    if arr.size and not np.all(np.isfinite(arr)):
        raise InvalidInputError("non-finite coefficient entered a form/endomorphism")


# ---------------------------------------------------------------------------
# form containers
# ---------------------------------------------------------------------------


class KForm:
    """Real alternating k-form with dense coefficient storage."""

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs=None):
        if dim <= 0 or degree < 0:
            raise InvalidInputError(f"bad form shape: dim {dim}, degree {degree}")
        m = dim_forms(dim, degree)
        if coeffs is None:
            arr = np.zeros(m)
        else:
            arr = np.array(coeffs, dtype=float).reshape(m)
        _check_finite(arr)
        arr.flags.writeable = False
        self.dim = dim
        self.degree = degree
        self.coeffs = arr

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_terms(cls, dim: int, degree: int, terms: dict) -> "KForm":
        """Build from {(i_1, ..., i_k): coeff} with 1-based indices.

        Indices need not be increasing; the antisymmetric sign is applied and
        repeated-index tuples contribute zero.
        """
        arr = np.zeros(dim_forms(dim, degree))
        rank = combo_rank(dim, degree)
        for idx, coeff in terms.items():
            idx0 = tuple(i - 1 for i in idx)
            if len(idx0) != degree:
                raise InvalidInputError(f"index {idx} has wrong length for degree {degree}")
            if any(i < 0 or i >= dim for i in idx0):
                raise InvalidInputError(f"index {idx} out of range for dim {dim}")
            if len(set(idx0)) != degree:
                continue
            arr[rank[tuple(sorted(idx0))]] += permutation_sign(idx0) * coeff
        return cls(dim, degree, arr)

    @classmethod
    def basis(cls, dim: int, indices) -> "KForm":
        """The basis form e^{indices} (1-based)."""
        return cls.from_terms(dim, len(indices), {tuple(indices): 1.0})

    # -- queries ---------------------------------------------------------------

    def coefficient(self, *indices: int) -> float:
        """Coefficient on a (1-based) index tuple, with antisymmetric sign."""
        idx0 = tuple(i - 1 for i in indices)
        if len(idx0) != self.degree:
            raise InvalidInputError("wrong number of indices")
        if len(set(idx0)) != len(idx0):
            return 0.0
        r = combo_rank(self.dim, self.degree)[tuple(sorted(idx0))]
        return permutation_sign(idx0) * float(self.coeffs[r])

    def terms(self, tol: float | None = None):
        """Iterate (1-based multi-index, coeff) over non-negligible entries."""
        t = tolerance() if tol is None else tol
        cut = t * max(1.0, self.norm())
        for combo, c in zip(index_combos(self.dim, self.degree), self.coeffs):
            if abs(c) > cut:
                yield tuple(i + 1 for i in combo), float(c)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def is_zero(self, tol: float | None = None, scale: float = 1.0) -> bool:
        t = tolerance() if tol is None else tol
        return self.norm() <= t * max(1.0, abs(scale))

    def evaluate(self, *vectors):
        """Full antisymmetric evaluation on `degree` column vectors.

        Real vectors give a float; complex vectors promote the result."""
        val = _evaluate(self.coeffs, self.dim, self.degree, vectors)
        return complex(val) if np.iscomplexobj(val) else float(val)

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other: "KForm") -> "KForm":
        self._check_compatible(other)
        return KForm(self.dim, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: "KForm") -> "KForm":
        self._check_compatible(other)
        return KForm(self.dim, self.degree, self.coeffs - other.coeffs)

    def __neg__(self) -> "KForm":
        return KForm(self.dim, self.degree, -self.coeffs)

    def __mul__(self, scalar) -> "KForm":
        return KForm(self.dim, self.degree, self.coeffs * float(scalar))

    __rmul__ = __mul__

    def _check_compatible(self, other) -> None:
        if self.dim != other.dim or self.degree != other.degree:
            raise InvalidInputError(
                f"form mismatch: (dim {self.dim}, deg {self.degree}) vs "
                f"(dim {other.dim}, deg {other.degree})"
            )

    def __repr__(self):
        parts = [f"{c:+.6g}*e^{{{','.join(str(i) for i in idx)}}}" for idx, c in self.terms()]
        return f"KForm(dim={self.dim}, deg={self.degree}: {' '.join(parts) or '0'})"


class ComplexKForm:
    """Complex alternating k-form; optionally tagged with a bidegree (p, q)."""

    __slots__ = ("dim", "degree", "coeffs", "bidegree")

    def __init__(self, dim: int, degree: int, coeffs=None, bidegree=None):
        if dim <= 0 or degree < 0:
            raise InvalidInputError(f"bad form shape: dim {dim}, degree {degree}")
        m = dim_forms(dim, degree)
        arr = (np.zeros(m, dtype=complex) if coeffs is None
               else np.array(coeffs, dtype=complex).reshape(m))
        _check_finite(np.abs(arr))
        if bidegree is not None:
            p, q = bidegree
            if p + q != degree or p < 0 or q < 0:
                raise InvalidInputError(f"bidegree {bidegree} inconsistent with degree {degree}")
            bidegree = (p, q)
        arr.flags.writeable = False
        self.dim = dim
        self.degree = degree
        self.coeffs = arr
        self.bidegree = bidegree

    @classmethod
    def from_real(cls, real: KForm, imag: KForm | None = None, bidegree=None) -> "ComplexKForm":
        arr = real.coeffs.astype(complex)
        if imag is not None:
            real._check_compatible(imag)
            arr = arr + 1j * imag.coeffs
        return cls(real.dim, real.degree, arr, bidegree)

    @property
    def real_part(self) -> KForm:
        return KForm(self.dim, self.degree, self.coeffs.real)

    @property
    def imag_part(self) -> KForm:
        return KForm(self.dim, self.degree, self.coeffs.imag)

    def conjugate(self) -> "ComplexKForm":
        tag = (self.bidegree[1], self.bidegree[0]) if self.bidegree else None
        return ComplexKForm(self.dim, self.degree, np.conj(self.coeffs), tag)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def is_zero(self, tol: float | None = None, scale: float = 1.0) -> bool:
        t = tolerance() if tol is None else tol
        return self.norm() <= t * max(1.0, abs(scale))

    def evaluate(self, *vectors) -> complex:
        return complex(_evaluate(self.coeffs, self.dim, self.degree, vectors))

    def _check_compatible(self, other) -> None:
        if self.dim != other.dim or self.degree != other.degree:
            raise InvalidInputError("complex form mismatch")

    def __add__(self, other):
        self._check_compatible(other)
        return ComplexKForm(self.dim, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check_compatible(other)
        return ComplexKForm(self.dim, self.degree, self.coeffs - other.coeffs)

    def __neg__(self):
        return ComplexKForm(self.dim, self.degree, -self.coeffs, self.bidegree)

    def __mul__(self, scalar):
        return ComplexKForm(self.dim, self.degree, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        tag = f", type ({self.bidegree[0]},{self.bidegree[1]})" if self.bidegree else ""
        return f"ComplexKForm(dim={self.dim}, deg={self.degree}{tag})"


AnyForm = KForm | ComplexKForm


def _evaluate(coeffs: np.ndarray, dim: int, degree: int, vectors):
    if len(vectors) != degree:
        raise InvalidInputError(f"need {degree} vectors, got {len(vectors)}")
    if degree == 0:
        return coeffs[0]
    if coeffs.size == 0:
        return 0.0
    V = np.column_stack([np.asarray(v) for v in vectors])
    dtype = np.result_type(coeffs.dtype, V.dtype)
    V = V.astype(dtype)
    if V.shape[0] != dim:
        raise InvalidInputError(f"vector length {V.shape[0]} != dim {dim}")
    combos = np.array(index_combos(dim, degree))
    minors = np.linalg.det(V[combos, :])
    return np.dot(coeffs.astype(dtype), minors)


# ---------------------------------------------------------------------------
# wedge product
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _wedge_table(n: int, ka: int, kb: int):
    """Sparse table for Λ^ka x Λ^kb -> Λ^(ka+kb): rows (ra, rb, rout, sign)."""
    rows = []
    rank_out = combo_rank(n, ka + kb)
    for ra, ca in enumerate(index_combos(n, ka)):
        for rb, cb in enumerate(index_combos(n, kb)):
            merged = merge_indices(ca, cb)
            if merged is None:
                continue
            sign, cout = merged
            rows.append((ra, rb, rank_out[cout], sign))
    return tuple(rows)


def wedge(a: AnyForm, b: AnyForm) -> AnyForm:
    """Graded-anticommutative wedge product (zero beyond top degree)."""
    if a.dim != b.dim:
        raise InvalidInputError(f"wedge dimension mismatch: {a.dim} vs {b.dim}")
    n = a.dim
    k = a.degree + b.degree
    is_complex = isinstance(a, ComplexKForm) or isinstance(b, ComplexKForm)
    out = np.zeros(dim_forms(n, k), dtype=complex if is_complex else float)
    ca, cb = a.coeffs, b.coeffs
    for ra, rb, ro, sign in _wedge_table(n, a.degree, b.degree):
        out[ro] += sign * ca[ra] * cb[rb]
    return ComplexKForm(n, k, out) if is_complex else KForm(n, k, out)


# ---------------------------------------------------------------------------
# endomorphisms and pullback
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Endomorphism:
    """Square matrix acting on column vectors; (a, b) = coeff of e_a in A e_b."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(as_matrix(self.matrix) if isinstance(self.matrix, Endomorphism)
                     else self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidInputError(f"endomorphism must be square, got shape {m.shape}")
        _check_finite(m)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other) -> "Endomorphism":
        return Endomorphism(self.matrix @ as_matrix(other))

    @classmethod
    def identity(cls, n: int) -> "Endomorphism":
        return cls(np.eye(n))


def as_matrix(A) -> np.ndarray:
    if isinstance(A, Endomorphism):
        return A.matrix
    arr = np.asarray(A, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {arr.shape}")
    return arr


_compound_cache: dict = {}


def _compound_pullback_matrix(A: np.ndarray, k: int) -> np.ndarray:
    """Matrix M with (A* alpha)_J = sum_I M[J, I] alpha_I, M[J, I] = det A[I, J]."""
    n = A.shape[0]
    key = (n, k, A.tobytes())
    cached = _compound_cache.get(key)
    if cached is not None:
        return cached
    if k == 0:
        M = np.ones((1, 1))
    elif k == 1:
        M = A.T.copy()
    else:
        combos = np.array(index_combos(n, k))
        m = combos.shape[0]
        M = np.empty((m, m))
        chunk = max(1, 2_000_000 // max(1, m * k * k))
        for start in range(0, m, chunk):
            Jpart = combos[start : start + chunk]
            # sub[i, r, j, c] = A[I_i[r], J_j[c]]; det over (r, c)
            sub = A[combos[:, :, None, None], Jpart[None, None, :, :]]
            M[start : start + chunk, :] = np.linalg.det(np.transpose(sub, (2, 0, 1, 3)))
    M.flags.writeable = False
    if len(_compound_cache) > 256:
        _compound_cache.clear()
    _compound_cache[key] = M
    return M


def pullback(form: AnyForm, A) -> AnyForm:
    """Pullback (A* alpha)(X_1, ..., X_k) = alpha(A X_1, ..., A X_k)."""
    mat = as_matrix(A)
    if mat.shape[0] != form.dim:
        raise InvalidInputError(f"pullback dimension mismatch: {mat.shape[0]} vs {form.dim}")
    if form.degree > form.dim:
        return form
    M = _compound_pullback_matrix(mat, form.degree)
    out = M @ form.coeffs
    if isinstance(form, ComplexKForm):
        return ComplexKForm(form.dim, form.degree, out)
    return KForm(form.dim, form.degree, out)


# ---------------------------------------------------------------------------
# almost complex structures and (p, q) decomposition
# ---------------------------------------------------------------------------


def almost_complex_defect(J) -> float:
    mat = as_matrix(J)
    return float(np.max(np.abs(mat @ mat + np.eye(mat.shape[0]))))


def check_almost_complex(J, tol: float | None = None) -> None:
    mat = as_matrix(J)
    t = tolerance() if tol is None else tol
    scale = max(1.0, float(np.max(np.abs(mat))) ** 2)
    if almost_complex_defect(mat) > t * scale:
        raise InvalidInputError(f"J^2 != -id (defect {almost_complex_defect(mat):.3e})")


_derivation_cache: dict = {}


def derivation_matrix(J, k: int) -> np.ndarray:
    """Derivation extension of the coframe J-action to Λ^k coefficients.

    Acts as multiplication by i (p - q) on (p, q)-forms, which is what the
    bidegree projectors exploit.
    """
    mat = as_matrix(J)
    n = mat.shape[0]
    key = (n, k, mat.tobytes())
    cached = _derivation_cache.get(key)
    if cached is not None:
        return cached
    m = dim_forms(n, k)
    D = np.zeros((m, m))
    rank = combo_rank(n, k)
    for r, combo in enumerate(index_combos(n, k)):
        for s, i_s in enumerate(combo):
            rest = combo[:s] + combo[s + 1 :]
            slot_sign = -1.0 if s % 2 else 1.0  # move the new factor to the front
            # slot s receives J* e^{i_s} = sum_b J[i_s, b] e^b
            for b in range(n):
                coeff = mat[i_s, b]
                if coeff == 0.0:
                    continue
                merged = merge_indices((b,), rest)
                if merged is None:
                    continue
                sign, cout = merged
                D[rank[cout], r] += slot_sign * sign * coeff
    D.flags.writeable = False
    if len(_derivation_cache) > 256:
        _derivation_cache.clear()
    _derivation_cache[key] = D
    return D


def bidegree_components(k: int) -> list[tuple[int, int]]:
    """All (p, q) with p + q = k, ordered by decreasing p."""
    return [((k + m) // 2, (k - m) // 2) for m in range(k, -k - 1, -2)]


def bidegree_decompose(form: AnyForm, J, tol: float | None = None) -> list[ComplexKForm]:
    """Split a (complexified) k-form into its (p, q) components for J.

    Components are ordered by decreasing p, tagged, and verified to sum back
    to the input within tolerance.
    """
    check_almost_complex(J, tol)
    if isinstance(form, KForm):
        form = ComplexKForm.from_real(form)
    k = form.degree
    if k == 0:
        return [ComplexKForm(form.dim, 0, form.coeffs, (0, 0))]
    if k > form.dim:
        return []
    D = derivation_matrix(J, k)
    pairs = bidegree_components(k)
    eigvals = [1j * (p - q) for p, q in pairs]
    comps = []
    for (p, q), lam in zip(pairs, eigvals):
        vec = form.coeffs.astype(complex)
        for mu in eigvals:
            if mu == lam:
                continue
            vec = (D @ vec - mu * vec) / (lam - mu)
        comps.append(ComplexKForm(form.dim, k, vec, (p, q)))
    total = np.sum([c.coeffs for c in comps], axis=0)
    t = tolerance() if tol is None else tol
    if np.max(np.abs(total - form.coeffs)) > 100 * t * max(1.0, form.norm()):
        raise InvalidInputError("bidegree decomposition failed to reconstruct the input")
    return comps


def bidegree_component(form: AnyForm, J, p: int, q: int, tol: float | None = None) -> ComplexKForm:
    for comp in bidegree_decompose(form, J, tol):
        if comp.bidegree == (p, q):
            return comp
    raise InvalidInputError(f"no ({p},{q}) component in degree {form.degree}")


def holomorphic_coframe(J, tol: float | None = None) -> list[np.ndarray]:
    """A basis of (1, 0)-forms as complex coefficient vectors on the coframe.

    Built greedily from the real coframe as alpha = e^a - i J*(e^a); for the
    block-standard J this returns exactly e^1 + i e^2, e^3 + i e^4, ...
    """
    mat = as_matrix(J)
    check_almost_complex(mat, tol)
    n = mat.shape[0]
    if n % 2:
        raise InvalidInputError("almost complex structure requires even dimension")
    Jt = mat.T  # pullback action on 1-form coefficients
    chosen: list[np.ndarray] = []
    for a in range(n):
        e = np.zeros(n)
        e[a] = 1.0
        alpha = e - 1j * (Jt @ e)
        probe = np.column_stack(chosen + [alpha])
        if np.linalg.matrix_rank(probe, tol=1e-12 * max(1.0, float(np.max(np.abs(probe))))) \
                > len(chosen):
            chosen.append(alpha)
        if len(chosen) == n // 2:
            return chosen
    raise InvalidInputError("failed to build a holomorphic coframe")
