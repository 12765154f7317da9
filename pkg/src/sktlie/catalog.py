"""Catalog of 4-dimensional Lie algebras with verified Hermitian structure.

Each entry packages parameterized structure equations, the compatible
(J, g) data, admissibility predicates, a deterministic sampler of admissible
parameters, and the expected analysis results (classification, closed-form
beta coefficient, an explicit closed positive (1,1)-form family, cohomology
and fingerprint facts).  `verify` re-derives everything with the library
machinery and reports item-by-item agreement.

Entries
-------
g1       secondary-Kodaira-surface algebra (e^{24}, -e^{14}, e^{12}, 0)
g2       Inoue-surface-type algebra, two compatible complex structures
g3       primary-Kodaira (Heisenberg x R) algebra (0, 0, e^{12}, 0)
r3x      R x r_{3,0}
affxaff  aff(R) x aff(R)
r4p      r'_{4,lambda,0}
d42      d_{4,2}
d4p      d'_{4,lambda}
d4half   d_{4,1/2} (the z3 = 0 specialization of d4p)

The structure equations are entered in a basis where the metric data is
standard: J is block-standard and omega = e^{12} + e^{34} + t (e^{13} + e^{24}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import tolerance
from .errors import InvalidInputError
from .hermitian import (
    HermitianStructure,
    classify_metric,
    generalized_kahler_check,
    nijenhuis_norm,
    standard_complex_structure,
)
from .liealg import LieAlgebra, numerical_rank
from .multilinear import KForm
from .taming import (
    assemble_taming,
    form_to_matrix,
    hermitian_symplectic_search,
    kahler_search,
    solve_beta,
    taming_pairing,
)

__all__ = [
    "CatalogEntry",
    "InstanceBundle",
    "CatalogValidationError",
    "ENTRY_IDS",
    "get_entry",
    "list_entries",
    "build",
    "sample_params",
    "verify",
    "VerifyReport",
    "VerifyItem",
]


class CatalogValidationError(InvalidInputError):
    """Raised when parameters violate an entry's admissibility predicate."""


J_STD = standard_complex_structure(4)
J_MINUS = np.array(
    [[0.0, -1.0, 0.0, 0.0],
     [1.0, 0.0, 0.0, 0.0],
     [0.0, 0.0, 0.0, 1.0],
     [0.0, 0.0, -1.0, 0.0]]
)  # J e_1 = e_2, J e_3 = -e_4


def _standard_omega(t: float = 0.0) -> KForm:
    return KForm.from_terms(4, 2, {(1, 2): 1.0, (3, 4): 1.0, (1, 3): t, (2, 4): t})


def _metric_from(omega: KForm, J: np.ndarray) -> np.ndarray:
    # g(X, Y) = omega(X, JY)
    return form_to_matrix(omega) @ J


@dataclass(frozen=True)
class InstanceBundle:
    """A validated catalog instance ready for analysis."""

    entry_id: str
    params: dict
    algebra: LieAlgebra
    J: np.ndarray
    metric: np.ndarray
    omega: KForm
    J_minus: np.ndarray | None = None

    def hermitian(self) -> HermitianStructure:
        return HermitianStructure(self.algebra, self.J, self.metric)

    def hermitian_minus(self) -> HermitianStructure:
        if self.J_minus is None:
            raise InvalidInputError(f"entry {self.entry_id} has a single complex structure")
        return HermitianStructure(self.algebra, self.J_minus, self.metric)


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    title: str
    param_doc: str
    defaults: dict
    validate: Callable[[dict], None]
    builder: Callable[[dict], InstanceBundle]
    sampler: Callable[[np.random.Generator], dict]
    expected_kind: str  # "skt_not_kahler" | "skt" (Kahler allowed) | "gk_pair"
    beta_coefficient: Callable[[dict], complex] | None = None
    kahler_candidate: Callable[[dict], KForm] | None = None
    taming_expected: bool = True  # False: searches must come back empty-handed
    facts: dict = field(default_factory=dict)

    def build(self, params: dict | None = None) -> InstanceBundle:
        p = dict(self.defaults)
        p.update(params or {})
        self.validate(p)
        return self.builder(p)

    def sample(self, rng: np.random.Generator) -> dict:
        return self.sampler(rng)


def _num(params: dict, key: str) -> float:
    try:
        return float(params[key])
    except KeyError as exc:
        raise CatalogValidationError(f"missing parameter {key!r}") from exc
    except (TypeError, ValueError) as exc:
        raise CatalogValidationError(f"parameter {key!r} is not a number") from exc


def _check_t(params: dict) -> float:
    t = float(params.get("t", 0.0))
    if not abs(t) < 1.0:
        raise CatalogValidationError(f"|t| < 1 violated (t = {t}); omega degenerates")
    return t


def _sgn(rng: np.random.Generator) -> float:
    return float(rng.choice([-1.0, 1.0]))


# ---------------------------------------------------------------------------
# g1, g2, g3
# ---------------------------------------------------------------------------


def _build_g1(p: dict) -> InstanceBundle:
    L = LieAlgebra.from_terms(4, {1: {(2, 4): 1.0}, 2: {(1, 4): -1.0}, 3: {(1, 2): 1.0}})
    omega = _standard_omega()
    return InstanceBundle("g1", p, L, J_STD, np.eye(4), omega)


def _build_g3(p: dict) -> InstanceBundle:
    L = LieAlgebra.from_terms(4, {3: {(1, 2): 1.0}})
    omega = _standard_omega()
    return InstanceBundle("g3", p, L, J_STD, np.eye(4), omega)


def _validate_g2(p: dict) -> None:
    a, b = _num(p, "a"), _num(p, "b")
    if a == 0.0 or b == 0.0:
        raise CatalogValidationError("g2 needs a != 0 and b != 0")


def _build_g2(p: dict) -> InstanceBundle:
    a, b = float(p["a"]), float(p["b"])
    # third slot carries -2a e^{34}: the +2a variant fails both unimodularity
    # and the pluriclosed condition, while every derived claim (torsion
    # values, tangent equations, compact quotients) pins the minus sign
    L = LieAlgebra.from_terms(4, {
        1: {(1, 4): a, (2, 4): b},
        2: {(1, 4): -b, (2, 4): a},
        3: {(3, 4): -2.0 * a},
    })
    omega = _standard_omega()
    return InstanceBundle("g2", p, L, J_STD, np.eye(4), omega, J_minus=J_MINUS)


# ---------------------------------------------------------------------------
# R x r_{3,0}
# ---------------------------------------------------------------------------


def _validate_r3x(p: dict) -> None:
    u1, w1 = _num(p, "u1"), _num(p, "w1")
    if not w1 > 0:
        raise CatalogValidationError(f"w1 > 0 violated (w1 = {w1})")
    if u1 < 0:
        raise CatalogValidationError(f"u1 >= 0 violated (u1 = {u1})")


def _build_r3x(p: dict) -> InstanceBundle:
    u1, w1 = float(p["u1"]), float(p["w1"])
    s = math.sqrt(u1 * w1)
    L = LieAlgebra.from_terms(4, {
        4: {(1, 2): u1, (1, 4): s, (2, 3): -s, (3, 4): w1},
    })
    omega = _standard_omega()
    return InstanceBundle("r3x", p, L, J_STD, np.eye(4), omega)


def _beta_r3x(p: dict) -> complex:
    u1, w1 = float(p["u1"]), float(p["w1"])
    return 1j * math.sqrt(u1 * w1) / (2.0 * w1)


def _kahler_r3x(p: dict) -> KForm:
    u1, w1 = float(p["u1"]), float(p["w1"])
    s = math.sqrt(u1 * w1)
    m = 1.0
    n = m * u1 / w1 + 1.0  # condition n > m u1 / w1
    c = m * s / w1
    return KForm.from_terms(4, 2, {(1, 2): n, (3, 4): m, (1, 4): c, (2, 3): -c})


# ---------------------------------------------------------------------------
# aff(R) x aff(R)
# ---------------------------------------------------------------------------


def _affxaff_constraints(p: dict) -> list[float]:
    x1, x3, y2 = (float(p[k]) for k in ("x1", "x3", "y2"))
    u1, u3, v2 = (float(p[k]) for k in ("u1", "u3", "v2"))
    return [
        y2 * x1 - y2 * u3 + v2 * x3 - x3 ** 2,
        u1 * v2 - u1 * x3 + u3 * x1 - u3 ** 2,
        u3 * x3 - y2 * u1,
        (u1 - x3) * (v2 + x3) - (u3 + x1) * (u3 - y2),
    ]


def _validate_affxaff(p: dict) -> None:
    for k in ("x1", "x3", "y2", "u1", "u3", "v2"):
        _num(p, k)
    t = _check_t(p)
    tol = tolerance()
    scale = max(1.0, max(abs(float(p[k])) for k in ("x1", "x3", "y2", "u1", "u3", "v2"))) ** 2
    residuals = _affxaff_constraints(p)
    for idx, r in enumerate(residuals, start=1):
        if abs(r) > 100 * tol * scale:
            raise CatalogValidationError(
                f"structure constraint #{idx} violated (residual {r:.3e})"
            )
    # the two nonzero coframe differentials must be linearly independent
    rows = np.array([
        [float(p["x1"]), float(p["x3"]), float(p["y2"])],
        [float(p["u1"]), float(p["u3"]), float(p["v2"])],
    ])
    if numerical_rank(rows, warn=False) < 2:
        raise CatalogValidationError("de^2 and de^4 are linearly dependent")
    if abs(float(p["x3"]) + float(p["v2"])) <= 100 * tol * math.sqrt(scale):
        raise CatalogValidationError("x3 + v2 = 0: beta coefficient undefined")


def _build_affxaff(p: dict) -> InstanceBundle:
    x1, x3, y2 = (float(p[k]) for k in ("x1", "x3", "y2"))
    u1, u3, v2 = (float(p[k]) for k in ("u1", "u3", "v2"))
    t = float(p.get("t", 0.0))
    L = LieAlgebra.from_terms(4, {
        2: {(1, 2): x1, (1, 4): x3, (2, 3): -x3, (3, 4): y2},
        4: {(1, 2): u1, (1, 4): u3, (2, 3): -u3, (3, 4): v2},
    })
    omega = _standard_omega(t)
    return InstanceBundle("affxaff", p, L, J_STD, _metric_from(omega, J_STD), omega)


def _sample_affxaff(rng: np.random.Generator) -> dict:
    # generic Jacobi branch: u1 = x3, y2 = u3, v2 = x3 - u3 (x1 - u3) / x3,
    # kept away from the locus x3^2 = x1 u3 where the two lines degenerate
    while True:
        x1 = _sgn(rng) * rng.uniform(0.4, 1.6)
        x3 = _sgn(rng) * rng.uniform(0.4, 1.6)
        u3 = _sgn(rng) * rng.uniform(0.2, 1.2)
        if abs(x3 ** 2 - x1 * u3) < 0.1:
            continue
        v2 = x3 - u3 * (x1 - u3) / x3
        if abs(x3 + v2) < 0.1:
            continue
        t = rng.uniform(-0.6, 0.6)
        return {"x1": x1, "x3": x3, "y2": u3, "u1": x3, "u3": u3, "v2": v2, "t": t}


def _beta_affxaff(p: dict) -> complex:
    t = float(p.get("t", 0.0))
    u3, y2 = float(p["u3"]), float(p["y2"])
    x3, v2 = float(p["x3"]), float(p["v2"])
    return -t / 2.0 + 1j * (u3 - y2) / (2.0 * (x3 + v2))


def _kahler_affxaff(p: dict) -> KForm:
    x1, x3 = float(p["x1"]), float(p["x3"])
    u1, u3 = float(p["u1"]), float(p["u3"])
    # closure condition n x3 - m u1 + q (u3 - x1) = 0 with n m > q^2, m > 0
    q = 0.1 * x3
    for m in (1.0, 2.0, 5.0, 10.0, 50.0):
        n = (m * u1 - q * (u3 - x1)) / x3
        if n * m > q * q and m > 0:
            return KForm.from_terms(4, 2, {(1, 2): n, (3, 4): m, (1, 4): q, (2, 3): -q})
    raise CatalogValidationError("no Kahler family member found (unexpected)")


# ---------------------------------------------------------------------------
# r'_{4,lambda,0}
# ---------------------------------------------------------------------------


def _validate_r4p(p: dict) -> None:
    x1, y1, y3 = _num(p, "x1"), _num(p, "y1"), _num(p, "y3")
    if not x1 > 0:
        raise CatalogValidationError(f"x1 > 0 violated (x1 = {x1})")
    if y3 == 0.0:
        raise CatalogValidationError("y3 != 0 violated")
    if y1 < 0:
        raise CatalogValidationError(f"y1 >= 0 violated (y1 = {y1})")


def _build_r4p(p: dict) -> InstanceBundle:
    x1, y1, y3 = float(p["x1"]), float(p["y1"]), float(p["y3"])
    L = LieAlgebra.from_terms(4, {
        2: {(1, 2): x1},
        3: {(1, 2): y1, (1, 4): y3},
        4: {(1, 3): -y3},
    })
    omega = _standard_omega()
    return InstanceBundle("r4p", p, L, J_STD, np.eye(4), omega)


def _beta_r4p(p: dict) -> complex:
    x1, y1, y3 = float(p["x1"]), float(p["y1"]), float(p["y3"])
    return -y1 / (2.0 * (x1 ** 2 + y3 ** 2)) * (x1 + 1j * y3)


def _kahler_r4p(p: dict) -> KForm:
    # positivity needs n m > (m y1)^2 / (x1^2 + y3^2): the pairing's
    # off-diagonal block has squared norm (m y1)^2 / (x1^2 + y3^2)
    x1, y1, y3 = float(p["x1"]), float(p["y1"]), float(p["y3"])
    m = 1.0
    n = m * y1 ** 2 / (x1 ** 2 + y3 ** 2) + 1.0
    cc = y1 / (x1 ** 2 + y3 ** 2)
    return KForm.from_terms(4, 2, {
        (1, 2): n, (3, 4): m,
        (1, 4): m * cc * y3, (2, 3): -m * cc * y3,
        (1, 3): -m * cc * x1, (2, 4): -m * cc * x1,
    })


# ---------------------------------------------------------------------------
# d_{4,2}
# ---------------------------------------------------------------------------


def _validate_d42(p: dict) -> None:
    x1 = _num(p, "x1")
    _num(p, "y1")
    _num(p, "u1")
    if not x1 > 0:
        raise CatalogValidationError(f"x1 > 0 violated (x1 = {x1})")


def _build_d42(p: dict) -> InstanceBundle:
    x1, y1, u1 = float(p["x1"]), float(p["y1"]), float(p["u1"])
    L = LieAlgebra.from_terms(4, {
        2: {(1, 2): x1},
        3: {(1, 2): y1, (1, 3): -x1 / 2.0},
        4: {(1, 2): u1, (1, 4): x1 / 2.0, (2, 3): -x1},
    })
    omega = _standard_omega()
    return InstanceBundle("d42", p, L, J_STD, np.eye(4), omega)


def _beta_d42(p: dict) -> complex:
    x1, y1, u1 = float(p["x1"]), float(p["y1"]), float(p["u1"])
    return (-y1 + 1j * u1) / (3.0 * x1)


def _kahler_d42(p: dict) -> KForm:
    # closed member of the (1,1) family, solving d(omega_k) = 0 directly:
    # coefficient 2 u1/x1 on (e^{14}-e^{23}) and -2 y1/(3 x1) on (e^{13}+e^{24})
    x1, y1, u1 = float(p["x1"]), float(p["y1"]), float(p["u1"])
    m = 1.0
    q = 2.0 * m * u1 / x1
    qq = -2.0 * m * y1 / (3.0 * x1)
    n = (q * q + qq * qq) / m + 1.0
    return KForm.from_terms(4, 2, {
        (1, 2): n, (3, 4): m,
        (1, 4): q, (2, 3): -q,
        (1, 3): qq, (2, 4): qq,
    })


# ---------------------------------------------------------------------------
# d'_{4,lambda} and d_{4,1/2}
# ---------------------------------------------------------------------------


def _validate_d4p(p: dict, allow_zero_z3: bool = False) -> None:
    q, r, k = _num(p, "q"), _num(p, "r"), _num(p, "k")
    _check_t(p)
    tol = tolerance()
    if not r > 0:
        raise CatalogValidationError(f"r > 0 violated (r = {r})")
    if abs(q * q + r * r - 1.0) > 1000 * tol:
        raise CatalogValidationError(f"q^2 + r^2 = 1 violated (got {q*q + r*r})")
    if k == 0.0:
        raise CatalogValidationError("k != 0 violated")
    if allow_zero_z3:
        if float(p.get("z3", 0.0)) != 0.0:
            raise CatalogValidationError("this entry requires z3 = 0")
    else:
        if _num(p, "z3") == 0.0:
            raise CatalogValidationError("z3 != 0 violated")


def _build_d4p_like(entry_id: str, p: dict, z3: float) -> InstanceBundle:
    q, r, k = float(p["q"]), float(p["r"]), float(p["k"])
    t = float(p.get("t", 0.0))
    L = LieAlgebra.from_terms(4, {
        2: {(1, 2): -k * (1 + q * q), (1, 4): -k * q * r, (2, 3): k * q * r,
            (3, 4): -k * r * r},
        3: {(1, 2): z3 * q / r, (1, 3): -k / 2.0, (1, 4): z3},
        4: {(1, 2): (q / r) * (k * q * q + k / 2.0), (1, 3): -z3,
            (1, 4): k * q * q - k / 2.0, (2, 3): -k * q * q, (3, 4): k * q * r},
    })
    omega = _standard_omega(t)
    return InstanceBundle(entry_id, p, L, J_STD, _metric_from(omega, J_STD), omega)


def _beta_d4p(p: dict) -> complex:
    q, r = float(p["q"]), float(p["r"])
    t = float(p.get("t", 0.0))
    return -t / 2.0 - 1j * q / (2.0 * r)


def _kahler_d4p(p: dict) -> KForm:
    q, r = float(p["q"]), float(p["r"])
    m = 1.0
    return KForm.from_terms(4, 2, {
        (1, 2): m * (1 + q * q) / (r * r), (3, 4): m,
        (1, 4): m * q / r, (2, 3): -m * q / r,
    })


def _sample_d4p(rng: np.random.Generator, zero_z3: bool) -> dict:
    theta = rng.uniform(-1.1, 1.1)
    q, r = math.sin(theta), math.cos(theta)
    k = _sgn(rng) * rng.uniform(0.4, 2.0)
    z3 = 0.0 if zero_z3 else _sgn(rng) * rng.uniform(0.4, 2.0)
    t = rng.uniform(-0.6, 0.6)
    out = {"q": q, "r": r, "k": k, "t": t}
    if not zero_z3:
        out["z3"] = z3
    return out


# ---------------------------------------------------------------------------
# entry table
# ---------------------------------------------------------------------------


ENTRIES: dict[str, CatalogEntry] = {}


def _register(entry: CatalogEntry) -> None:
    ENTRIES[entry.id] = entry


_register(CatalogEntry(
    id="g1",
    title="secondary Kodaira surface algebra (e^{24}, -e^{14}, e^{12}, 0)",
    param_doc="no parameters",
    defaults={},
    validate=lambda p: None,
    builder=_build_g1,
    sampler=lambda rng: {},
    expected_kind="skt_not_kahler",
    beta_coefficient=None,
    kahler_candidate=None,
    taming_expected=False,
    facts={"unimodular": True, "b4": 1, "solvable_step": 3, "nilpotent": False},
))

_register(CatalogEntry(
    id="g2",
    title="Inoue-surface-type algebra (a e^{14}+b e^{24}, -b e^{14}+a e^{24}, -2a e^{34}, 0)",
    param_doc="a != 0, b != 0",
    defaults={"a": 1.0, "b": 1.0},
    validate=_validate_g2,
    builder=_build_g2,
    sampler=lambda rng: {"a": _sgn(rng) * rng.uniform(0.4, 2.0),
                         "b": _sgn(rng) * rng.uniform(0.4, 2.0)},
    expected_kind="gk_pair",
    beta_coefficient=None,
    kahler_candidate=None,
    taming_expected=False,
    facts={"unimodular": True, "b4": 1, "solvable_step": 2},
))

_register(CatalogEntry(
    id="g3",
    title="primary Kodaira (Heisenberg x R) algebra (0, 0, e^{12}, 0)",
    param_doc="no parameters",
    defaults={},
    validate=lambda p: None,
    builder=_build_g3,
    sampler=lambda rng: {},
    expected_kind="skt_not_kahler",
    beta_coefficient=None,
    kahler_candidate=None,
    taming_expected=False,
    facts={"unimodular": True, "b4": 1, "nilpotent_step": 2},
))

_register(CatalogEntry(
    id="r3x",
    title="R x r_{3,0}",
    param_doc="w1 > 0, u1 >= 0",
    defaults={"u1": 1.0, "w1": 1.0},
    validate=_validate_r3x,
    builder=_build_r3x,
    sampler=lambda rng: {"u1": rng.uniform(0.0, 2.0), "w1": rng.uniform(0.3, 2.0)},
    expected_kind="skt",
    beta_coefficient=_beta_r3x,
    kahler_candidate=_kahler_r3x,
    facts={"unimodular": False, "b4": 0},
))

_register(CatalogEntry(
    id="affxaff",
    title="aff(R) x aff(R)",
    param_doc="six reals x1, x3, y2, u1, u3, v2 satisfying the four structure "
              "constraints, with the two nonzero differentials independent; "
              "|t| < 1",
    defaults={"x1": 1.0, "x3": 1.0, "y2": 0.0, "u1": 1.0, "u3": 0.0, "v2": 1.0,
              "t": 0.0},
    validate=_validate_affxaff,
    builder=_build_affxaff,
    sampler=_sample_affxaff,
    expected_kind="skt",
    beta_coefficient=_beta_affxaff,
    kahler_candidate=_kahler_affxaff,
    facts={"unimodular": False, "b3": 0, "b4": 0},
))

_register(CatalogEntry(
    id="r4p",
    title="r'_{4,lambda,0}",
    param_doc="x1 > 0, y1 >= 0, y3 != 0; lambda = |x1/y3|",
    defaults={"x1": 1.0, "y1": 1.0, "y3": 1.0},
    validate=_validate_r4p,
    builder=_build_r4p,
    sampler=lambda rng: {"x1": rng.uniform(0.3, 2.0), "y1": rng.uniform(0.0, 2.0),
                         "y3": _sgn(rng) * rng.uniform(0.3, 2.0)},
    expected_kind="skt",
    beta_coefficient=_beta_r4p,
    kahler_candidate=_kahler_r4p,
    facts={"unimodular": False, "b4": 0, "lambda": lambda p: abs(p["x1"] / p["y3"])},
))

_register(CatalogEntry(
    id="d42",
    title="d_{4,2}",
    param_doc="x1 > 0; y1, u1 free",
    defaults={"x1": 1.0, "y1": 0.0, "u1": 1.0},
    validate=_validate_d42,
    builder=_build_d42,
    sampler=lambda rng: {"x1": rng.uniform(0.3, 2.0),
                         "y1": _sgn(rng) * rng.uniform(0.0, 2.0),
                         "u1": _sgn(rng) * rng.uniform(0.0, 2.0)},
    expected_kind="skt",
    beta_coefficient=_beta_d42,
    kahler_candidate=_kahler_d42,
    facts={"unimodular": False, "b4": 0},
))

_register(CatalogEntry(
    id="d4p",
    title="d'_{4,lambda}",
    param_doc="q^2 + r^2 = 1, r > 0, k != 0, z3 != 0, |t| < 1; lambda = |k/(2 z3)|",
    defaults={"q": 0.0, "r": 1.0, "k": 1.0, "z3": 1.0, "t": 0.0},
    validate=lambda p: _validate_d4p(p, allow_zero_z3=False),
    builder=lambda p: _build_d4p_like("d4p", p, float(p["z3"])),
    sampler=lambda rng: _sample_d4p(rng, zero_z3=False),
    expected_kind="skt",
    beta_coefficient=_beta_d4p,
    kahler_candidate=_kahler_d4p,
    facts={"unimodular": False, "b3": 0, "b4": 0,
           "lambda": lambda p: abs(p["k"] / (2.0 * p["z3"]))},
))

_register(CatalogEntry(
    id="d4half",
    title="d_{4,1/2} (d'_{4,lambda} structure with z3 = 0)",
    param_doc="q^2 + r^2 = 1, r > 0, k != 0, |t| < 1 (z3 fixed to 0)",
    defaults={"q": 0.0, "r": 1.0, "k": 1.0, "t": 0.0},
    validate=lambda p: _validate_d4p(p, allow_zero_z3=True),
    builder=lambda p: _build_d4p_like("d4half", p, 0.0),
    sampler=lambda rng: _sample_d4p(rng, zero_z3=True),
    expected_kind="skt",
    beta_coefficient=_beta_d4p,
    kahler_candidate=_kahler_d4p,
    facts={"unimodular": False, "b4": 0},
))

ENTRY_IDS = tuple(ENTRIES)


def get_entry(entry_id: str) -> CatalogEntry:
    try:
        return ENTRIES[entry_id]
    except KeyError as exc:
        raise InvalidInputError(
            f"unknown catalog id {entry_id!r}; known: {', '.join(ENTRY_IDS)}"
        ) from exc


def list_entries() -> list[dict]:
    return [
        {"id": e.id, "title": e.title, "params": e.param_doc, "defaults": e.defaults}
        for e in ENTRIES.values()
    ]


def build(entry_id: str, params: dict | None = None) -> InstanceBundle:
    return get_entry(entry_id).build(params)


def sample_params(entry_id: str, rng: np.random.Generator) -> dict:
    return get_entry(entry_id).sample(rng)


# ---------------------------------------------------------------------------
# verification pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyItem:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class VerifyReport:
    entry_id: str
    params: dict
    items: tuple

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def as_dict(self) -> dict:
        return {
            "entry": self.entry_id,
            "params": self.params,
            "passed": self.passed,
            "items": [i.as_dict() for i in self.items],
        }


def verify(entry_id: str, params: dict | None = None, run_searches: bool = False,
           seed: int = 0, budget: int = 10_000, tol: float | None = None
           ) -> VerifyReport:
    """Re-derive every expected-result record of an entry and compare."""
    t = tolerance() if tol is None else tol
    entry = get_entry(entry_id)
    bundle = entry.build(params)
    L = bundle.algebra
    items: list[VerifyItem] = []

    def add(name, passed, detail=""):
        items.append(VerifyItem(name, bool(passed), detail))

    jd = L.jacobi_defect()
    add("jacobi", jd <= t, f"defect {jd:.3e}")
    nj = nijenhuis_norm(L, bundle.J)
    add("integrable", nj <= t, f"nijenhuis {nj:.3e}")
    H = bundle.hermitian()
    cd = H.compatibility_defect()
    add("compatible", cd <= t, f"defect {cd:.3e}")

    mc = classify_metric(H, t)
    if entry.expected_kind == "skt_not_kahler":
        add("classification", mc.kind == "skt_not_kahler", mc.kind)
    elif entry.expected_kind == "gk_pair":
        add("classification", mc.is_skt, mc.kind)
        gk = generalized_kahler_check(L, bundle.J, bundle.J_minus, bundle.metric, t)
        add("generalized_kahler", gk.ok,
            f"opposition defect {gk.opposition_defect:.3e}")
    else:
        add("classification", mc.is_skt, mc.kind)

    sol = solve_beta(H, t)
    if entry.beta_coefficient is not None:
        expected_a = complex(entry.beta_coefficient(bundle.params))
        if sol is None:
            add("beta_coefficient", False, "no solution found")
        else:
            err = abs(sol.a - expected_a)
            add("beta_coefficient", err <= 1e-9,
                f"a = {sol.a:.6g}, expected {expected_a:.6g}, err {err:.2e}")
            tf = assemble_taming(H, sol, t)
            add("taming_assembly",
                tf.d_norm <= 1e-9 and tf.pairing_min_eig
                >= float(np.linalg.eigvalsh(0.5 * (bundle.metric + bundle.metric.T))[0])
                - 1e-9,
                f"dOmega {tf.d_norm:.2e}, min eig {tf.pairing_min_eig:.4f}, "
                f"sign {tf.assembly_sign}")
    else:
        add("beta_obstructed", sol is None,
            "no solution expected" if sol is None else f"unexpected a = {sol.a:.6g}")

    if entry.kahler_candidate is not None:
        wk = entry.kahler_candidate(bundle.params)
        dnorm = L.d(wk).norm()
        eig = float(np.linalg.eigvalsh(taming_pairing(wk, bundle.J))[0])
        add("kahler_family", dnorm <= 1e-9 and eig > 0,
            f"d {dnorm:.2e}, min eig {eig:.4f}")
        if dnorm <= 1e-9 and eig > 0:
            gk_metric = form_to_matrix(wk) @ bundle.J
            mc2 = classify_metric(HermitianStructure(L, bundle.J, gk_metric), t)
            add("kahler_family_classified", mc2.kind == "kahler", mc2.kind)
        else:
            add("kahler_family_classified", False, "candidate not closed positive")

    for fact, value in entry.facts.items():
        if fact == "unimodular":
            add("unimodular", L.is_unimodular(t) == value, str(value))
        elif fact in ("b3", "b4"):
            betti = L.cohomology_dims(tol=t)
            k = int(fact[1])
            add(fact, betti[k] == value, f"betti {betti}")
        elif fact == "solvable_step":
            fp = L.fingerprint(t)
            add("solvable_step", fp.solvable_step == value, str(fp.solvable_step))
        elif fact == "nilpotent_step":
            fp = L.fingerprint(t)
            add("nilpotent_step", fp.nilpotent_step == value, str(fp.nilpotent_step))
        elif fact == "nilpotent":
            fp = L.fingerprint(t)
            add("nilpotent", (fp.nilpotent_step is not None) == value,
                str(fp.nilpotent_step))
        elif fact == "lambda":
            lam = float(value(bundle.params))
            add("lambda_derived", math.isfinite(lam) and lam > 0, f"lambda = {lam:.6g}")

    if run_searches:
        ks = kahler_search(L, bundle.J, budget=budget, seed=seed, tol=t)
        hs = hermitian_symplectic_search(L, bundle.J, budget=budget, seed=seed, tol=t)
        if entry.taming_expected:
            add("kahler_search", ks.found, ks.status)
            add("taming_search", hs.found, hs.status)
        else:
            add("kahler_search_empty", not ks.found, ks.status)
            add("taming_search_empty", not hs.found, hs.status)

    return VerifyReport(entry_id=entry.id, params=dict(bundle.params), items=tuple(items))
