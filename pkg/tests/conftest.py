"""Shared fixtures and independent numerical oracles for the test suite.

The oracles here intentionally avoid the library's optimized code paths:
exterior derivatives are evaluated through the bracket formula on basis
tuples, bidegree projections through eigenprojections of the complexified
J-action on vectors, so that the dense-matrix implementations are checked
against genuinely separate computations.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from sktlie import catalog
from sktlie.hermitian import standard_complex_structure
from sktlie.liealg import LieAlgebra
from sktlie.multilinear import KForm, index_combos


@pytest.fixture
def rng():
    return np.random.default_rng(20240809)


def random_compatible_metric(J: np.ndarray, rng: np.random.Generator,
                             scale: float = 0.8) -> np.ndarray:
    """Random positive-definite metric averaged to J-compatibility."""
    n = J.shape[0]
    A = rng.normal(size=(n, n)) * scale
    G0 = A @ A.T + n * np.eye(n)
    return 0.5 * (G0 + J.T @ G0 @ J)


def d_oracle(L: LieAlgebra, form, vectors) -> float:
    """Brute-force invariant exterior derivative on given vectors:

    d a(X_0..X_k) = sum_{i<j} (-1)^{i+j} a([X_i, X_j], ..no X_i.., ..no X_j..)
    """
    k = len(vectors) - 1
    total = 0.0
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            rest = [vectors[m] for m in range(k + 1) if m not in (i, j)]
            sign = (-1) ** (i + j)
            total += sign * form.evaluate(L.bracket(vectors[i], vectors[j]), *rest)
    return total


def d_oracle_form(L: LieAlgebra, form) -> KForm:
    """Assemble d(form) as a KForm entirely through the bracket oracle."""
    n = L.dim
    eye = np.eye(n)
    terms = {}
    for combo in index_combos(n, form.degree + 1):
        vecs = [eye[i] for i in combo]
        terms[tuple(i + 1 for i in combo)] = d_oracle(L, form, vecs)
    return KForm.from_terms(n, form.degree + 1, terms)


def vector_bidegree_projectors(J: np.ndarray):
    """P^{1,0} = (I - iJ)/2 and P^{0,1} = (I + iJ)/2 on complexified vectors."""
    n = J.shape[0]
    I = np.eye(n)
    return (I - 1j * J) / 2.0, (I + 1j * J) / 2.0


def bidegree_oracle(form, J: np.ndarray, p: int, q: int) -> complex | np.ndarray:
    """(p,q)-component via slot-wise eigenprojections, returned as a dense
    coefficient vector over the increasing multi-indices."""
    k = form.degree
    n = form.dim
    P10, P01 = vector_bidegree_projectors(J)
    eye = np.eye(n)
    out = np.zeros(len(index_combos(n, k)), dtype=complex)
    for r, combo in enumerate(index_combos(n, k)):
        total = 0.0 + 0.0j
        for subset in itertools.combinations(range(k), p):
            vecs = []
            for slot, idx in enumerate(combo):
                proj = P10 if slot in subset else P01
                vecs.append(proj @ eye[idx])
            total += form.evaluate(*vecs)
        out[r] = total
    return out


def g1_bundle():
    return catalog.build("g1")


def g2_bundle(a=1.0, b=1.0):
    return catalog.build("g2", {"a": a, "b": b})


def g3_bundle():
    return catalog.build("g3")


def so3_so3() -> LieAlgebra:
    """A perfect 6-dimensional algebra (two copies of the cross-product algebra)."""
    terms = {}
    for base in (0, 3):
        terms[base + 1] = {(base + 2, base + 3): -1.0}
        terms[base + 2] = {(base + 1, base + 3): 1.0}
        terms[base + 3] = {(base + 1, base + 2): -1.0}
    return LieAlgebra.from_terms(6, terms)


def iwasawa_like() -> tuple[LieAlgebra, np.ndarray, np.ndarray]:
    """A 6-dim nilpotent algebra whose standard Hermitian structure is
    integrable but not pluriclosed; commutator is a proper ideal, so the
    one-direction flat connection exists."""
    L = LieAlgebra.from_terms(6, {5: {(1, 3): 1.0, (2, 4): -1.0},
                                  6: {(1, 4): 1.0, (2, 3): 1.0}})
    return L, standard_complex_structure(6), np.eye(6)


ALL_ENTRY_IDS = tuple(catalog.ENTRY_IDS)
FAMILY_IDS = ("r3x", "affxaff", "r4p", "d42", "d4p", "d4half")
