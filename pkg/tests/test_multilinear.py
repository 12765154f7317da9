"""Alternating-form core: wedge, pullback, bidegree machinery."""

import itertools

import numpy as np
import pytest

from conftest import bidegree_oracle, g1_bundle
from sktlie.errors import InvalidInputError
from sktlie.hermitian import standard_complex_structure
from sktlie.multilinear import (
    ComplexKForm,
    Endomorphism,
    KForm,
    bidegree_decompose,
    holomorphic_coframe,
    index_combos,
    permutation_sign,
    pullback,
    wedge,
)

J4 = standard_complex_structure(4)


def test_wedge_basis_forms():
    e1 = KForm.basis(4, (1,))
    e2 = KForm.basis(4, (2,))
    assert np.allclose(wedge(e1, e2).coeffs, KForm.basis(4, (1, 2)).coeffs)
    e12 = KForm.basis(4, (1, 2))
    assert wedge(e12, e12).norm() == 0.0
    # repeated index arising in d(omega) on the g1 algebra
    e24 = KForm.basis(4, (2, 4))
    assert wedge(e24, e2).norm() == 0.0


def test_wedge_graded_anticommutative(rng):
    for ka, kb in [(1, 1), (1, 2), (2, 2), (2, 1)]:
        a = KForm(4, ka, rng.normal(size=len(index_combos(4, ka))))
        b = KForm(4, kb, rng.normal(size=len(index_combos(4, kb))))
        ab = wedge(a, b)
        ba = wedge(b, a)
        assert np.allclose(ab.coeffs, (-1.0) ** (ka * kb) * ba.coeffs)


def test_wedge_associative(rng):
    a = KForm(5, 1, rng.normal(size=5))
    b = KForm(5, 1, rng.normal(size=5))
    c = KForm(5, 2, rng.normal(size=len(index_combos(5, 2))))
    left = wedge(wedge(a, b), c)
    right = wedge(a, wedge(b, c))
    assert np.allclose(left.coeffs, right.coeffs)


def test_wedge_beyond_top_degree_is_zero():
    a = KForm.basis(4, (1, 2, 3))
    b = KForm.basis(4, (1, 2))
    out = wedge(a, b)
    assert out.degree == 5 and out.coeffs.size == 0 and out.norm() == 0.0


def test_wedge_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        wedge(KForm.basis(4, (1,)), KForm.basis(6, (1,)))


def test_antisymmetry_of_evaluation_exhaustive(rng):
    # evaluating on permuted basis tuples equals sign(permutation) times original
    for k in (2, 3, 4):
        form = KForm(4, k, rng.normal(size=len(index_combos(4, k))))
        eye = np.eye(4)
        for combo in index_combos(4, k):
            base = form.evaluate(*[eye[i] for i in combo])
            for perm in itertools.permutations(combo):
                val = form.evaluate(*[eye[i] for i in perm])
                assert val == pytest.approx(permutation_sign(perm) * base, abs=1e-12)


def test_pullback_identity():
    form = KForm.from_terms(4, 2, {(1, 2): 2.0, (3, 4): -1.0, (1, 3): 0.5})
    out = pullback(form, np.eye(4))
    assert np.allclose(out.coeffs, form.coeffs)


def test_pullback_g1_examples():
    # on the standard J: e^1 -> -e^2 and e^{124} -> e^{123}
    out1 = pullback(KForm.basis(4, (1,)), J4)
    assert np.allclose(out1.coeffs, (-1.0 * KForm.basis(4, (2,))).coeffs)
    out3 = pullback(KForm.basis(4, (1, 2, 4)), J4)
    assert np.allclose(out3.coeffs, KForm.basis(4, (1, 2, 3)).coeffs)


def test_pullback_matches_basis_evaluation_oracle(rng):
    A = rng.normal(size=(4, 4))
    form = KForm(4, 3, rng.normal(size=4))
    out = pullback(form, A)
    eye = np.eye(4)
    for combo in index_combos(4, 3):
        direct = form.evaluate(*[A @ eye[i] for i in combo])
        assert out.coefficient(*[i + 1 for i in combo]) == pytest.approx(direct, abs=1e-12)


@pytest.mark.parametrize("dim", [4, 8])
def test_pullback_composition(rng, dim):
    for k in (1, 2, 3):
        A = rng.normal(size=(dim, dim))
        B = rng.normal(size=(dim, dim))
        form = KForm(dim, k, rng.normal(size=len(index_combos(dim, k))))
        lhs = pullback(pullback(form, A), B)
        rhs = pullback(form, A @ B)
        assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-10)


def test_endomorphism_convention():
    # entry (a, b) = coefficient of e_a in the image of e_b
    E = Endomorphism(J4)
    assert E.matrix[1, 0] == 1.0  # J e_1 = e_2
    with pytest.raises(InvalidInputError):
        Endomorphism(np.zeros((2, 3)))


def test_bidegree_omega_is_11():
    omega = KForm.from_terms(4, 2, {(1, 2): 1.0, (3, 4): 1.0})
    comps = bidegree_decompose(omega, J4)
    nonzero = [c for c in comps if c.norm() > 1e-12]
    assert len(nonzero) == 1 and nonzero[0].bidegree == (1, 1)
    assert np.allclose(nonzero[0].coeffs.real, omega.coeffs)


def test_bidegree_alpha12_is_20():
    # (e^1 + i e^2) ^ (e^3 + i e^4) is pure (2, 0)
    a1 = ComplexKForm(4, 1, np.array([1, 1j, 0, 0]))
    a2 = ComplexKForm(4, 1, np.array([0, 0, 1, 1j]))
    a12 = wedge(a1, a2)
    comps = {c.bidegree: c.norm() for c in bidegree_decompose(a12, J4)}
    assert comps[(2, 0)] > 0.9
    assert comps[(1, 1)] < 1e-12 and comps[(0, 2)] < 1e-12


def test_bidegree_domega_g1():
    b = g1_bundle()
    dw = b.algebra.d(b.omega)  # e^{124}
    comps = {c.bidegree: c for c in bidegree_decompose(dw, J4)}
    assert comps[(3, 0)].norm() < 1e-12 and comps[(0, 3)].norm() < 1e-12
    assert comps[(2, 1)].norm() > 0.1 and comps[(1, 2)].norm() > 0.1
    # conjugate pair
    assert np.allclose(comps[(2, 1)].coeffs, np.conj(comps[(1, 2)].coeffs))


def test_bidegree_against_eigenprojection_oracle(rng):
    form = KForm(4, 2, rng.normal(size=6))
    comps = {c.bidegree: c for c in bidegree_decompose(form, J4)}
    for (p, q), comp in comps.items():
        oracle = bidegree_oracle(form, J4, p, q)
        assert np.allclose(comp.coeffs, oracle, atol=1e-10)


def test_bidegree_reconstruction_and_idempotence(rng):
    form = KForm(4, 3, rng.normal(size=4))
    comps = bidegree_decompose(form, J4)
    total = np.sum([c.coeffs for c in comps], axis=0)
    assert np.allclose(total, form.coeffs, atol=1e-12)
    for comp in comps:
        again = bidegree_decompose(comp, J4)
        for sub in again:
            target = comp.coeffs if sub.bidegree == comp.bidegree else 0.0
            assert np.allclose(sub.coeffs, target, atol=1e-10)


def test_bidegree_rejects_non_almost_complex():
    with pytest.raises(InvalidInputError):
        bidegree_decompose(KForm.basis(4, (1, 2)), np.eye(4))


def test_fundamental_form_j_invariance(rng):
    from conftest import random_compatible_metric
    from sktlie.hermitian import HermitianStructure

    b = g1_bundle()
    G = random_compatible_metric(J4, rng)
    H = HermitianStructure(b.algebra, J4, G)
    pulled = pullback(H.omega, J4)
    assert np.allclose(pulled.coeffs, H.omega.coeffs, atol=1e-12)


def test_holomorphic_coframe_standard():
    alphas = holomorphic_coframe(J4)
    assert np.allclose(alphas[0], np.array([1, 1j, 0, 0]))
    assert np.allclose(alphas[1], np.array([0, 0, 1, 1j]))
