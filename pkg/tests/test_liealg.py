"""Lie algebra layer: Jacobi, the coframe differential, cohomology, series."""

import numpy as np
import pytest

from conftest import d_oracle_form, g1_bundle, g2_bundle, g3_bundle, so3_so3
from sktlie import catalog
from sktlie.connections import canonical_flat_connection, flat_family_g1
from sktlie.errors import InvalidInputError
from sktlie.hermitian import standard_complex_structure
from sktlie.liealg import LieAlgebra, form_to_string, koszul_two_form_differential
from sktlie.multilinear import KForm, index_combos
from sktlie.tangent import build_tangent

J4 = standard_complex_structure(4)


def test_jacobi_g1_and_abelian():
    assert g1_bundle().algebra.jacobi_defect() == pytest.approx(0.0, abs=1e-15)
    assert LieAlgebra.abelian(4).jacobi_defect() == 0.0


def test_jacobi_perturbed_g1_fails():
    # adding e^{34} to de^3 breaks the identity; direct triple evaluation
    with pytest.raises(InvalidInputError):
        LieAlgebra.from_terms(4, {1: {(2, 4): 1.0}, 2: {(1, 4): -1.0},
                                  3: {(1, 2): 1.0, (3, 4): 1.0}})
    L = LieAlgebra.from_terms(4, {1: {(2, 4): 1.0}, 2: {(1, 4): -1.0},
                                  3: {(1, 2): 1.0, (3, 4): 1.0}}, check=False)
    assert L.jacobi_defect() > 1e-9


def test_bracket_constants_g1():
    L = g1_bundle().algebra
    e = np.eye(4)
    assert np.allclose(L.bracket(e[1], e[3]), -e[0])  # [e2, e4] = -e1
    assert np.allclose(L.bracket(e[0], e[3]), e[1])   # [e1, e4] = e2
    assert np.allclose(L.bracket(e[0], e[1]), -e[2])  # [e1, e2] = -e3


def test_differential_examples_g1():
    L = g1_bundle().algebra
    de3 = L.d(KForm.basis(4, (3,)))
    assert form_to_string(de3) == "e^{12}"
    d_e12 = L.d(KForm.basis(4, (1, 2)))
    assert d_e12.norm() == pytest.approx(0.0, abs=1e-15)


def test_differential_is_a_derivation(rng):
    L = g2_bundle(1.5, -0.5).algebra
    for ka, kb in [(1, 1), (1, 2), (2, 1)]:
        a = KForm(4, ka, rng.normal(size=len(index_combos(4, ka))))
        b = KForm(4, kb, rng.normal(size=len(index_combos(4, kb))))
        from sktlie.multilinear import wedge

        lhs = L.d(wedge(a, b))
        rhs = wedge(L.d(a), b) + (-1.0) ** ka * wedge(a, L.d(b))
        assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-12)


def test_differential_matches_bracket_oracle(rng):
    for bundle in (g1_bundle(), g2_bundle(2.0, -3.0), g3_bundle()):
        L = bundle.algebra
        for k in (1, 2, 3):
            form = KForm(4, k, rng.normal(size=len(index_combos(4, k))))
            assert np.allclose(L.d(form).coeffs, d_oracle_form(L, form).coeffs,
                               atol=1e-12)


def test_koszul_two_form_oracle_agrees():
    L = g1_bundle().algebra
    omega = KForm.from_terms(4, 2, {(1, 2): 1.0, (3, 4): 1.0})
    assert np.allclose(L.d(omega).coeffs,
                       koszul_two_form_differential(L, omega).coeffs, atol=1e-14)


def test_d_squared_zero_on_catalog():
    for eid in catalog.ENTRY_IDS:
        L = catalog.build(eid).algebra
        assert L.d_squared_norm() <= 1e-12


def test_d_squared_iff_jacobi(rng):
    # random antisymmetric structure data at dim 4: d^2 = 0 exactly when
    # the Jacobi defect vanishes
    hits = {True: 0, False: 0}
    for _ in range(40):
        terms = {}
        for k in range(1, 5):
            terms[k] = {(i + 1, j + 1): float(rng.normal()) * (rng.random() < 0.4)
                        for (i, j) in index_combos(4, 2)}
        L = LieAlgebra.from_terms(4, terms, check=False)
        jac = L.jacobi_defect() <= 1e-9
        dsq = L.d_squared_norm() <= 1e-9
        assert jac == dsq
        hits[jac] += 1
    assert hits[False] > 0  # the sample must actually contain non-algebras


def test_cohomology_abelian_and_g1():
    assert LieAlgebra.abelian(4).cohomology_dims() == [1, 4, 6, 4, 1]
    betti = g1_bundle().algebra.cohomology_dims()
    assert betti[1] == 1  # ker d on 1-forms is spanned by e^4
    assert betti[4] == 1  # unimodular


def test_cohomology_b3_zero_affxaff_and_d4p(rng):
    for eid in ("affxaff", "d4p"):
        for _ in range(5):
            L = catalog.build(eid, catalog.sample_params(eid, rng)).algebra
            betti = L.cohomology_dims()
            assert betti[3] == 0


def test_top_betti_tracks_unimodularity(rng):
    for eid in catalog.ENTRY_IDS:
        L = catalog.build(eid, catalog.sample_params(eid, rng)).algebra
        expected = 1 if L.is_unimodular() else 0
        assert L.cohomology_dims()[-1] == expected


def test_fingerprint_tangent_g1():
    b = g1_bundle()
    D = canonical_flat_connection(b.algebra, b.J, b.metric)
    T = build_tangent(b.algebra, D, b.J, b.metric)
    fp = T.total.fingerprint()
    assert fp.solvable_step == 3
    assert fp.unimodular


def test_fingerprint_g3_two_step_nilpotent():
    fp = g3_bundle().algebra.fingerprint()
    assert fp.nilpotent_step == 2


def test_fingerprint_distinguishes_flat_family_members():
    # D with only the (3,4)-rotation block produces a center three dimensions
    # bigger than the canonical tangent algebra's
    b = g1_bundle()
    D_canonical = canonical_flat_connection(b.algebra, b.J, b.metric)
    D_partial = flat_family_g1(0.0, 0.0, 0.0, 1.0)
    T1 = build_tangent(b.algebra, D_canonical, b.J, b.metric)
    T2 = build_tangent(b.algebra, D_partial, b.J, b.metric)
    fp1 = T1.total.fingerprint()
    fp2 = T2.total.fingerprint()
    assert fp1 != fp2
    assert fp1.center_dim == 1 and fp2.center_dim == 3


def test_fingerprint_invariant_under_basis_permutation(rng):
    L = g2_bundle(1.0, 2.0).algebra
    fp = L.fingerprint()
    perm = rng.permutation(4)
    P = np.eye(4)[perm].T  # new e_i = old e_{perm(i)}
    # conjugate the bracket tensor by the permutation
    c = np.einsum("ka,abc,bi,cj->kij", np.linalg.inv(P), L.structure, P, P)
    L2 = LieAlgebra.from_brackets(c)
    assert L2.fingerprint() == fp


def test_perfect_algebra_detection():
    L = so3_so3()
    assert L.is_perfect()
    assert not g1_bundle().algebra.is_perfect()
