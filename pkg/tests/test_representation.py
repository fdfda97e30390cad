import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcgcover import linalg
from mcgcover.closed_forms import all_forms, commutator_forms, v_form
from mcgcover.homology import standard_model
from mcgcover.mcg import Catalog, parse
from mcgcover.representation import (
    OrientationModel,
    diagonal_sign,
    duality_intertwiner,
    gamma_alpha,
    induced_map,
    inner_scalar,
    is_concentrated,
    orientation_reps,
    rho,
    rho_from_induced,
    rho_product,
    varrho,
    verify_identities,
)
from mcgcover.suites import random_gamma_word, random_pi_word
from mcgcover.surface import inner
from mcgcover.words import Endo


def test_identity_induces_identity(model222):
    ind = induced_map(model222, Endo.identity(model222.pres.alphabet))
    assert linalg.is_identity(ind.matrix)
    assert all(a == b for a, b in ind.label_permutation().items())


def test_s1_permutes_labels():
    m = standard_model(2, 3, 3)
    ind = induced_map(m, Catalog(m.pres, 3)["S1"].endo)
    perm = ind.label_permutation()
    assert all(perm[(a, b)] == ((a + b) % 3, b) for a, b in m.labels())
    # every eigenblock lands exactly in its target eigenspace
    for lab in m.labels():
        if lab != (0, 0):
            ind.block(lab)


def test_inner_acts_by_roots_of_unity():
    m = standard_model(2, 2, 3)
    w = m.pres.word("a1")
    for lab in m.labels():
        if lab == (0, 0):
            continue
        s = inner_scalar(m, lab, w)
        assert s is not None and m.field.is_root_of_unity(s)
        assert s ** 6 == 1


def test_v_is_concentrated_at_zero(model222, cat22):
    V = cat22["V"].endo
    assert rho(model222, (1, 1), V).is_identity()
    assert is_concentrated(model222, V, 0) and gamma_alpha(model222, V, 0)
    assert not is_concentrated(model222, V, 1)
    ident = Endo.identity(model222.pres.alphabet)
    assert all(is_concentrated(model222, ident, a) for a in range(2))


def test_commutator_with_gamma0_element(model222, cat22):
    w = cat22.evaluate(parse("[R2 * Y, V]"))
    assert gamma_alpha(model222, w, 0)


def test_rho_product(model222, cat22):
    ident = Endo.identity(model222.pres.alphabet)
    assert all(m.is_identity() for m in rho_product(model222, ident))
    mats = rho_product(model222, cat22["V"].endo)
    assert mats[1].is_identity()
    assert mats[0] == rho(model222, (0, 1), cat22["V"].endo)
    w = model222.pres.word("b1 c a2")
    assert all(m.is_scalar() is not None for m in rho_product(model222, inner(model222.pres, w)))


def test_v_matches_the_closed_form_before_conjugation_at_r2(model222, cat22):
    # at r = 2 the closed form holds for rho^{0,1}; varrho differs by the basis change
    assert rho(model222, (0, 1), cat22["V"].endo) == v_form(model222).matrix


@pytest.mark.parametrize("r,k", [(3, 2), (3, 3)])
def test_closed_forms(r, k):
    m = standard_model(r, k, k)
    cat = Catalog(m.pres, k)
    for e in all_forms(m):
        assert varrho(m, cat.evaluate(parse(e.word))) == e.matrix, e.name


@pytest.mark.parametrize("r,k", [(2, 2), (2, 3)])
def test_closed_forms_without_v_at_r2(r, k):
    m = standard_model(r, k, k)
    cat = Catalog(m.pres, k)
    for e in all_forms(m):
        if e.name != "V":
            assert varrho(m, cat.evaluate(parse(e.word))) == e.matrix, e.name


def test_y_is_a_sign_flip(model222, cat22):
    assert varrho(model222, cat22["Y"].endo) == diagonal_sign(model222.field, 3, 1)


def test_commutators_k3():
    m = standard_model(3, 3, 3)
    cat = Catalog(m.pres, 3)
    lhs, rhs = commutator_forms(m)
    assert rhs.matrix[1][2] == 2 * m.zeta ** 2
    for e in (lhs, rhs):
        assert varrho(m, cat.evaluate(parse(e.word))) == e.matrix


def test_verify_identities(model222, cat22):
    assert verify_identities(model222, cat22["V"].endo)["ok"]
    assert verify_identities(model222, Endo.identity(model222.pres.alphabet))["ok"]
    m = standard_model(2, 3, 3)
    cat = Catalog(m.pres, 3)
    phi = cat.evaluate(parse("W * R2"))
    for l in (1, 2):
        assert verify_identities(m, phi, l, cat)["ok"]
    with pytest.raises(ValueError):
        verify_identities(m, phi, 3, cat)
    with pytest.raises(ValueError):
        verify_identities(standard_model(2, 2, 3), phi)


def test_orientation_reps(pres2):
    om = OrientationModel(pres2)
    assert om.dimension(1) == om.dimension(-1) == pres2.g
    plus, minus = orientation_reps(pres2, Endo.identity(pres2.alphabet), om)
    assert linalg.is_identity(plus) and linalg.is_identity(minus)
    cat = Catalog(pres2, 2)
    gens = [cat[n].endo for n in ("R1", "R2", "S1", "S2", "T1", "Y")]
    P = duality_intertwiner(pres2, gens, om)
    assert P is not None and linalg.det(P) != 0
    for phi in gens:
        plus, minus = om.matrices(phi)
        dual = linalg.transpose(linalg.inverse(plus))
        assert linalg.mat_eq(linalg.matmul(minus, P), linalg.matmul(P, dual))


_M = standard_model(2, 3, 3)
_C = Catalog(_M.pres, 3)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_functoriality_and_integrality(seed):
    rng = random.Random(seed)
    u = random_gamma_word(rng, 2, 2)
    v = random_gamma_word(rng, 2, 2)
    iu, iv = induced_map(_M, _C.evaluate(u)), induced_map(_M, _C.evaluate(v))
    iuv = induced_map(_M, _C.evaluate(u * v))
    assert linalg.mat_eq(iuv.matrix, linalg.matmul(iu.matrix, iv.matrix))
    for lab in _M.labels():
        if lab == (0, 0):
            continue
        m = rho_from_induced(iuv, lab)
        assert m.is_integral()
        assert m.det().norm() in (1, -1)
        assert m == rho_from_induced(iu, lab) @ rho_from_induced(iv, lab)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_varrho_is_conjugate_to_rho(seed):
    rng = random.Random(seed)
    phi = _C.evaluate(random_gamma_word(rng, 2, 2))
    a, b = rho(_M, (0, 1), phi), varrho(_M, phi)
    assert a.trace() == b.trace() and a.det() == b.det()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_inner_determinant_is_a_root_of_unity(seed):
    rng = random.Random(seed)
    w = random_pi_word(rng, _M.pres, 5)
    for lab in _M.labels():
        if lab != (0, 0):
            assert _M.field.is_root_of_unity(rho(_M, lab, inner(_M.pres, w)).det())
