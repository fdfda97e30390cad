import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcgcover import linalg
from mcgcover.homology import build_model, standard_model
from mcgcover.surface import orientation_character
from mcgcover.words import Word


@pytest.mark.parametrize("r,h,k,dim", [(2, 2, 2, 13), (3, 2, 2, 21), (2, 3, 3, 28), (3, 2, 3, 31)])
def test_dimension(r, h, k, dim):
    assert standard_model(r, h, k).dimension == dim


def test_orientation_cover_dimension(pres2):
    m = build_model(pres2, orientation_character(pres2))
    assert m.dimension == 2 * pres2.g


def test_q_map_examples():
    m = standard_model(2, 2, 3)
    w = m.pres.word
    assert m.q_map(w("a1^2")) == m.coordinate("A")
    assert m.q_map(w("b1^3")) == m.coordinate("B")
    for nu, mu in m.cosets:
        t = w(f"a1^{nu} b1^{mu}")
        assert m.q_map(w("c").conjugate(t)) == m.coordinate(f"C^{{{nu},{mu}}}")
    with pytest.raises(ValueError):
        m.q_map(w("a1"))


def test_c_classes_sum_to_zero():
    m = standard_model(2, 2, 3)
    total = m.coordinate("C^{0,0}").scale(0)
    for nu, mu in m.cosets:
        total = total + m.coordinate(f"C^{{{nu},{mu}}}")
    assert total.is_zero()


def test_deck_action_shifts_indices():
    m = standard_model(2, 2, 3)
    for sym in ("A2", "B2"):
        for nu, mu in m.cosets:
            x = m.coordinate(f"{sym}^{{{nu},{mu}}}")
            assert m.deck_action(1, x) == m.coordinate(f"{sym}^{{{(nu - 1) % 2},{mu}}}")
            assert m.deck_action(2, x) == m.coordinate(f"{sym}^{{{nu},{(mu - 1) % 3}}}")
    assert m.deck_action(1, m.coordinate("A")) == m.coordinate("A")


def test_deck_group_relations():
    m = standard_model(2, 2, 3)
    J1, J2 = m.deck_matrices
    power = lambda M, e: M if e == 1 else linalg.matmul(M, power(M, e - 1))
    assert linalg.is_identity(power(J1, 2)) and linalg.is_identity(power(J2, 3))
    assert linalg.mat_eq(linalg.matmul(J1, J2), linalg.matmul(J2, J1))


def test_eigenbasis_r2():
    m = standard_model(2, 2, 2)
    assert m.eigen_symbols() == ["A2", "B2", "C"]
    assert len(m.eigenbasis((0, 1))) == 3


@pytest.mark.parametrize("label", [(1, 0), (0, 1), (1, 2), (1, 1)])
def test_eigenvectors_are_eigenvectors(label):
    m = standard_model(2, 2, 3)
    J1, J2 = m.deck_matrices
    a, b = label
    for v in m._eigen_vectors(label):
        assert linalg.matvec(J1, v) == [m.zeta ** a * x for x in v]
        assert linalg.matvec(J2, v) == [m.eta ** b * x for x in v]


def test_eigenvectors_are_fixed_by_the_projector():
    m = standard_model(2, 2, 2)
    J1, J2 = m.deck_matrices
    F = m.field
    label = (1, 1)
    for v in m._eigen_vectors(label):
        acc = [F.zero()] * len(v)
        for x in range(m.h):
            for y in range(m.k):
                u = v
                for _ in range(x):
                    u = linalg.matvec(J1, u)
                for _ in range(y):
                    u = linalg.matvec(J2, u)
                # conjugate character of the deck element J1^x J2^y
                c = m.zeta ** (-label[0] * x % m.h) * m.eta ** (-label[1] * y % m.k)
                acc = [s + c * e for s, e in zip(acc, u)]
        assert acc == [m.h * m.k * e for e in v]


@pytest.mark.parametrize("r,h,k", [(2, 2, 2), (3, 2, 3)])
def test_structure(r, h, k):
    m = standard_model(r, h, k)
    rep = m.verify_structure()
    assert rep["ok"] and rep["case"] == "b"
    for row in rep["eigenspaces"]:
        assert row["dimension"] == (m.g if row["label"] == [0, 0] else m.g - 1)


def test_orientation_structure(pres2):
    m = build_model(pres2, orientation_character(pres2))
    rep = m.verify_structure()
    assert rep["ok"] and rep["case"] == "c"
    assert {tuple(r["label"]): r["dimension"] for r in rep["eigenspaces"]} == {(0, 0): 4, (1, 0): 4}


def test_spanning_classes_have_one_relation():
    m = standard_model(2, 2, 2)
    rows = [m.q_vector(w) for w in m.spanning_words]
    assert len(rows) == m.dimension + 1
    assert linalg.rank(rows) == m.dimension


_M = standard_model(2, 2, 3)
_gens = st.lists(st.integers(1, 5).flatmap(lambda g: st.sampled_from([g, -g])), max_size=12)


def _kernel(xs):
    w = Word(_M.pres.alphabet, xs)
    nu, mu = _M.spec.v_image(w)
    fix = _M.spec.section[((-nu) % 2, (-mu) % 3)]
    return w * fix


@settings(max_examples=40, deadline=None)
@given(_gens, _gens)
def test_q_map_is_additive(xs, ys):
    u, v = _kernel(xs), _kernel(ys)
    assert _M.q_map(u * v) == _M.q_map(u) + _M.q_map(v)


@settings(max_examples=40, deadline=None)
@given(_gens)
def test_relator_conjugates_vanish(xs):
    t = Word(_M.pres.alphabet, xs)
    assert _M.q_map(_M.pres.relator.conjugate(t)).is_zero()
