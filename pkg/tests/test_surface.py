import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcgcover.mcg import Catalog
from mcgcover.surface import (
    CoverSpec,
    GroupAuto,
    SurfacePresentation,
    in_gamma,
    in_kernel,
    inner,
    is_identity,
    orientation_character,
    p_star,
    p_star_hom,
    preserves_U,
    relator,
    replay_trace,
    sigma_relator,
    v_image,
    validate_endo,
)
from mcgcover.words import Endo, Word, compose


def test_relator_r2(pres2):
    rel = relator(2, pres2.alphabet)
    assert rel == pres2.word("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1 c^-2")
    assert len(rel) == 10
    sums = rel.exponent_sums()
    assert sums[:-1] == [0] * 4 and sums[-1] == -2


def test_rejects_small_r():
    with pytest.raises(ValueError):
        SurfacePresentation(1)


def test_v_image(pres2):
    spec = CoverSpec.default(pres2, 2, 3)
    w = pres2.word
    assert v_image(spec, w("a1")) == (1, 0)
    assert v_image(spec, w("c")) == (0, 0)
    assert v_image(spec, w("a1^2")) == (0, 0)
    assert in_kernel(spec, w("a1^2")) and not in_kernel(spec, w("a1"))
    for d in ("a2", "b2", "c"):
        for nu in range(2):
            for mu in range(3):
                x = w(f"a1^{nu} b1^{mu}")
                assert in_kernel(spec, w(d).conjugate(x))


def test_custom_table(pres2):
    spec = CoverSpec.from_text(pres2, 2, 2, "a1=(1,0),b1=(0,1),c=(1,1)")
    assert v_image(spec, pres2.word("c a1")) == (0, 1)


def test_word_problem_examples(pres2, cat22):
    assert is_identity(pres2, pres2.relator).status == "proven-identity"
    img = cat22["R1"].endo.apply(pres2.relator)
    cert = is_identity(pres2, img)
    assert cert.proven and replay_trace(pres2, img, cert.trace)
    assert is_identity(pres2, pres2.word("a1")).status == "proven-nonidentity"
    # a conjugate of the relator and its inverse interleaved
    t = pres2.word("b2 c a1^-1")
    mixed = pres2.relator.conjugate(t) * pres2.word("a2") * pres2.relator.inverse() * pres2.word("a2^-1")
    assert is_identity(pres2, mixed).proven


def test_validate_endo(pres2, cat22):
    assert validate_endo(pres2, Endo.identity(pres2.alphabet)).proven
    assert validate_endo(pres2, cat22["Y"].endo).proven
    bad = Endo.from_dict(pres2.alphabet, {"c": pres2.word("c a1")})
    assert validate_endo(pres2, bad).status == "proven-nonidentity"


def test_preserves_U(pres2, cat22):
    spec = CoverSpec.default(pres2, 2, 2)
    s1 = preserves_U(spec, cat22["S1"].endo)
    assert s1 == GroupAuto(2, 2, (1, 1), (0, 1))  # (x, y) -> (x, y - x)
    r1 = preserves_U(spec, cat22["R1"].endo)
    assert r1 == GroupAuto(2, 2, (1, 0), (1, 1))  # (x, y) -> (x + y, y)
    assert preserves_U(spec, cat22["T1"].endo) is None


def test_orientation_character(pres2):
    spec = orientation_character(pres2)
    assert (spec.h, spec.k) == (2, 1)
    assert v_image(spec, pres2.word("c")) == (1, 0)
    assert all(v_image(spec, pres2.word(f"{x}{i}")) == (0, 0) for x in "ab" for i in (1, 2))
    assert v_image(spec, pres2.relator) == (0, 0)


@pytest.mark.parametrize("r", [2, 3])
def test_p_star(r):
    pres = SurfacePresentation(r)
    spec = orientation_character(pres)
    for i in range(1, r + 1):
        assert p_star(pres, f"a{i}") == pres.word(f"a{i}")
    i = 1
    conj = pres.word("c " + " ".join(f"b{t}" for t in range(r, i - 1, -1)) + f" a{i}")
    assert p_star(pres, f"b{2 * r + 1 - i}") == pres.word(f"b{i}").conjugate(conj)
    for x in "ab":
        for j in range(1, 2 * r + 1):
            assert in_kernel(spec, p_star(pres, f"{x}{j}"))
    assert is_identity(pres, p_star_hom(pres)(sigma_relator(2 * r))).proven


def test_inner(pres2):
    spec = CoverSpec.default(pres2, 2, 2)
    assert inner(pres2, pres2.alphabet.identity()).is_identity()
    assert in_gamma(spec, inner(pres2, pres2.word("a1")))
    u, v = pres2.word("a1 c"), pres2.word("b2^-1")
    assert compose(inner(pres2, u), inner(pres2, v)) == inner(pres2, u * v)


@pytest.mark.parametrize("name", ["R1", "R2", "S1", "S2", "T1", "Y"])
def test_catalog_inverses_certified(pres2, cat22, name):
    na = cat22[name]
    for comp in (compose(na.endo, na.inverse), compose(na.inverse, na.endo)):
        for x in pres2.alphabet.gens():
            assert is_identity(pres2, x.inverse() * comp.apply(x)).proven


_P2 = SurfacePresentation(2)
_SPEC = CoverSpec.default(_P2, 2, 3)
_words = st.lists(st.integers(1, 5).flatmap(lambda g: st.sampled_from([g, -g])), max_size=20).map(
    lambda xs: Word(_P2.alphabet, xs)
)


@given(_words, _words)
def test_v_image_is_a_homomorphism(u, v):
    a, b = v_image(_SPEC, u), v_image(_SPEC, v)
    assert v_image(_SPEC, u * v) == _SPEC.add(a, b)


@settings(max_examples=30, deadline=None)
@given(_words)
def test_conjugated_relator_is_trivial(t):
    assert is_identity(_P2, _P2.relator.conjugate(t)).proven


def test_gamma_membership_matches_identity_chi(pres3):
    cat = Catalog(pres3, 2)
    spec = CoverSpec.default(pres3, 2, 2)
    for name in ["R1", "R2", "R3", "S1", "S2", "S3", "T2", "Y", "V", "W"]:
        chi = preserves_U(spec, cat[name].endo)
        assert (chi is not None and chi.is_identity()) == in_gamma(spec, cat[name].endo)
