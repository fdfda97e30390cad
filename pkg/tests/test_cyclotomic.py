from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcgcover.closed_forms import z_value, z_value_series
from mcgcover.cyclotomic import CycloContext, cyclotomic_polynomial, galois, is_integral, root_of_unity


def test_roots_of_unity():
    assert root_of_unity(CycloContext(2), 1) == -1
    z = CycloContext(3).zeta(3)
    assert 1 + z + z ** 2 == 0
    assert root_of_unity(CycloContext(4), 2) == -1


def test_inverse_of_zeta():
    ctx = CycloContext(5)
    z = ctx.zeta(5)
    assert z * z.inverse() == 1


def test_z_values():
    # 2k / (1 - zeta): 2 for k = 2 and 4 + 2 zeta for k = 3
    assert z_value(CycloContext(2), 2) == 2
    c3 = CycloContext(3)
    assert z_value(c3, 3) == 4 + 2 * c3.zeta(3)


@pytest.mark.parametrize("k", range(2, 9))
def test_z_closed_forms_agree(k):
    ctx = CycloContext(k)
    assert z_value(ctx, k) == z_value_series(ctx, k)
    assert is_integral(z_value(ctx, k))


def test_galois_examples():
    ctx = CycloContext(3)
    z = ctx.zeta(3)
    assert galois(ctx, 1, 3 + z) == 3 + z
    assert galois(ctx, 2, z) == z ** 2 == -1 - z


def test_integrality():
    ctx = CycloContext(3)
    assert not is_integral(ctx(Fraction(1, 2)))
    assert is_integral(4 + 2 * ctx.zeta(3))
    assert all(is_integral(ctx.root_of_unity(a)) for a in range(3))


@pytest.mark.parametrize("m", range(1, 13))
def test_zeta_is_a_root_of_phi(m):
    ctx = CycloContext(m)
    z = ctx.root_of_unity(1)
    assert z ** m == 1
    phi = cyclotomic_polynomial(m)
    assert sum((c * z ** i for i, c in enumerate(phi)), ctx.zero()) == 0


def cyclo(m):
    ctx = CycloContext(m)
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.lists(coeff, min_size=ctx.degree, max_size=ctx.degree).map(ctx.from_coeffs)


@settings(max_examples=60)
@given(st.sampled_from([3, 4, 5, 6, 8, 12]).flatmap(lambda m: st.tuples(cyclo(m), cyclo(m), cyclo(m))))
def test_field_axioms(xyz):
    x, y, z = xyz
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if not x.is_zero():
        assert x * x.inverse() == 1


@settings(max_examples=60)
@given(st.integers(2, 12).flatmap(lambda m: st.tuples(st.just(m), cyclo(m), cyclo(m))))
def test_galois_is_a_ring_homomorphism(data):
    m, x, y = data
    ctx = CycloContext(m)
    for l in ctx.galois_group():
        assert galois(ctx, l, x * y) == galois(ctx, l, x) * galois(ctx, l, y)
        assert galois(ctx, l, x + y) == galois(ctx, l, x) + galois(ctx, l, y)
        for l2 in ctx.galois_group():
            assert galois(ctx, l, galois(ctx, l2, x)) == galois(ctx, (l * l2) % m, x)


def test_json_roundtrip():
    ctx = CycloContext(6)
    x = ctx.from_coeffs([1, Fraction(2, 3), -1])
    assert type(x).from_json(x.to_json()) == x
