import itertools

import pytest
from hypothesis import given, strategies as st

from solvrank.gfarith import (FieldError, is_prime, make_field, prime_factors, primitive_element,
                              solve_sum_of_squares)

FIELDS = [(2, 1), (3, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2), (3, 3), (2, 4)]


def _polymod_zero(f, g, p):
    """True if the monic g divides f (coefficient lists, constant first)."""
    f = list(f)
    while len(f) >= len(g):
        c = f[-1]
        shift = len(f) - len(g)
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        f.pop()
    return not any(f)


def _monic(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def _irreducible_brute(f, p):
    deg = len(f) - 1
    for e in range(1, deg // 2 + 1):
        for g in _monic(p, e):
            if _polymod_zero(f, g, p):
                return False
    return True


def test_gf4_modulus_is_x2_x_1():
    assert make_field(2, 2).modulus == (1, 1)


def test_gf243_modulus_is_smallest_irreducible_quintic():
    expected = next(tuple(f[:-1]) for f in _monic(3, 5) if _irreducible_brute(f, 3))
    assert make_field(3, 5).modulus == expected


@pytest.mark.parametrize("p,k", FIELDS)
def test_modulus_is_irreducible(p, k):
    F = make_field(p, k)
    if k > 1:
        assert _irreducible_brute(list(F.modulus) + [1], p)


@pytest.mark.parametrize("p,k", FIELDS)
def test_primitive_element_generates(p, k):
    F = make_field(p, k)
    g = primitive_element(F)
    seen = set()
    x = F.one
    for _ in range(F.order - 1):
        seen.add(x.code)
        x = x * g
    assert len(seen) == F.order - 1


field_and_codes = st.sampled_from(FIELDS).flatmap(
    lambda pk: st.tuples(st.just(pk), *[st.integers(0, pk[0] ** pk[1] - 1)] * 3))


@given(field_and_codes)
def test_field_axioms(data):
    (p, k), a, b, c = data
    F = make_field(p, k)
    x, y, z = F.from_code(a), F.from_code(b), F.from_code(c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x + F.zero == x and x * F.one == x
    assert x - x == F.zero
    if not x.is_zero():
        assert x * x.inverse() == F.one
        assert x ** (F.order - 1) == F.one


@given(field_and_codes)
def test_frobenius_is_a_ring_map(data):
    (p, k), a, b, _ = data
    F = make_field(p, k)
    x, y = F.from_code(a), F.from_code(b)
    assert (x + y).frobenius() == x.frobenius() + y.frobenius()
    assert (x * y).frobenius() == x.frobenius() * y.frobenius()
    assert x ** p == x.frobenius()


@given(st.sampled_from(FIELDS), st.data())
def test_serialize_round_trip(pk, data):
    F = make_field(*pk)
    e = F.from_code(data.draw(st.integers(0, F.order - 1)))
    assert F.parse(F.serialize(e)) == e


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 23, 71])
def test_sum_of_squares(p):
    a, b = solve_sum_of_squares(p)
    assert (a * a + b * b + 1) % p == 0 and 0 <= a <= b < p


def test_rejects_composite():
    with pytest.raises(FieldError):
        make_field(6)
    assert not is_prime(1) and is_prime(2)


def test_prime_factors():
    assert prime_factors(29040) == [2, 3, 5, 11]
    assert prime_factors(1) == []
