from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilcomplete.local_arith import (
    DyadicLocal,
    DyadicModOne,
    LocalArithmeticError,
    TruncatedTwoAdic,
    hensel_sqrt,
    is_unit_square,
    mod_one,
    reduce_mod_power,
)

odd = st.integers(-10**6, 10**6).map(lambda n: 2 * n + 1)
dyadic = st.builds(DyadicLocal, st.integers(-10**6, 10**6), odd)


def test_dyadic_rejects_even_denominator():
    with pytest.raises(LocalArithmeticError):
        DyadicLocal(1, 2)
    with pytest.raises(LocalArithmeticError):
        DyadicLocal(1, 3) / 2


def test_dyadic_normalizes():
    assert DyadicLocal(2, 6) == DyadicLocal(1, 3)
    assert DyadicLocal(4, 3).half() == DyadicLocal(2, 3)
    assert DyadicLocal(4, 1).valuation() == 2


@given(dyadic, dyadic)
def test_dyadic_ring_ops_match_fractions(p, q):
    assert (p + q).as_fraction() == p.as_fraction() + q.as_fraction()
    assert (p * q).as_fraction() == p.as_fraction() * q.as_fraction()
    assert DyadicLocal.from_json(p.to_json()) == p


@pytest.mark.parametrize(
    "x, m, expected",
    [(Fraction(1, 3), 3, 3), (5, 4, 5), (Fraction(-1, 3), 3, 5)],
)
def test_reduce_mod_power(x, m, expected):
    assert reduce_mod_power(DyadicLocal.coerce(x), m).residue == expected


@given(dyadic, st.integers(1, 40))
def test_reduction_is_a_ring_map(q, m):
    r = reduce_mod_power(q, m)
    assert (r.lift() * q.denominator - q.numerator) % (1 << m) == 0


def test_mixed_precision_takes_minimum():
    a = TruncatedTwoAdic(5, 8) + TruncatedTwoAdic(3, 4)
    assert a.precision == 4 and a.residue == 8 % 16


def test_inverse():
    a = TruncatedTwoAdic(3, 10)
    assert (a * a.inverse()).residue == 1
    with pytest.raises(LocalArithmeticError):
        TruncatedTwoAdic(2, 10).inverse()


@pytest.mark.parametrize("r, expected", [(1, True), (3, False), (17, True)])
def test_is_unit_square_examples(r, expected):
    assert is_unit_square(TruncatedTwoAdic(r, 5)) is expected


def test_is_unit_square_errors():
    with pytest.raises(LocalArithmeticError):
        is_unit_square(TruncatedTwoAdic(2, 5))
    with pytest.raises(LocalArithmeticError):
        is_unit_square(TruncatedTwoAdic(1, 2))


@pytest.mark.parametrize("r, root", [(1, 1), (17, 9), (41, 13)])
def test_hensel_examples(r, root):
    assert hensel_sqrt(TruncatedTwoAdic(r, 6)).residue == root


def test_hensel_root_set_for_17():
    roots = {x for x in range(1, 64, 2) if x * x % 64 == 17}
    assert roots == {9, 64 - 9, 23, 64 - 23}


def test_hensel_rejects_nonsquares():
    with pytest.raises(LocalArithmeticError):
        hensel_sqrt(TruncatedTwoAdic(5, 6))


@given(st.integers(3, 64), st.integers(0, 2**64))
def test_hensel_property(m, seed):
    a = TruncatedTwoAdic(8 * seed + 1, m)
    x = hensel_sqrt(a)
    assert x * x == a and x.residue % 4 == 1


def test_mod_one_examples():
    assert mod_one(DyadicLocal(5, 3)) == DyadicModOne(DyadicLocal(2, 3))
    assert mod_one(DyadicLocal(7, 1)).is_zero()
    assert mod_one(DyadicLocal(5, 3)) == mod_one(DyadicLocal(2, 3))


@given(dyadic, dyadic)
def test_mod_one_is_additive(p, q):
    assert mod_one(p + q) == mod_one(p) + mod_one(q)
    assert DyadicModOne.from_json(mod_one(p).to_json()) == mod_one(p)
