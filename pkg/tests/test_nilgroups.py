import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcomplete.intlinalg import IntMatrix, Lattice
from nilcomplete.local_arith import DyadicLocal
from nilcomplete.nilgroups import (
    DYADIC,
    INTEGERS,
    NSCRIPT,
    DomainMismatch,
    HeisenbergElement as H,
    a_matrix,
    ak_prime_apply,
    ak_prime_inverse,
    b_matrix,
    bk_power_closed_form,
    central_identity_check,
    cocycle,
    cocycle_check,
    heis_commutator,
    heis_power,
    heisenberg_extension,
    lcs_by_commutators,
    lcs_semidirect_lattice,
    mod_domain,
    random_element,
    sd_commutator,
    torus_bundle_group,
    twoadic_domain,
)

coord = st.integers(-50, 50)
elements = st.builds(H, coord, coord, coord)
odd_k = st.integers(-15, 15).filter(lambda k: k % 2)


def test_product_convention():
    assert H(0, 1, 0) * H(1, 0, 0) == H(1, 1, -1)
    assert H(1, 1, 0).inverse() == H(-1, -1, -1)


def test_commutator_of_powers():
    assert heis_commutator(H.x(power=3), H.y(power=5)) == H(0, 0, 15)


def test_powers():
    assert heis_power(H(1, 1, 0), 2) == H(2, 2, -1)
    assert heis_power(H.y(), 4) == H(0, 4, 0)
    g = H(DyadicLocal(1, 3), DyadicLocal(2, 5), 0, DYADIC)
    assert heis_power(heis_power(g, DyadicLocal(1, 3)), 3) == g


@given(elements, elements, elements)
def test_group_axioms(g, h, k):
    assert (g * h) * k == g * (h * k)
    assert (g * g.inverse()).is_identity()
    assert g * H.identity() == g


@given(elements, elements)
def test_commutator_is_central(g, h):
    c = heis_commutator(g, h)
    assert c.is_central() and c.u == g.s * h.t - g.t * h.s


def test_domain_mismatch():
    with pytest.raises(DomainMismatch):
        H(1, 0, 0) * H(1, 0, 0, mod_domain(4))


def test_cocycle_identity():
    assert cocycle((0, 0), (0, 0)) == 0
    for d in (INTEGERS, mod_domain(5), DYADIC, twoadic_domain(5)):
        assert cocycle_check(d, sample_bound=3)


def test_ak_prime_examples():
    assert ak_prime_apply(3, H.y()) == H(3, -1, 0)
    assert ak_prime_apply(5, H.c()) == H.c()
    assert ak_prime_apply(3, H.y(power=2)) == H(6, -2, 3)
    assert ak_prime_apply(3, H.y(power=2)) == ak_prime_apply(3, H.y()) ** 2
    with pytest.raises(ValueError):
        ak_prime_apply(2, H.y())


@pytest.mark.parametrize("domain", [INTEGERS, mod_domain(7), DYADIC, twoadic_domain(7), NSCRIPT])
def test_ak_prime_is_automorphism(domain):
    gen = random.Random(11)
    for k in (1, 3, -7):
        for _ in range(50):
            g, h = random_element(gen, domain), random_element(gen, domain)
            assert ak_prime_apply(k, g * h) == ak_prime_apply(k, g) * ak_prime_apply(k, h)
            assert ak_prime_inverse(k, ak_prime_apply(k, g)) == g


def test_ak_prime_abelianizes_to_a_k():
    for k in (1, 3, 5):
        for g in (H.x(), H.y()):
            img = ak_prime_apply(k, g)
            assert (img.s, img.t) == tuple(a_matrix(k) @ [g.s, g.t])


@pytest.mark.convention
@pytest.mark.parametrize("k", [3, -5])
def test_relation_x_a(k):
    E = heisenberg_extension(k)
    x = E.lift(H.x())
    assert sd_commutator(x, E.a) == x**-2
    G = torus_bundle_group(k)
    xg = G.lift(G.fiber.element(1, 0))
    assert sd_commutator(xg, G.a) == xg**-2


@pytest.mark.parametrize(
    "k, n, expected",
    [(3, 2, [[4, -12], [0, 4]]), (3, 1, [[-2, 3], [0, -2]]), (7, 4, [[16, -224], [0, 16]])],
)
def test_bk_closed_form_examples(k, n, expected):
    assert bk_power_closed_form(k, n) == IntMatrix(expected)


@given(odd_k, st.integers(1, 20))
def test_bk_closed_form_matches_powers(k, n):
    assert bk_power_closed_form(k, n) == b_matrix(k) ** n


def test_lcs_lattice_examples():
    assert lcs_semidirect_lattice(a_matrix(3), 2) == Lattice.column_span(IntMatrix([[4, -12], [0, 4]]))
    assert lcs_semidirect_lattice(a_matrix(5), 3) == Lattice.column_span(IntMatrix([[-8, 60], [0, -8]]))
    assert lcs_semidirect_lattice(IntMatrix.identity(2), 2).rank == 0


@pytest.mark.convention
@pytest.mark.parametrize("k", [1, 3, 5])
def test_lcs_lattice_against_commutators(k):
    for n in range(1, 5):
        assert lcs_semidirect_lattice(a_matrix(k), n) == lcs_by_commutators(a_matrix(k), n)


@pytest.mark.convention
def test_central_identity():
    assert central_identity_check(3, 0, 16)
    assert central_identity_check(3, 5, 16)
    for k in (1, -3, 15):
        assert all(central_identity_check(k, n, 32) for n in range(11))


def test_json_roundtrip():
    for g in (H(1, -2, 3), H(DyadicLocal(1, 3), 0, DyadicLocal(-2, 5), DYADIC), H(3, 5, 7, mod_domain(4))):
        assert H.from_json(g.to_json()) == g
