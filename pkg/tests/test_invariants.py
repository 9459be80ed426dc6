import pytest

from nilcomplete.freelie import ClassBoundError
from nilcomplete.intlinalg import AbelianGroupInvariants, IntMatrix
from nilcomplete.invariants import (
    GroupPresentation,
    Tower,
    baer_free_nilpotent,
    baer_rank_by_commutators,
    baer_tower,
    baer_transition_trivial,
    completion_model,
    gamma_omega_witness,
    h1_presentation,
    h2_torus_extension,
    heisenberg_extension_presentation,
    lim1_mittag_leffler,
    project_ehat_to_ghat,
    torus_bundle_presentation,
)
from nilcomplete.local_arith import DyadicLocal, mod_one
from nilcomplete.nilgroups import a_matrix

ODD = [k for k in range(-15, 16) if k % 2]


def test_h1_examples():
    Z_Z4 = AbelianGroupInvariants((4,), 1)
    assert h1_presentation(torus_bundle_presentation(3)) == Z_Z4
    assert h1_presentation(heisenberg_extension_presentation(3)) == Z_Z4
    assert h1_presentation(GroupPresentation(("x",), ())) == AbelianGroupInvariants((), 1)


@pytest.mark.parametrize("k", ODD)
def test_h2(k):
    res = h2_torus_extension(k)
    assert res.group == AbelianGroupInvariants((4,), 0)
    assert res.action == a_matrix(k)
    assert res.invariants_h1n.rank == 0


def test_h2_rejects_even():
    with pytest.raises(ValueError):
        h2_torus_extension(4)


@pytest.mark.parametrize("n, expected", [(1, 2), (2, 5), (3, 9), (4, 15)])
def test_baer_ranks(n, expected):
    assert baer_free_nilpotent(2, 2, n).free_rank == expected
    assert baer_rank_by_commutators(2, 2, n) == expected


def test_baer_transitions():
    assert baer_transition_trivial(2, 2, 1)
    assert baer_transition_trivial(2, 2, 2)
    assert not baer_transition_trivial(2, 2, 1, steps=1)


def test_baer_class_bound():
    with pytest.raises(ClassBoundError):
        baer_free_nilpotent(2, 4, 5)


def test_mittag_leffler():
    assert lim1_mittag_leffler(baer_tower(2, 2, 5)).verdict == "zero"
    assert lim1_mittag_leffler(Tower.constant(IntMatrix([[4]]), 6)).verdict == "zero"
    doubling = Tower.constant(IntMatrix.zeros(1, 0), 10, IntMatrix([[2]]))
    assert lim1_mittag_leffler(doubling).verdict == "unknown"


def test_tower_shape_checks():
    with pytest.raises(ValueError):
        Tower((1, 2), (IntMatrix.zeros(1, 0), IntMatrix.zeros(2, 0)), (IntMatrix([[1]]),))


@pytest.mark.convention
def test_witness_examples():
    w = gamma_omega_witness(3, DyadicLocal(1, 3), 3)
    assert w.shift == 3 and w.base_exponent == DyadicLocal(1, 3) and w.verify()
    w = gamma_omega_witness(3, DyadicLocal(2, 5), 2)
    assert w.shift == 2 and w.base_exponent == DyadicLocal(-2, 5) and w.verify()
    w = gamma_omega_witness(5, 0, 4)
    assert w.base_exponent == 0 and w.evaluate().is_identity()


@pytest.mark.convention
@pytest.mark.parametrize("u", [DyadicLocal(1, 3), DyadicLocal(2, 5), DyadicLocal(1, 7), DyadicLocal(-11, 9)])
def test_witnesses_verify(u):
    for k in (1, 3, -7):
        for n in range(1, 9):
            w = gamma_omega_witness(k, u, n)
            assert w.verify()
            assert w.target == mod_one(u)


def test_witness_rejects_even_k():
    with pytest.raises(ValueError):
        gamma_omega_witness(2, DyadicLocal(1, 3), 2)


def test_projection_is_homomorphism():
    E = completion_model("Ehat", 3, 6)
    g = E.element(1, 5, 7, 3)
    h = E.element(-2, 9, 1, 11)
    G, pg = project_ehat_to_ghat(E, g)
    _, ph = project_ehat_to_ghat(E, h)
    _, pgh = project_ehat_to_ghat(E, g * h)
    assert pgh == pg * ph
    _, pc = project_ehat_to_ghat(E, E.c)
    assert pc.is_identity()
