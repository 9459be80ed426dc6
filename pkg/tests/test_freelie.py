import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcomplete.freelie import (
    ClassBoundError,
    FreeWord,
    LiePoly,
    MagnusSeries,
    bracket_expression,
    commutator,
    graded_image,
    lcs_weight,
    lie_coordinates,
    lie_functor_matrix,
    lyndon_words,
    magnus_embed,
    witt_rank,
)
from nilcomplete.intlinalg import IntMatrix

X, Y = FreeWord.gen(0), FreeWord.gen(1)


def words(r=2, max_len=8):
    letter = st.tuples(st.integers(0, r - 1), st.sampled_from((1, -1)))
    return st.lists(letter, max_size=max_len).map(lambda ls: FreeWord(tuple(ls)))


def test_free_reduction_and_parse():
    assert FreeWord.parse("xX") == FreeWord(())
    assert str(FreeWord.parse("xxY")) == "xxY"
    assert (X * Y).inverse() == Y.inverse() * X.inverse()


def test_magnus_examples():
    assert magnus_embed(X, 1, 3).coeffs == {(): 1, (0,): 1}
    assert magnus_embed(X.inverse(), 1, 3).coeffs == {(): 1, (0,): -1, (0, 0): 1, (0, 0, 0): -1}
    assert magnus_embed(commutator(X, Y), 2, 2).coeffs == {(): 1, (0, 1): 1, (1, 0): -1}


@settings(max_examples=100)
@given(words(3), words(3), st.integers(1, 6))
def test_magnus_multiplicative(u, v, C):
    assert magnus_embed(u * v, 3, C) == magnus_embed(u, 3, C) * magnus_embed(v, 3, C)


@given(words(2), st.integers(1, 5))
def test_magnus_inverse(u, C):
    assert magnus_embed(u, 2, C) * magnus_embed(u.inverse(), 2, C) == MagnusSeries.one(2, C)


def test_lcs_weight_examples():
    assert lcs_weight(commutator(X, Y), 5) == 2
    assert lcs_weight(commutator(X, Y, Y), 5) == 3
    assert lcs_weight(X * X * Y, 5) == 1
    assert lcs_weight(commutator(X, Y, Y, Y), 3) is None


def test_class_bound():
    with pytest.raises(ClassBoundError):
        magnus_embed(X, 1, 9)


@pytest.mark.parametrize("r, n, expected", [(2, 1, 2), (2, 3, 2), (2, 5, 6), (3, 4, 18)])
def test_witt_rank_examples(r, n, expected):
    assert witt_rank(r, n) == expected


@pytest.mark.parametrize("r", [1, 2, 3])
def test_lyndon_counts_match_witt(r):
    for n in range(1, 9 if r < 3 else 7):
        assert len(lyndon_words(r, n)) == witt_rank(r, n)


def test_graded_image_worked_values():
    k = 3
    x_inv = FreeWord.gen(0, -1)
    yk = FreeWord.from_powers((0, k), (1, -1))
    xyx = lie_coordinates(bracket_expression((0, 1, 0)), 2, 3)
    xyy = lie_coordinates(bracket_expression((0, 1, 1)), 2, 3)

    def combo(p, q):
        return [p * a + q * b for a, b in zip(xyx.vector(), xyy.vector())]

    assert graded_image(commutator(x_inv, yk, x_inv), 3, 2).vector() == combo(-1, 0)
    assert graded_image(commutator(x_inv, yk, yk), 3, 2).vector() == combo(k, -1)


def test_graded_image_of_basis_bracket():
    g = graded_image(commutator(X, Y, X), 3, 2)
    assert g.expand() == bracket_expression((0, 1, 0))


def test_graded_image_rejects_shallow_words():
    with pytest.raises(ValueError):
        graded_image(X, 3, 2)


def test_liepoly_json():
    p = lie_coordinates(bracket_expression((0, 1, 1)), 2, 3)
    assert LiePoly.from_json(2, 3, p.to_json()) == p


BASIS3 = [(0, 1, 0), (0, 1, 1)]


@pytest.mark.parametrize("k", [1, 3, -5, 7])
def test_functor_on_a_k(k):
    a = IntMatrix([[-1, k], [0, -1]])
    assert lie_functor_matrix(a, 3, basis=BASIS3) == a


@pytest.mark.parametrize("p, q", [(2, 3), (-1, 5), (0, 4)])
def test_functor_on_diagonal(p, q):
    assert lie_functor_matrix(IntMatrix.diag(p, q), 3, basis=BASIS3) == IntMatrix.diag(p * p * q, p * q * q)


@pytest.mark.parametrize("n", range(1, 6))
def test_functor_identity(n):
    L = lie_functor_matrix(IntMatrix.identity(2), n)
    assert L == IntMatrix.identity(witt_rank(2, n))


entry = st.integers(-3, 3)
mat2 = st.lists(entry, min_size=4, max_size=4).map(lambda e: IntMatrix([e[:2], e[2:]]))


@settings(max_examples=60)
@given(mat2, mat2, st.integers(1, 4))
def test_functoriality(A, B, n):
    assert lie_functor_matrix(A @ B, n) == lie_functor_matrix(A, n) @ lie_functor_matrix(B, n)
