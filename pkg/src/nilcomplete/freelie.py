"""Free groups through the Magnus embedding, and the free Lie ring in the Lyndon basis.

Letters are integers ``0 .. r-1`` (printed ``x, y, z, ...``). A free group
element maps to the truncated power series ring ``Z<<X_0, ..., X_{r-1}>>``
via ``x_i -> 1 + X_i``. Group commutators follow ``[u, v] = u^-1 v^-1 u v``
and iterated commutators are left normed, ``[a, b, c] = [[a, b], c]``.
The lowest-degree part of the image of ``w`` in ``gamma_n F`` is a Lie
polynomial, and ``[u, v]`` maps to ``UV - VU`` there.

Series are stored densely as ``{monomial: coefficient}``; a monomial is a
tuple of letters. With ``r`` letters and class ``C`` there are up to
``(r**(C+1) - 1) / (r - 1)`` monomials, so ``C`` is capped at 8.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .intlinalg import IntMatrix

MAX_CLASS = 8
LETTERS = "xyzwvutsrqponmlkjihgfedcba"

Monomial = tuple[int, ...]
Poly = dict  # Monomial -> int, homogeneous or not


class ClassBoundError(ValueError):
    """Raised when a computation would exceed the supported nilpotency class."""


def _check_class(C: int):
    if not 0 <= C <= MAX_CLASS:
        raise ClassBoundError(f"truncation class {C} outside 0..{MAX_CLASS}")


# ---------------------------------------------------------------------------
# Free words

@dataclass(frozen=True)
class FreeWord:
    """Freely reduced word, stored as a tuple of ``(generator, +1 | -1)`` letters."""

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        out: list[tuple[int, int]] = []
        for g, e in self.letters:
            if e not in (1, -1) or g < 0:
                raise ValueError(f"bad letter {(g, e)!r}")
            if out and out[-1] == (g, -e):
                out.pop()
            else:
                out.append((int(g), int(e)))
        object.__setattr__(self, "letters", tuple(out))

    @classmethod
    def gen(cls, i: int, power: int = 1) -> "FreeWord":
        e = 1 if power >= 0 else -1
        return cls(((i, e),) * abs(power))

    @classmethod
    def from_powers(cls, *pairs: tuple[int, int]) -> "FreeWord":
        """``from_powers((0, 3), (1, -1))`` is ``x^3 y^-1``."""
        w = cls()
        for g, p in pairs:
            w = w * cls.gen(g, p)
        return w

    @classmethod
    def parse(cls, text: str) -> "FreeWord":
        """Parse e.g. ``"x x Y"`` or ``"xxY"``: lowercase letters are generators, uppercase inverses."""
        letters = []
        for ch in text.replace(" ", ""):
            i = LETTERS.index(ch.lower())
            letters.append((i, 1 if ch.islower() else -1))
        return cls(tuple(letters))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "FreeWord":
        base = self if n >= 0 else self.inverse()
        out = FreeWord()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __len__(self):
        return len(self.letters)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def exponent_sums(self, r: int) -> list[int]:
        sums = [0] * r
        for g, e in self.letters:
            sums[g] += e
        return sums

    def __str__(self):
        if not self.letters:
            return "1"
        return "".join(LETTERS[g] if e > 0 else LETTERS[g].upper() for g, e in self.letters)


def commutator(*words: FreeWord) -> FreeWord:
    """Left-normed commutator ``[w1, w2, ..., wn]`` with ``[u, v] = u^-1 v^-1 u v``."""
    if not words:
        raise ValueError("empty commutator")
    acc = words[0]
    for w in words[1:]:
        acc = acc.inverse() * w.inverse() * acc * w
    return acc


# ---------------------------------------------------------------------------
# Truncated power series

def _poly_mul(a: Poly, b: Poly, C: int) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        room = C - len(ma)
        for mb, cb in b.items():
            if len(mb) <= room:
                key = ma + mb
                out[key] = out.get(key, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


class MagnusSeries:
    """Element of ``Z<<X_0..X_{r-1}>>`` truncated above degree ``cls``."""

    __slots__ = ("rank", "cls", "coeffs")

    def __init__(self, rank: int, cls: int, coeffs: Poly | None = None):
        _check_class(cls)
        self.rank = rank
        self.cls = cls
        self.coeffs = {m: c for m, c in (coeffs or {}).items() if c and len(m) <= cls}

    @classmethod
    def one(cls, rank: int, C: int) -> "MagnusSeries":
        return cls(rank, C, {(): 1})

    def __mul__(self, other: "MagnusSeries") -> "MagnusSeries":
        if (self.rank, self.cls) != (other.rank, other.cls):
            raise ValueError("series live in different rings")
        return MagnusSeries(self.rank, self.cls, _poly_mul(self.coeffs, other.coeffs, self.cls))

    def mul_letter(self, g: int, e: int) -> "MagnusSeries":
        """Right multiplication by ``1 + X_g`` (``e = 1``) or its inverse ``sum (-X_g)^j``."""
        C = self.cls
        out = dict(self.coeffs)
        if e == 1:
            for m, c in self.coeffs.items():
                if len(m) < C:
                    key = m + (g,)
                    out[key] = out.get(key, 0) + c
        else:
            for m, c in self.coeffs.items():
                sign, tail = -1, (g,)
                while len(m) + len(tail) <= C:
                    key = m + tail
                    out[key] = out.get(key, 0) + sign * c
                    sign, tail = -sign, tail + (g,)
        return MagnusSeries(self.rank, C, out)

    def component(self, degree: int) -> Poly:
        return {m: c for m, c in self.coeffs.items() if len(m) == degree}

    def lowest_degree(self) -> int | None:
        """Smallest positive degree carrying a nonzero coefficient."""
        degs = [len(m) for m, c in self.coeffs.items() if m and c]
        return min(degs) if degs else None

    def __eq__(self, other):
        if not isinstance(other, MagnusSeries):
            return NotImplemented
        return (self.rank, self.cls, self.coeffs) == (other.rank, other.cls, other.coeffs)

    def __repr__(self):
        terms = sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))
        body = " + ".join(f"{c}*{word_str(m) or '1'}" for m, c in terms)
        return f"MagnusSeries(r={self.rank}, C={self.cls}: {body})"


def magnus_embed(w: FreeWord, r: int, C: int) -> MagnusSeries:
    if w.max_generator() >= r:
        raise ValueError(f"word {w} uses a generator outside rank {r}")
    s = MagnusSeries.one(r, C)
    for g, e in w.letters:
        s = s.mul_letter(g, e)
    return s


def lcs_weight(w: FreeWord, C: int, r: int | None = None) -> int | None:
    """Lower-central-series weight of ``w`` detected mod ``gamma_{C+1}``.

    Returns ``None`` when ``w`` lies in ``gamma_{C+1}`` (weight ``>= C+1``),
    which includes the identity.
    """
    r = max(w.max_generator() + 1, 1) if r is None else r
    return magnus_embed(w, r, C).lowest_degree()


# ---------------------------------------------------------------------------
# Lyndon words and the free Lie ring

def word_str(m: Monomial) -> str:
    return "".join(LETTERS[i] for i in m)


def parse_word(text: str) -> Monomial:
    return tuple(LETTERS.index(ch) for ch in text)


@lru_cache(maxsize=None)
def lyndon_words(r: int, n: int) -> tuple[Monomial, ...]:
    """Lyndon words of length exactly ``n`` over ``0 < 1 < ... < r-1``, in lex order (Duval)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            out.append(tuple(w))
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == r - 1:
            w.pop()
    return tuple(out)


def is_lyndon(m: Monomial) -> bool:
    return bool(m) and all(m < m[i:] + m[:i] for i in range(1, len(m))) and all(
        m < m[i:] for i in range(1, len(m))
    )


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def witt_rank(r: int, n: int) -> int:
    """Rank of the degree-``n`` part of the free Lie ring on ``r`` generators."""
    if r < 1 or n < 1:
        raise ValueError("witt_rank needs r >= 1 and n >= 1")
    total = sum(_mobius(d) * r ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def standard_factorization(w: Monomial) -> tuple[Monomial, Monomial]:
    """Split a Lyndon word as ``u v`` with ``v`` its longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{word_str(w)} has no standard factorization")


def bracket(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            out[ma + mb] = out.get(ma + mb, 0) + ca * cb
            out[mb + ma] = out.get(mb + ma, 0) - ca * cb
    return {m: c for m, c in out.items() if c}


def _add(a: Poly, b: Poly, scale: int = 1) -> Poly:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + scale * c
    return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=None)
def _lyndon_poly_cached(w: Monomial) -> tuple[tuple[Monomial, int], ...]:
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    return tuple(sorted(bracket(lyndon_polynomial(u), lyndon_polynomial(v)).items()))


def lyndon_polynomial(w: Monomial) -> Poly:
    """Expansion of the standard bracketing of the Lyndon word ``w``."""
    return dict(_lyndon_poly_cached(tuple(w)))


def bracket_expression(expr) -> Poly:
    """Expand a bracket expression: an int is a letter, a pair ``(a, b)`` is ``[a, b]``.

    Longer tuples are left normed, so ``(0, 1, 0)`` is ``[[x, y], x]``.
    """
    if isinstance(expr, int):
        return {(expr,): 1}
    parts = [bracket_expression(e) for e in expr]
    acc = parts[0]
    for p in parts[1:]:
        acc = bracket(acc, p)
    return acc


class NotALieElement(ValueError):
    pass


@dataclass(frozen=True)
class LiePoly:
    """Homogeneous element of the free Lie ring, in Lyndon-basis coordinates."""

    rank: int
    degree: int
    coeffs: tuple[tuple[Monomial, int], ...]

    @classmethod
    def from_dict(cls, rank: int, degree: int, coeffs: dict) -> "LiePoly":
        return cls(rank, degree, tuple(sorted((tuple(m), c) for m, c in coeffs.items() if c)))

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def vector(self) -> list[int]:
        d = self.as_dict()
        return [d.get(w, 0) for w in lyndon_words(self.rank, self.degree)]

    def expand(self) -> Poly:
        out: Poly = {}
        for w, c in self.coeffs:
            out = _add(out, lyndon_polynomial(w), c)
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_json(self) -> dict:
        return {word_str(w): str(c) for w, c in self.coeffs}

    @classmethod
    def from_json(cls, rank: int, degree: int, data: dict) -> "LiePoly":
        return cls.from_dict(rank, degree, {parse_word(k): int(v) for k, v in data.items()})


def lie_coordinates(poly: Poly, r: int, n: int) -> LiePoly:
    """Rewrite a homogeneous degree-``n`` Lie polynomial in the Lyndon basis.

    The standard bracketing of a Lyndon word ``w`` equals ``w`` plus
    lexicographically larger words, so peeling off the smallest surviving
    word (which must then be Lyndon) is a triangular solve. Anything left
    over means ``poly`` was not a Lie element.
    """
    rest = {m: c for m, c in poly.items() if c}
    if any(len(m) != n for m in rest):
        raise ValueError("polynomial is not homogeneous of the requested degree")
    coeffs: dict[Monomial, int] = {}
    while rest:
        w = min(rest)
        if not is_lyndon(w):
            raise NotALieElement(f"leading word {word_str(w)} is not Lyndon")
        c = rest[w]
        coeffs[w] = c
        rest = _add(rest, lyndon_polynomial(w), -c)
    return LiePoly.from_dict(r, n, coeffs)


def graded_image(w: FreeWord, n: int, r: int) -> LiePoly:
    """Image of ``w`` in ``gamma_n F / gamma_{n+1} F``, as a Lyndon-basis Lie polynomial."""
    _check_class(n)
    series = magnus_embed(w, r, n)
    low = series.lowest_degree()
    if low is not None and low < n:
        raise ValueError(f"{w} has weight {low} < {n}, so it is not in gamma_{n}")
    return lie_coordinates(series.component(n), r, n)


# ---------------------------------------------------------------------------
# Lie functor on integer matrices

def _substitute(poly: Poly, images: list[Poly]) -> Poly:
    """Replace each letter by a linear form and expand multiplicatively."""
    out: Poly = {}
    for m, c in poly.items():
        term: Poly = {(): c}
        for letter in m:
            nxt: Poly = {}
            for tm, tc in term.items():
                for im, ic in images[letter].items():
                    key = tm + im
                    nxt[key] = nxt.get(key, 0) + tc * ic
            term = nxt
        out = _add(out, term)
    return out


def _basis_polys(r: int, n: int, basis) -> list[Poly]:
    if basis is None:
        return [lyndon_polynomial(w) for w in lyndon_words(r, n)]
    polys = [bracket_expression(e) for e in basis]
    if len(polys) != witt_rank(r, n):
        raise ValueError("basis has the wrong size")
    return polys


def _change_of_basis(r: int, n: int, polys: list[Poly]) -> IntMatrix:
    """Columns: Lyndon coordinates of the given basis elements."""
    cols = [lie_coordinates(p, r, n).vector() for p in polys]
    return IntMatrix.from_columns(cols, witt_rank(r, n))


def lie_functor_matrix(A: IntMatrix, n: int, basis=None) -> IntMatrix:
    """Matrix of ``L^n(A)`` on the degree-``n`` free Lie component.

    ``A`` acts on column vectors: generator ``j`` maps to
    ``sum_i A[i, j] * generator_i``. The default basis is the Lyndon basis
    (standard bracketing); ``basis`` may instead list bracket expressions,
    e.g. ``[(0, 1, 0), (0, 1, 1)]`` for ``([x,y,x], [x,y,y])``, and must then
    be a Z-basis.
    """
    r = A.nrows
    if A.ncols != r:
        raise ValueError("lie_functor_matrix needs a square matrix")
    images = [{(i,): A[i, j] for i in range(r) if A[i, j]} for j in range(r)]
    polys = _basis_polys(r, n, basis)
    lyndon_cols = [lie_coordinates(_substitute(p, images), r, n).vector() for p in polys]
    L = IntMatrix.from_columns(lyndon_cols, witt_rank(r, n))
    if basis is None:
        return L
    P = _change_of_basis(r, n, polys)
    if abs(P.det()) != 1:
        raise ValueError("supplied elements do not form a Z-basis")
    return P.inverse() @ L


def left_normed_words(r: int, n: int) -> list[tuple[int, ...]]:
    """All letter sequences of length ``n``, read as left-normed brackets."""
    return list(product(range(r), repeat=n))


def basic_commutator_word(seq: Sequence[int]) -> FreeWord:
    return commutator(*(FreeWord.gen(i) for i in seq))


def lie_span_rank(polys: Iterable[LiePoly]) -> int:
    from .intlinalg import rank

    vecs = [p.vector() for p in polys]
    if not vecs:
        return 0
    return rank(IntMatrix(vecs))
