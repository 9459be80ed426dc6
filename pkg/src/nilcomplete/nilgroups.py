"""Coordinate arithmetic in the class-2 group N and its coefficient extensions.

An element ``x^s y^t [x,y]^u`` of ``N (x) R`` is a :class:`HeisenbergElement`
``(s, t, u)`` multiplied by

    (s, t, u)(s', t', u') = (s + s', t + t', u + u' - t s').

The coefficient ring is described by a :class:`Domain`:

=============  ==========================  =====================================
tag            base coordinates ``s, t``   central coordinate ``u``
=============  ==========================  =====================================
``integer``    ``int``                     ``int``
``mod2^m``     ``int`` mod ``2**(m+1)``    ``int`` mod ``2**m``
``dyadic``     ``DyadicLocal``             ``DyadicLocal``
``twoadic``    ``TruncatedTwoAdic(m+1)``   ``TruncatedTwoAdic(m)``
``nscript``    ``DyadicLocal``             ``DyadicModOne``
=============  ==========================  =====================================

The two truncated domains are the quotients of ``N`` by
``{s, t in 2^{m+1} Z, u in 2^m Z}``, on which both the product and ``a'_k``
are well defined. ``nscript`` is the quotient of ``N (x) Z_(2)`` by the
integer powers of ``[x, y]``.

Semidirect products ``Z x| H`` use the right action

    (a^n h)(a^n' h') = a^(n+n') phi^n'(h) h',

so ``h^a = a^-1 h a = phi(h)``; with ``phi = a'_k`` this gives ``x^a = x^-1``.
Commutators are ``[g, h] = g^-1 h^-1 g h``, left normed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Integral
from typing import Any, Callable, Iterable, Sequence

from .intlinalg import IntMatrix, Lattice
from .local_arith import DyadicLocal, DyadicModOne, TruncatedTwoAdic, mod_one


class DomainMismatch(TypeError):
    pass


# ---------------------------------------------------------------------------
# coefficient domains

def _tri(v):
    """``v (v - 1) / 2`` computed exactly."""
    if isinstance(v, Integral):
        v = int(v)
        return v * (v - 1) // 2
    if isinstance(v, DyadicLocal):
        return (v * (v - 1)).half()
    raise TypeError(f"cannot form v(v-1)/2 for {v!r}")


@dataclass(frozen=True)
class Domain:
    tag: str
    precision: int | None = None

    def __post_init__(self):
        if self.tag not in ("integer", "mod2^m", "dyadic", "twoadic", "nscript"):
            raise ValueError(f"unknown domain {self.tag!r}")
        truncated = self.tag in ("mod2^m", "twoadic")
        if truncated != (self.precision is not None):
            raise ValueError("precision is required exactly for truncated domains")
        if truncated and self.precision < 1:
            raise ValueError("precision must be positive")

    @property
    def exact(self) -> bool:
        return self.precision is None

    @property
    def base_modulus(self) -> int | None:
        return None if self.precision is None else 1 << (self.precision + 1)

    @property
    def center_modulus(self) -> int | None:
        return None if self.precision is None else 1 << self.precision

    def base(self, v):
        tag = self.tag
        if tag == "integer":
            if not isinstance(v, Integral):
                raise DomainMismatch(f"{v!r} is not an integer")
            return int(v)
        if tag == "mod2^m":
            if isinstance(v, TruncatedTwoAdic):
                v = v.residue
            if isinstance(v, DyadicLocal):
                v = TruncatedTwoAdic(v, self.precision + 1).residue
            return int(v) % self.base_modulus
        if tag == "twoadic":
            if isinstance(v, TruncatedTwoAdic):
                if v.precision < self.precision + 1:
                    raise DomainMismatch("not enough precision for a base coordinate")
                return v.with_precision(self.precision + 1)
            return TruncatedTwoAdic(v, self.precision + 1)
        return DyadicLocal.coerce(v)

    def center(self, v):
        tag = self.tag
        if tag == "integer":
            if not isinstance(v, Integral):
                raise DomainMismatch(f"{v!r} is not an integer")
            return int(v)
        if tag == "mod2^m":
            if isinstance(v, TruncatedTwoAdic):
                v = v.residue
            if isinstance(v, DyadicLocal):
                v = TruncatedTwoAdic(v, self.precision).residue
            return int(v) % self.center_modulus
        if tag == "twoadic":
            if isinstance(v, TruncatedTwoAdic):
                return v.with_precision(self.precision)
            return TruncatedTwoAdic(v, self.precision)
        if tag == "nscript":
            return mod_one(v.value if isinstance(v, DyadicModOne) else v)
        return DyadicLocal.coerce(v)

    def lift(self, v):
        """Exact representative of a base coordinate (an int or a ``DyadicLocal``)."""
        if isinstance(v, TruncatedTwoAdic):
            return v.residue
        return v

    def zero(self):
        return self.base(0), self.center(0)

    def __str__(self):
        return self.tag if self.precision is None else f"{self.tag}({self.precision})"


INTEGERS = Domain("integer")
DYADIC = Domain("dyadic")
NSCRIPT = Domain("nscript")


def mod_domain(m: int) -> Domain:
    return Domain("mod2^m", m)


def twoadic_domain(m: int) -> Domain:
    return Domain("twoadic", m)


def _scalar_json(v):
    if isinstance(v, (DyadicLocal, TruncatedTwoAdic, DyadicModOne)):
        return v.to_json()
    return str(v)


def _scalar_from_json(data, domain: Domain, central: bool):
    if isinstance(data, str):
        v = int(data)
    elif "residue" in data:
        v = TruncatedTwoAdic.from_json(data)
    else:
        v = DyadicLocal.from_json(data)
    return domain.center(v) if central else domain.base(v)


# ---------------------------------------------------------------------------
# Heisenberg elements

@dataclass(frozen=True)
class HeisenbergElement:
    s: Any
    t: Any
    u: Any
    domain: Domain = INTEGERS

    def __post_init__(self):
        d = self.domain
        object.__setattr__(self, "s", d.base(self.s))
        object.__setattr__(self, "t", d.base(self.t))
        object.__setattr__(self, "u", d.center(self.u))

    @classmethod
    def identity(cls, domain: Domain = INTEGERS) -> "HeisenbergElement":
        return cls(0, 0, 0, domain)

    @classmethod
    def x(cls, domain: Domain = INTEGERS, power=1) -> "HeisenbergElement":
        return cls(power, 0, 0, domain)

    @classmethod
    def y(cls, domain: Domain = INTEGERS, power=1) -> "HeisenbergElement":
        return cls(0, power, 0, domain)

    @classmethod
    def c(cls, domain: Domain = INTEGERS, power=1) -> "HeisenbergElement":
        return cls(0, 0, power, domain)

    def __mul__(self, other):
        if not isinstance(other, HeisenbergElement):
            return NotImplemented
        return heis_mul(self, other)

    def __pow__(self, w):
        return heis_power(self, w)

    def inverse(self) -> "HeisenbergElement":
        return heis_inv(self)

    def is_identity(self) -> bool:
        return self == HeisenbergElement.identity(self.domain)

    def is_central(self) -> bool:
        zero = self.domain.base(0)
        return self.s == zero and self.t == zero

    def to_json(self) -> dict:
        return {
            "x": _scalar_json(self.s),
            "y": _scalar_json(self.t),
            "c": _scalar_json(self.u),
            "domain": self.domain.tag,
            "precision": self.domain.precision,
        }

    @classmethod
    def from_json(cls, data: dict) -> "HeisenbergElement":
        d = Domain(data["domain"], data.get("precision"))
        return cls(
            _scalar_from_json(data["x"], d, False),
            _scalar_from_json(data["y"], d, False),
            _scalar_from_json(data["c"], d, True),
            d,
        )


def _same_domain(g: HeisenbergElement, h: HeisenbergElement) -> Domain:
    if g.domain != h.domain:
        raise DomainMismatch(f"{g.domain} vs {h.domain}")
    return g.domain


def heis_mul(g: HeisenbergElement, h: HeisenbergElement) -> HeisenbergElement:
    d = _same_domain(g, h)
    return HeisenbergElement(g.s + h.s, g.t + h.t, d.center(g.u + h.u - g.t * h.s), d)


def heis_inv(g: HeisenbergElement) -> HeisenbergElement:
    d = g.domain
    return HeisenbergElement(-g.s, -g.t, d.center(-g.u - g.t * g.s), d)


def heis_commutator(g: HeisenbergElement, h: HeisenbergElement) -> HeisenbergElement:
    """``[g, h] = g^-1 h^-1 g h``; in coordinates ``(0, 0, s t' - t s')``."""
    return heis_inv(g) * heis_inv(h) * g * h


def heis_power(g: HeisenbergElement, w) -> HeisenbergElement:
    """``g**w = (w s, w t, w u - t s w (w-1)/2)``.

    ``w`` may be any integer; in the ``dyadic`` domain it may also be a
    ``DyadicLocal`` (``w(w-1)/2`` is then still 2-integral).
    """
    d = g.domain
    if isinstance(w, DyadicLocal) and d.tag not in ("dyadic", "nscript"):
        raise DomainMismatch("non-integer exponents need an exact 2-local domain")
    if d.tag == "nscript" and not isinstance(w, Integral):
        # w * u is not defined on Z_(2)/Z unless u = 0
        if not g.u.is_zero():
            raise DomainMismatch("non-integer power of an element with nonzero central part")
        return HeisenbergElement(g.s * w, g.t * w, d.center(-(g.t * g.s) * _tri(w)), d)
    u = g.u * w if d.tag != "twoadic" else g.u * int(w)
    return HeisenbergElement(w * g.s, w * g.t, d.center(u - g.t * g.s * _tri(w)), d)


def cocycle(g: tuple, h: tuple):
    """The 2-cocycle ``alpha((s, t), (s', t')) = -t s'`` defining ``N (x) R``."""
    return -g[1] * h[0]


def cocycle_violations(points: Iterable[tuple]) -> list[tuple]:
    """Triples violating ``alpha(g,h) + alpha(g+h,k) == alpha(h,k) + alpha(g,h+k)``."""
    pts = list(points)
    bad = []
    for g in pts:
        for h in pts:
            gh = (g[0] + h[0], g[1] + h[1])
            for k in pts:
                hk = (h[0] + k[0], h[1] + k[1])
                if cocycle(g, h) + cocycle(gh, k) != cocycle(h, k) + cocycle(g, hk):
                    bad.append((g, h, k))
    return bad


def cocycle_check(domain: Domain = INTEGERS, sample_bound: int = 3, samples: int = 200, seed: int = 0) -> bool:
    """Check the 2-cocycle identity exhaustively on a box (integers) or on random samples."""
    from itertools import product
    import random

    if domain.tag == "integer":
        rng = range(-sample_bound, sample_bound + 1)
        return not cocycle_violations(list(product(rng, rng)))
    gen = random.Random(seed)
    pts = [(_random_scalar(gen, domain), _random_scalar(gen, domain)) for _ in range(samples)]
    zero = domain.base(0)
    for i in range(samples):
        g, h, k = pts[i], pts[(i * 7 + 1) % samples], pts[(i * 13 + 5) % samples]
        gh = (g[0] + h[0], g[1] + h[1])
        hk = (h[0] + k[0], h[1] + k[1])
        lhs = domain.center(cocycle(g, h) + cocycle(gh, k) + zero)
        rhs = domain.center(cocycle(h, k) + cocycle(g, hk) + zero)
        if lhs != rhs:
            return False
    return True


def _random_scalar(gen, domain: Domain, bound: int = 50):
    if domain.tag in ("dyadic", "nscript"):
        return DyadicLocal(gen.randint(-bound, bound), 2 * gen.randint(0, bound) + 1)
    if domain.tag in ("mod2^m", "twoadic"):
        return domain.base(gen.randrange(domain.base_modulus))
    return gen.randint(-bound, bound)


def random_element(gen, domain: Domain, bound: int = 50) -> HeisenbergElement:
    return HeisenbergElement(
        _random_scalar(gen, domain, bound),
        _random_scalar(gen, domain, bound),
        _random_scalar(gen, domain, bound),
        domain,
    )


# ---------------------------------------------------------------------------
# the automorphisms a_k and a'_k

def _require_odd(k: int, name: str = "k"):
    if int(k) % 2 == 0:
        raise ValueError(f"{name} must be odd, got {k}")


def a_matrix(k: int) -> IntMatrix:
    """``a_k = [[-1, k], [0, -1]]``."""
    return IntMatrix([[-1, k], [0, -1]])


def b_matrix(k: int) -> IntMatrix:
    """``b_k = a_k - 1``."""
    return IntMatrix([[-2, k], [0, -2]])


def ak_prime_apply(k: int, g: HeisenbergElement) -> HeisenbergElement:
    """``a'_k(x^s y^t [x,y]^u) = x^(-s+kt) y^(-t) [x,y]^(u + k t(t-1)/2)``."""
    _require_odd(k)
    d = g.domain
    return HeisenbergElement(-g.s + k * g.t, -g.t, d.center(g.u + k * _tri_center_raw(g.t, d)), d)


def _tri_center_raw(t, d: Domain):
    """``t(t-1)/2`` for a base coordinate ``t``.

    Truncated base coordinates are known mod ``2**(m+1)``, which pins
    ``t(t-1)/2`` down mod ``2**m``.
    """
    if d.tag in ("mod2^m", "twoadic"):
        return d.center(_tri(d.lift(t)))
    return _tri(t)


def ak_prime_inverse(k: int, g: HeisenbergElement) -> HeisenbergElement:
    """Inverse of :func:`ak_prime_apply`."""
    _require_odd(k)
    d = g.domain
    t = -g.t
    s = k * t - g.s
    t = d.base(t)
    return HeisenbergElement(s, t, d.center(g.u - k * _tri_center_raw(t, d)), d)


# ---------------------------------------------------------------------------
# fibers and semidirect products

class Fiber:
    """A group ``H`` with an automorphism ``phi``; the fiber of ``Z x|_phi H``."""

    name = "fiber"

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def identity(self):
        raise NotImplementedError

    def phi(self, g):
        raise NotImplementedError

    def phi_inv(self, g):
        raise NotImplementedError

    def phi_power(self, g, n: int):
        f = self.phi if n >= 0 else self.phi_inv
        for _ in range(abs(n)):
            g = f(g)
        return g


class VectorFiber(Fiber):
    """``Z^r`` (or ``(Z/modulus)^r``) acted on by an invertible integer matrix."""

    def __init__(self, A: IntMatrix, modulus: int | None = None, name: str = "Z^r"):
        if A.nrows != A.ncols:
            raise ValueError("structure matrix must be square")
        if abs(A.det()) != 1 and modulus is None:
            raise ValueError("structure matrix must be invertible over the integers")
        self.A = A
        self.A_inv = A.inverse() if abs(A.det()) == 1 else _inverse_mod(A, modulus)
        self.modulus = modulus
        self.rank = A.nrows
        self.name = name

    def _norm(self, v):
        v = tuple(int(a) for a in v)
        return v if self.modulus is None else tuple(a % self.modulus for a in v)

    def element(self, *coords):
        return self._norm(coords)

    def mul(self, g, h):
        return self._norm(a + b for a, b in zip(g, h))

    def inv(self, g):
        return self._norm(-a for a in g)

    def identity(self):
        return (0,) * self.rank

    def phi(self, g):
        return self._norm(self.A @ g)

    def phi_inv(self, g):
        return self._norm(self.A_inv @ g)

    def __eq__(self, other):
        return isinstance(other, VectorFiber) and (self.A, self.modulus) == (other.A, other.modulus)

    def __hash__(self):
        return hash((self.A, self.modulus))


def _inverse_mod(A: IntMatrix, modulus: int) -> IntMatrix:
    if A.shape != (2, 2):
        raise ValueError("modular inverse implemented for 2x2 only")
    det_inv = pow(A.det() % modulus, -1, modulus)
    adj = IntMatrix([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]])
    return adj.scale(det_inv).mod(modulus)


class HeisenbergFiber(Fiber):
    """``N (x) R`` (per ``domain``) acted on by ``a'_k``."""

    def __init__(self, k: int, domain: Domain):
        _require_odd(k)
        self.k = k
        self.domain = domain
        self.name = f"N({domain})"

    def element(self, s=0, t=0, u=0):
        return HeisenbergElement(s, t, u, self.domain)

    def mul(self, g, h):
        return heis_mul(g, h)

    def inv(self, g):
        return heis_inv(g)

    def identity(self):
        return HeisenbergElement.identity(self.domain)

    def phi(self, g):
        return ak_prime_apply(self.k, g)

    def phi_inv(self, g):
        return ak_prime_inverse(self.k, g)

    def __eq__(self, other):
        return isinstance(other, HeisenbergFiber) and (self.k, self.domain) == (other.k, other.domain)

    def __hash__(self):
        return hash((self.k, self.domain))


@dataclass(frozen=True)
class SemidirectElement:
    """``a^n h`` in ``Z x|_phi H``."""

    n: int
    h: Any
    fiber: Fiber = field(compare=True, repr=False)

    def __mul__(self, other):
        if not isinstance(other, SemidirectElement):
            return NotImplemented
        return sd_mul(self, other)

    def inverse(self):
        return sd_inv(self)

    def __pow__(self, e: int):
        return sd_power(self, e)

    def is_identity(self) -> bool:
        return self.n == 0 and self.h == self.fiber.identity()

    def to_json(self) -> dict:
        h = self.h
        if isinstance(h, HeisenbergElement):
            out = h.to_json()
        else:
            out = {"fiber": [str(v) for v in h]}
        return {"a": self.n, **out}


def _same_fiber(g: SemidirectElement, h: SemidirectElement) -> Fiber:
    if g.fiber != h.fiber:
        raise DomainMismatch("elements of different semidirect products")
    return g.fiber


def sd_mul(g: SemidirectElement, h: SemidirectElement) -> SemidirectElement:
    """``(a^n h)(a^n' h') = a^(n+n') phi^n'(h) h'``, i.e. ``h a = a phi(h)``.

    This fixes the action convention for the whole package (``sd_inv`` is
    derived from it); with it ``[x, a] = x^-2`` in ``G_k``.
    """
    F = _same_fiber(g, h)
    return SemidirectElement(g.n + h.n, F.mul(F.phi_power(g.h, h.n), h.h), F)


def sd_inv(g: SemidirectElement) -> SemidirectElement:
    F = g.fiber
    return SemidirectElement(-g.n, F.inv(F.phi_power(g.h, -g.n)), F)


def sd_power(g: SemidirectElement, e: int) -> SemidirectElement:
    base = g if e >= 0 else sd_inv(g)
    out = SemidirectElement(0, g.fiber.identity(), g.fiber)
    e = abs(e)
    while e:
        if e & 1:
            out = sd_mul(out, base)
        base = sd_mul(base, base)
        e >>= 1
    return out


def sd_commutator(*elements: SemidirectElement) -> SemidirectElement:
    """Left-normed ``[g1, g2, ..., gn]`` with ``[g, h] = g^-1 h^-1 g h``."""
    acc = elements[0]
    for h in elements[1:]:
        acc = sd_mul(sd_mul(sd_inv(acc), sd_inv(h)), sd_mul(acc, h))
    return acc


@dataclass(frozen=True)
class SemidirectGroup:
    fiber: Fiber
    name: str = "Z x| H"

    def element(self, n: int = 0, h=None) -> SemidirectElement:
        return SemidirectElement(n, self.fiber.identity() if h is None else h, self.fiber)

    def identity(self) -> SemidirectElement:
        return self.element()

    @property
    def a(self) -> SemidirectElement:
        return self.element(1)

    def lift(self, h) -> SemidirectElement:
        return self.element(0, h)


def torus_bundle_group(k: int, modulus: int | None = None) -> SemidirectGroup:
    """``G_k = Z x|_{a_k} Z^2`` (or its fiber reduction mod ``modulus``)."""
    _require_odd(k)
    name = f"G_{k}" if modulus is None else f"Z x| (Z/{modulus})^2 [k={k}]"
    return SemidirectGroup(VectorFiber(a_matrix(k), modulus), name)


def heisenberg_extension(k: int, domain: Domain = INTEGERS) -> SemidirectGroup:
    """``Z x|_{a'_k} (N (x) R)``; ``E_k`` itself for the integer domain."""
    return SemidirectGroup(HeisenbergFiber(k, domain), f"E_{k}[{domain}]")


# ---------------------------------------------------------------------------
# lower central series of Z x|_A Z^s

def bk_power_closed_form(k: int, n: int) -> IntMatrix:
    """``b_k**n = [[(-2)^n, (-2)^(n-1) n k], [0, (-2)^n]]``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    _require_odd(k)
    return IntMatrix([[(-2) ** n, (-2) ** (n - 1) * n * k], [0, (-2) ** n]])


def lcs_semidirect_lattice(A: IntMatrix, n: int) -> Lattice:
    """Fiber lattice of ``gamma_{n+1}(Z x|_A Z^s)``, namely ``(A - 1)^n Z^s``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if A.nrows != A.ncols or abs(A.det()) != 1:
        raise ValueError("A must be invertible over the integers")
    b = A - IntMatrix.identity(A.nrows)
    return Lattice.column_span(b ** n)


def lcs_by_commutators(A: IntMatrix, n: int) -> Lattice:
    """Same lattice as :func:`lcs_semidirect_lattice`, by commutator saturation.

    ``gamma_{j+1}`` is the normal closure of commutators of generators of
    ``gamma_j`` with the group generators ``a, e_1, ..., e_s``.
    """
    s = A.nrows
    G = SemidirectGroup(VectorFiber(A))
    gens = [G.a] + [G.lift(tuple(int(i == j) for i in range(s))) for j in range(s)]
    current = list(gens)  # generators of gamma_1
    lattice = None
    for _ in range(n):
        vecs = []
        for g in current:
            for h in gens:
                c = sd_commutator(g, h)
                if c.n != 0:
                    raise AssertionError("commutator left the fiber")
                vecs.append(c.h)
        lattice = Lattice.from_generators(vecs, s)
        # normal closure under conjugation by a
        while True:
            grown = lattice + lattice.image(A) + lattice.image(A.inverse())
            if grown == lattice:
                break
            lattice = grown
        current = [G.lift(b) for b in lattice.basis]
    return lattice


def central_identity_check(k: int, n: int, m: int) -> bool:
    """``[x, a, ..., a, y] == [x, y]^((-2)^n)`` (``n`` copies of ``a``) in ``Z x| N(mod 2^m)``."""
    G = heisenberg_extension(k, mod_domain(m))
    F = G.fiber
    x, y = G.lift(F.element(1, 0, 0)), G.lift(F.element(0, 1, 0))
    lhs = sd_commutator(x, *([G.a] * n), y)
    return lhs == G.lift(F.element(0, 0, (-2) ** n))
