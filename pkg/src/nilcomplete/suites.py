"""Self-verification suites behind ``nilcomplete verify``.

Each suite returns a :class:`SuiteResult`; ``failures`` lists counterexamples
(empty on success). Sampling is seeded, so runs are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from . import _kernels
from .freelie import FreeWord, lie_functor_matrix, magnus_embed
from .intlinalg import IntMatrix, Lattice
from .invariants import gamma_omega_witness, h2_torus_extension
from .iso import brute_force_intertwiners, distinguish, solve_intertwiners, square_witnesses, zinf_obstruction
from .local_arith import DyadicLocal, TruncatedTwoAdic, hensel_sqrt, is_unit_square
from .nilgroups import (
    DYADIC,
    INTEGERS,
    NSCRIPT,
    HeisenbergElement,
    a_matrix,
    ak_prime_apply,
    ak_prime_inverse,
    b_matrix,
    bk_power_closed_form,
    central_identity_check,
    cocycle_check,
    heis_inv,
    mod_domain,
    random_element,
    twoadic_domain,
)

ODD_GRID = [k for k in range(-15, 16) if k % 2]


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, detail=None):
        self.checks += 1
        if not ok:
            self.failures.append(detail)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": [repr(f) for f in self.failures[:20]],
        }


def suite_central_identity(n: int = 10, m: int = 32, ks=(1, 3, 5, -7, 15)) -> SuiteResult:
    res = SuiteResult("central-identity")
    for k in ks:
        for j in range(0, n + 1):
            res.check(central_identity_check(k, j, m), (k, j, m))
    return res


def suite_cocycle(bound: int = 3) -> SuiteResult:
    res = SuiteResult("cocycle")
    for d in (INTEGERS, mod_domain(8), DYADIC, twoadic_domain(8)):
        res.check(cocycle_check(d, sample_bound=bound), str(d))
    return res


def _domains():
    return [INTEGERS, mod_domain(6), DYADIC, twoadic_domain(6), NSCRIPT]


def suite_heisenberg(samples: int = 200, seed: int = 1) -> SuiteResult:
    """Group axioms: exhaustive on a small integer box, random elsewhere."""
    res = SuiteResult("heisenberg")
    box = [HeisenbergElement(s, t, u) for s, t, u in product(range(-2, 3), repeat=3)]
    e = HeisenbergElement.identity()
    for g in box:
        res.check(g * e == g == e * g, ("identity", g))
        res.check((g * heis_inv(g)).is_identity() and (heis_inv(g) * g).is_identity(), ("inverse", g))
    for g, h, k in product(box[::3], box[::2], box[::5]):
        res.check((g * h) * k == g * (h * k), ("assoc", g, h, k))
    gen = random.Random(seed)
    for d in _domains():
        e = HeisenbergElement.identity(d)
        for _ in range(samples):
            g, h, k = (random_element(gen, d) for _ in range(3))
            res.check((g * h) * k == g * (h * k), ("assoc", d, g, h, k))
            res.check((g * heis_inv(g)).is_identity(), ("inverse", d, g))
            res.check(g * e == g, ("identity", d, g))
    return res


def suite_automorphism(samples: int = 100, seed: int = 2, ks=(1, 3, -5, 7)) -> SuiteResult:
    """``a'_k`` preserves products, is inverted by ``ak_prime_inverse``, fixes the center."""
    res = SuiteResult("automorphism")
    gen = random.Random(seed)
    for k in ks:
        for d in _domains():
            for _ in range(samples):
                g, h = random_element(gen, d), random_element(gen, d)
                res.check(ak_prime_apply(k, g * h) == ak_prime_apply(k, g) * ak_prime_apply(k, h), ("hom", k, d, g, h))
                res.check(ak_prime_inverse(k, ak_prime_apply(k, g)) == g, ("inv", k, d, g))
                res.check(ak_prime_apply(k, ak_prime_inverse(k, g)) == g, ("inv2", k, d, g))
                c = HeisenbergElement(0, 0, g.u, d)
                res.check(ak_prime_apply(k, c) == c, ("center", k, d, c))
        # the subgroup {s, t in 2^(n+1) Z, u in 2^n Z} is preserved
        for n in range(0, 6):
            for g in (
                HeisenbergElement(2 ** (n + 1), 0, 0),
                HeisenbergElement(0, 2 ** (n + 1), 0),
                HeisenbergElement(0, 0, 2**n),
            ):
                img = ak_prime_apply(k, g)
                ok = img.s % 2 ** (n + 1) == 0 and img.t % 2 ** (n + 1) == 0 and img.u % 2**n == 0
                res.check(ok, ("filtration", k, n, g))
    return res


def _random_word(gen, r: int, length: int) -> FreeWord:
    return FreeWord(tuple((gen.randrange(r), gen.choice((1, -1))) for _ in range(length)))


def suite_magnus(samples: int = 100, seed: int = 3) -> SuiteResult:
    res = SuiteResult("magnus")
    gen = random.Random(seed)
    for _ in range(samples):
        r = gen.randint(1, 3)
        C = gen.randint(1, 6)
        u, v = _random_word(gen, r, gen.randint(0, 8)), _random_word(gen, r, gen.randint(0, 8))
        res.check(magnus_embed(u * v, r, C) == magnus_embed(u, r, C) * magnus_embed(v, r, C), (str(u), str(v), r, C))
    return res


def suite_functoriality(samples: int = 60, seed: int = 4) -> SuiteResult:
    res = SuiteResult("functoriality")
    gen = random.Random(seed)
    for _ in range(samples):
        A = IntMatrix([[gen.randint(-4, 4) for _ in range(2)] for _ in range(2)])
        B = IntMatrix([[gen.randint(-4, 4) for _ in range(2)] for _ in range(2)])
        n = gen.randint(1, 4)
        res.check(lie_functor_matrix(A @ B, n) == lie_functor_matrix(A, n) @ lie_functor_matrix(B, n), (A, B, n))
    for n in range(1, 6):
        res.check(lie_functor_matrix(IntMatrix.identity(2), n) == IntMatrix.identity(len(lie_functor_matrix(IntMatrix.identity(2), n).rows())), n)
    return res


def suite_hensel(samples: int = 1000, seed: int = 5, exhaustive_bits: int = 12) -> SuiteResult:
    res = SuiteResult("hensel")
    gen = random.Random(seed)
    for _ in range(samples):
        m = gen.randint(3, 64)
        a = TruncatedTwoAdic(8 * gen.randrange(1 << m) + 1, m)
        x = hensel_sqrt(a)
        res.check(x * x == a and x.residue % 4 == 1, (a, x))
    for m in range(3, exhaustive_bits + 1):
        table = _kernels.unit_square_table(m)
        for r in range(1, 1 << m, 2):
            res.check(is_unit_square(TruncatedTwoAdic(r, m)) == bool(table[r]), (r, m))
    return res


def suite_h2(ks=ODD_GRID) -> SuiteResult:
    res = SuiteResult("h2")
    for k in ks:
        out = h2_torus_extension(k)
        res.check(out.group.torsion == (4,) and out.group.free_rank == 0, (k, str(out.group)))
        res.check(out.action == a_matrix(k), (k, out.action))
    return res


def suite_bk(n_max: int = 20, sandwich: int = 6, ks=(1, 3, 5, -7, 15)) -> SuiteResult:
    res = SuiteResult("bk-closed-form")
    for k in ks:
        b = b_matrix(k)
        for n in range(1, n_max + 1):
            res.check(bk_power_closed_form(k, n) == b**n, (k, n))
        for n in range(1, sandwich + 1):
            L = Lattice.column_span(b**n)
            res.check(Lattice.scaled(2 ** (n - 1), 2).contains(L), ("upper", k, n))
            # b^n adj(b^n) = 4^n, so 2^(2n) always works; 2^(n^2) only from n = 2 on
            res.check(L.contains(Lattice.scaled(4**n, 2)), ("lower", k, n))
            if n >= 2:
                res.check(L.contains(Lattice.scaled(2 ** (n * n), 2)), ("lower-n2", k, n))
    return res


def suite_grid(m: int = 16, ks=ODD_GRID) -> SuiteResult:
    res = SuiteResult("grid")
    for k in ks:
        for l in ks:
            rep = distinguish(k, l, m)
            res.check(rep.distinguished == ((k * l) % 8 in (3, 5)), (k, l))
            phi = rep.ghat_certificate
            res.check(a_matrix(l) @ phi == phi @ a_matrix(k), ("ghat", k, l))
    return res


def suite_intertwiners(pairs=((1, 1), (1, 3), (3, 5)), m: int = 4) -> SuiteResult:
    res = SuiteResult("intertwiners")
    for k, l in pairs:
        for sign in (1, -1):
            res.check(solve_intertwiners(k, l, sign, m).members() == brute_force_intertwiners(k, l, sign, m), (k, l, sign))
    return res


def suite_obstruction(m: int = 5, ks=ODD_GRID) -> SuiteResult:
    res = SuiteResult("obstruction")
    for k in ks:
        for l in ks:
            if zinf_obstruction(k, l).distinguished:
                roots = square_witnesses(k, l, m)
                res.check(not roots[1] and not roots[-1], (k, l, roots))
    return res


def suite_witnesses(n: int = 8, targets=((1, 3), (2, 5), (1, 7)), ks=(1, 3, -5)) -> SuiteResult:
    res = SuiteResult("witnesses")
    for k in ks:
        for num, den in targets:
            for depth in range(1, n + 1):
                w = gamma_omega_witness(k, DyadicLocal(num, den), depth)
                res.check(w.verify(), (k, num, den, depth))
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "central-identity": suite_central_identity,
    "cocycle": suite_cocycle,
    "heisenberg": suite_heisenberg,
    "automorphism": suite_automorphism,
    "magnus": suite_magnus,
    "functoriality": suite_functoriality,
    "hensel": suite_hensel,
    "h2": suite_h2,
    "bk-closed-form": suite_bk,
    "grid": suite_grid,
    "intertwiners": suite_intertwiners,
    "obstruction": suite_obstruction,
    "witnesses": suite_witnesses,
}


def run_suites(names, **options) -> list[SuiteResult]:
    out = []
    for name in names:
        fn = SUITES[name]
        kwargs = {}
        if "n" in options and options["n"] is not None and name in ("central-identity", "witnesses"):
            kwargs["n"] = options["n"]
        if "m" in options and options["m"] is not None and name in ("central-identity", "grid"):
            kwargs["m"] = options["m"]
        out.append(fn(**kwargs))
    return out
