"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` for just the summary.
"""

import random
import sys

import pytest

from nilcomplete import _kernels
from nilcomplete.freelie import FreeWord, bracket_expression, commutator, graded_image, lie_coordinates, witt_rank
from nilcomplete.intlinalg import Lattice
from nilcomplete.invariants import (
    baer_free_nilpotent,
    baer_rank_by_commutators,
    baer_transition_trivial,
    gamma_omega_witness,
    h2_torus_extension,
)
from nilcomplete.iso import brute_force_intertwiners, distinguish, solve_intertwiners, square_witnesses, zinf_obstruction
from nilcomplete.local_arith import DyadicLocal, TruncatedTwoAdic, hensel_sqrt, is_unit_square, mod_one
from nilcomplete.nilgroups import a_matrix, b_matrix, bk_power_closed_form, central_identity_check
from nilcomplete.suites import suite_automorphism, suite_cocycle, suite_functoriality, suite_heisenberg, suite_magnus

ODD = [k for k in range(-15, 16) if k % 2]


def criterion_1():
    bad = [k for k in ODD if h2_torus_extension(k).group.torsion != (4,) or h2_torus_extension(k).group.free_rank]
    return not bad, f"H2 E_k = Z/4 for {len(ODD) - len(bad)}/{len(ODD)} odd k"


def criterion_2():
    bad = [k for k in ODD if h2_torus_extension(k).action != a_matrix(k)]
    k = 3
    xyx = lie_coordinates(bracket_expression((0, 1, 0)), 2, 3).vector()
    xyy = lie_coordinates(bracket_expression((0, 1, 1)), 2, 3).vector()
    x_inv, yk = FreeWord.gen(0, -1), FreeWord.from_powers((0, k), (1, -1))
    first = graded_image(commutator(x_inv, yk, x_inv), 3, 2).vector() == [-a for a in xyx]
    second = graded_image(commutator(x_inv, yk, yk), 3, 2).vector() == [k * a - b for a, b in zip(xyx, xyy)]
    return not bad and first and second, f"action mismatches {bad}, worked values {first and second}"


def _sandwich(n_max=6, lower=lambda n: n * n, n_min=1):
    bad = []
    for k in ODD:
        for n in range(n_min, n_max + 1):
            L = Lattice.column_span(b_matrix(k) ** n)
            if not Lattice.scaled(2 ** (n - 1), 2).contains(L):
                bad.append(("upper", k, n))
            if not L.contains(Lattice.scaled(2 ** lower(n), 2)):
                bad.append(("lower", k, n))
    return bad


def criterion_3():
    closed = [(k, n) for k in ODD for n in range(1, 21) if bk_power_closed_form(k, n) != b_matrix(k) ** n]
    bad = _sandwich()
    ns = sorted({n for _, _, n in bad})
    return not closed and not bad, f"closed form mismatches {len(closed)}, sandwich violations at n in {ns}"


def criterion_4():
    bad = [(k, n) for k in ODD for n in range(11) if not central_identity_check(k, n, 32)]
    return not bad, f"{len(ODD) * 11 - len(bad)}/{len(ODD) * 11} (k, n) pairs at 2^32"


def criterion_5():
    bad = []
    for k in ODD:
        for l in ODD:
            rep = distinguish(k, l)
            phi = rep.ghat_certificate
            if rep.distinguished != ((k * l) % 8 in (3, 5)) or a_matrix(l) @ phi != phi @ a_matrix(k):
                bad.append((k, l))
    return not bad, f"{len(ODD) ** 2 - len(bad)}/{len(ODD) ** 2} pairs agree"


def criterion_6():
    bad = []
    for k, l in ((1, 1), (1, 3), (3, 5)):
        for sign in (1, -1):
            if solve_intertwiners(k, l, sign, 4).members() != brute_force_intertwiners(k, l, sign, 4):
                bad.append((k, l, sign))
    return not bad, f"solution families differ for {bad}"


def criterion_7():
    obstructed = [(k, l) for k in ODD for l in ODD if zinf_obstruction(k, l).distinguished]
    counter = []
    for k, l in obstructed:
        roots = square_witnesses(k, l, 5)
        counter += [(k, l, s, r) for s in (1, -1) for r in roots[s]]
    return not counter, f"{len(obstructed)} obstructed pairs, {len(counter)} counterexamples"


def criterion_8():
    ranks = [baer_free_nilpotent(2, 2, n).free_rank for n in (1, 2, 3)]
    brute = [baer_rank_by_commutators(2, 2, n) for n in (1, 2, 3)]
    witt = [sum(witt_rank(2, i) for i in range(max(2, n) + 1, n + 3)) for n in (1, 2, 3)]
    zero = all(baer_transition_trivial(2, 2, n, 2) for n in (1, 2))
    nonzero = all(not baer_transition_trivial(2, 2, n, 1) for n in (1, 2))
    ok = ranks == brute == witt == [2, 5, 9] and zero and nonzero
    return ok, f"ranks {ranks}, commutator ranks {brute}, two-step zero {zero}, one-step nonzero {nonzero}"


def criterion_9():
    bad = []
    for num, den in ((1, 3), (2, 5), (1, 7)):
        u = DyadicLocal(num, den)
        for k in (1, 3, -5, 15):
            for n in range(1, 9):
                w = gamma_omega_witness(k, u, n)
                if not w.verify() or w.target != mod_one(u):
                    bad.append((k, u, n))
    return not bad, f"{len(bad)} failing witnesses"


def criterion_10():
    gen = random.Random(20261015)
    fails = 0
    for _ in range(1000):
        m = gen.randint(3, 64)
        a = TruncatedTwoAdic(8 * gen.randrange(1 << 61) + 1, m)
        x = hensel_sqrt(a)
        fails += not (x * x == a)
    table = _kernels.unit_square_table(12)
    mism = sum(is_unit_square(TruncatedTwoAdic(r, 12)) != bool(table[r]) for r in range(1, 1 << 12, 2))
    return fails == 0 and mism == 0, f"{fails} bad roots, {mism} table mismatches mod 2^12"


def criterion_11():
    results = [suite_heisenberg(), suite_automorphism(), suite_cocycle(), suite_magnus(), suite_functoriality()]
    failed = [r.name for r in results if not r.passed]
    return not failed, f"{sum(r.checks for r in results)} checks, failing suites {failed}"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 12)}

# The stated lower bound 2^(n^2) Z^2 <= b_k^n Z^2 is false at n = 1: b_k Z^2
# has index 4 with cyclic cokernel, so 2 Z^2 is not inside it. The product
# b^n adj(b^n) equals 4^n, not 2^(n^2). See test_sandwich_corrected.
KNOWN_FALSE = {3: "2^(n^2) lower bound fails at n = 1 for every odd k"}


def _report(n, ok, detail, capsys=None):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    if n in KNOWN_FALSE and not ok:
        line += f"  [known: {KNOWN_FALSE[n]}]"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


@pytest.mark.parametrize(
    "n",
    [
        pytest.param(n, marks=pytest.mark.xfail(strict=True, reason=KNOWN_FALSE[n])) if n in KNOWN_FALSE else n
        for n in CRITERIA
    ],
)
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n]()
    _report(n, ok, detail, capsys)
    assert ok, detail


def test_sandwich_corrected():
    """Upper bound for n <= 6; 2^(n^2) for 2 <= n <= 6; 4^n for every n <= 6."""
    assert not _sandwich(n_min=2)
    assert not _sandwich(lower=lambda n: 2 * n)


if __name__ == "__main__":
    results = [(n, *fn()) for n, fn in CRITERIA.items()]
    for n, ok, detail in results:
        _report(n, ok, detail)
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
