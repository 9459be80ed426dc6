"""Command-line front end: ``nilcomplete {distinguish,invariants,baer,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error. Verdicts of
``distinguish`` live in the report, never in the exit code.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .freelie import MAX_CLASS, witt_rank
from .intlinalg import Lattice, filtration_equivalent
from .invariants import (
    baer_free_nilpotent,
    baer_rank_by_commutators,
    baer_transition_trivial,
    h1_presentation,
    h2_torus_extension,
    heisenberg_extension_presentation,
    torus_bundle_presentation,
)
from .iso import SCHEMA, IsoReport, distinguish
from .nilgroups import b_matrix, bk_power_closed_form, central_identity_check
from .suites import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_PRECISION = 16
DEFAULT_CLASS_BOUND = 6


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    k: int | None = None
    l: int | None = None
    precision: int = DEFAULT_PRECISION
    class_bound: int = DEFAULT_CLASS_BOUND
    fmt: str = "json"
    out: str | None = None

    def validate(self):
        if self.precision < 3:
            raise UsageError(f"precision must be >= 3, got {self.precision}")
        if not 1 <= self.class_bound <= MAX_CLASS:
            raise UsageError(f"class bound must be in 1..{MAX_CLASS}, got {self.class_bound}")
        for name in ("k", "l"):
            v = getattr(self, name)
            if v is not None and v % 2 == 0:
                raise UsageError(f"{name} must be odd, got {v}")


# -- commands ----------------------------------------------------------------

def _distinguish_one(args: tuple[int, int, int]) -> dict:
    return distinguish(*args).to_dict()


def cmd_distinguish(cfg: RunConfig, grid: int | None = None, jobs: int = 1) -> tuple[int, dict, str]:
    if grid is None:
        if cfg.k is None or cfg.l is None:
            raise UsageError("distinguish needs --k and --l (or --grid)")
        rep = distinguish(cfg.k, cfg.l, cfg.precision)
        return EXIT_OK, rep.to_dict(), rep.to_text()
    if grid < 1:
        raise UsageError("grid bound must be positive")
    ks = [k for k in range(-grid, grid + 1) if k % 2]
    tasks = [(k, l, cfg.precision) for k in ks for l in ks]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_distinguish_one, tasks, chunksize=16))
    else:
        reports = [_distinguish_one(t) for t in tasks]
    rows = [
        {"k": r["k"], "l": r["l"], "kl_mod_8": r["zinf"]["obstruction"], "zinf": r["zinf"]["verdict"], "ghat": r["ghat"]["verdict"]}
        for r in reports
    ]
    payload = {"schema": SCHEMA, "invariant": "distinguish-grid", "bound": grid, "precision": cfg.precision, "pairs": rows}
    text = "\n".join(f"{r['k']:>4} {r['l']:>4}  kl%8={r['kl_mod_8']}  {r['zinf']}" for r in rows)
    return EXIT_OK, payload, text


def cmd_invariants(cfg: RunConfig, depth: int = 10) -> tuple[int, dict, str]:
    if cfg.k is None:
        raise UsageError("invariants needs --k")
    k, m = cfg.k, cfg.precision
    h1g = h1_presentation(torus_bundle_presentation(k))
    h1e = h1_presentation(heisenberg_extension_presentation(k))
    h2 = h2_torus_extension(k)
    b = b_matrix(k)
    closed = [bk_power_closed_form(k, n) == b**n for n in range(1, depth + 1)]
    extra = 4
    F = [Lattice.column_span(b**n) for n in range(depth + extra + 1)]
    G = [Lattice.scaled(2**n, 2) for n in range(depth + extra + 1)]
    filt = filtration_equivalent(F, G, depth)
    central = [central_identity_check(k, n, m) for n in range(depth + 1)]
    ok = all(closed) and all(central) and filt.equivalent
    payload = {
        "schema": SCHEMA,
        "invariant": "invariants",
        "k": k,
        "precision": m,
        "h1_g": h1g.to_json(),
        "h1_e": h1e.to_json(),
        "h2_e": h2.group.to_json(),
        "h2_action": h2.action.to_json(),
        "bk_closed_form": closed,
        "filtration": {"equivalent": filt.equivalent, **filt.to_json()},
        "central_identity": central,
        "passed": ok,
    }
    text = "\n".join(
        [
            f"k = {k}",
            f"  H_1 G_k = {h1g}",
            f"  H_1 E_k = {h1e}",
            f"  H_2 E_k = {h2.group}",
            f"  b_k^n closed form, n = 1..{depth}: {'ok' if all(closed) else 'MISMATCH'}",
            f"  b_k^n vs 2^n offsets: forward {list(filt.forward)}, backward {list(filt.backward)}",
            f"  central identity mod 2^{m}, n = 0..{depth}: {'ok' if all(central) else 'FAIL'}",
        ]
    )
    return (EXIT_OK if ok else EXIT_FAIL), payload, text


def cmd_baer(cfg: RunConfig, r: int, c: int, n_max: int) -> tuple[int, dict, str]:
    if r < 1 or c < 1 or n_max < 1:
        raise UsageError("rank, class and nmax must be positive")
    if n_max + c > cfg.class_bound:
        raise UsageError(f"nmax + class = {n_max + c} exceeds the class bound {cfg.class_bound}")
    rows = []
    for n in range(1, n_max + 1):
        rank = baer_free_nilpotent(r, c, n).free_rank
        row = {
            "n": n,
            "rank": rank,
            "rank_by_commutators": baer_rank_by_commutators(r, c, n),
            "witt_degrees": {str(i): witt_rank(r, i) for i in range(max(c, n) + 1, n + c + 1)},
        }
        for steps in (1, c):
            key = f"trivial_after_{steps}"
            row[key] = baer_transition_trivial(r, c, n, steps) if n + steps + c <= cfg.class_bound else None
        rows.append(row)
    ok = all(row["rank"] == row["rank_by_commutators"] for row in rows)
    payload = {"schema": SCHEMA, "invariant": "baer", "rank": r, "class": c, "ranks": [row["rank"] for row in rows], "table": rows, "passed": ok}
    lines = [f"Baer invariants of the free class-{c} group on {r} generators"]
    for row in rows:
        lines.append(
            f"  M_{row['n']}: Z^{row['rank']} (commutators: {row['rank_by_commutators']}),"
            f" M_(n+1)->M_n zero: {row['trivial_after_1']}, M_(n+{c})->M_n zero: {row[f'trivial_after_{c}']}"
        )
    return (EXIT_OK if ok else EXIT_FAIL), payload, "\n".join(lines)


def cmd_verify(cfg: RunConfig, suite: str, n: int | None = None) -> tuple[int, dict, str]:
    names = list(SUITES) if suite == "all" else [suite]
    results = run_suites(names, n=n, m=cfg.precision if suite in ("central-identity", "grid") else None)
    ok = all(res.passed for res in results)
    payload = {"schema": SCHEMA, "invariant": "verify", "passed": ok, "suites": [res.to_json() for res in results]}
    text = "\n".join(
        f"{'PASS' if res.passed else 'FAIL'}  {res.name} ({res.checks} checks)"
        + ("" if res.passed else f": {res.failures[:3]!r}")
        for res in results
    )
    return (EXIT_OK if ok else EXIT_FAIL), payload, text


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="2-adic precision m")
    common.add_argument("--class-bound", type=int, default=DEFAULT_CLASS_BOUND)

    parser = argparse.ArgumentParser(prog="nilcomplete", description="Completions of torus bundle groups G_k and E_k.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distinguish", parents=[common], help="compare completions of E_k and E_l")
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--grid", type=int, metavar="B", help="all odd k, l with |k|, |l| <= B")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("invariants", parents=[common], help="homology and filtration data for k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--depth", type=int, default=10)

    p = sub.add_parser("baer", parents=[common], help="Baer invariants of a free nilpotent group")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--class", dest="cls", type=int, default=2)
    p.add_argument("--nmax", type=int, default=3)

    p = sub.add_parser("verify", parents=[common], help="run self-verification suites")
    p.add_argument("--suite", choices=("all", *SUITES), default="all")
    p.add_argument("--n", type=int)
    return parser


def _emit(payload: dict, text: str, fmt: str, out: str | None):
    body = json.dumps(payload, indent=2) if fmt == "json" else text
    if out:
        with open(out, "w") as fh:
            fh.write(body + "\n")
    else:
        print(body)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        args.command,
        getattr(args, "k", None),
        getattr(args, "l", None),
        args.precision,
        args.class_bound,
        args.format,
        args.out,
    )
    try:
        cfg.validate()
        if args.command == "distinguish":
            code, payload, text = cmd_distinguish(cfg, args.grid, args.jobs)
        elif args.command == "invariants":
            code, payload, text = cmd_invariants(cfg, args.depth)
        elif args.command == "baer":
            code, payload, text = cmd_baer(cfg, args.rank, args.cls, args.nmax)
        else:
            code, payload, text = cmd_verify(cfg, args.suite, args.n)
    except (UsageError, ValueError) as exc:
        print(f"nilcomplete: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(payload, text, cfg.fmt, cfg.out)
    return code


def parse_report(text: str) -> IsoReport:
    """Inverse of ``distinguish --format json`` for single-pair reports."""
    return IsoReport.from_dict(json.loads(text))


if __name__ == "__main__":
    sys.exit(main())
