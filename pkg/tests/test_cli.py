import json
import subprocess
import sys

import pytest

from nilcomplete.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, parse_report


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_distinguish_json(capsys):
    code, out, _ = run(capsys, "distinguish", "--k", "1", "--l", "3", "--precision", "16")
    data = json.loads(out)
    assert code == EXIT_OK and data["schema"] == "nilcomplete/1"
    assert data["zinf"]["verdict"] == "distinguished"
    assert parse_report(out).to_dict() == data


def test_distinguish_candidate(capsys):
    code, out, _ = run(capsys, "distinguish", "--k", "3", "--l", "5")
    data = json.loads(out)
    assert data["zinf"]["verdict"] == "not_distinguished"
    assert data["zinf"]["certificate"]["kind"] == "candidate"


def test_even_k_is_usage_error(capsys):
    code, _, err = run(capsys, "distinguish", "--k", "2", "--l", "3")
    assert code == EXIT_USAGE and "k must be odd" in err


def test_text_and_json_agree(capsys):
    for k, l in ((1, 3), (3, 5), (5, 5)):
        _, out_j, _ = run(capsys, "distinguish", "--k", str(k), "--l", str(l))
        _, out_t, _ = run(capsys, "distinguish", "--k", str(k), "--l", str(l), "--format", "text")
        verdict = json.loads(out_j)["zinf"]["verdict"]
        assert f"Z-completions: {verdict}" in out_t


def test_grid(capsys):
    code, out, _ = run(capsys, "distinguish", "--grid", "5", "--precision", "8")
    rows = json.loads(out)["pairs"]
    assert len(rows) == 36
    assert all((r["zinf"] == "distinguished") == (r["kl_mod_8"] in (3, 5)) for r in rows)


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--k", "3")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["h2_e"] == {"torsion": ["4"], "free_rank": 0}
    assert data["h1_g"]["free_rank"] == 1
    assert all(data["bk_closed_form"])
    filt = data["filtration"]
    n = range(len(filt["forward"]))
    # b^n sits inside 2^(n-1); 2^(n^2) sits inside b^n from n = 2 on, 4^n always
    assert all(p <= 1 for p in filt["forward"])
    assert all(filt["backward"][i] <= (i * i - i if i >= 2 else i) for i in n)


def test_invariants_even_k(capsys):
    assert run(capsys, "invariants", "--k", "4")[0] == EXIT_USAGE


def test_baer(capsys):
    code, out, _ = run(capsys, "baer", "--rank", "2", "--class", "2", "--nmax", "3")
    data = json.loads(out)
    assert code == EXIT_OK and data["ranks"] == [2, 5, 9]
    assert data["table"][0]["trivial_after_2"] is True
    assert data["table"][0]["trivial_after_1"] is False


def test_baer_bound(capsys):
    assert run(capsys, "baer", "--rank", "2", "--class", "4", "--nmax", "4")[0] == EXIT_USAGE
    assert run(capsys, "baer", "--class-bound", "9")[0] == EXIT_USAGE


@pytest.mark.parametrize("argv", [("verify", "--suite", "central-identity", "--n", "6"), ("verify", "--suite", "cocycle")])
def test_verify_passes(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK and json.loads(out)["passed"]


def test_verify_failure_exit(capsys, monkeypatch):
    from nilcomplete import suites

    def broken(**_):
        res = suites.SuiteResult("cocycle")
        res.check(False, "forced")
        return res

    monkeypatch.setitem(suites.SUITES, "cocycle", broken)
    assert run(capsys, "verify", "--suite", "cocycle")[0] == EXIT_FAIL


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert run(capsys, "distinguish", "--k", "1", "--l", "1", "--out", str(path))[0] == EXIT_OK
    assert json.loads(path.read_text())["schema"] == "nilcomplete/1"


def test_argparse_usage_exit():
    proc = subprocess.run([sys.executable, "-m", "nilcomplete", "frobnicate"], capture_output=True)
    assert proc.returncode == EXIT_USAGE


def test_module_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "nilcomplete", "distinguish", "--k", "3", "--l", "5", "--format", "text"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "not_distinguished" in proc.stdout
