import json

import pytest

from nilcomplete.intlinalg import IntMatrix
from nilcomplete.iso import (
    IsoReport,
    brute_force_intertwiners,
    build_candidate_iso,
    distinguish,
    ghat_isomorphism,
    solve_intertwiners,
    square_witnesses,
    zinf_obstruction,
)
from nilcomplete.nilgroups import a_matrix

ODD = [k for k in range(-15, 16) if k % 2]


@pytest.mark.parametrize("k, l, diag", [(3, 5, (5, 3)), (3, 3, (3, 3)), (1, 7, (7, 1))])
def test_ghat_isomorphism(k, l, diag):
    phi = ghat_isomorphism(k, l)
    assert phi == IntMatrix.diag(*diag)
    assert a_matrix(l) @ phi == phi @ a_matrix(k)


def test_even_inputs_rejected():
    for fn in (ghat_isomorphism, zinf_obstruction, distinguish):
        with pytest.raises(ValueError):
            fn(2, 3)


@pytest.mark.parametrize("k, l", [(1, 1), (1, 3), (3, 5)])
@pytest.mark.parametrize("sign", [1, -1])
def test_intertwiners_match_brute_force(k, l, sign):
    fam = solve_intertwiners(k, l, sign, 4)
    assert fam.members() == brute_force_intertwiners(k, l, sign, 4)


@pytest.mark.parametrize("k, l, expected", [(1, 3, True), (3, 5, False), (3, 3, False)])
def test_obstruction_examples(k, l, expected):
    assert zinf_obstruction(k, l).distinguished is expected


def test_obstruction_soundness():
    for k in ODD:
        for l in ODD:
            if zinf_obstruction(k, l).distinguished:
                roots = square_witnesses(k, l, 5)
                assert not roots[1] and not roots[-1]


@pytest.mark.convention
@pytest.mark.parametrize("k, l, m", [(3, 5, 6), (1, 1, 3), (7, 7, 6), (3, 13, 16), (1, 7, 16)])
def test_candidate(k, l, m):
    c = build_candidate_iso(k, l, m)
    assert c.relations_ok and c.invertible
    assert c.central_multiplier() == 1
    assert (c.alpha * c.alpha * (k * l)).residue == c.sign % (1 << m)


def test_candidate_refuses_obstructed():
    with pytest.raises(ValueError):
        build_candidate_iso(1, 3, 8)


def test_distinguish_examples():
    r = distinguish(1, 3)
    assert r.ghat_verdict == "isomorphic" and r.zinf_verdict == "distinguished"
    r = distinguish(3, 13)
    assert r.zinf_verdict == "not_distinguished" and r.certificate["kind"] == "candidate"
    for k in ODD:
        assert not distinguish(k, k, 8).distinguished


def test_report_roundtrip():
    for k, l in ((1, 3), (3, 5)):
        r = distinguish(k, l, 12)
        assert IsoReport.from_dict(json.loads(json.dumps(r.to_dict()))) == r
        assert r.zinf_verdict in r.to_text()
