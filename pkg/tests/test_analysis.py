from __future__ import annotations

import json
from dataclasses import replace

import pytest

import oracles as o
from sjc.analysis import (
    Witness,
    c2_orbits,
    c3_expected_sizes,
    c3_orbits,
    c8_orbits,
    distance,
    distance_witnesses_nd,
    min_distance,
    sit_verify,
    table_row,
    witness_distance,
)
from sjc.codes import Code, CodeParams, ScaleGuardError, enumerate_code, valid_params
from sjc.forms import QuadraticForm, form_index, is_nondegenerate, restrict_type
from sjc.gf2 import ParameterError, e, f, rref


def _brute_min_distance(code) -> int:
    sets = [frozenset(w.members()) for w in code.words]
    k = len(sets[0])
    return min(k - len(a & b) for i, a in enumerate(sets) for b in sets[i + 1 :])


@pytest.mark.parametrize("p", [p for p in valid_params(3) if len(enumerate_code(p)) <= 400],
                         ids=lambda p: p.label())
def test_min_distance_against_brute_force(p):
    code = enumerate_code(p)
    want = _brute_min_distance(code)
    for strategy in ("fixed-first", "exhaustive"):
        rep = min_distance(code, strategy)
        assert rep.min_distance == want
        a, b = (w for u in rep.witness for w in code.words if w.u == u)
        assert distance(a, b) == want


def test_threads_do_not_change_output():
    code = enumerate_code(CodeParams("ti", 3, 1, 1, delta=0))
    outs = {json.dumps(min_distance(code, s, t).to_json()) for s in ("fixed-first", "exhaustive") for t in (1, 3)}
    assert len({json.loads(x)["min_distance"] for x in outs}) == 1
    ff = {json.dumps(min_distance(code, "fixed-first", t).to_json()) for t in (1, 2, 4, 7)}
    assert len(ff) == 1


def test_min_distance_rejects_bad_strategy():
    with pytest.raises(ParameterError):
        min_distance(enumerate_code(CodeParams("ti", 2, 1, 1, delta=0)), "random")


@pytest.mark.parametrize("p", [p for p in valid_params(3) if p.family == "nd"], ids=lambda p: p.label())
def test_witness_pairs_are_codeword_pairs(p):
    for w in distance_witnesses_nd(p.n, p.d, p.eps, p.epsprime):
        assert isinstance(w, Witness)
        assert w.u1 != w.u2
        assert w.u1.dim == w.u2.dim == 2 * p.d
        assert is_nondegenerate(w.u1) and is_nondegenerate(w.u2)
        s1, s2 = frozenset(w.u1.elements()), frozenset(w.u2.elements())
        a = o.nd_word(p.n, p.eps, p.epsprime, s1)
        b = o.nd_word(p.n, p.eps, p.epsprime, s2)
        assert len(a) - len(a & b) == witness_distance(w, p.n, p.d, p.eps, p.epsprime) == w.expected


@pytest.mark.parametrize("p", valid_params(2) + [p for p in valid_params(3) if p.n == 3][:6], ids=lambda p: p.label())
def test_sit_passes(p):
    rep = sit_verify(enumerate_code(p))
    assert rep.passed, rep.to_json()
    k = enumerate_code(p).words[0].weight
    assert rep.pair_orbit_size == k * (len(form_index(p.n, p.eps)) - k)
    assert rep.closure_order == rep.expected_closure_order


def test_sit_detects_a_broken_code():
    p = CodeParams("ti", 3, 1, 1, delta=0)
    code = enumerate_code(p)
    w0 = code.words[0]
    # keep the subspace but drop one form from the word
    low = w0.bits & -w0.bits
    fake = Code(p, code.index, (replace(w0, bits=w0.bits ^ low),) + code.words[1:])
    rep = sit_verify(fake)
    assert rep.status == "fail" and not rep.two_orbit_check


def test_sit_scale_guard():
    code = enumerate_code(CodeParams("ti", 4, 1, 1, delta=0))
    with pytest.raises(ScaleGuardError):
        sit_verify(code)


def test_c2_small():
    part = c2_orbits(2, 2, 1)
    assert part.sizes == [9, 0, 1]
    assert "parts are single orbits" in part.notes
    for q in part.parts:
        for c in q.members:
            assert QuadraticForm(2, c).eps == 1
    with pytest.raises(ParameterError):
        c2_orbits(3, 2, 1)


def test_c2_counts_minus_blocks():
    part = c2_orbits(3, 3, -1, verify=False)
    blocks = [rref([e(i), f(i)], 6) for i in (1, 2, 3)]
    for m, q in enumerate(part.parts):
        for c in q.members:
            assert sum(restrict_type(QuadraticForm(3, c), b) < 0 for b in blocks) == m


def test_c3_small():
    part = c3_orbits(1, 2, 1)
    assert part.sizes == [1, 6, 3]
    assert c3_expected_sizes(1, 2, 1) == {0: 6, 1: 3}
    assert part.total() == len(form_index(2, 1))


def test_c8_small():
    assert c8_orbits(2, 1).sizes == [1, 3, 6]
    assert c8_orbits(3, -1).sizes[2] == 12
    part = c8_orbits(2, -1)
    assert part.sizes == [1, 3, 2]
    assert part.notes == ["parts are single orbits"]


def test_table_row():
    row = table_row(CodeParams("ti", 2, 1, 1, delta=1))
    assert row == {
        "family": "ti", "n": 2, "d": 1, "eps": "+", "epsprime_or_delta": "1", "k": 4,
        "code_size": 15, "min_distance": 2, "conjecture_expected": 2, "agrees": True,
    }
