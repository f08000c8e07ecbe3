import json

import pytest
from hypothesis import given, settings

from ciliate_assembly.oracle import oracle_reduce
from ciliate_assembly.rewrite import DOUBLE_LOOP, HAIRPIN, LOOP, LegalString, RewriteRule, RuleNotApplicable
from ciliate_assembly.strategy import (
    EXHAUSTIVE,
    FIRST_SUCCESS,
    ReductionTrace,
    SearchLimitExceeded,
    SearchPolicy,
    Searcher,
    TraceError,
    count_strategies,
    enumerate_strategies,
    find_strategy,
    is_reducible,
    longest_trace,
    verify_universe,
)

from conftest import legal_strings

ACTIN = "3 4 4 5 6 7 5 6 7 8 9 -3 -2 2 8 9"
EXH = SearchPolicy(EXHAUSTIVE)


@pytest.mark.parametrize("s", ["", "2 2", ACTIN, "2 3 2 3", "2 -2"])
def test_is_reducible(s):
    assert is_reducible(s)


def test_state_limit_is_distinct_from_false():
    with pytest.raises(SearchLimitExceeded):
        is_reducible(ACTIN, SearchPolicy(max_states=2))


def test_policy_validation():
    with pytest.raises(ValueError):
        SearchPolicy(max_states=0)
    with pytest.raises(ValueError):
        SearchPolicy("breadth")
    with pytest.raises(ValueError):
        enumerate_strategies("2 2", SearchPolicy(FIRST_SUCCESS))


def test_find_examples():
    trace = find_strategy("2 2")
    assert [str(r) for r in trace.rules] == ["Loop(2)@0,1"] and trace.success

    trace = find_strategy("2 3 2 3")
    assert [r.kind for r in trace.rules] == [DOUBLE_LOOP]

    # legal completions of the "2 3 -2" pattern: hairpin first, then whatever
    # the flipped 3 calls for
    trace = find_strategy("2 3 -2 -3")
    assert [str(r) for r in trace.rules] == ["Hairpin(2)@0,2", "Loop(3)@0,1"]
    trace = find_strategy("2 3 -2 3")
    assert [str(r) for r in trace.rules] == ["Hairpin(2)@0,2", "Hairpin(3)@0,1"]

    assert find_strategy("").rules == ()


def test_find_actin_replays():
    trace = find_strategy(ACTIN)
    assert trace.success and len(trace) <= 8
    assert trace.replay() is trace
    assert trace == find_strategy(ACTIN)


def test_enumerate_examples():
    assert [t.rules for t in enumerate_strategies("", EXH)] == [()]
    found = enumerate_strategies("2 2 3 3", EXH)
    assert [[str(r) for r in t.rules] for t in found] == [
        ["Loop(2)@0,1", "Loop(3)@0,1"], ["Loop(3)@2,3", "Loop(2)@0,1"]]
    assert not found.truncated
    found = enumerate_strategies("2 -2", EXH)
    assert [[r.kind for r in t.rules] for t in found] == [[HAIRPIN]]


def test_enumerate_truncates():
    found = enumerate_strategies(ACTIN, SearchPolicy(EXHAUSTIVE, max_traces=50))
    assert len(found) == 50 and found.truncated
    assert found[0] == find_strategy(ACTIN)


def test_actin_strategy_count():
    # frozen from oracle_reduce(actin, cutoff=16)
    assert count_strategies(ACTIN) == 3060


@given(legal_strings(max_pointers=4))
@settings(max_examples=200)
def test_search_agrees_with_oracle(s):
    ok, n = oracle_reduce(s)
    searcher = Searcher(EXH)
    assert searcher.reducible(s) == ok
    assert searcher.count(s) == n
    found = searcher.enumerate(s)
    assert len(found) == n
    keys = [tuple((r.kind, r.positions) for r in t.rules) for t in found]
    assert len(set(keys)) == n
    assert [t.rules for t in found] == sorted(t.rules for t in found)
    for t in found:
        t.replay()
        assert t.success and len(t) <= len(s) // 2


def test_enumeration_is_canonical():
    # the first trace is the first-success trace and traces come in rule order
    s = LegalString.parse("2 3 2 3 4 4 -5 6 5 6")
    found = enumerate_strategies(s, EXH)
    assert found[0] == find_strategy(s)
    assert len(found) == count_strategies(s) > 1
    assert [t.rules for t in found] == sorted(t.rules for t in found)


def test_longest_trace():
    trace = longest_trace("2 3 2 3")
    assert trace.success and len(trace) == 1
    trace = longest_trace("2 3 3 2")
    assert len(trace) == 2


def test_trace_replay_detects_tampering():
    trace = find_strategy(ACTIN)
    bad = ReductionTrace(trace.initial, (trace.steps[1],) + trace.steps[1:])
    with pytest.raises((TraceError, RuleNotApplicable)):
        bad.replay()


def test_trace_json_round_trip():
    trace = find_strategy(ACTIN)
    doc = json.loads(trace.to_json())
    assert doc["initial"] == ACTIN and doc["success"] is True
    assert set(doc["steps"][0]) == {"step", "rule", "pointers", "positions", "excision", "result"}
    assert ReductionTrace.from_json(trace.to_json()) == trace
    doc["steps"][0]["result"] = "2 2"
    with pytest.raises(TraceError):
        ReductionTrace.from_dict(doc)


def test_trace_records_round_trip():
    trace = find_strategy(ACTIN)
    lines = trace.to_records()
    assert lines[0] == f'initial="{ACTIN}"'
    assert lines[1] == 'step=1 rule=loop pointers=4 positions=1,2 excision=circular result="3 5 6 7 5 6 7 8 9 -3 -2 2 8 9"'
    assert lines[-1].endswith('result=""')
    assert ReductionTrace.from_records(lines) == trace


@pytest.mark.parametrize("m, total, hist", [
    (1, 4, {1: 4}),
    (2, 96, None),
])
def test_verify_small(m, total, hist):
    report = verify_universe(m)
    assert report.ok and report.total == total == report.expected_total
    assert report.reducible == total
    if hist:
        assert report.histogram == hist


def test_verify_reports_disagreement(monkeypatch):
    import ciliate_assembly.strategy as strategy

    real = strategy.oracle_reduce_batch
    monkeypatch.setattr(strategy, "oracle_reduce_batch", lambda arr: real(arr) + (arr[:, 0] == -2))
    report = verify_universe(1)
    assert not report.ok
    assert [d[0] for d in report.disagreements] == [(-2, -2), (-2, 2)]
