import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ciliate_assembly import ACTIN_I
from ciliate_assembly.assembly import (
    AssemblyError,
    apply_molecular,
    assemble,
    canonical_circle,
    init_state,
    is_assembled,
    project,
    replay,
)
from ciliate_assembly.descriptor import IesSegment, MdsSegment, parse_gene, random_scrambled_gene, to_legal_string
from ciliate_assembly.rewrite import LOOP, RewriteRule, RuleNotApplicable, applicable_rules, apply_rule
from ciliate_assembly.strategy import SearchLimitExceeded, SearchPolicy, enumerate_strategies, EXHAUSTIVE


def test_init_state():
    st_ = init_state(parse_gene(ACTIN_I))
    assert len(st_.mds) == 9 and len([s for s in st_.linear if isinstance(s, IesSegment)]) == 8
    assert st_.circles == () and len(st_.trace) == 0
    assert is_assembled(init_state(parse_gene("M1")))
    st_ = init_state(parse_gene("M1 M2"))
    assert st_.linear == (MdsSegment(1, 1), IesSegment(1), MdsSegment(2, 2))


def test_loop_ships_ies_to_circle():
    state = apply_molecular(init_state(parse_gene("M1 I M2")), RewriteRule.loop(2, 0))
    assert state.linear == (MdsSegment(1, 2),)
    assert state.circles == ((IesSegment(1),),)


def test_hairpin_merges_after_inversion():
    gene = parse_gene("M1 I -M2")
    state = apply_molecular(init_state(gene), RewriteRule.hairpin(2, 0, 1))
    assert state.linear == (MdsSegment(1, 2), IesSegment(1))
    assert project(state) == apply_rule(to_legal_string(gene), RewriteRule.hairpin(2, 0, 1))[0]
    assert state.circles == ()


def test_double_loop_merges_both_pointers():
    gene = parse_gene("M2 M1 M3")  # 2 3 2 3
    state = apply_molecular(init_state(gene), RewriteRule.double_loop(2, 3, 0, 1, 2, 3))
    assert [s for s in state.linear if isinstance(s, MdsSegment)] == [MdsSegment(1, 3)]
    assert is_assembled(state)


def test_wrapping_loop_keeps_gene_linear():
    # M2 I M1: both pointer-2 ends enclose the whole gene
    state = apply_molecular(init_state(parse_gene("M2 M1")), RewriteRule.loop(2, 0))
    assert state.linear == (MdsSegment(1, 2), IesSegment(1))
    assert state.circles == ()
    state = apply_molecular(init_state(parse_gene("-M1 -M2")), RewriteRule.loop(2, 0))
    assert state.linear == (MdsSegment(1, 2, True), IesSegment(1))


def test_rejects_stale_rule():
    with pytest.raises(RuleNotApplicable):
        apply_molecular(init_state(parse_gene("M1 M2")), RewriteRule.hairpin(2, 0, 1))


def test_actin_end_to_end():
    result = assemble(parse_gene(ACTIN_I))
    assert result.success
    assert result.composite.lo == 1 and result.composite.hi == 9
    assert len(result.trace) <= 8
    state = result.state
    assert state.covered() == list(range(1, 10))
    for circle in state.circles:
        assert all(isinstance(s, IesSegment) for s in circle)
    labels = sorted([s.label for c in state.circles for s in c]
                    + [s.label for s in state.linear if isinstance(s, IesSegment)])
    assert labels == list(range(1, 9))


def test_every_actin_strategy_assembles():
    gene = parse_gene(ACTIN_I)
    found = enumerate_strategies(to_legal_string(gene), SearchPolicy(EXHAUSTIVE))
    assert len(found) == 3060 and not found.truncated
    for trace in found:
        assert is_assembled(replay(gene, trace.rules))


def test_assemble_examples():
    result = assemble(parse_gene("M1 M2"))
    assert result.success and result.state.linear == (MdsSegment(1, 2),)
    assert result.circles == ((IesSegment(1),),) and len(result.trace) == 1
    result = assemble(parse_gene("M1"))
    assert result.success and len(result.trace) == 0


def test_assemble_limit():
    with pytest.raises(SearchLimitExceeded):
        assemble(parse_gene(ACTIN_I), SearchPolicy(max_states=3))


def test_report_and_json():
    result = assemble(parse_gene(ACTIN_I))
    text = result.report()
    assert "success:      yes" in text and "M1..9" in text
    doc = json.loads(result.to_json())
    assert doc["success"] and doc["composite"] == {"lo": 1, "hi": 9, "inverted": True}
    assert len(doc["trace"]["steps"]) == len(result.trace)
    assert all("segments" in s for s in doc["trace"]["steps"])
    assert doc["trace"]["steps"][-1]["result"] == ""


def test_canonical_circle():
    assert canonical_circle([3, 1, 2]) == (1, 2, 3)
    assert canonical_circle([2, 1, 1]) == (1, 1, 2)
    assert canonical_circle([]) == ()


def _walk(gene, rng):
    state = init_state(gene)
    while True:
        word = project(state)
        rules = applicable_rules(word)
        if not rules:
            return state
        rule = rng.choice(rules)
        new = apply_molecular(state, rule)
        assert project(new) == apply_rule(word, rule)[0]
        assert new.covered() == list(range(1, gene.kappa + 1))
        # composite spans only grow
        old_spans = [set(s.indices) for s in state.mds]
        for s in new.mds:
            assert any(span <= set(s.indices) for span in old_spans)
        state = new


@given(st.integers(1, 9), st.floats(0, 1), st.integers(0, 2**31), st.integers(0, 2**31))
@settings(max_examples=300)
def test_random_walk_commutes(kappa, p, seed, walk_seed):
    gene = random_scrambled_gene(kappa, p, seed=seed)
    final = _walk(gene, random.Random(walk_seed))
    assert len(project(final)) == 0
    assert is_assembled(final)
    for circle in final.circles:
        assert all(isinstance(s, IesSegment) for s in circle)


@pytest.mark.parametrize("text", ["I M1 M2 I", "M1 M2", "I -M2 M3 I M1 I"])
def test_explicit_ies_layouts(text):
    gene = parse_gene(text)
    result = assemble(gene)
    assert result.success
    assert project(result.state) == ()
