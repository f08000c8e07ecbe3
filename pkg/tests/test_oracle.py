from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings

from ciliate_assembly.oracle import (
    OracleCutoffExceeded,
    legal_string_array,
    oracle_reduce,
    oracle_reduce_batch,
    universe_size,
)
from ciliate_assembly.strategy import enumerate_legal_strings

from conftest import legal_strings


def test_oracle_examples():
    assert oracle_reduce([]) == (True, 1)
    assert oracle_reduce([2, 2]) == (True, 1)
    assert oracle_reduce([2, 2, 3, 3]) == (True, 2)
    assert oracle_reduce([2, -2]) == (True, 1)
    ok, n = oracle_reduce([2, 3, 2, 3])
    assert ok and n >= 1


def test_oracle_cutoff():
    word = [v for v in range(2, 9) for _ in (0, 1)]
    with pytest.raises(OracleCutoffExceeded):
        oracle_reduce(word)
    # independent pairs can be removed in any order
    assert oracle_reduce(word, cutoff=14) == (True, factorial(7))


def test_universe_small():
    assert [str(w) for w in enumerate_legal_strings(1)] == ["2 2", "2 -2", "-2 2", "-2 -2"]
    assert len(list(enumerate_legal_strings(2))) == 96
    assert len(list(enumerate_legal_strings(0))) == 1


@pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
def test_universe_size_matches_closed_form(m):
    arr = legal_string_array(m)
    assert len(arr) == universe_size(m)
    # each row distinct and double-occurrence
    assert len({row.tobytes() for row in arr}) == len(arr)
    if m:
        counts = np.stack([(np.abs(arr) == v).sum(axis=1) for v in range(2, m + 2)])
        assert (counts == 2).all()


def test_universe_closed_form_values():
    assert universe_size(1) == 4
    assert universe_size(2) == factorial(4) // (2 * 2) * 16 == 96
    assert universe_size(4) == 645120


def test_actin_not_in_small_universe():
    actin = (3, 4, 4, 5, 6, 7, 5, 6, 7, 8, 9, -3, -2, 2, 8, 9)
    assert actin not in {tuple(w) for w in enumerate_legal_strings(4)}


@pytest.mark.parametrize("m", [1, 2, 3])
def test_batch_matches_scalar_universe(m):
    arr = legal_string_array(m)
    scalar = [oracle_reduce(row)[1] for row in arr.tolist()]
    assert oracle_reduce_batch(arr).tolist() == scalar


def test_batch_matches_scalar_sample_four():
    arr = legal_string_array(4)
    rows = arr[np.random.default_rng(7).choice(len(arr), 400, replace=False)]
    assert oracle_reduce_batch(rows).tolist() == [oracle_reduce(r)[1] for r in rows.tolist()]


@given(legal_strings(max_pointers=5))
@settings(max_examples=100)
def test_batch_matches_scalar_random(s):
    arr = np.array([list(s)], dtype=np.int8).reshape(1, len(s))
    assert oracle_reduce_batch(arr).tolist() == [oracle_reduce(s)[1]]


def test_batch_rejects_ragged():
    with pytest.raises(ValueError):
        oracle_reduce_batch(np.zeros(4, np.int8))
