"""Brute-force reference for the reduction search.

Nothing here shares code with :mod:`ciliate_assembly.rewrite`: rule instances
come from a naive scan over every position pair and quadruple, and the whole
reduction tree is walked without memoization.  :func:`oracle_reduce_batch` is
the same walk vectorized over many equal-length strings at once.
"""
from __future__ import annotations

from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "OracleCutoffExceeded",
    "ORACLE_CUTOFF",
    "naive_moves",
    "naive_apply",
    "oracle_reduce",
    "oracle_reduce_batch",
    "legal_string_array",
    "universe_size",
]

ORACLE_CUTOFF = 12


class OracleCutoffExceeded(ValueError):
    pass


def naive_moves(word: Sequence[int]) -> list[tuple]:
    """All ``(kind, positions)`` pairs whose pattern matches ``word``."""
    n = len(word)
    moves = []
    for i in range(n):
        for j in range(i + 1, n):
            if abs(word[i]) != abs(word[j]):
                continue
            if word[i] == -word[j]:
                moves.append(("hairpin", (i, j)))
            elif j == i + 1:
                moves.append(("loop", (i, j)))
    for i, j, k, l in combinations(range(n), 4):
        if word[i] == word[k] and word[j] == word[l] and abs(word[i]) != abs(word[j]):
            moves.append(("double_loop", (i, j, k, l)))
    return moves


def naive_apply(word: Sequence[int], kind: str, positions: tuple) -> list[int]:
    w = list(word)
    if kind == "loop":
        i, j = positions
        return w[:i] + w[j + 1:]
    if kind == "hairpin":
        i, j = positions
        middle = [-x for x in w[i + 1:j]]
        middle.reverse()
        return w[:i] + middle + w[j + 1:]
    i, j, k, l = positions
    return w[:i] + w[k + 1:l] + w[j + 1:k] + w[i + 1:j] + w[l + 1:]


def _count(word: list[int]) -> int:
    if not word:
        return 1
    return sum(_count(naive_apply(word, kind, pos)) for kind, pos in naive_moves(word))


def oracle_reduce(word: Sequence[int], cutoff: int = ORACLE_CUTOFF) -> tuple[bool, int]:
    """``(reducible, number of successful rule sequences)`` by full enumeration."""
    if len(word) > cutoff:
        raise OracleCutoffExceeded(f"length {len(word)} exceeds oracle cutoff {cutoff}")
    n = _count(list(word))
    return n > 0, n


def _move_table(length: int):
    """Gather index and sign vector for every binding at one string length."""
    table = []
    idx = np.arange(length)
    for i in range(length - 1):
        keep = np.concatenate([idx[:i], idx[i + 2:]])
        table.append(("loop", (i, i + 1), keep, np.ones(len(keep), np.int8)))
    for i, j in combinations(range(length), 2):
        gather = np.concatenate([idx[:i], idx[i + 1:j][::-1], idx[j + 1:]])
        sign = np.ones(len(gather), np.int8)
        sign[i:i + (j - i - 1)] = -1
        table.append(("hairpin", (i, j), gather, sign))
    for i, j, k, l in combinations(range(length), 4):
        gather = np.concatenate([idx[:i], idx[k + 1:l], idx[j + 1:k], idx[i + 1:j], idx[l + 1:]])
        table.append(("double_loop", (i, j, k, l), gather, np.ones(len(gather), np.int8)))
    return table


def _applicable(states: np.ndarray, kind: str, pos: tuple) -> np.ndarray:
    if kind == "loop":
        i, j = pos
        return states[:, i] == states[:, j]
    if kind == "hairpin":
        i, j = pos
        return states[:, i] == -states[:, j]
    i, j, k, l = pos
    return ((states[:, i] == states[:, k]) & (states[:, j] == states[:, l])
            & (np.abs(states[:, i]) != np.abs(states[:, j])))


def oracle_reduce_batch(words: np.ndarray, chunk: int = 20000) -> np.ndarray:
    """Strategy counts for a ``(n, length)`` array of equal-length strings.

    Expands every path of every reduction tree level by level; a string is
    reducible iff its count is positive.
    """
    words = np.asarray(words, dtype=np.int8)
    if words.ndim != 2:
        raise ValueError("expected a 2-d array of equal-length strings")
    n, length = words.shape
    counts = np.zeros(n, dtype=np.int64)
    tables = {L: _move_table(L) for L in range(2, length + 1, 2)}
    for start in range(0, n, chunk):
        owner0 = np.arange(start, min(start + chunk, n))
        frontier = {length: (words[owner0], owner0)}
        for L in range(length, 0, -2):
            if L not in frontier:
                continue
            states, owner = frontier.pop(L)
            for kind, pos, gather, sign in tables[L]:
                mask = _applicable(states, kind, pos)
                if not mask.any():
                    continue
                child = states[mask][:, gather] * sign
                child_owner = owner[mask]
                M = child.shape[1]
                if M == 0:
                    counts += np.bincount(child_owner, minlength=n)
                elif M in frontier:
                    s, o = frontier[M]
                    frontier[M] = (np.concatenate([s, child]), np.concatenate([o, child_owner]))
                else:
                    frontier[M] = (child, child_owner)
        if length == 0:
            counts[owner0] += 1
    return counts


def _arrangements(values: list[int]) -> Iterator[tuple[int, ...]]:
    """Distinct placements of each value twice, lexicographic order."""
    remaining = {v: 2 for v in values}
    prefix: list[int] = []
    total = 2 * len(values)

    def rec():
        if len(prefix) == total:
            yield tuple(prefix)
            return
        for v in values:
            if remaining[v]:
                remaining[v] -= 1
                prefix.append(v)
                yield from rec()
                prefix.pop()
                remaining[v] += 1

    yield from rec()


def legal_string_array(max_pointers: int) -> np.ndarray:
    """Every legal string over pointers ``2..max_pointers+1`` as rows of an int8 array.

    Rows are ordered by unsigned arrangement, then by sign pattern with
    the plain sign before the inverted one at each position.
    """
    if max_pointers < 0:
        raise ValueError("max_pointers must be >= 0")
    if max_pointers == 0:
        return np.zeros((1, 0), dtype=np.int8)
    values = list(range(2, max_pointers + 2))
    arr = np.array(list(_arrangements(values)), dtype=np.int8).reshape(-1, 2 * max_pointers)
    signs = np.array(list(product((1, -1), repeat=2 * max_pointers)), dtype=np.int8)
    signs = signs.reshape(-1, 2 * max_pointers)
    out = arr[:, None, :] * signs[None, :, :]
    return out.reshape(-1, 2 * max_pointers)


def universe_size(max_pointers: int) -> int:
    """Closed form ``(2m)! / 2^m * 4^m`` for the number of legal strings on ``m`` pointers."""
    from math import factorial
    m = max_pointers
    return factorial(2 * m) // 2 ** m * 4 ** m
