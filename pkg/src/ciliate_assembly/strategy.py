"""Search of the reduction graph for successful assembly strategies.

States are exact pointer strings.  Reducibility and strategy counts are
memoized per state; enumeration walks paths, so a state reached along
several paths is revisited once per path.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .oracle import legal_string_array, oracle_reduce, oracle_reduce_batch, universe_size
from .rewrite import (
    ExcisionRecord,
    LegalString,
    RewriteRule,
    _rewrite,
    _rules,
    apply_rule,
    format_word,
    successor_words,
    EXCISION_KIND,
)

__all__ = [
    "FIRST_SUCCESS",
    "EXHAUSTIVE",
    "SearchPolicy",
    "SearchLimitExceeded",
    "TraceStep",
    "ReductionTrace",
    "TraceError",
    "Enumeration",
    "Searcher",
    "is_reducible",
    "find_strategy",
    "enumerate_strategies",
    "count_strategies",
    "longest_trace",
    "oracle_reduce",
    "enumerate_legal_strings",
    "VerifyReport",
    "verify_universe",
]

FIRST_SUCCESS = "first-success"
EXHAUSTIVE = "exhaustive"


class SearchLimitExceeded(RuntimeError):
    """The state budget ran out before the question was settled."""


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class SearchPolicy:
    mode: str = FIRST_SUCCESS
    max_states: int = 10**6
    max_traces: int = 10**4

    def __post_init__(self):
        if self.mode not in (FIRST_SUCCESS, EXHAUSTIVE):
            raise ValueError(f"unknown search mode {self.mode!r}")
        if self.max_states <= 0 or self.max_traces <= 0:
            raise ValueError("search limits must be positive")


@dataclass(frozen=True)
class TraceStep:
    rule: RewriteRule
    result: LegalString
    record: ExcisionRecord


@dataclass(frozen=True)
class ReductionTrace:
    initial: LegalString
    steps: tuple = ()

    def __len__(self):
        return len(self.steps)

    @property
    def final(self) -> LegalString:
        return self.steps[-1].result if self.steps else self.initial

    @property
    def success(self) -> bool:
        return len(self.final) == 0

    @property
    def rules(self) -> tuple:
        return tuple(s.rule for s in self.steps)

    def extend(self, rule: RewriteRule) -> "ReductionTrace":
        result, record = apply_rule(self.final, rule)
        return ReductionTrace(self.initial, self.steps + (TraceStep(rule, result, record),))

    def replay(self) -> "ReductionTrace":
        """Re-derive every step from ``initial``; raise :class:`TraceError` on mismatch."""
        state = self.initial
        for n, step in enumerate(self.steps, 1):
            result, record = apply_rule(state, step.rule)
            if result != step.result or record != step.record:
                raise TraceError(f"step {n} does not reproduce: {format_word(result)!r}"
                                 f" != {format_word(step.result)!r}")
            state = result
        return self

    @classmethod
    def from_rules(cls, initial, rules) -> "ReductionTrace":
        trace = cls(LegalString(initial))
        for rule in rules:
            trace = trace.extend(rule)
        return trace

    # serialization

    def to_dict(self) -> dict:
        return {
            "initial": str(self.initial),
            "success": self.success,
            "steps": [
                {
                    "step": n,
                    "rule": s.rule.kind,
                    "pointers": list(s.rule.pointers),
                    "positions": list(s.rule.positions),
                    "excision": s.record.kind,
                    "result": str(s.result),
                }
                for n, s in enumerate(self.steps, 1)
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "ReductionTrace":
        rules = [RewriteRule(s["rule"], tuple(s["pointers"]), tuple(s["positions"]))
                 for s in data["steps"]]
        trace = cls.from_rules(LegalString.parse(data["initial"]), rules)
        for got, want in zip(trace.steps, data["steps"]):
            if str(got.result) != want["result"]:
                raise TraceError(f"step {want['step']}: recorded result {want['result']!r}"
                                 f" differs from replay {str(got.result)!r}")
        return trace

    @classmethod
    def from_json(cls, text: str) -> "ReductionTrace":
        return cls.from_dict(json.loads(text))

    def to_records(self) -> list[str]:
        """One ``key=value`` line per step, preceded by an ``initial`` line."""
        lines = [f'initial="{self.initial}"']
        for n, s in enumerate(self.steps, 1):
            lines.append(
                f"step={n} rule={s.rule.kind} pointers={','.join(map(str, s.rule.pointers))}"
                f" positions={','.join(map(str, s.rule.positions))}"
                f' excision={s.record.kind} result="{s.result}"'
            )
        return lines

    @classmethod
    def from_records(cls, lines: Sequence[str]) -> "ReductionTrace":
        import shlex

        fields = [dict(kv.split("=", 1) for kv in shlex.split(line)) for line in lines if line.strip()]
        head, rest = fields[0], fields[1:]
        data = {
            "initial": head["initial"],
            "steps": [
                {
                    "step": int(f["step"]),
                    "rule": f["rule"],
                    "pointers": [int(x) for x in f["pointers"].split(",")],
                    "positions": [int(x) for x in f["positions"].split(",")],
                    "excision": f["excision"],
                    "result": f["result"],
                }
                for f in rest
            ],
        }
        return cls.from_dict(data)

    def __str__(self):
        return "\n".join(self.to_records())


@dataclass
class Enumeration:
    """Traces found by :func:`enumerate_strategies`; ``truncated`` marks a partial list."""

    traces: list = field(default_factory=list)
    truncated: bool = False

    def __len__(self):
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    def __getitem__(self, i):
        return self.traces[i]


class Searcher:
    """Memoized reduction-graph search under one policy.

    Memo tables live as long as the searcher, so one instance can answer
    many related queries (e.g. a whole test universe) cheaply.
    """

    def __init__(self, policy: SearchPolicy | None = None):
        self.policy = policy or SearchPolicy()
        self._reducible: dict[tuple, bool] = {}
        self._count: dict[tuple, int] = {}
        self._depth: dict[tuple, int] = {}
        self.states_explored = 0
        self._budget_used = 0

    def reset_budget(self):
        """Start a fresh state budget for the next query; memo tables are kept."""
        self._budget_used = 0

    def _tick(self):
        self.states_explored += 1
        self._budget_used += 1
        if self._budget_used > self.policy.max_states:
            raise SearchLimitExceeded(f"explored more than {self.policy.max_states} states")

    def reducible(self, word: Sequence[int]) -> bool:
        word = tuple(word)
        memo = self._reducible
        if not word:
            return True
        hit = memo.get(word)
        if hit is not None:
            return hit
        self._tick()
        ok = any(self.reducible(child) for child in successor_words(word))
        memo[word] = ok
        return ok

    def count(self, word: Sequence[int]) -> int:
        word = tuple(word)
        if not word:
            return 1
        memo = self._count
        hit = memo.get(word)
        if hit is not None:
            return hit
        self._tick()
        n = 0
        for child in successor_words(word):
            n += self.count(child)
        memo[word] = n
        return n

    def depth(self, word: Sequence[int]) -> int:
        """Length of the longest rule sequence from ``word``."""
        word = tuple(word)
        if not word:
            return 0
        hit = self._depth.get(word)
        if hit is not None:
            return hit
        self._tick()
        d = max((1 + self.depth(c) for c in successor_words(word)), default=0)
        self._depth[word] = d
        return d

    def find(self, s: Sequence[int]) -> Optional[ReductionTrace]:
        trace = ReductionTrace(LegalString(s))
        if not self.reducible(trace.initial):
            return None
        state = tuple(trace.initial)
        steps = []
        while state:
            for rule in _rules(state):
                child = _rewrite(state, rule)
                if self.reducible(child):
                    break
            else:  # pragma: no cover - reducible() said otherwise
                raise AssertionError("reducible state without a reducible successor")
            steps.append(TraceStep(rule, LegalString(child), ExcisionRecord(EXCISION_KIND[rule.kind], rule.pointers)))
            state = child
        return ReductionTrace(trace.initial, tuple(steps))

    def longest(self, s: Sequence[int]) -> ReductionTrace:
        trace = ReductionTrace(LegalString(s))
        state = tuple(trace.initial)
        while state:
            best = None
            for rule in _rules(state):
                child = _rewrite(state, rule)
                d = self.depth(child)
                if best is None or d > best[0]:
                    best = (d, rule)
            if best is None:
                break
            trace = trace.extend(best[1])
            state = tuple(trace.final)
        return trace

    def enumerate(self, s: Sequence[int]) -> Enumeration:
        initial = LegalString(s)
        out = Enumeration()
        limit = self.policy.max_traces
        path: list[TraceStep] = []

        def walk(state):
            if not state:
                if len(out.traces) >= limit:
                    out.truncated = True
                    return False
                out.traces.append(ReductionTrace(initial, tuple(path)))
                return True
            for rule in _rules(state):
                child = _rewrite(state, rule)
                if not self.reducible(child):
                    continue
                path.append(TraceStep(rule, LegalString(child),
                                      ExcisionRecord(EXCISION_KIND[rule.kind], rule.pointers)))
                keep_going = walk(child)
                path.pop()
                if not keep_going:
                    return False
            return True

        walk(tuple(initial))
        return out


def _word(s) -> LegalString:
    if isinstance(s, str):
        return LegalString.parse(s)
    return s if isinstance(s, LegalString) else LegalString(s)


def is_reducible(s, policy: SearchPolicy | None = None) -> bool:
    """Whether some rule sequence takes ``s`` to the empty string."""
    return Searcher(policy).reducible(_word(s))


def find_strategy(s, policy: SearchPolicy | None = None) -> Optional[ReductionTrace]:
    """Lexicographically least successful trace (canonical rule order), or ``None``."""
    return Searcher(policy).find(_word(s))


def enumerate_strategies(s, policy: SearchPolicy | None = None) -> Enumeration:
    """All successful traces in canonical order, up to ``policy.max_traces``."""
    policy = policy or SearchPolicy(EXHAUSTIVE)
    if policy.mode != EXHAUSTIVE:
        raise ValueError("enumerate_strategies needs an exhaustive policy")
    return Searcher(policy).enumerate(_word(s))


def count_strategies(s, policy: SearchPolicy | None = None) -> int:
    """Number of distinct successful rule sequences, counted per state with memoization."""
    return Searcher(policy).count(_word(s))


def longest_trace(s, policy: SearchPolicy | None = None) -> ReductionTrace:
    """A longest rule sequence from ``s``; used to report partial progress."""
    return Searcher(policy).longest(_word(s))


def enumerate_legal_strings(max_pointers: int) -> Iterator[LegalString]:
    """Every legal string on pointers ``2..max_pointers+1`` with all sign patterns."""
    for row in legal_string_array(max_pointers):
        yield LegalString(row.tolist())


@dataclass
class VerifyReport:
    max_pointers: int
    total: int
    expected_total: int
    reducible: int
    histogram: dict
    disagreements: list
    states_explored: int

    @property
    def ok(self) -> bool:
        return not self.disagreements and self.total == self.expected_total

    def to_dict(self) -> dict:
        return {
            "max_pointers": self.max_pointers,
            "total": self.total,
            "expected_total": self.expected_total,
            "reducible": self.reducible,
            "strategy_histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "disagreements": [
                {"string": format_word(w), "search": list(a), "oracle": list(b)}
                for w, a, b in self.disagreements
            ],
            "states_explored": self.states_explored,
            "ok": self.ok,
        }


def verify_universe(max_pointers: int, policy: SearchPolicy | None = None,
                    universe: np.ndarray | None = None) -> VerifyReport:
    """Compare memoized search with the brute-force oracle on every legal string.

    Disagreements are listed shortest first.
    """
    if max_pointers > 4 and universe is None:
        raise ValueError("exhaustive verification is limited to max_pointers <= 4")
    policy = policy or SearchPolicy(EXHAUSTIVE)
    searcher = Searcher(policy)
    disagreements = []
    histogram: Counter = Counter()
    total = reducible = 0
    arr = legal_string_array(max_pointers) if universe is None else np.asarray(universe, np.int8)
    oracle_counts = oracle_reduce_batch(arr)
    for row, want in zip(arr.tolist(), oracle_counts.tolist()):
        word = tuple(row)
        searcher.reset_budget()
        ok = searcher.reducible(word)
        n = searcher.count(word)
        total += 1
        reducible += ok
        histogram[n] += 1
        if ok != (want > 0) or n != want:
            disagreements.append((word, (ok, n), (want > 0, want)))
    disagreements.sort(key=lambda d: (len(d[0]), d[0]))
    expected = universe_size(max_pointers) if universe is None else total
    return VerifyReport(max_pointers, total, expected, reducible, dict(histogram),
                        disagreements, searcher.states_explored)
