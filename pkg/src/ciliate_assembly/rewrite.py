"""Signed double-occurrence pointer strings and the three assembly operations.

A pointer occurrence is stored as a signed int: ``3`` is pointer 3, ``-3``
its inversion.  Rules bind to concrete positions so a trace can be replayed
exactly:

* ``loop``         ``u p p v``                     -> ``u v``
* ``hairpin``      ``u1 p u2 -p u3``               -> ``u1 inv(u2) u3``
* ``double_loop``  ``u1 p u2 q u3 p u4 q u5``      -> ``u1 u4 u3 u2 u5``

Loop and double loop need each pair in one orientation (both plain or both
inverted); hairpin needs opposite orientations.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "Pointer",
    "LegalString",
    "RewriteRule",
    "ExcisionRecord",
    "MalformedStringError",
    "RuleNotApplicable",
    "LOOP",
    "HAIRPIN",
    "DOUBLE_LOOP",
    "applicable_rules",
    "apply_rule",
    "invert_interval",
    "format_word",
    "parse_word",
]

LOOP = "loop"
HAIRPIN = "hairpin"
DOUBLE_LOOP = "double_loop"
RULE_KINDS = (LOOP, HAIRPIN, DOUBLE_LOOP)
_RANK = {k: n for n, k in enumerate(RULE_KINDS)}

EXCISION_KIND = {LOOP: "circular", HAIRPIN: "inverted-in-place", DOUBLE_LOOP: "translocated"}


class MalformedStringError(ValueError):
    pass


class RuleNotApplicable(ValueError):
    pass


class Pointer(NamedTuple):
    value: int
    inverted: bool = False

    @classmethod
    def from_signed(cls, x: int) -> "Pointer":
        return cls(abs(x), x < 0)

    @property
    def signed(self) -> int:
        return -self.value if self.inverted else self.value

    def __str__(self):
        return str(self.signed)


def format_word(word: Iterable[int]) -> str:
    return " ".join(str(x) for x in word)


def parse_word(text: str) -> tuple[int, ...]:
    # accept the combining overbar as well as a leading minus
    out = []
    for tok in text.replace(",", " ").split():
        if tok.endswith("̄"):
            tok = "-" + tok[:-1]
        try:
            out.append(int(tok))
        except ValueError:
            raise MalformedStringError(f"not a pointer: {tok!r}") from None
    return tuple(out)


def _check_word(word: Sequence[int]) -> None:
    counts = Counter(abs(x) for x in word)
    for value, n in counts.items():
        if value < 2:
            raise MalformedStringError(f"pointer values start at 2, got {value}")
        if n != 2:
            raise MalformedStringError(f"pointer {value} occurs {n} time(s), expected 2")


class LegalString(tuple):
    """Immutable signed double-occurrence string.

    >>> LegalString.parse("2 3 -2")
    LegalString('2 3 -2')
    """

    __slots__ = ()

    def __new__(cls, symbols: Iterable[int] = ()):
        symbols = tuple(int(x) for x in symbols)
        _check_word(symbols)
        return super().__new__(cls, symbols)

    @classmethod
    def parse(cls, text: str) -> "LegalString":
        return cls(parse_word(text))

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"LegalString({str(self)!r})"

    @property
    def pointers(self) -> list[Pointer]:
        return [Pointer.from_signed(x) for x in self]

    @property
    def values(self) -> set[int]:
        return {abs(x) for x in self}


@dataclass(frozen=True)
class RewriteRule:
    kind: str
    pointers: tuple
    positions: tuple

    def __post_init__(self):
        if self.kind not in _RANK:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        want = 2 if self.kind == DOUBLE_LOOP else 1
        if len(self.pointers) != want or len(self.positions) != 2 * want:
            raise ValueError(f"malformed {self.kind} rule")

    @classmethod
    def loop(cls, p: int, i: int) -> "RewriteRule":
        return cls(LOOP, (p,), (i, i + 1))

    @classmethod
    def hairpin(cls, p: int, i: int, j: int) -> "RewriteRule":
        return cls(HAIRPIN, (p,), (i, j))

    @classmethod
    def double_loop(cls, p: int, q: int, i: int, j: int, k: int, l: int) -> "RewriteRule":
        return cls(DOUBLE_LOOP, (p, q), (i, j, k, l))

    def sort_key(self):
        return (_RANK[self.kind], self.pointers, self.positions)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        name = {LOOP: "Loop", HAIRPIN: "Hairpin", DOUBLE_LOOP: "DoubleLoop"}[self.kind]
        return f"{name}({','.join(map(str, self.pointers))})@{','.join(map(str, self.positions))}"


@dataclass(frozen=True)
class ExcisionRecord:
    kind: str
    pointers: tuple


def _rules(word: Sequence[int]) -> list[RewriteRule]:
    """Applicable rules in canonical order; ``word`` is assumed legal."""
    where: dict[int, list[int]] = {}
    for i, x in enumerate(word):
        where.setdefault(abs(x), []).append(i)
    loops, hairpins, direct = [], [], []
    for p in sorted(where):
        i, j = where[p]
        if word[i] == word[j]:
            direct.append((i, j, p))
            if j == i + 1:
                loops.append(RewriteRule(LOOP, (p,), (i, j)))
        else:
            hairpins.append(RewriteRule(HAIRPIN, (p,), (i, j)))
    doubles = []
    for i, k, p in direct:
        for j, l, q in direct:
            if i < j < k < l:
                doubles.append(RewriteRule(DOUBLE_LOOP, (p, q), (i, j, k, l)))
    doubles.sort(key=RewriteRule.sort_key)
    return loops + hairpins + doubles


def applicable_rules(s: Sequence[int]) -> list[RewriteRule]:
    """Every rule instance that applies to ``s``, in canonical order
    (loop, hairpin, double loop; then pointer value)."""
    _check_word(s)
    return _rules(s)


def _invert(block: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(block))


def invert_interval(s: Sequence[int], i: int, j: int):
    """Reverse ``s[i:j]`` and flip every orientation inside it."""
    if not 0 <= i <= j <= len(s):
        raise IndexError(f"interval [{i}, {j}) outside 0..{len(s)}")
    out = tuple(s[:i]) + _invert(s[i:j]) + tuple(s[j:])
    return LegalString(out) if isinstance(s, LegalString) else out


def _check_binding(word: Sequence[int], rule: RewriteRule) -> None:
    pos = rule.positions
    n = len(word)
    if any(not 0 <= x < n for x in pos) or list(pos) != sorted(set(pos)):
        raise RuleNotApplicable(f"{rule}: stale binding for string of length {n}")
    if rule.kind == DOUBLE_LOOP:
        p, q = rule.pointers
        i, j, k, l = pos
        ok = (abs(word[i]) == p and word[i] == word[k]
              and abs(word[j]) == q and word[j] == word[l] and p != q)
    else:
        (p,) = rule.pointers
        i, j = pos
        ok = abs(word[i]) == p and abs(word[j]) == p
        if rule.kind == LOOP:
            ok = ok and j == i + 1 and word[i] == word[j]
        else:
            ok = ok and word[i] == -word[j]
    if not ok:
        raise RuleNotApplicable(f"{rule} does not apply to {format_word(word)!r}")


def _rewrite(word: Sequence[int], rule: RewriteRule) -> tuple[int, ...]:
    w = tuple(word)
    if rule.kind == LOOP:
        i, j = rule.positions
        return w[:i] + w[j + 1:]
    if rule.kind == HAIRPIN:
        i, j = rule.positions
        return w[:i] + _invert(w[i + 1:j]) + w[j + 1:]
    i, j, k, l = rule.positions
    return w[:i] + w[k + 1:l] + w[j + 1:k] + w[i + 1:j] + w[l + 1:]


def apply_rule(s: Sequence[int], rule: RewriteRule) -> tuple[LegalString, ExcisionRecord]:
    """Apply ``rule`` at its bound positions.  Raises :class:`RuleNotApplicable`
    when the binding does not match ``s``."""
    _check_binding(s, rule)
    out = LegalString(_rewrite(s, rule))
    return out, ExcisionRecord(EXCISION_KIND[rule.kind], rule.pointers)


def successor_words(word: tuple) -> list[tuple]:
    """Results of every applicable rule, canonical order, without rule objects.

    Hot path for memoized search; ``word`` must already be legal.
    """
    where: dict[int, list[int]] = {}
    for i, x in enumerate(word):
        where.setdefault(abs(x), []).append(i)
    loops, hairpins, direct = [], [], []
    for p in sorted(where):
        i, j = where[p]
        if word[i] == word[j]:
            direct.append((i, j))
            if j == i + 1:
                loops.append(word[:i] + word[j + 1:])
        else:
            hairpins.append(word[:i] + _invert(word[i + 1:j]) + word[j + 1:])
    doubles = []
    for i, k in direct:
        for j, l in direct:
            if i < j < k < l:
                doubles.append(word[:i] + word[k + 1:l] + word[j + 1:k] + word[i + 1:j] + word[l + 1:])
    return loops + hairpins + doubles
