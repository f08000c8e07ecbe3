"""Segment-level simulation of gene assembly.

The main molecule is a list of MDS and IES segments.  To apply a rule it is
expanded into tokens (pointer, MDS body, pointer, IES, ...), the string
rewrite is applied to that token list with the non-pointer material carried
along, and MDS bodies left touching across a removed pointer are merged into
one composite.

A loop whose two occurrences are the incoming end of MDS ``p..kappa`` and the
outgoing end of MDS ``1..p-1`` closes the whole gene on itself.  Those two
MDSs are merged on the main molecule and the IESs between them stay as end
residue; no circle is produced in that case.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .descriptor import (
    IesSegment,
    MdsSegment,
    MicronuclearGene,
    format_segments,
    segments_to_pointers,
    to_legal_string,
)
from .rewrite import (
    DOUBLE_LOOP,
    HAIRPIN,
    LOOP,
    LegalString,
    RewriteRule,
    RuleNotApplicable,
    apply_rule,
)
from .strategy import ReductionTrace, SearchPolicy, Searcher, TraceStep

__all__ = [
    "AssemblyState",
    "AssemblyResult",
    "AssemblyError",
    "init_state",
    "project",
    "apply_molecular",
    "replay",
    "assemble",
    "canonical_circle",
    "is_assembled",
]

_PTR, _MDS, _IES = 0, 1, 2


class AssemblyError(RuntimeError):
    pass


def canonical_circle(labels) -> tuple:
    """Lexicographically least rotation of a circular sequence."""
    labels = tuple(labels)
    if not labels:
        return labels
    return min(labels[i:] + labels[:i] for i in range(len(labels)))


@dataclass(frozen=True)
class AssemblyState:
    linear: tuple
    kappa: int
    circles: tuple = ()
    trace: Optional[ReductionTrace] = None
    snapshots: tuple = ()

    @property
    def mds(self) -> list[MdsSegment]:
        return [s for s in self.linear if isinstance(s, MdsSegment)]

    def covered(self) -> list[int]:
        """Sorted MDS indices on the main molecule and in circles."""
        out = [i for s in self.mds for i in s.indices]
        for circle in self.circles:
            out.extend(i for s in circle if isinstance(s, MdsSegment) for i in s.indices)
        return sorted(out)

    def __str__(self):
        return format_segments(self.linear)


def init_state(gene: MicronuclearGene) -> AssemblyState:
    return AssemblyState(gene.segments, gene.kappa, (),
                         ReductionTrace(to_legal_string(gene)), (gene.segments,))


def project(state: AssemblyState) -> LegalString:
    return LegalString(segments_to_pointers(state.linear, state.kappa))


def is_assembled(state: AssemblyState) -> bool:
    mds = state.mds
    return len(mds) == 1 and mds[0].lo == 1 and mds[0].hi == state.kappa


def _expand(segments, kappa) -> list[tuple]:
    tokens = []
    for seg in segments:
        if isinstance(seg, IesSegment):
            tokens.append((_IES, seg))
            continue
        left, right = (seg.lo, seg.hi + 1) if not seg.inverted else (-(seg.hi + 1), -seg.lo)
        if abs(left) not in (1, kappa + 1):
            tokens.append((_PTR, left))
        tokens.append((_MDS, seg))
        if abs(right) not in (1, kappa + 1):
            tokens.append((_PTR, right))
    return tokens


def _invert_tokens(tokens) -> list[tuple]:
    out = []
    for kind, x in reversed(tokens):
        if kind == _PTR:
            out.append((_PTR, -x))
        elif kind == _MDS:
            out.append((_MDS, x.flipped()))
        else:
            out.append((kind, x))
    return out


def _merge(a: MdsSegment, b: MdsSegment) -> Optional[MdsSegment]:
    if not a.inverted and not b.inverted and a.hi + 1 == b.lo:
        return MdsSegment(a.lo, b.hi, False)
    if a.inverted and b.inverted and b.hi + 1 == a.lo:
        return MdsSegment(b.lo, a.hi, True)
    return None


def _collapse(tokens) -> list:
    """Tokens back to segments, merging MDS bodies that touch directly."""
    out: list = []
    prev_mds = False
    for kind, x in tokens:
        if kind == _PTR:
            prev_mds = False
            continue
        if kind == _MDS:
            if prev_mds:
                merged = _merge(out[-1], x)
                if merged is not None:
                    out[-1] = merged
                    continue
            out.append(x)
            prev_mds = True
        else:
            out.append(x)
            prev_mds = False
    return out


def _pointer_slots(tokens) -> list[int]:
    return [n for n, (kind, _) in enumerate(tokens) if kind == _PTR]


def apply_molecular(state: AssemblyState, rule: RewriteRule) -> AssemblyState:
    """Apply ``rule`` to the main molecule.

    The pointer string of the result always equals ``apply_rule`` on the
    pointer string of ``state``.
    """
    word = project(state)
    result, record = apply_rule(word, rule)
    tokens = _expand(state.linear, state.kappa)
    slots = _pointer_slots(tokens)
    at = [slots[i] for i in rule.positions]
    circles = list(state.circles)

    if rule.kind == LOOP:
        a, b = at
        head, inside, tail = tokens[:a], tokens[a + 1:b], tokens[b + 1:]
        bodies = [n for n, (kind, _) in enumerate(inside) if kind == _MDS]
        if bodies:
            # the loop closes the whole gene; merge its two ends in place
            first, last = inside[bodies[0]][1], inside[bodies[-1]][1]
            merged = _merge(last, first)
            if merged is None or len(bodies) != 2:
                raise AssemblyError(f"{rule}: cannot close loop over {format_segments(x for _, x in inside)}")
            residue = inside[bodies[0] + 1:bodies[-1]]
            new_tokens = head + [(_MDS, merged)] + residue + tail
        else:
            new_tokens = head + tail
            if inside:
                circle = tuple(x for _, x in inside)
                circles.append(_canonical_segments(circle))
    elif rule.kind == HAIRPIN:
        a, b = at
        new_tokens = tokens[:a] + _invert_tokens(tokens[a + 1:b]) + tokens[b + 1:]
    elif rule.kind == DOUBLE_LOOP:
        i, j, k, l = at
        new_tokens = (tokens[:i] + tokens[k + 1:l] + tokens[j + 1:k]
                      + tokens[i + 1:j] + tokens[l + 1:])
    else:  # pragma: no cover
        raise RuleNotApplicable(rule.kind)

    linear = tuple(_collapse(new_tokens))
    trace = state.trace or ReductionTrace(word)
    trace = ReductionTrace(trace.initial, trace.steps + (TraceStep(rule, result, record),))
    new = AssemblyState(linear, state.kappa, tuple(circles), trace,
                        state.snapshots + (linear,))
    if project(new) != result:
        raise AssemblyError(f"{rule}: molecule {new} does not project to {result}")
    return new


def _canonical_segments(circle: tuple) -> tuple:
    keys = [(0, s.label) if isinstance(s, IesSegment) else (1, s.lo, s.hi, s.inverted) for s in circle]
    best = min(range(len(circle)), key=lambda i: keys[i:] + keys[:i])
    return circle[best:] + circle[:best]


def replay(gene: MicronuclearGene, rules) -> AssemblyState:
    state = init_state(gene)
    for rule in rules:
        state = apply_molecular(state, rule)
    return state


@dataclass
class AssemblyResult:
    success: bool
    gene: MicronuclearGene
    state: AssemblyState
    trace: ReductionTrace
    notes: list = field(default_factory=list)

    @property
    def macronuclear(self) -> tuple:
        return self.state.linear

    @property
    def circles(self) -> tuple:
        return self.state.circles

    @property
    def composite(self) -> Optional[MdsSegment]:
        mds = self.state.mds
        return mds[0] if len(mds) == 1 else None

    def report(self) -> str:
        lines = [
            f"gene:         {self.gene}",
            f"kappa:        {self.gene.kappa}",
            f"success:      {'yes' if self.success else 'no'}",
            f"macronuclear: {format_segments(self.macronuclear)}",
        ]
        comp = self.composite
        if comp is not None:
            lines.append(f"composite:    {'-' if comp.inverted else ''}M{comp.lo}..{comp.hi}")
        lines.append(f"steps:        {len(self.trace)}")
        lines.append(f"circles:      {len(self.circles)}")
        for c in self.circles:
            lines.append("  (" + " ".join(f"I{s.label}" if isinstance(s, IesSegment) else str(s) for s in c) + ")")
        lines.extend(f"note:         {n}" for n in self.notes)
        lines.append("trace:")
        lines.extend("  " + r for r in self.trace.to_records())
        return "\n".join(lines)

    def to_dict(self) -> dict:
        data = self.trace.to_dict()
        for step, snap in zip(data["steps"], self.state.snapshots[1:]):
            step["segments"] = format_segments(snap)
        comp = self.composite
        return {
            "gene": str(self.gene),
            "kappa": self.gene.kappa,
            "success": self.success,
            "macronuclear": format_segments(self.macronuclear),
            "composite": None if comp is None else {"lo": comp.lo, "hi": comp.hi, "inverted": comp.inverted},
            "circles": [[s.label for s in c if isinstance(s, IesSegment)] for c in self.circles],
            "notes": list(self.notes),
            "trace": data,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def assemble(gene: MicronuclearGene, policy: SearchPolicy | None = None) -> AssemblyResult:
    """Find a strategy for ``gene`` and replay it on the molecule.

    Raises :class:`~ciliate_assembly.strategy.SearchLimitExceeded` if the
    state budget runs out.  Without a successful strategy the longest
    partial trace is replayed instead.
    """
    searcher = Searcher(policy)
    word = to_legal_string(gene)
    trace = searcher.find(word)
    success = trace is not None
    if trace is None:
        trace = searcher.longest(word)
    state = replay(gene, trace.rules)
    notes = []
    ends = (state.linear[0], state.linear[-1])
    if any(isinstance(s, IesSegment) for s in ends):
        notes.append("IESs outside the assembled gene are kept on the main molecule")
    if success and not is_assembled(state):  # pragma: no cover - guarded by tests
        raise AssemblyError("string reduced to empty but molecule is not assembled")
    return AssemblyResult(success and is_assembled(state), gene, state, trace, notes)
