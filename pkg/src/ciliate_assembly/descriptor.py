"""Micronuclear gene descriptors.

A descriptor is a whitespace-separated list of tokens::

    M3 M4 M6 M5 M7 M9 -M2 M1 M8

``Mi`` is MDS ``i``, ``-Mi`` the same MDS inverted, ``I`` an explicit IES.
When no ``I`` token is written, one IES is placed between every pair of
consecutive MDS tokens.  Composite (already merged) MDSs print as
``Mlo..hi`` and are accepted back by the parser.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

import numpy as np

from .rewrite import LegalString

__all__ = [
    "MdsSegment",
    "IesSegment",
    "Segment",
    "MicronuclearGene",
    "DescriptorError",
    "DescriptorSyntaxError",
    "parse_gene",
    "format_gene",
    "format_segments",
    "segments_to_pointers",
    "to_legal_string",
    "random_scrambled_gene",
    "read_corpus",
]


class DescriptorError(ValueError):
    """Raised for descriptors that parse but violate a gene invariant."""


class DescriptorSyntaxError(DescriptorError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at column {position + 1})")
        self.position = position


@dataclass(frozen=True, order=True)
class MdsSegment:
    lo: int
    hi: int
    inverted: bool = False

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise DescriptorError(f"bad MDS span {self.lo}..{self.hi}")

    def __str__(self):
        body = f"M{self.lo}" if self.lo == self.hi else f"M{self.lo}..{self.hi}"
        return ("-" if self.inverted else "") + body

    def flipped(self) -> "MdsSegment":
        return MdsSegment(self.lo, self.hi, not self.inverted)

    @property
    def indices(self) -> range:
        return range(self.lo, self.hi + 1)


@dataclass(frozen=True, order=True)
class IesSegment:
    label: int

    def __str__(self):
        return "I"


Segment = Union[MdsSegment, IesSegment]


@dataclass(frozen=True)
class MicronuclearGene:
    segments: tuple
    kappa: int

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        _check_gene(self.segments, self.kappa)

    @property
    def mds(self) -> list[MdsSegment]:
        return [s for s in self.segments if isinstance(s, MdsSegment)]

    @property
    def ies(self) -> list[IesSegment]:
        return [s for s in self.segments if isinstance(s, IesSegment)]

    def __str__(self):
        return format_gene(self)


def _check_gene(segments, kappa):
    if kappa < 1:
        raise DescriptorError("a gene needs at least one MDS")
    seen: dict[int, MdsSegment] = {}
    labels = set()
    for seg in segments:
        if isinstance(seg, IesSegment):
            if seg.label in labels:
                raise DescriptorError(f"duplicate IES label {seg.label}")
            labels.add(seg.label)
            continue
        for i in seg.indices:
            if i > kappa:
                raise DescriptorError(f"MDS index {i} exceeds kappa={kappa}")
            if i in seen:
                raise DescriptorError(f"duplicate MDS index {i}")
            seen[i] = seg
    missing = [i for i in range(1, kappa + 1) if i not in seen]
    if missing:
        raise DescriptorError(f"missing MDS index {missing[0]}")


_TOKEN = re.compile(r"(-?)M(\d+)(?:\.\.(\d+))?$")


def _tokens(text: str) -> Iterator[tuple[int, str]]:
    for m in re.finditer(r"\S+", text):
        yield m.start(), m.group()


def parse_gene(text: str, kappa: int | None = None) -> MicronuclearGene:
    """Parse a descriptor into a gene.

    ``kappa`` optionally declares the number of MDSs; otherwise it is the
    largest index written.  Adjacent explicit IESs are coalesced.
    """
    raw: list = []
    explicit = False
    for pos, tok in _tokens(text):
        if tok == "I":
            explicit = True
            if raw and isinstance(raw[-1], IesSegment):
                continue
            raw.append(IesSegment(0))
            continue
        m = _TOKEN.match(tok)
        if m is None:
            raise DescriptorSyntaxError(f"unexpected token {tok!r}", pos)
        lo = int(m.group(2))
        hi = int(m.group(3)) if m.group(3) else lo
        if lo == 0:
            raise DescriptorSyntaxError("MDS indices start at 1", pos)
        if hi < lo:
            raise DescriptorSyntaxError(f"empty MDS span {lo}..{hi}", pos)
        if kappa is not None and hi > kappa:
            raise DescriptorSyntaxError(f"MDS index {hi} exceeds kappa={kappa}", pos)
        raw.append((MdsSegment(lo, hi, m.group(1) == "-"), pos))
    if not raw:
        raise DescriptorSyntaxError("empty descriptor", 0)
    if not any(isinstance(r, tuple) for r in raw):
        raise DescriptorSyntaxError("descriptor has no MDS", 0)

    # duplicates are reported against the offending token
    seen = set()
    for r in raw:
        if isinstance(r, tuple):
            seg, pos = r
            for i in seg.indices:
                if i in seen:
                    raise DescriptorSyntaxError(f"duplicate MDS index {i}", pos)
                seen.add(i)

    segments: list = []
    label = 0
    for r in raw:
        if isinstance(r, IesSegment):
            label += 1
            segments.append(IesSegment(label))
            continue
        if not explicit and segments:
            label += 1
            segments.append(IesSegment(label))
        segments.append(r[0])
    if kappa is None:
        kappa = max(s.hi for s in segments if isinstance(s, MdsSegment))
    return MicronuclearGene(tuple(segments), kappa)


def _implicit_layout(segments) -> bool:
    """True when IESs sit exactly between consecutive MDSs and nowhere else."""
    expect_mds = True
    for seg in segments:
        if isinstance(seg, MdsSegment) != expect_mds:
            return False
        expect_mds = not expect_mds
    return not expect_mds


def format_segments(segments: Iterable[Segment]) -> str:
    return " ".join(str(s) for s in segments)


def format_gene(gene: MicronuclearGene) -> str:
    if _implicit_layout(gene.segments):
        return format_segments(gene.mds)
    return format_segments(gene.segments)


def segments_to_pointers(segments: Iterable[Segment], kappa: int) -> list[int]:
    """Signed pointer sequence of a molecule, markers of MDS 1 and kappa dropped."""
    out: list[int] = []
    for seg in segments:
        if isinstance(seg, IesSegment):
            continue
        if seg.inverted:
            if seg.hi < kappa:
                out.append(-(seg.hi + 1))
            if seg.lo > 1:
                out.append(-seg.lo)
        else:
            if seg.lo > 1:
                out.append(seg.lo)
            if seg.hi < kappa:
                out.append(seg.hi + 1)
    return out


def to_legal_string(gene: MicronuclearGene) -> LegalString:
    return LegalString(segments_to_pointers(gene.segments, gene.kappa))


def random_scrambled_gene(kappa: int, inversion_prob: float = 0.0, seed=None) -> MicronuclearGene:
    """Uniformly permuted gene with each MDS inverted independently."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    if not 0.0 <= inversion_prob <= 1.0:
        raise ValueError("inversion_prob must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    order = rng.permutation(kappa) + 1
    flips = rng.random(kappa) < inversion_prob
    segments: list = []
    for n, (i, inv) in enumerate(zip(order.tolist(), flips.tolist())):
        if n:
            segments.append(IesSegment(n))
        segments.append(MdsSegment(i, i, bool(inv)))
    return MicronuclearGene(tuple(segments), kappa)


def read_corpus(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    """Yield ``(line_number, descriptor)`` for the non-comment lines of a corpus."""
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        yield n, line
