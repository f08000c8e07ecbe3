"""Command-line front end.

Exit status: 0 success, 1 no strategy exists, 2 bad input, 3 search budget
exhausted, 4 search and oracle disagree.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Iterable

from .assembly import assemble
from .descriptor import (
    DescriptorError,
    DescriptorSyntaxError,
    format_gene,
    parse_gene,
    random_scrambled_gene,
    read_corpus,
    to_legal_string,
)
from .rewrite import LegalString, MalformedStringError
from .strategy import (
    EXHAUSTIVE,
    FIRST_SUCCESS,
    SearchLimitExceeded,
    SearchPolicy,
    Searcher,
    verify_universe,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_LIMIT = 3
EXIT_DISAGREE = 4


class InputError(Exception):
    pass


def _inputs(args) -> list[tuple[str, str]]:
    """``(where, text)`` pairs from the positional descriptor or ``--input``."""
    if args.descriptor and args.input:
        raise InputError("give either an inline descriptor or --input, not both")
    if args.descriptor:
        return [("<arg>", " ".join(args.descriptor))]
    if not args.input:
        raise InputError("no input: pass a descriptor or --input PATH")
    if args.input == "-":
        lines = sys.stdin.read().splitlines()
        name = "<stdin>"
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
        name = args.input
    items = [(f"{name}:{n}", text) for n, text in read_corpus(lines)]
    if not items:
        raise InputError(f"{name}: no descriptors found")
    return items


def _diagnose(where: str, text: str, exc: Exception) -> None:
    print(f"{where}: error: {exc}", file=sys.stderr)
    if isinstance(exc, DescriptorSyntaxError):
        print(f"  {text}", file=sys.stderr)
        print("  " + " " * exc.position + "^", file=sys.stderr)


def _load(where: str, text: str, raw: bool):
    """Parse one input; returns ``(gene or None, legal string)``."""
    if raw:
        return None, LegalString.parse(text)
    gene = parse_gene(text)
    return gene, to_legal_string(gene)


def _policy(args, mode=FIRST_SUCCESS) -> SearchPolicy:
    return SearchPolicy(mode, max_states=args.max_states, max_traces=args.max_traces)


def _emit(args, docs: list[dict], text: Iterable[str]) -> None:
    if args.format == "json":
        for doc in docs:
            print(json.dumps(doc))
    else:
        for line in text:
            print(line)


def cmd_parse(args) -> int:
    status = EXIT_OK
    for where, text in _inputs(args):
        try:
            gene, word = _load(where, text, args.raw)
        except (DescriptorError, MalformedStringError) as exc:
            _diagnose(where, text, exc)
            status = max(status, EXIT_INPUT)
            continue
        doc = {"legal_string": str(word)}
        lines = []
        if gene is not None:
            doc.update(descriptor=format_gene(gene), kappa=gene.kappa,
                       mds=len(gene.mds), ies=len(gene.ies))
            lines.append(f"descriptor:   {doc['descriptor']}")
            lines.append(f"kappa:        {gene.kappa} ({len(gene.mds)} MDSs, {len(gene.ies)} IESs)")
        lines.append(f"legal string: {word}")
        _emit(args, [doc], lines)
    return status


def cmd_assemble(args) -> int:
    status = EXIT_OK
    for where, text in _inputs(args):
        try:
            gene, word = _load(where, text, args.raw)
        except (DescriptorError, MalformedStringError) as exc:
            _diagnose(where, text, exc)
            status = max(status, EXIT_INPUT)
            continue
        try:
            if gene is None:
                searcher = Searcher(_policy(args))
                trace = searcher.find(word)
                ok = trace is not None
                trace = trace if ok else searcher.longest(word)
                doc = {"success": ok, "trace": trace.to_dict()}
                lines = [f"success:      {'yes' if ok else 'no'}", f"steps:        {len(trace)}",
                         "trace:"] + ["  " + r for r in trace.to_records()]
            else:
                result = assemble(gene, _policy(args))
                ok = result.success
                doc, lines = result.to_dict(), result.report().splitlines()
        except SearchLimitExceeded as exc:
            print(f"{where}: search limit: {exc}", file=sys.stderr)
            status = max(status, EXIT_LIMIT)
            continue
        _emit(args, [doc], lines)
        if not ok:
            status = max(status, EXIT_FAILED)
    return status


def cmd_strategies(args) -> int:
    status = EXIT_OK
    for where, text in _inputs(args):
        try:
            _, word = _load(where, text, args.raw)
        except (DescriptorError, MalformedStringError) as exc:
            _diagnose(where, text, exc)
            status = max(status, EXIT_INPUT)
            continue
        searcher = Searcher(_policy(args, EXHAUSTIVE))
        try:
            total = searcher.count(word)
            found = searcher.enumerate(word)
        except SearchLimitExceeded as exc:
            print(f"{where}: search limit: {exc}", file=sys.stderr)
            status = max(status, EXIT_LIMIT)
            continue
        doc = {"legal_string": str(word), "count": total, "reported": len(found),
               "truncated": found.truncated, "traces": [t.to_dict() for t in found]}
        lines = [f"legal string: {word}", f"strategies:   {total}"]
        if found.truncated:
            lines.append(f"reported:     first {len(found)} (--max-traces)")
        for n, trace in enumerate(found, 1):
            lines.append(f"strategy {n}: " + " ".join(str(r) for r in trace.rules))
        _emit(args, [doc], lines)
        if total == 0:
            status = max(status, EXIT_FAILED)
    return status


def cmd_random(args) -> int:
    docs, lines = [], [f"# random genes: kappa={args.kappa} inversion_prob={args.inversion_prob} seed={args.seed}"]
    for n in range(args.count):
        gene = random_scrambled_gene(args.kappa, args.inversion_prob, seed=[args.seed, n])
        docs.append({"descriptor": format_gene(gene), "legal_string": str(to_legal_string(gene))})
        lines.append(format_gene(gene))
    _emit(args, docs, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    if not 0 < args.max_pointers <= 4:
        print("error: --max-pointers must be between 1 and 4", file=sys.stderr)
        return EXIT_INPUT
    try:
        report = verify_universe(args.max_pointers, _policy(args, EXHAUSTIVE))
    except SearchLimitExceeded as exc:
        print(f"search limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    lines = [
        f"max pointers: {report.max_pointers}",
        f"total:        {report.total} (expected {report.expected_total})",
        f"reducible:    {report.reducible}",
        "strategy-count histogram:",
    ]
    lines += [f"  {k:>4}: {v}" for k, v in sorted(report.histogram.items())]
    lines.append(f"disagreements: {len(report.disagreements)}")
    if report.disagreements:
        word, got, want = report.disagreements[0]
        lines.append(f"counterexample: {' '.join(map(str, word))} search={got} oracle={want}")
    _emit(args, [report.to_dict()], lines)
    return EXIT_OK if report.ok else EXIT_DISAGREE


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ciliate-assembly",
                                     description="Simulate intramolecular gene assembly in ciliates.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-states", type=_positive, default=10**6)
    common.add_argument("--max-traces", type=_positive, default=10**4)

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("descriptor", nargs="*", help="inline descriptor, e.g. 'M2 M1 -M3'")
    source.add_argument("-i", "--input", help="corpus file, or '-' for stdin")
    source.add_argument("--raw", action="store_true",
                        help="inputs are legal strings like '2 3 -2 3', not descriptors")

    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, help_ in [
        ("parse", cmd_parse, "echo the canonical descriptor and legal string"),
        ("assemble", cmd_assemble, "find a strategy and replay it on the molecule"),
        ("strategies", cmd_strategies, "count and list successful strategies"),
    ]:
        p = sub.add_parser(name, parents=[common, source], help=help_)
        p.set_defaults(func=func)

    p = sub.add_parser("random", parents=[common], help="generate a seeded corpus of scrambled genes")
    p.add_argument("--kappa", type=_positive, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--inversion-prob", type=_probability, default=0.0)
    p.add_argument("--count", type=_positive, default=1)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("verify", parents=[common], help="compare search with the oracle on every small string")
    p.add_argument("--max-pointers", type=int, default=4)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
