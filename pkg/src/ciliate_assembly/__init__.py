"""Intramolecular gene assembly in ciliates: descriptors, pointer-string
reduction, strategy search and molecular replay."""
from importlib.resources import files

from .descriptor import (
    DescriptorError,
    DescriptorSyntaxError,
    IesSegment,
    MdsSegment,
    MicronuclearGene,
    format_gene,
    parse_gene,
    random_scrambled_gene,
    read_corpus,
    to_legal_string,
)
from .rewrite import (
    ExcisionRecord,
    LegalString,
    MalformedStringError,
    Pointer,
    RewriteRule,
    RuleNotApplicable,
    applicable_rules,
    apply_rule,
    invert_interval,
)
from .oracle import oracle_reduce, oracle_reduce_batch
from .strategy import (
    EXHAUSTIVE,
    FIRST_SUCCESS,
    ReductionTrace,
    SearchLimitExceeded,
    SearchPolicy,
    count_strategies,
    enumerate_legal_strings,
    enumerate_strategies,
    find_strategy,
    is_reducible,
    verify_universe,
)
from .assembly import AssemblyResult, AssemblyState, apply_molecular, assemble, init_state, project

ACTIN_I = "M3 M4 M6 M5 M7 M9 -M2 M1 M8"


def corpus_path():
    return files(__name__) / "data" / "corpus.txt"


def load_corpus() -> list[MicronuclearGene]:
    text = corpus_path().read_text(encoding="utf-8")
    return [parse_gene(line) for _, line in read_corpus(text.splitlines())]


__version__ = "0.1.0"
