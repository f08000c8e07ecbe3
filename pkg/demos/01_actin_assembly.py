"""
Assembling the actin I gene of Oxytricha nova
=============================================

The micronuclear copy holds nine MDSs in the order 3 4 6 5 7 9 2 1 8 with
MDS 2 inverted, separated by eight IESs.  We compile it to a pointer
string, find a strategy and replay it on the molecule.
"""

from ciliate_assembly import ACTIN_I, assemble, count_strategies, parse_gene, to_legal_string

gene = parse_gene(ACTIN_I)
print("descriptor   ", gene)
print("MDSs / IESs  ", len(gene.mds), "/", len(gene.ies))

# Each MDS i carries pointer i at its start and i+1 at its end; the start
# of MDS 1 and the end of MDS 9 are not pointers.
word = to_legal_string(gene)
print("legal string ", word)

# %%
# The first strategy in canonical order (loop, hairpin, double loop).
result = assemble(gene)
print()
print(result.report())

# %%
# Molecule after every step.
print()
for step, snapshot in zip(["start"] + [str(r) for r in result.trace.rules], result.state.snapshots):
    print(f"{step:>24}  ", " ".join(map(str, snapshot)))

# %%
# How many distinct rule sequences reduce this string?
print()
print("successful strategies:", count_strategies(word))
