"""
How many ways to assemble?
==========================

Every legal string on up to four pointers is enumerated and the number of
successful strategies counted twice: by memoized search and by a brute
force oracle.  Then random scrambled genes of growing size are sampled.
"""

import numpy as np

from ciliate_assembly import count_strategies, random_scrambled_gene, to_legal_string, verify_universe

for m in range(1, 5):
    report = verify_universe(m)
    counts = np.repeat(list(report.histogram), list(report.histogram.values()))
    print(f"{m} pointers: {report.total:>7} strings, reducible {report.reducible:>7}, "
          f"strategies median {np.median(counts):.0f} max {counts.max()}, "
          f"disagreements {len(report.disagreements)}")

# %%
rng = np.random.default_rng(0)
for kappa in range(2, 10):
    samples = [count_strategies(to_legal_string(random_scrambled_gene(kappa, 0.3, seed=rng.integers(2**32))))
               for _ in range(50)]
    print(f"kappa={kappa}: strategies per gene min {min(samples)} median {int(np.median(samples))} max {max(samples)}")
