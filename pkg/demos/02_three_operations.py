"""
The three operations on small molecules
=======================================

Loop removes an IES between MDSs already in order, releasing a circle.
Hairpin resolves a pointer whose two copies face opposite ways.
Double loop swaps the blocks between two interleaved direct pointers.
"""

from ciliate_assembly import apply_molecular, init_state, parse_gene, project
from ciliate_assembly.rewrite import RewriteRule, applicable_rules


def show(descriptor, rule=None):
    state = init_state(parse_gene(descriptor))
    word = project(state)
    rule = rule or applicable_rules(word)[0]
    after = apply_molecular(state, rule)
    print(f"{descriptor:<12} {'[' + str(word) + ']':<15} {str(rule):<26} "
          f"{' '.join(map(str, after.linear)):<16} [{project(after)}]  circles={len(after.circles)}")


show("M1 M2")                                        # loop
show("M1 -M2")                                       # hairpin
show("M2 M1 M3")                                     # double loop: 2 3 2 3
show("M1 M3 M2 M4")                                  # 2 3 4 2 3 4: a double loop opens the way
show("M1 M2", RewriteRule.loop(2, 0))

# %%
# Applicable rules are listed in a fixed order, so searches are reproducible.
word = project(init_state(parse_gene("M3 M4 M6 M5 M7 M9 -M2 M1 M8")))
for rule in applicable_rules(word):
    print(rule)
