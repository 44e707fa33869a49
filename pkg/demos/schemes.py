"""Colored complete graphs, Jordan schemes and the J15 example.

A coloring of K_n that is triangle-regular makes the span of the color
matrices closed under the Jordan product.  J15 is a Jordan scheme that is
not the symmetrization of any coherent configuration; the ordered pair
signatures of two same-colored edges show why.
"""

import numpy as np

from gaussbinom import corpus
from gaussbinom.oracle import jordan_closure
from gaussbinom.schemes import (
    is_association_scheme,
    is_coherent_configuration,
    is_jordan_scheme,
    j15,
    j15_matrix,
    ordered_pair_signature,
    partition_of_graph,
    symmetrization_obstruction,
)

np.set_printoptions(linewidth=120)
print(j15_matrix())

g = j15()
P = partition_of_graph(g)
print("\nJordan scheme:", is_jordan_scheme(P) is not None)
print("coherent configuration:", is_coherent_configuration(P) is not None)
print("association scheme:", is_association_scheme(P))

for x, y in [("1", "2"), ("4", "5"), ("5", "4")]:
    sig = ordered_pair_signature(g, x, y)
    print(f"signature ({x},{y}):", sorted((a.label, b.label, n) for (a, b), n in sig.items()))
print("obstruction:", symmetrization_obstruction(g))

print()
for name in ["shrikhande", "j15", "k3-mono", "k3-distinct", "k4-matchings", "k4-irregular"]:
    print(f"{name:>14}: Jordan closed = {jordan_closure(corpus.load(name))}")
