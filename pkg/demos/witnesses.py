"""Why a four-cycle gives a non-binomial ideal.

The witness is a determinant of a submatrix of Sigma that vanishes on the
model.  Expanding each monomial as a walk series and grading by the number
of edges shows one monomial whose lowest term no other monomial can
cancel, so no binomial combination produces the determinant.
"""

from gaussbinom import corpus
from gaussbinom.oracle import monomial_signature, numeric_vanish, witness_nonbinomial, witness_partners

for name in ["c4", "c5", "path-irregular", "k4-irregular"]:
    g = corpus.load(name)
    w = witness_nonbinomial(g)
    print(f"{name}: case {w.case}, vertices {w.vertices}, {len(w.polynomial)} terms")
    print("  vanishes exactly at rational samples:", numeric_vanish(g, w.polynomial, rational=True))
    print("  distinguished monomial:", w.monomial)
    print("  partners through edge degree", w.degree_bound, ":", witness_partners(g, w))

# The lowest edge-degree component of the distinguished monomial in C4
g = corpus.load("c4")
w = witness_nonbinomial(g)
print("\nC4, degree", w.distance, "component:", monomial_signature(g, w.monomial, w.distance).component(w.distance))
