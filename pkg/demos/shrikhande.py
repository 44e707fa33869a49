"""Triangle-regular is weaker than RCOP: the colored Shrikhande K16.

Run from the repository root with ``python demos/shrikhande.py``.
"""

import time

from gaussbinom import corpus
from gaussbinom.automorphism import transitivity
from gaussbinom.ideal import decide_binomial, lambda_classes
from gaussbinom.oracle import model_dimension
from gaussbinom.regularity import regularity_report
from gaussbinom.schemes import is_rcop, is_strongly_regular, shrikhande_graph

# The underlying Cayley graph on Z4 x Z4 is strongly regular with (6, 2, 2)
h = shrikhande_graph()
print("Shrikhande srg parameters:", is_strongly_regular(h))

# Color K16: one vertex color, edges by adjacency in the Shrikhande graph
g = corpus.load("shrikhande")
print(len(g), "vertices,", len(g.edges), "edges,", len(g.colors), "colors")

t0 = time.perf_counter()
rep = regularity_report(g)
print("vertex / edge / edge-triangle regular:", rep.vertex_regular, rep.edge_regular, rep.edge_triangle_regular)
print("binomial ideal:", decide_binomial(g).binomial)
print(f"decision took {time.perf_counter() - t0:.2f}s")

# The automorphism group is vertex transitive but does not act
# transitively on the edges of one color, so the coloring is not RCOP
t0 = time.perf_counter()
vt, et, _ = transitivity(g)
print("vertex transitive:", vt, " edge-color transitive:", et)
print("RCOP:", is_rcop(g), f"({time.perf_counter() - t0:.2f}s)")

# Every sigma_ij with the same colored geodesic is identified; K16 has
# three classes: the diagonal and the two edge colors
print("Lambda classes:", [len(c) for c in lambda_classes(g)])
print("model dimension:", model_dimension(g))
