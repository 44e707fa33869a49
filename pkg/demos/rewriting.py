"""Generators of a binomial ideal and a certificate of membership.

On a triangle-regular block graph every binomial in the kernel of psi is
reached by rewriting multisets of geodesics with two kinds of moves:
replacing a path by an isomorphic one, and swapping tails at a shared
vertex.  This walk-through prints the generators of a small graph, then a
rewrite trace for one quadratic generator.
"""

from gaussbinom import corpus
from gaussbinom.ideal import (
    generators_document,
    kernel_membership,
    psi_image,
    quadratic_generators,
    rewrite_paths,
)
from gaussbinom.graphs import serialize_graph

g = corpus.load("glued-triangles")
print(serialize_graph(g))

doc = generators_document(g)
print(len(doc["linear"]), "linear and", len(doc["quadratic"]), "quadratic generators")
for entry in doc["linear"][:4]:
    print("  linear   ", entry)
for entry in doc["quadratic"][:4]:
    print("  quadratic", entry)

# psi sends each monomial to the product of colors along its geodesics
b = quadratic_generators(g)[0]
print("\nbinomial:", b)
print("psi(lhs) =", psi_image(g, b.lhs))
print("psi(rhs) =", psi_image(g, b.rhs))

cert = kernel_membership(g, b)
print("\nin the kernel:", cert.in_kernel, " strategy:", cert.trace.strategy)
for mv in cert.trace.moves:
    print(" ", mv.kind, mv.before, "->", mv.after, "" if mv.x is None else f"at {mv.x}")

# rewriting arbitrary multisets with the same colors
A = [("1", "3", "4"), ("5",)]
B = [("2", "3", "5"), ("1",)]
trace = rewrite_paths(g, A, B)
print("\n", A, "=>", B, "in", len(trace.moves), "moves")
for mv in trace.moves:
    print(" ", mv.kind, mv.before, "->", mv.after)
