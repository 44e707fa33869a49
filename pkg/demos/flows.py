"""Minors of a walk-sum matrix as ratios of signed flows.

For a weighted digraph with arc matrix W, M = (I - W)^-1 counts weighted
walks.  A minor of M equals the signed weight of vertex-disjoint path
systems with disjoint cycles, divided by the signed weight of disjoint
cycle collections.
"""

import numpy as np

from gaussbinom import corpus
from gaussbinom.flows import WeightedDigraph, enumerate_flows, lift, random_digraph, talaska_minor
from gaussbinom.oracle import make_rng

# two vertices and a two-cycle: M_01 = s / (1 - st)
s, t = 0.3, -0.7
dg = WeightedDigraph(2, {(0, 1): s, (1, 0): t})
print("two-cycle:", talaska_minor(dg, [0], [1]), "expected", s / (1 - s * t))

rng = make_rng(5)
dg = random_digraph(rng, 5, density=0.8, radius=0.5)
print("\nrandom digraph arcs:", len(dg.arcs))
flows = list(enumerate_flows(dg, [0, 1], [3, 4]))
print(len(flows), "self-avoiding flows from {0,1} to {3,4}")
print("flow ratio, minor:", talaska_minor(dg, [0, 1], [3, 4]))

# the directed lift of a colored graph carries the covariance expansion
g = corpus.load("spider")
y = {c: 0.05 for c in g.colors}
L = lift(g, y)
W = L.matrix()
print("\nspider lift, spectral radius", round(max(abs(np.linalg.eigvals(W))), 4))
# rows {1, 4}, columns {2, 5}: two disjoint legs of the spider
print("flow ratio, minor:", talaska_minor(L, [0, 3], [1, 4]))
