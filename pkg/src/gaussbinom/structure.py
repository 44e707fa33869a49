"""Layer structure of triangle-regular block graphs.

Leaf-clique layers are peeled off one at a time.  Each layer is a set of
maximal cliques that look alike color-wise and hang off a single "attach"
vertex each.  Reversing the peel gives a depth function on vertices and
edges, which every geodesic descends and then ascends.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Optional

from .automorphism import quasi_search
from .blocks import is_block_graph, shortest_path, path_lambda
from .graphs import ColoredGraph, GraphError, Multiset, Path, maximal_cliques
from .regularity import regularity_report


class StructureError(GraphError):
    """A structural precondition failed; the message names which one."""


@dataclass(frozen=True)
class PeelStep:
    cliques: tuple[frozenset, ...]
    attach_vertex: Mapping[frozenset, str]
    removed_vertices: frozenset

    def as_dict(self, g: ColoredGraph) -> dict:
        return {
            "cliques": [g.sort(c) for c in self.cliques],
            "attach": [self.attach_vertex[c] for c in self.cliques],
            "removed": g.sort(self.removed_vertices),
        }


@dataclass
class DepthFunction:
    kappa: dict  # vertex id or frozenset edge -> int
    peel_sequence: list = field(default_factory=list)

    def __call__(self, x) -> int:
        if isinstance(x, (tuple, list, set)):
            x = frozenset(x)
        return self.kappa[x]

    def as_dict(self, g: ColoredGraph) -> dict:
        return {
            "vertices": {v: self.kappa[v] for v in g.vertices},
            "edges": {f"{u}-{v}": self.kappa[frozenset((u, v))] for u, v in g.edges},
        }


def _require_tr_block(g: ColoredGraph):
    if not g.is_connected():
        raise StructureError("graph is not connected")
    if not is_block_graph(g):
        raise StructureError("graph is not a block graph")
    rep = regularity_report(g)
    if not rep.triangle_regular:
        kind, pair = rep.counterexample
        raise StructureError(f"graph is not triangle-regular ({kind} fails at {pair})")


def _clique_key(g: ColoredGraph, c: frozenset):
    return [g.key(v) for v in g.sort(c)]


def _clique_colors(g: ColoredGraph, c: frozenset) -> tuple[Multiset, Multiset]:
    vs = g.sort(c)
    return (
        Multiset(g.color(v) for v in vs),
        Multiset(g.edge_color(a, b) for a, b in combinations(vs, 2)),
    )


def peel_cliques(g: ColoredGraph, *, check: bool = True) -> tuple[PeelStep, ColoredGraph]:
    if check:
        _require_tr_block(g)
    cliques = maximal_cliques(g)
    if len(cliques) < 2:
        raise StructureError("a single clique cannot be peeled")
    member_count = Counter(v for c in cliques for v in c)

    leaves = []
    for c in cliques:
        shared = [v for v in c if member_count[v] >= 2]
        if len(shared) == 1:
            leaves.append(c)
    if not leaves:
        raise StructureError("no leaf clique found")
    c0 = min(leaves, key=lambda c: _clique_key(g, c))
    u0 = min((v for v in c0 if member_count[v] == 1), key=g.key)
    target = g.color(u0)
    layer = tuple(c for c in cliques if any(g.color(v) == target for v in c))

    attach = {}
    for c in layer:
        shared = [v for v in c if member_count[v] >= 2]
        if len(shared) != 1:
            raise StructureError(f"clique {g.sort(c)} does not have exactly one attach vertex")
        attach[c] = shared[0]

    in_layer = Counter(v for c in layer for v in c)
    # attach vertices stay, even when every clique through them is peeled
    anchors = set(attach.values())
    removed = frozenset(v for v in in_layer if in_layer[v] == member_count[v] and v not in anchors)
    residual = g.induced(v for v in g.vertices if v not in removed)
    step = PeelStep(layer, attach, removed)
    if check:
        _check_peel(g, step, residual)
    return step, residual


def _check_peel(g: ColoredGraph, step: PeelStep, residual: ColoredGraph):
    layer, attach = step.cliques, step.attach_vertex

    # (1)
    try:
        _require_tr_block(residual)
    except StructureError as exc:
        raise StructureError(f"peel item 1: residual {exc}") from None
    # (2)
    sigs = {_clique_colors(g, c) for c in layer}
    if len(sigs) != 1:
        raise StructureError("peel item 2: layer cliques differ in colors")
    # (3)
    vcols = {g.color(v) for c in layer for v in c}
    ecols = {g.edge_color(a, b) for c in layer for a, b in combinations(c, 2)}
    covered_v = {v for c in layer for v in c}
    covered_e = {frozenset(e) for c in layer for e in combinations(c, 2)}
    for v in g.vertices:
        if g.color(v) in vcols and v not in covered_v:
            raise StructureError(f"peel item 3: vertex {v} shares a layer color but lies outside")
    for a, b in g.edges:
        if g.edge_color(a, b) in ecols and frozenset((a, b)) not in covered_e:
            raise StructureError(f"peel item 3: edge {a}-{b} shares a layer color but lies outside")
    # (4)
    acols = {g.color(attach[c]) for c in layer}
    if len(acols) != 1:
        raise StructureError("peel item 4: attach vertices differ in color")
    acol = acols.pop()
    owners = {v for v in g.vertices if g.color(v) == acol}
    if owners != set(attach.values()):
        raise StructureError("peel item 4: attach color is used by another vertex")
    # (5)
    spoke: dict = {}
    for c in layer:
        vc = attach[c]
        for v in c:
            if v == vc:
                continue
            col = g.edge_color(v, vc)
            if spoke.setdefault(g.color(v), col) != col:
                raise StructureError("peel item 5: spoke color not determined by vertex color")
    # (6)
    per_attach = Counter(attach[c] for c in layer)
    if len(set(per_attach.values())) != 1:
        raise StructureError("peel item 6: attach vertices carry different numbers of layer cliques")


def depth_function(g: ColoredGraph) -> DepthFunction:
    _require_tr_block(g)
    steps = []
    cur = g
    while len(maximal_cliques(cur)) >= 2:
        step, cur = peel_cliques(cur)
        steps.append(step)
    kappa: dict = {}
    for v in cur.vertices:
        kappa[v] = 1
    for a, b in cur.edges:
        kappa[frozenset((a, b))] = 1
    for step in reversed(steps):
        for c in step.cliques:
            level = kappa[step.attach_vertex[c]] + 1
            for v in c:
                if v != step.attach_vertex[c]:
                    kappa[v] = level
            for a, b in combinations(c, 2):
                kappa[frozenset((a, b))] = level
    return DepthFunction(kappa, steps)


def up_down_pivots(d: DepthFunction, p: Path) -> list[int]:
    """All m satisfying the descend / single step / ascend pattern on p."""
    k = [d(v) for v in p.vertices]
    n = len(k) - 1
    out = []
    for m in range(n + 1):
        if any(k[i + 1] != k[i] - 1 for i in range(m)):
            continue
        if m < n and k[m + 1] - k[m] not in (0, 1):
            continue
        if any(k[i + 1] != k[i] + 1 for i in range(m + 1, n)):
            continue
        out.append(m)
    return out


def check_up_down(g: ColoredGraph, d: DepthFunction, p: Path) -> int:
    pivots = up_down_pivots(d, p)
    if len(pivots) != 1:
        seq = [d(v) for v in p.vertices]
        raise StructureError(f"depth pattern {seq} along {p!r} has pivots {pivots}")
    return pivots[0]


# -- colored paths ---------------------------------------------------------


def color_sequence(g: ColoredGraph, seq) -> tuple:
    seq = tuple(seq)
    out = [g.color(seq[0])]
    for a, b in zip(seq, seq[1:]):
        out += [g.edge_color(a, b), g.color(b)]
    return tuple(out)


def is_palindromic(g: ColoredGraph, p: Path) -> bool:
    s = color_sequence(g, p.vertices)
    return s == s[::-1]


def paths_isomorphic(g: ColoredGraph, p, q) -> bool:
    """Colored isomorphism of two paths (in either orientation)."""
    a = color_sequence(g, tuple(p))
    b = color_sequence(g, tuple(q))
    return a == b or a == b[::-1]


# -- quasi-automorphisms ---------------------------------------------------


def find_quasi_automorphism(
    g: ColoredGraph,
    constraints: Mapping[str, str] | None = None,
    edge_color_constraints: Iterable = (),
) -> Optional[dict]:
    """A quasi-automorphism extending ``constraints`` that keeps the colors of
    the listed edges.  The search is exhaustive."""
    constraints = dict(constraints or {})
    if len(set(constraints.values())) != len(constraints):
        raise GraphError("constraints are not injective")
    for a, b in constraints.items():
        if a not in g.index or b not in g.index:
            raise GraphError(f"unknown vertex in constraint {a}->{b}")
        if g.color(a) != g.color(b):
            raise GraphError(f"constraint {a}->{b} changes the vertex color")
    edges = []
    for e in edge_color_constraints:
        a, b = tuple(e)
        if not g.has_edge(a, b):
            raise GraphError(f"{a}-{b} is not an edge")
        edges.append((a, b))
    search = quasi_search(g, edges)
    perm = search.find({g.index[a]: g.index[b] for a, b in constraints.items()})
    if perm is None:
        return None
    return {g.vertices[i]: g.vertices[perm[i]] for i in range(len(g))}


def is_quasi_automorphism(g: ColoredGraph, alpha: Mapping[str, str]) -> bool:
    if set(alpha) != set(g.vertices) or set(alpha.values()) != set(g.vertices):
        return False
    if any(g.color(alpha[v]) != g.color(v) for v in g.vertices):
        return False
    return all(g.has_edge(alpha[a], alpha[b]) for a, b in g.edges)


def extend_quasi_automorphism(g: ColoredGraph, step: PeelStep, alpha: Mapping[str, str]) -> dict:
    """Extend a quasi-automorphism of the residual graph over a peeled layer."""
    out = dict(alpha)
    by_attach: dict = {}
    for c in step.cliques:
        by_attach.setdefault(step.attach_vertex[c], []).append(c)
    for vc, group in by_attach.items():
        images = by_attach.get(out[vc])
        if images is None or len(images) != len(group):
            raise StructureError(f"attach vertex {vc} cannot be matched under the map")
        for c, d in zip(sorted(group, key=lambda c: _clique_key(g, c)), sorted(images, key=lambda c: _clique_key(g, c))):
            src = sorted((v for v in c if v != vc), key=lambda v: (g.color(v), g.key(v)))
            dst = sorted((v for v in d if v != out[vc]), key=lambda v: (g.color(v), g.key(v)))
            for a, b in zip(src, dst):
                if g.color(a) != g.color(b):
                    raise StructureError("layer cliques do not match color-wise")
                out[a] = b
    return out


# -- lemma suite -------------------------------------------------------------


def lemma_checks(g: ColoredGraph, d: DepthFunction | None = None) -> dict:
    """Run the depth, geodesic and path-coloring checks; returns name -> bool."""
    if d is None:
        d = depth_function(g)
    results = {}

    by_color: dict = {}
    for v in g.vertices:
        by_color.setdefault(g.color(v), set()).add(d(v))
    for a, b in g.edges:
        by_color.setdefault(g.edge_color(a, b), set()).add(d((a, b)))
    results["color_determines_depth"] = all(len(s) == 1 for s in by_color.values())

    ok = True
    for a, b in g.edges:
        ke = d((a, b))
        ends = {d(a), d(b)}
        if ends != {ke} and ends != {ke, ke - 1}:
            ok = False
    results["edge_step"] = ok

    pairs = [(u, v) for i, u in enumerate(g.vertices) for v in g.vertices[i:]]
    paths = {pair: shortest_path(g, *pair) for pair in pairs}
    results["up_down"] = all(len(up_down_pivots(d, p)) == 1 for p in paths.values())
    results["palindromes"] = all(
        is_palindromic(g, p) for (u, v), p in paths.items() if g.color(u) == g.color(v)
    )

    classes: dict = {}
    for p in paths.values():
        classes.setdefault(path_lambda(g, p), []).append(p)
    results["comb_equiv_isomorphic"] = all(
        paths_isomorphic(g, ps[0], q) for ps in classes.values() for q in ps[1:]
    )
    return results
