"""Relation partitions of X x X and the two built-in scheme examples.

Coherent configurations, association schemes and Jordan schemes are all
checked with exact integer matrix products.  ``j15`` and
``shrikhande_colored`` build the colored complete graphs used throughout
the test-suite.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from .automorphism import transitivity
from .graphs import ColoredGraph, GraphError, Multiset, ecolor, vcolor


class PartitionError(GraphError):
    pass


@dataclass(frozen=True)
class RelationPartition:
    size: int
    classes: tuple[frozenset, ...]

    def __post_init__(self):
        n = self.size
        labels = np.full((n, n), -1, dtype=np.int64)
        for idx, cls in enumerate(self.classes):
            if not cls:
                raise PartitionError(f"class {idx} is empty")
            for x, y in cls:
                if not (0 <= x < n and 0 <= y < n):
                    raise PartitionError(f"pair {(x, y)} outside the ground set")
                if labels[x, y] != -1:
                    raise PartitionError(f"pair {(x, y)} lies in two classes")
                labels[x, y] = idx
        if (labels < 0).any():
            x, y = map(int, np.argwhere(labels < 0)[0])
            raise PartitionError(f"pair {(x, y)} is not covered")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_labels(cls, labels) -> "RelationPartition":
        labels = np.asarray(labels)
        n = labels.shape[0]
        order: dict = {}
        for x, y in product(range(n), repeat=2):
            order.setdefault(labels[x, y].item(), []).append((x, y))
        return cls(n, tuple(frozenset(v) for v in order.values()))

    def class_of(self, x: int, y: int) -> int:
        return int(self.labels[x, y])

    def adjacency(self, i: int) -> np.ndarray:
        return (self.labels == i).astype(np.int64)

    def is_diagonal_part(self, i: int) -> bool:
        return all(x == y for x, y in self.classes[i])

    def converse(self, i: int) -> Optional[int]:
        """Index of the converse class, or None if it is not a class."""
        cls = self.classes[i]
        x, y = next(iter(cls))
        j = self.class_of(y, x)
        if frozenset((b, a) for a, b in cls) != self.classes[j]:
            return None
        return j

    def is_symmetric(self) -> bool:
        return all(self.converse(i) == i for i in range(len(self.classes)))

    def diagonal_classes(self) -> list[int]:
        return sorted({self.class_of(x, x) for x in range(self.size)})

    def to_dict(self) -> dict:
        return {"size": self.size, "classes": [sorted([list(p) for p in c]) for c in self.classes]}


def parse_partition(text: str) -> RelationPartition:
    try:
        doc = json.loads(text)
        n = int(doc["size"])
        classes = tuple(frozenset((int(a), int(b)) for a, b in c) for c in doc["classes"])
    except (ValueError, KeyError, TypeError) as exc:
        raise PartitionError(f"malformed partition document: {exc}") from exc
    return RelationPartition(n, classes)


def trivial_partition(n: int) -> RelationPartition:
    if n < 1:
        raise PartitionError("ground set must be nonempty")
    labels = 1 - np.eye(n, dtype=np.int64)
    return RelationPartition.from_labels(labels)


def partition_of_graph(g: ColoredGraph) -> RelationPartition:
    """Diagonal split by vertex color, off-diagonal pairs by edge color."""
    if not g.is_complete():
        raise GraphError("the induced partition needs a complete graph")
    n = len(g)
    names: dict = {}
    labels = np.zeros((n, n), dtype=np.int64)
    for i, v in enumerate(g.vertices):
        labels[i, i] = names.setdefault(g.color(v), len(names))
    for u, v in g.edges:
        i, j = g.index[u], g.index[v]
        labels[i, j] = labels[j, i] = names.setdefault(g.edge_color(u, v), len(names))
    return RelationPartition.from_labels(labels)


# -- axioms ---------------------------------------------------------------


@dataclass(frozen=True)
class IntersectionTable:
    p: dict  # (i, j, k) -> count

    def __getitem__(self, key):
        return self.p.get(key, 0)


def _constant_on_classes(P: RelationPartition, M: np.ndarray):
    """Per-class constant value of M, or the first (class, x, y) where it varies."""
    values = {}
    for k, cls in enumerate(P.classes):
        pts = sorted(cls)
        x0, y0 = pts[0]
        c = int(M[x0, y0])
        for x, y in pts[1:]:
            if M[x, y] != c:
                return None, (k, (x0, y0), (x, y))
        values[k] = c
    return values, None


def coherence_violation(P: RelationPartition) -> Optional[tuple]:
    """First failing axiom as (axiom, detail), or None if P is coherent."""
    for i in range(len(P.classes)):
        diag = [x == y for x, y in P.classes[i]]
        if any(diag) and not all(diag):
            return ("diagonal", i)
        if P.converse(i) is None:
            return ("converse", i)
    _, bad = _intersection_numbers(P)
    return bad


def _intersection_numbers(P: RelationPartition):
    mats = [P.adjacency(i) for i in range(len(P.classes))]
    table = {}
    for i, Ai in enumerate(mats):
        for j, Aj in enumerate(mats):
            vals, bad = _constant_on_classes(P, Ai @ Aj)
            if bad:
                return None, ("intersection", (i, j) + bad)
            for k, c in vals.items():
                if c:
                    table[(i, j, k)] = c
    return table, None


def is_coherent_configuration(P: RelationPartition) -> Optional[IntersectionTable]:
    if coherence_violation(P) is not None:
        return None
    table, _ = _intersection_numbers(P)
    return IntersectionTable(table)


def is_association_scheme(P: RelationPartition) -> bool:
    if len(P.diagonal_classes()) != 1 or not P.diagonal_classes() or not P.is_diagonal_part(P.diagonal_classes()[0]):
        return False
    if not P.is_symmetric():
        return False
    return is_coherent_configuration(P) is not None


def jordan_violation(P: RelationPartition) -> Optional[tuple]:
    _check_jordan_input(P)
    _, bad = _jordan_table(P)
    return bad


def _check_jordan_input(P: RelationPartition):
    if not P.is_symmetric():
        raise PartitionError("Jordan schemes need a symmetric partition")
    diag = P.diagonal_classes()
    if len(diag) != 1 or not P.is_diagonal_part(diag[0]):
        raise PartitionError("the diagonal must be exactly one class")


def _jordan_table(P: RelationPartition):
    mats = [P.adjacency(i) for i in range(len(P.classes))]
    table = {}
    for i in range(len(mats)):
        for j in range(i, len(mats)):
            S = mats[i] @ mats[j] + mats[j] @ mats[i]
            vals, bad = _constant_on_classes(P, S)
            if bad:
                return None, ("jordan", (i, j) + bad)
            for k, c in vals.items():
                if c:
                    table[(i, j, k)] = c
    return table, None


def is_jordan_scheme(P: RelationPartition) -> Optional[dict]:
    """The q-table {(i, j, k): q} for i <= j, or None."""
    _check_jordan_input(P)
    table, _ = _jordan_table(P)
    return table


def symmetrize(P: RelationPartition) -> RelationPartition:
    """Merge every class with its converse (transitively, via union-find)."""
    parent = list(range(len(P.classes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for x, y in product(range(P.size), repeat=2):
        a, b = find(P.class_of(x, y)), find(P.class_of(y, x))
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict = {}
    for i, cls in enumerate(P.classes):
        groups.setdefault(find(i), set()).update(cls)
    return RelationPartition(P.size, tuple(frozenset(groups[r]) for r in sorted(groups)))


# -- colored complete graphs ---------------------------------------------


def ordered_pair_signature(g: ColoredGraph, x: str, y: str) -> Multiset:
    """Multiset of (color xz, color zy) over all third vertices z."""
    if x == y:
        raise GraphError("signature needs two distinct vertices")
    if not g.is_complete():
        raise GraphError("signature is defined on complete graphs")
    return Multiset(
        (g.edge_color(x, z), g.edge_color(z, y)) for z in g.vertices if z not in (x, y)
    )


def symmetrization_obstruction(g: ColoredGraph) -> Optional[tuple]:
    """Two same-colored ordered edges whose signatures differ in both orientations.

    Such a pair rules out the coloring being a symmetrized coherent
    configuration.  Returns ((x, y), (u, v)) or None.
    """
    classes: dict = {}
    for u, v in g.edges:
        classes.setdefault(g.edge_color(u, v), []).append((u, v))
    for members in classes.values():
        x, y = members[0]
        sig = ordered_pair_signature(g, x, y)
        for u, v in members[1:]:
            if sig not in (ordered_pair_signature(g, u, v), ordered_pair_signature(g, v, u)):
                return (x, y), (u, v)
    return None


def is_strongly_regular(h: ColoredGraph) -> Optional[tuple[int, int, int]]:
    """(k, a, b) if the underlying graph is strongly regular; colors are ignored."""
    degs = {h.degree(v) for v in h.vertices}
    if len(degs) != 1:
        return None
    k = degs.pop()
    a = b = None
    vs = h.vertices
    for i, u in enumerate(vs):
        nu = h.neighbors(u)
        for w in vs[i + 1:]:
            c = len(nu & h.neighbors(w))
            if h.has_edge(u, w):
                if a is None:
                    a = c
                elif a != c:
                    return None
            else:
                if b is None:
                    b = c
                elif b != c:
                    return None
    if a is None or b is None:
        return None
    return k, a, b


def _shrikhande_id(a: int, b: int) -> str:
    return f"{a}{b}"


def shrikhande_graph() -> ColoredGraph:
    """The uncolored Shrikhande graph, as a colored graph with one color per kind."""
    steps = {(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)}
    verts = [_shrikhande_id(a, b) for a in range(4) for b in range(4)]
    edges = []
    for a, b in product(range(4), repeat=2):
        for c, d in product(range(4), repeat=2):
            if ((c - a) % 4, (d - b) % 4) in steps and (a, b) < (c, d):
                edges.append((_shrikhande_id(a, b), _shrikhande_id(c, d)))
    return ColoredGraph(
        verts, edges, {v: vcolor(0) for v in verts}, {frozenset(e): ecolor(1) for e in edges}
    )


def shrikhande_colored() -> ColoredGraph:
    s = shrikhande_graph()
    verts = s.vertices
    edges, cols = [], {}
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            edges.append((u, v))
            cols[frozenset((u, v))] = ecolor(1 if s.has_edge(u, v) else 2)
    return ColoredGraph(verts, edges, {v: vcolor(0) for v in verts}, cols)


_J15_ROWS = """\
0 1 1 2 3 4 2 3 4 2 3 4 2 3 4
1 0 1 3 4 2 3 4 2 3 4 2 3 4 2
1 1 0 4 2 3 4 2 3 4 2 3 4 2 3
2 3 4 0 1 1 3 2 4 2 4 3 4 3 2
3 4 2 1 0 1 2 4 3 4 3 2 3 2 4
4 2 3 1 1 0 4 3 2 3 2 4 2 4 3
2 3 4 3 2 4 0 1 1 4 3 2 2 4 3
3 4 2 2 4 3 1 0 1 3 2 4 4 3 2
4 2 3 4 3 2 1 1 0 2 4 3 3 2 4
2 3 4 2 4 3 4 3 2 0 1 1 3 2 4
3 4 2 4 3 2 3 2 4 1 0 1 2 4 3
4 2 3 3 2 4 2 4 3 1 1 0 4 3 2
2 3 4 4 3 2 2 4 3 3 2 4 0 1 1
3 4 2 3 2 4 4 3 2 2 4 3 1 0 1
4 2 3 2 4 3 3 2 4 4 3 2 1 1 0
"""
J15_SHA256 = "6cf2b7d124ba0cca45f0709d32d1f17263f0189b8278f74ec29575da2f1eaa01"


def j15_matrix() -> np.ndarray:
    digest = hashlib.sha256(_J15_ROWS.encode()).hexdigest()
    if digest != J15_SHA256:
        raise RuntimeError("embedded J15 matrix is corrupted")
    m = np.array([[int(t) for t in row.split()] for row in _J15_ROWS.splitlines()], dtype=np.int64)
    return m


def j15() -> ColoredGraph:
    m = j15_matrix()
    verts = [str(i) for i in range(1, 16)]
    edges, cols = [], {}
    for i in range(15):
        for j in range(i + 1, 15):
            edges.append((verts[i], verts[j]))
            cols[frozenset((verts[i], verts[j]))] = ecolor(int(m[i, j]))
    return ColoredGraph(verts, edges, {v: vcolor(0) for v in verts}, cols)


def is_rcop(g: ColoredGraph) -> bool:
    vertex_ok, edge_ok, _ = transitivity(g)
    return vertex_ok and edge_ok
