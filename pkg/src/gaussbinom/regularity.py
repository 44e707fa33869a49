"""Vertex, edge and triangle regularity of colored graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graphs import ColoredGraph, GraphError, Multiset

VERTEX_REGULAR = "vertex_regular"
EDGE_REGULAR = "edge_regular"
EDGE_TRIANGLE_REGULAR = "edge_triangle_regular"
VERTEX_TRIANGLE_REGULAR = "vertex_triangle_regular"


@dataclass(frozen=True)
class RegularityReport:
    vertex_regular: bool
    edge_regular: bool
    vertex_triangle_regular: bool
    edge_triangle_regular: bool
    counterexamples: dict = field(default_factory=dict, compare=False)

    @property
    def triangle_regular(self) -> bool:
        return self.vertex_regular and self.edge_regular and self.edge_triangle_regular

    @property
    def counterexample(self) -> Optional[tuple]:
        """(kind, (a, b)) for the first failing flag, in decision order."""
        for kind in (VERTEX_REGULAR, EDGE_REGULAR, EDGE_TRIANGLE_REGULAR, VERTEX_TRIANGLE_REGULAR):
            if kind in self.counterexamples:
                return kind, self.counterexamples[kind]
        return None

    def as_dict(self) -> dict:
        out = {
            "vertex_regular": self.vertex_regular,
            "edge_regular": self.edge_regular,
            "vertex_triangle_regular": self.vertex_triangle_regular,
            "edge_triangle_regular": self.edge_triangle_regular,
            "triangle_regular": self.triangle_regular,
        }
        ce = self.counterexample
        out["counterexample"] = None if ce is None else {"kind": ce[0], "pair": _jsonable(ce[1])}
        return out


def _jsonable(pair):
    return [list(x) if isinstance(x, tuple) else x for x in pair]


def incident_edge_colors(g: ColoredGraph, v: str) -> Multiset:
    if v not in g.index:
        raise GraphError(f"unknown vertex {v!r}")
    return Multiset(g.edge_color(v, w) for w in g.neighbors(v))


def incident_vertex_colors(g: ColoredGraph, u: str, v: str) -> Multiset:
    return Multiset((g.color(u), g.color(v)))


def edge_triangle_type(g: ColoredGraph, u: str, v: str, w: str) -> tuple:
    """Colored triangle {u, v, w} seen from its edge {u, v}.

    The apex color together with the unordered pair of
    (endpoint color, color of the edge from that endpoint to the apex).
    """
    sides = sorted(((g.color(u), g.edge_color(u, w)), (g.color(v), g.edge_color(v, w))))
    return (g.color(w), tuple(sides))


def vertex_triangle_type(g: ColoredGraph, u: str, v: str, w: str) -> tuple:
    """Colored triangle {u, v, w} seen from its vertex u."""
    sides = sorted(((g.color(v), g.edge_color(u, v)), (g.color(w), g.edge_color(u, w))))
    return (g.edge_color(v, w), tuple(sides))


def incident_triangles_of_edge(g: ColoredGraph, u: str, v: str) -> Multiset:
    if not g.has_edge(u, v):
        raise GraphError(f"unknown edge {{{u}, {v}}}")
    common = g.neighbors(u) & g.neighbors(v)
    return Multiset(edge_triangle_type(g, u, v, w) for w in common)


def incident_triangles_of_vertex(g: ColoredGraph, u: str) -> Multiset:
    nb = g.sort(g.neighbors(u))
    out = []
    for i, v in enumerate(nb):
        for w in nb[i + 1:]:
            if g.has_edge(v, w):
                out.append(vertex_triangle_type(g, u, v, w))
    return Multiset(out)


def _first_violation_lex(items, color_of, signature):
    # a violating class always contains a violating pair (rep, x); the
    # lexicographically least one over all classes has the smallest rep
    best = None
    classes: dict = {}
    for x in sorted(items):
        classes.setdefault(color_of(x), []).append(x)
    for members in classes.values():
        rep = members[0]
        sig = signature(rep)
        for x in members[1:]:
            if signature(x) != sig:
                if best is None or (rep, x) < best:
                    best = (rep, x)
                break
    return best


def regularity_report(g: ColoredGraph) -> RegularityReport:
    verts = list(g.vertices)
    edges = list(g.edges)
    ce = {}

    vpair = _first_violation_lex(
        [(g.key(v), v) for v in verts],
        lambda t: g.color(t[1]),
        lambda t: incident_edge_colors(g, t[1]),
    )
    if vpair:
        ce[VERTEX_REGULAR] = (vpair[0][1], vpair[1][1])

    ekeyed = [((g.key(u), g.key(v)), (u, v)) for u, v in edges]
    epair = _first_violation_lex(
        ekeyed,
        lambda t: g.edge_color(*t[1]),
        lambda t: incident_vertex_colors(g, *t[1]),
    )
    if epair:
        ce[EDGE_REGULAR] = (epair[0][1], epair[1][1])

    tpair = _first_violation_lex(
        ekeyed,
        lambda t: g.edge_color(*t[1]),
        lambda t: incident_triangles_of_edge(g, *t[1]),
    )
    if tpair:
        ce[EDGE_TRIANGLE_REGULAR] = (tpair[0][1], tpair[1][1])

    vtpair = _first_violation_lex(
        [(g.key(v), v) for v in verts],
        lambda t: g.color(t[1]),
        lambda t: incident_triangles_of_vertex(g, t[1]),
    )
    if vtpair:
        ce[VERTEX_TRIANGLE_REGULAR] = (vtpair[0][1], vtpair[1][1])

    return RegularityReport(
        vertex_regular=VERTEX_REGULAR not in ce,
        edge_regular=EDGE_REGULAR not in ce,
        vertex_triangle_regular=VERTEX_TRIANGLE_REGULAR not in ce,
        edge_triangle_regular=EDGE_TRIANGLE_REGULAR not in ce,
        counterexamples=ce,
    )


def is_triangle_regular(g: ColoredGraph) -> bool:
    flag = g.__dict__.get("_triangle_regular")
    if flag is None:
        flag = regularity_report(g).triangle_regular
        g.__dict__["_triangle_regular"] = flag
    return flag
