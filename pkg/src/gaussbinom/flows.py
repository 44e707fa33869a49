"""Self-avoiding flows and minors of the weighted path matrix.

A minor of M = sum_k W^k equals the signed weight of self-avoiding flows
from A to B divided by the signed weight of disjoint cycle collections.
Both sides are computed here independently: the flows combinatorially and
the minor by numeric inversion of I - W.

Two flow engines share one definition.  ``enumerate_flows`` lists every
flow explicitly (DFS over path systems, cycle collections memoized by the
residual vertex set).  The subset engine sums the same objects by dynamic
programming over vertex subsets and handles the 15 and 16 vertex lifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np
from numba import njit

from .graphs import ColoredGraph


class DivergentWeightsError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedDigraph:
    """Arcs (tail, head) -> weight on vertices 0..n-1.  Loops are allowed."""

    n: int
    arcs: Mapping[tuple[int, int], float]

    def matrix(self) -> np.ndarray:
        W = np.zeros((self.n, self.n))
        for (a, b), w in self.arcs.items():
            W[a, b] = w
        return W

    def out(self, v: int) -> list[tuple[int, float]]:
        return sorted((b, w) for (a, b), w in self.arcs.items() if a == v)


@dataclass(frozen=True)
class FlowSystem:
    paths: tuple  # vertex tuples, paths[i] starts at A[i]
    pairing: tuple  # pairing[i] = index into B of the end of paths[i]
    cycles: tuple  # vertex tuples, each closed implicitly
    weight: float

    @property
    def sign(self) -> int:
        return _perm_sign(self.pairing) * (-1) ** len(self.cycles)


def _perm_sign(p: Sequence[int]) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def spectral_radius(W: np.ndarray) -> float:
    return float(max(abs(np.linalg.eigvals(W)))) if W.size else 0.0


def _check(dg: WeightedDigraph, A: Sequence[int], B: Sequence[int]):
    if len(A) != len(B):
        raise ValueError("A and B must have the same size")
    if len(set(A)) != len(A) or len(set(B)) != len(B):
        raise ValueError("A and B must not repeat vertices")
    if spectral_radius(dg.matrix()) >= 1:
        raise DivergentWeightsError("arc matrix has spectral radius >= 1; the path matrix diverges")


# -- explicit enumeration ---------------------------------------------------------


def _simple_cycles_through(dg: WeightedDigraph, s: int, allowed: frozenset) -> Iterator[tuple[tuple, float]]:
    """Cycles whose least vertex is s, inside ``allowed``."""
    for b, w in dg.out(s):
        if b == s:
            yield (s,), w
    stack = [(s, (s,), 1.0)]
    while stack:
        v, seq, wt = stack.pop()
        for b, w in dg.out(v):
            if b == s and len(seq) > 1:
                yield seq, wt * w
            elif b != s and b in allowed and b > s and b not in seq:
                stack.append((b, seq + (b,), wt * w))


def cycle_collections(dg: WeightedDigraph, residual: frozenset) -> Iterator[tuple[tuple, float]]:
    """Every collection of vertex-disjoint cycles inside ``residual``."""
    if not residual:
        yield (), 1.0
        return
    s = min(residual)
    rest = residual - {s}
    yield from cycle_collections(dg, rest)
    for cyc, w in _simple_cycles_through(dg, s, residual):
        for more, w2 in cycle_collections(dg, residual - set(cyc)):
            yield (cyc,) + more, w * w2


def _path_systems(dg, A, B) -> Iterator[tuple[tuple, tuple, float]]:
    k = len(A)
    Bset = set(B)
    blocked = set(A) | Bset

    def rec(i, used, paths, pairing, wt):
        if i == k:
            yield tuple(paths), tuple(pairing), wt
            return
        a = A[i]
        if a in Bset:
            # a path leaving a would collide with the path ending at a
            j = B.index(a)
            if j not in pairing:
                yield from rec(i + 1, used | {a}, paths + [(a,)], pairing + [j], wt)
            return
        stack = [(a, (a,), 1.0)]
        while stack:
            v, seq, w = stack.pop()
            for b, x in dg.out(v):
                if b in used or b in seq:
                    continue
                if b in Bset:
                    j = B.index(b)
                    if j not in pairing:
                        yield from rec(i + 1, used | set(seq) | {b}, paths + [seq + (b,)], pairing + [j], wt * w * x)
                elif b not in blocked:
                    stack.append((b, seq + (b,), w * x))

    yield from rec(0, frozenset(), [], [], 1.0)


def enumerate_flows(dg: WeightedDigraph, A: Sequence[int], B: Sequence[int]) -> Iterator[FlowSystem]:
    everything = frozenset(range(dg.n))
    for paths, pairing, wt in _path_systems(dg, list(A), list(B)):
        residual = everything - {v for p in paths for v in p}
        for cycles, cw in cycle_collections(dg, residual):
            yield FlowSystem(paths, pairing, cycles, wt * cw)


def _cycle_sum_enum(dg: WeightedDigraph):
    @lru_cache(maxsize=None)
    def cyc(residual: frozenset) -> float:
        if not residual:
            return 1.0
        s = min(residual)
        total = cyc(residual - {s})
        for c, w in _simple_cycles_through(dg, s, residual):
            total -= w * cyc(residual - set(c))
        return total

    return cyc


def _flow_ratio_enum(dg: WeightedDigraph, A, B) -> float:
    cyc = _cycle_sum_enum(dg)
    everything = frozenset(range(dg.n))
    num = 0.0
    for paths, pairing, wt in _path_systems(dg, list(A), list(B)):
        residual = everything - {v for p in paths for v in p}
        num += _perm_sign(pairing) * wt * cyc(residual)
    return num / cyc(everything)


# -- subset dynamic programming ------------------------------------------------------


@njit(cache=True)
def _path_table(W, start, forbidden_mask):
    """P[S, v]: weight of simple paths from start visiting exactly S, ending at v.

    Intermediate vertices avoid ``forbidden_mask``; the end may be any
    vertex and callers read only ends they allow.
    """
    n = W.shape[0]
    P = np.zeros((1 << n, n))
    P[1 << start, start] = 1.0
    for S in range(1 << n):
        if not (S >> start) & 1:
            continue
        for v in range(n):
            pv = P[S, v]
            if pv == 0.0:
                continue
            if v != start and (forbidden_mask >> v) & 1:
                continue  # an end, not extendable
            for w in range(n):
                if (S >> w) & 1 or W[v, w] == 0.0:
                    continue
                P[S | (1 << w), w] += pv * W[v, w]
    return P


@njit(cache=True)
def _cycle_table(W):
    """C[R]: signed weight of disjoint cycle collections inside R."""
    n = W.shape[0]
    full = 1 << n
    # H[S, v]: paths from min(S) through exactly S to v, all vertices > min(S)
    H = np.zeros((full, n))
    for s in range(n):
        H[1 << s, s] = 1.0
    for S in range(1, full):
        s = 0
        while not (S >> s) & 1:
            s += 1
        for v in range(n):
            hv = H[S, v]
            if hv == 0.0:
                continue
            for w in range(s + 1, n):
                if (S >> w) & 1 or W[v, w] == 0.0:
                    continue
                H[S | (1 << w), w] += hv * W[v, w]
    cw = np.zeros(full)  # weight of cycles on exactly S through min(S)
    for S in range(1, full):
        s = 0
        while not (S >> s) & 1:
            s += 1
        tot = 0.0
        if S == (1 << s):
            tot = W[s, s]
        else:
            for v in range(n):
                if H[S, v] != 0.0 and v != s:
                    tot += H[S, v] * W[v, s]
        cw[S] = tot
    C = np.zeros(full)
    C[0] = 1.0
    for R in range(1, full):
        s = 0
        while not (R >> s) & 1:
            s += 1
        rest = R ^ (1 << s)
        tot = C[rest]
        sub = rest
        while True:
            S = sub | (1 << s)
            if cw[S] != 0.0:
                tot -= cw[S] * C[R ^ S]
            if sub == 0:
                break
            sub = (sub - 1) & rest
        C[R] = tot
    return C


def _flow_ratio_dp(dg: WeightedDigraph, A, B) -> float:
    W = dg.matrix()
    n = dg.n
    C = _cycle_table(W)
    full = (1 << n) - 1
    A, B = list(A), list(B)
    k = len(A)
    amask = sum(1 << a for a in A)
    bmask = sum(1 << b for b in B)
    blocked = amask | bmask
    tables = [_path_table(W, a, blocked) for a in A]

    # F[i][T]: signed sum over path systems for A[i:] inside T, times cycles
    # on what is left of T.  Unused ends of B are exactly B & T.
    F = C
    for i in range(k - 1, -1, -1):
        a = A[i]
        P = tables[i]
        G = np.zeros(1 << n)
        for T in range(1 << n):
            if not (T >> a) & 1:
                continue
            # later sources must stay available
            if any(not (T >> A[m]) & 1 for m in range(i + 1, k)):
                continue
            tot = 0.0
            for j, b in enumerate(B):
                if not (T >> b) & 1:
                    continue
                if a in B and b != a:
                    continue
                # inversions: unused ends of smaller index than j
                inv = sum(1 for jj in range(j) if (T >> B[jj]) & 1 and B[jj] != b)
                sign = -1.0 if inv % 2 else 1.0
                tot += sign * _sum_paths(P, T, a, b, F, blocked & ~((1 << a) | (1 << b)))
            G[T] = tot
        F = G
    return F[full] / C[full]


def _sum_paths(P, T, a, b, F, inner_block):
    S_fixed = (1 << a) | (1 << b)
    free = T & ~S_fixed & ~inner_block
    return _subset_sum(P, F, T, free, S_fixed, b)


@njit(cache=True)
def _subset_sum(P, F, T, free, S_fixed, b):
    tot = 0.0
    sub = free
    while True:
        S = sub | S_fixed
        if P[S, b] != 0.0:
            tot += P[S, b] * F[T ^ S]
        if sub == 0:
            break
        sub = (sub - 1) & free
    return tot


# -- public API -----------------------------------------------------------------


ENUMERATION_LIMIT = 9


def flow_ratio(dg: WeightedDigraph, A: Sequence[int], B: Sequence[int], method: str = "auto") -> float:
    if method == "auto":
        method = "enumerate" if dg.n <= ENUMERATION_LIMIT else "subset"
    if method == "enumerate":
        return _flow_ratio_enum(dg, A, B)
    if method == "subset":
        return _flow_ratio_dp(dg, A, B)
    raise ValueError(f"unknown method {method!r}")


def path_matrix_minor(dg: WeightedDigraph, A: Sequence[int], B: Sequence[int]) -> float:
    W = dg.matrix()
    M = np.linalg.inv(np.eye(dg.n) - W)
    if not len(A):
        return 1.0
    return float(np.linalg.det(M[np.ix_(list(A), list(B))]))


def talaska_minor(dg: WeightedDigraph, A: Sequence[int], B: Sequence[int], method: str = "auto") -> tuple[float, float]:
    """(flow ratio, minor of the weighted path matrix) for rows A, columns B."""
    _check(dg, A, B)
    return flow_ratio(dg, A, B, method), path_matrix_minor(dg, A, B)


# -- lifts of colored graphs -------------------------------------------------------


def lift(g: ColoredGraph, y: Mapping) -> WeightedDigraph:
    """Directed lift with x_(u,v) = z(color u) * y(color uv), z = 1/(1 - y)."""
    idx = g.index
    arcs = {}
    for u, v in g.edges:
        yy = y[g.edge_color(u, v)]
        arcs[(idx[u], idx[v])] = yy / (1 - y[g.color(u)])
        arcs[(idx[v], idx[u])] = yy / (1 - y[g.color(v)])
    return WeightedDigraph(len(g), arcs)


def random_digraph(rng: np.random.Generator, n: int, density: float = 0.5, radius: float = 0.5, loops: bool = True) -> WeightedDigraph:
    arcs = {}
    for a in range(n):
        for b in range(n):
            if (a != b or loops) and rng.random() < density:
                arcs[(a, b)] = float(rng.uniform(-1, 1))
    dg = WeightedDigraph(n, arcs)
    r = spectral_radius(dg.matrix())
    if r > radius:
        arcs = {k: w * radius / r for k, w in arcs.items()}
    return WeightedDigraph(n, arcs)
