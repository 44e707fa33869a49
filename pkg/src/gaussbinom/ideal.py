"""Binomiality decision, generators, the monomial map psi and path rewriting."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from .blocks import (
    BlockViolation,
    find_block_violation,
    is_block_graph,
    is_shortest,
    path_lambda,
    shortest_path,
)
from .graphs import (
    ColoredGraph,
    GraphError,
    Multiset,
    Path,
    connected_components,
    ecolor,
)
from .regularity import regularity_report
from .structure import (
    DepthFunction,
    StructureError,
    color_sequence,
    depth_function,
    find_quasi_automorphism,
    paths_isomorphic,
)


class NotBinomialError(GraphError):
    pass


class RewriteError(RuntimeError):
    """The rewriting strategy got stuck; this would contradict the theory."""


def _vkey(v: str):
    return (0, int(v), v) if v.isdigit() else (1, 0, v)


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if _vkey(a) <= _vkey(b) else (b, a)


@dataclass(frozen=True)
class SigmaMonomial:
    factors: tuple  # sorted tuple of sorted vertex pairs

    def __init__(self, factors: Iterable = ()):
        fs = sorted((_pair(str(a), str(b)) for a, b in factors), key=lambda p: (_vkey(p[0]), _vkey(p[1])))
        object.__setattr__(self, "factors", tuple(fs))

    @property
    def degree(self) -> int:
        return len(self.factors)

    def __mul__(self, other: "SigmaMonomial") -> "SigmaMonomial":
        return SigmaMonomial(self.factors + other.factors)

    def _sortkey(self):
        return tuple((_vkey(a), _vkey(b)) for a, b in self.factors)

    def __lt__(self, other):
        return self._sortkey() < other._sortkey()

    def __str__(self):
        if not self.factors:
            return "1"
        return "*".join(f"s{a},{b}" for a, b in self.factors)


def sigma(*pairs) -> SigmaMonomial:
    return SigmaMonomial(pairs)


@dataclass(frozen=True)
class Binomial:
    lhs: SigmaMonomial
    rhs: SigmaMonomial

    def _canon(self):
        return tuple(sorted((self.lhs, self.rhs)))

    def __eq__(self, other):
        return isinstance(other, Binomial) and self._canon() == other._canon()

    def __hash__(self):
        return hash(self._canon())

    def __str__(self):
        return f"{self.lhs} - {self.rhs}"


# -- decision -------------------------------------------------------------


@dataclass(frozen=True)
class Decision:
    binomial: bool
    reason: Optional[str] = None  # "block_violation" | "regularity" | None
    witness: object = None
    component: Optional[tuple] = None

    def as_dict(self) -> dict:
        out = {"binomial": self.binomial, "reason": self.reason}
        w = self.witness
        if isinstance(w, BlockViolation):
            out["witness"] = {
                "kind": w.kind,
                "u": w.u,
                "v": w.v,
                "path_p": list(w.path_p.vertices),
                "path_q": list(w.path_q.vertices),
            }
        elif w is not None:
            kind, pair = w
            out["witness"] = {"kind": kind, "pair": [list(x) if isinstance(x, tuple) else x for x in pair]}
        return out


def decide_binomial(g: ColoredGraph) -> Decision:
    for comp in connected_components(g):
        if not is_block_graph(comp):
            return Decision(False, "block_violation", find_block_violation(comp), comp.vertices)
        rep = regularity_report(comp)
        if not rep.triangle_regular:
            return Decision(False, "regularity", rep.counterexample, comp.vertices)
    return Decision(True)


def _require_binomial(g: ColoredGraph):
    dec = decide_binomial(g)
    if not dec.binomial:
        raise NotBinomialError(f"the vanishing ideal is not binomial ({dec.reason})")


# -- generators -----------------------------------------------------------


def _component_pairs(comp: ColoredGraph):
    vs = comp.vertices
    for i, a in enumerate(vs):
        for b in vs[i:]:
            yield a, b


def lambda_classes(g: ColoredGraph) -> list[list[tuple[str, str]]]:
    """Vertex pairs (diagonal included) grouped by path color multiset, per component."""
    out = []
    for comp in connected_components(g):
        classes: dict = {}
        for a, b in _component_pairs(comp):
            classes.setdefault(path_lambda(comp, shortest_path(comp, a, b)), []).append(_pair(a, b))
        for members in classes.values():
            out.append(sorted(members, key=lambda p: (_vkey(p[0]), _vkey(p[1]))))
    return out


def linear_generators(g: ColoredGraph, *, all_pairs: bool = False) -> list[Binomial]:
    _require_binomial(g)
    gens = []
    for members in lambda_classes(g):
        if all_pairs:
            gens += [Binomial(sigma(p), sigma(q)) for p, q in combinations(members, 2)]
        else:
            gens += [Binomial(sigma(members[0]), sigma(q)) for q in members[1:]]
    return gens


def _edge_multiset(comp: ColoredGraph, a: str, b: str) -> tuple:
    p = shortest_path(comp, a, b)
    return tuple(sorted(tuple(sorted(e, key=comp.key)) for e in p.edges))


def quadratic_generators(g: ColoredGraph) -> list[Binomial]:
    """All sigma_ij sigma_kl - sigma_ik sigma_jl whose geodesic edge multisets agree."""
    _require_binomial(g)
    gens = []
    for comp in connected_components(g):
        pairs = list(_component_pairs(comp))
        emult = {p: _edge_multiset(comp, *p) for p in pairs}
        groups: dict = {}
        for x in range(len(pairs)):
            for y in range(x, len(pairs)):
                p, q = pairs[x], pairs[y]
                idx = tuple(sorted(p + q, key=comp.key))
                key = (idx, tuple(sorted(emult[p] + emult[q])))
                groups.setdefault(key, []).append(sigma(p, q))
        for members in groups.values():
            uniq = sorted(set(members))
            gens += [Binomial(a, b) for a, b in combinations(uniq, 2)]
    return gens


def linear_entry(b: Binomial) -> list[str]:
    (i, j), (k, l) = b.lhs.factors[0], b.rhs.factors[0]
    return [i, j, k, l]


def quadratic_entry(b: Binomial) -> list[str]:
    """Indices (i, j, k, l) with b = sigma_ij sigma_kl - sigma_ik sigma_jl."""
    idx = [v for pair in b.lhs.factors for v in pair]
    for i, j, k, l in sorted(set(permutations(idx)), key=lambda t: [_vkey(v) for v in t]):
        if sigma((i, j), (k, l)) == b.lhs and sigma((i, k), (j, l)) == b.rhs:
            return [i, j, k, l]
    raise ValueError(f"{b} is not of the form s_ij s_kl - s_ik s_jl")


def generators_document(g: ColoredGraph, *, all_pairs: bool = False) -> dict:
    return {
        "linear": [linear_entry(b) for b in linear_generators(g, all_pairs=all_pairs)],
        "quadratic": [quadratic_entry(b) for b in quadratic_generators(g)],
    }


# -- psi and the completion -------------------------------------------------


def _component_of(g: ColoredGraph) -> dict:
    cache = g.__dict__.get("_component_map")
    if cache is None:
        cache = {}
        for comp in connected_components(g):
            for v in comp.vertices:
                cache[v] = comp
        g.__dict__["_component_map"] = cache
    return cache


def pair_path(g: ColoredGraph, a: str, b: str) -> Path:
    comps = _component_of(g)
    if comps[a] is not comps[b]:
        raise GraphError(f"{a} and {b} lie in different components")
    return shortest_path(comps[a], a, b)


def psi_image(g: ColoredGraph, m: SigmaMonomial) -> Multiset:
    """Exponent vector of psi(m) as a multiset of colors."""
    total = Multiset()
    for a, b in m.factors:
        total = total + path_lambda(g, pair_path(g, a, b))
    return total


@dataclass(frozen=True)
class Completion:
    graph: ColoredGraph
    new_color_of: dict  # frozenset non-edge -> Color


def completion(g: ColoredGraph) -> Completion:
    if not g.is_connected():
        raise StructureError("completion needs a connected graph")
    if not is_block_graph(g) or not regularity_report(g).triangle_regular:
        raise StructureError("completion needs a triangle-regular block graph")
    used = {c.label for c in g.colors}
    labels: dict = {}
    new_color_of = {}
    counter = 0
    vs = g.vertices
    for i, a in enumerate(vs):
        for b in vs[i + 1:]:
            if g.has_edge(a, b):
                continue
            lam = path_lambda(g, shortest_path(g, a, b))
            if lam not in labels:
                counter += 1
                name = f"n{counter}"
                while name in used:
                    name = "_" + name
                labels[lam] = ecolor(name)
            new_color_of[frozenset((a, b))] = labels[lam]
    edges = [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]]
    ecol = dict(g.edge_colors)
    ecol.update(new_color_of)
    full = ColoredGraph(vs, edges, g.vertex_colors, ecol)
    if not regularity_report(full).triangle_regular:
        raise StructureError("completion is not triangle-regular")
    return Completion(full, new_color_of)


# -- path rewriting -----------------------------------------------------------


@dataclass(frozen=True)
class Move:
    """One rewriting move on a collection of paths keyed by id.

    ``kind == "iso"``: path ``ids[0]`` goes from ``before[0]`` to the
    isomorphic geodesic ``after[0]``.  ``kind == "swap"``: the paths
    ``ids`` meet at ``x``; with both ``before`` tuples oriented so that x
    sits at index i and j, the results are p[:i+1] + q[j+1:] and
    q[:j+1] + p[i+1:].
    """

    kind: str
    ids: tuple
    before: tuple
    after: tuple
    x: Optional[str] = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "ids": list(self.ids), "before": [list(p) for p in self.before], "after": [list(p) for p in self.after]}
        if self.x is not None:
            out["at"] = self.x
        return out


@dataclass
class RewriteTrace:
    initial: dict
    target: list
    moves: list = field(default_factory=list)
    strategy: str = "induction"  # or "search" when the inductive lift got stuck

    def __len__(self):
        return len(self.moves)

    def replay(self, g: ColoredGraph) -> dict:
        """Apply the moves with full validation; returns the final state."""
        state = dict(self.initial)
        totals = _color_totals(g, state.values())
        for mv in self.moves:
            _validate_move(g, state, mv)
            for pid, new in zip(mv.ids, mv.after):
                state[pid] = new
            if _color_totals(g, state.values()) != totals:
                raise RewriteError(f"move {mv} changed the color multisets")
        if sorted(Path(p) for p in state.values()) != sorted(Path(p) for p in self.target):
            raise RewriteError("trace does not reach the target collection")
        return state

    def final(self) -> dict:
        state = dict(self.initial)
        for mv in self.moves:
            state.update(zip(mv.ids, mv.after))
        return state

    def reversed(self) -> "RewriteTrace":
        # both move kinds are involutions, so undoing means swapping before/after
        moves = [Move(m.kind, m.ids, m.after, m.before, m.x) for m in self.moves[::-1]]
        return RewriteTrace(self.final(), list(self.initial.values()), moves, self.strategy)

    def then(self, other: "RewriteTrace") -> "RewriteTrace":
        """This trace followed by one starting where it ends, ids matched by path."""
        free = dict(self.final())
        relabel = {}
        for oid, p in other.initial.items():
            mine = next((k for k, q in free.items() if Path(q) == Path(p)), None)
            if mine is None:
                raise RewriteError("the second trace does not start where the first ends")
            relabel[oid] = mine
            del free[mine]
        moves = list(self.moves)
        moves += [Move(m.kind, tuple(relabel[i] for i in m.ids), m.before, m.after, m.x) for m in other.moves]
        strategy = self.strategy if self.strategy == other.strategy else "mixed"
        return RewriteTrace(dict(self.initial), list(other.target), moves, strategy)

    def as_dict(self) -> dict:
        return {
            "initial": {str(k): list(v) for k, v in self.initial.items()},
            "target": [list(p) for p in self.target],
            "moves": [m.as_dict() for m in self.moves],
            "strategy": self.strategy,
        }


def _color_totals(g: ColoredGraph, paths) -> tuple[Multiset, Multiset]:
    vs, es = [], []
    for p in paths:
        vs += [g.color(v) for v in p]
        es += [g.edge_color(a, b) for a, b in zip(p, p[1:])]
    return Multiset(vs), Multiset(es)


def swap_result(p: tuple, q: tuple, x: str) -> tuple[tuple, tuple]:
    i, j = p.index(x), q.index(x)
    return p[: i + 1] + q[j + 1:], q[: j + 1] + p[i + 1:]


def _validate_move(g: ColoredGraph, state: dict, mv: Move):
    for pid, old in zip(mv.ids, mv.before):
        if Path(state[pid]) != Path(old):
            raise RewriteError(f"move {mv} does not match the current path {state[pid]}")
    for new in mv.after:
        if not is_shortest(g, new):
            raise RewriteError(f"move {mv} produces {new}, which is not a geodesic")
    if mv.kind == "iso":
        if not paths_isomorphic(g, mv.before[0], mv.after[0]):
            raise RewriteError(f"move {mv} is not an isomorphism")
    elif mv.kind == "swap":
        if tuple(swap_result(mv.before[0], mv.before[1], mv.x)) != tuple(mv.after):
            raise RewriteError(f"move {mv} is not a swap at {mv.x}")
    else:
        raise RewriteError(f"unknown move kind {mv.kind!r}")


def _rewriter(g: ColoredGraph) -> "_Rewriter":
    # the depth function dominates the cost of a single rewrite
    rw = g.__dict__.get("_rewriter")
    if rw is None:
        rw = g.__dict__["_rewriter"] = _Rewriter(g)
    return rw


class _Rewriter:
    def __init__(self, g: ColoredGraph):
        self.g = g
        self.d: DepthFunction = depth_function(g)

    # helpers
    def vdepth(self, v):
        return self.d(v)

    def edepth(self, a, b):
        return self.d((a, b))

    def _first_match(self, target: list, pred):
        for idx, p in enumerate(target):
            r = pred(p)
            if r is not None:
                return idx, r
        return None, None

    def _iso(self, pid, before, after) -> list[Move]:
        if Path(before) == Path(after) and tuple(before) == tuple(after):
            return []
        return [Move("iso", (pid,), (tuple(before),), (tuple(after),))]

    def solve(self, state: dict, target: list) -> list[Move]:
        g = self.g
        state = dict(state)
        target = [tuple(p) for p in target]
        moves: list[Move] = []

        def emit(ms):
            for mv in ms:
                for pid, new in zip(mv.ids, mv.after):
                    state[pid] = new
            moves.extend(ms)

        while True:
            # cancel identical paths
            for pid in sorted(state):
                hit = next((i for i, q in enumerate(target) if Path(q) == Path(state[pid])), None)
                if hit is not None:
                    del state[pid]
                    target.pop(hit)
            if not state:
                if target:
                    raise RewriteError("collections differ in size")
                return moves

            if all(len(p) == 1 for p in state.values()):
                for pid in sorted(state):
                    (v,) = state[pid]
                    idx = next((i for i, q in enumerate(target) if len(q) == 1 and g.color(q[0]) == g.color(v)), None)
                    if idx is None:
                        raise RewriteError("no vertex of matching color in the target")
                    emit(self._iso(pid, state[pid], target[idx]))
                    del state[pid]
                    target.pop(idx)
                continue

            k = max(
                [self.edepth(a, b) for p in state.values() for a, b in zip(p, p[1:])]
                + [self.vdepth(v) for p in state.values() for v in p]
            )

            # (a) a top edge with both ends on top: the path is that edge
            done = False
            for pid in sorted(state):
                p = state[pid]
                if len(p) == 2 and self.edepth(*p) == k and self.vdepth(p[0]) == k == self.vdepth(p[1]):
                    col = g.edge_color(*p)
                    idx, q = self._first_match(
                        target, lambda q: q if len(q) == 2 and g.edge_color(*q) == col else None
                    )
                    if idx is None:
                        raise RewriteError("no matching top edge in the target")
                    if color_sequence(g, q) != color_sequence(g, p):
                        q = q[::-1]
                    emit(self._iso(pid, p, q))
                    del state[pid]
                    target.pop(idx)
                    done = True
                    break
            if done:
                continue

            # (b) more top vertices than top edges: a lone top vertex exists
            top_v = sum(1 for p in state.values() for v in p if self.vdepth(v) == k)
            top_e = sum(1 for p in state.values() for a, b in zip(p, p[1:]) if self.edepth(a, b) == k)
            if top_v > top_e:
                pid = next(pid for pid in sorted(state) if len(state[pid]) == 1 and self.vdepth(state[pid][0]) == k)
                v = state[pid][0]
                idx = next((i for i, q in enumerate(target) if len(q) == 1 and g.color(q[0]) == g.color(v)), None)
                if idx is None:
                    raise RewriteError("no lone vertex of matching color in the target")
                emit(self._iso(pid, state[pid], target[idx]))
                del state[pid]
                target.pop(idx)
                continue

            # (c) peel a top edge off one path and recurse
            moves.extend(self._peel_step(state, target, k))  # updates state itself

    def _orient_top(self, p: tuple, k: int) -> Optional[tuple]:
        """p oriented so that it starts with a depth-k edge, or None."""
        cands = []
        for o in (p, p[::-1]):
            if len(o) >= 2 and self.edepth(o[0], o[1]) == k and self.vdepth(o[0]) == k:
                cands.append(o)
        if not cands:
            return None
        return min(cands, key=lambda t: [_vkey(v) for v in t])

    def _peel_step(self, state: dict, target: list, k: int) -> list[Move]:
        g = self.g
        pid = next(pid for pid in sorted(state) if self._orient_top(state[pid], k) is not None)
        P = self._orient_top(state[pid], k)
        u, e_col = P[0], g.edge_color(P[0], P[1])

        def match(q):
            for o in (q, q[::-1]):
                if len(o) >= 2 and g.edge_color(o[0], o[1]) == e_col and self.vdepth(o[0]) == k:
                    return o
            return None

        idx, Pp = self._first_match(target, match)
        if idx is None:
            raise RewriteError("no path with a matching top edge in the target")
        Pt, Ppt = P[1:], Pp[1:]

        sub_state = dict(state)
        sub_state[pid] = Pt
        sub_target = list(target)
        sub_target[idx] = Ppt
        inner = self.solve(sub_state, sub_target)

        moves: list[Move] = []
        cur = dict(state)
        cur[pid] = P
        tt = Pt  # tracked truncated path, always starting at the attach vertex v

        def push(mv):
            _validate_move(g, cur, mv)
            for i_, new in zip(mv.ids, mv.after):
                cur[i_] = new
            moves.append(mv)

        for mv in inner:
            if pid not in mv.ids:
                push(mv)
                continue
            if mv.kind == "iso":
                before, after = mv.before[0], mv.after[0]
                if color_sequence(g, before) != color_sequence(g, after):
                    after = after[::-1]
                if tuple(before) != tt:
                    before, after = before[::-1], after[::-1]
                full = (u,) + tt
                alpha = find_quasi_automorphism(
                    g, dict(zip(before, after)), [frozenset(x) for x in zip(full, full[1:])]
                )
                if alpha is None:
                    raise RewriteError(f"no quasi-automorphism carries {full} along {before}->{after}")
                u = alpha[u]
                tt = tuple(after)
                push(Move("iso", (pid,), (cur[pid],), ((u,) + tt,)))
                continue
            # swap involving the tracked path: u follows the piece through v
            other = mv.ids[1] if mv.ids[0] == pid else mv.ids[0]
            res = dict(zip(mv.ids, mv.after))
            owners = [i for i in (pid, other) if tt[0] in (res[i][0], res[i][-1])]
            if not owners:
                raise RewriteError(f"swap {mv} loses the attachment vertex {tt[0]}")
            lifted = None
            for owner in owners:
                r = res[owner] if res[owner][0] == tt[0] else res[owner][::-1]
                if not is_shortest(g, (u,) + r):
                    continue
                lifted = self._lift_swap(cur, pid, other, u, owner, r, res, mv.x)
                if lifted is not None:
                    break
            if lifted is None:
                owner = owners[0]
                r = res[owner] if res[owner][0] == tt[0] else res[owner][::-1]
                # the piece through v would fold back into u's clique; move u
                # to a sibling clique at v first
                u = self._reseat((u,) + tt, r)
                push(Move("iso", (pid,), (cur[pid],), ((u,) + tt,)))
                lifted = self._lift_swap(cur, pid, other, u, owner, r, res, mv.x)
                if lifted is None:
                    raise RewriteError(f"cannot lift {mv}")
            push(lifted)
            pid, tt = owner, r

        # align the tracked path with its partner in the target
        full = (u,) + tt
        if Path(tt) == Path(Ppt):
            after = Pp if color_sequence(g, Pp) == color_sequence(g, full) else Pp[::-1]
            for mv in self._iso(pid, cur[pid], after):
                push(mv)
            state.clear()
            state.update(cur)
            del state[pid]
            target.pop(idx)
            return moves

        qid = next(i for i in sorted(cur) if i != pid and Path(cur[i]) == Path(Ppt))
        Q = cur[qid] if cur[qid][0] == Ppt[0] else cur[qid][::-1]
        up, vp = Pp[0], Pp[1]
        alpha = find_quasi_automorphism(g, {u: up, tt[0]: vp}, [frozenset(x) for x in zip(full, full[1:])])
        if alpha is None:
            raise RewriteError(f"no quasi-automorphism moves {full[:2]} onto {(up, vp)}")
        moved = tuple(alpha[v] for v in full)
        for mv in self._iso(pid, cur[pid], moved):
            push(mv)
        new_p, new_q = swap_result(moved, Q, vp)
        push(Move("swap", (pid, qid), (moved, Q), (new_p, new_q), vp))
        if Path(new_p) != Path(Pp):
            raise RewriteError("final swap did not produce the target path")
        state.clear()
        state.update(cur)
        del state[pid]
        target.pop(idx)
        return moves

    def _lift_swap(self, cur, pid, other, u, owner, r, res, x) -> Optional[Move]:
        """A swap on the full paths whose results are u + r for ``owner``
        and the inner result for the other id."""
        want = {owner: Path((u,) + r)}
        rest = other if owner == pid else pid
        want[rest] = Path(res[rest])
        for first, second in ((pid, other), (other, pid)):
            for p in (cur[first], cur[first][::-1]):
                for q in (cur[second], cur[second][::-1]):
                    if x not in p or x not in q:
                        continue
                    a, b = swap_result(p, q, x)
                    if Path(a) == want[first] and Path(b) == want[second]:
                        return Move("swap", (first, second), (p, q), (a, b), x)
        return None

    def _reseat(self, full: tuple, new_tt: tuple) -> str:
        g = self.g
        u, v = full[0], full[1]
        for w in g.sort(g.neighbors(v)):
            if w in new_tt or g.color(w) != g.color(u) or g.edge_color(w, v) != g.edge_color(u, v):
                continue
            if is_shortest(g, (w,) + new_tt) and is_shortest(g, (w,) + full[1:]):
                return w
        raise RewriteError(f"cannot lift a swap through {full}")


def _compress(moves: list[Move]) -> list[Move]:
    out: list[Move] = []
    for mv in moves:
        if mv.kind == "iso" and out and out[-1].kind == "iso" and out[-1].ids == mv.ids:
            prev = out.pop()
            if Path(prev.before[0]) != Path(mv.after[0]) or prev.before[0] != mv.after[0]:
                out.append(Move("iso", mv.ids, prev.before, mv.after))
            continue
        out.append(mv)
    return out


def _one_move(g: ColoredGraph, state: dict, target: list) -> Optional[list[Move]]:
    ids = sorted(state)
    tgt = sorted(Path(p) for p in target)
    for pid in ids:
        rest = sorted(Path(state[i]) for i in ids if i != pid)
        for j, q in enumerate(target):
            if rest == sorted(Path(t) for k, t in enumerate(target) if k != j):
                if paths_isomorphic(g, state[pid], q):
                    return [Move("iso", (pid,), (state[pid],), (tuple(q),))]
    for a, b in combinations(ids, 2):
        rest = sorted(Path(state[i]) for i in ids if i not in (a, b))
        p = state[a]
        for q in (state[b], state[b][::-1]):
            for x in set(p) & set(q):
                new = swap_result(p, q, x)
                if all(is_shortest(g, t) for t in new):
                    if sorted(rest + [Path(t) for t in new]) == tgt:
                        return [Move("swap", (a, b), (p, q), new, x)]
    return None


def rewrite_paths(g: ColoredGraph, A: Sequence, B: Sequence) -> RewriteTrace:
    """Moves turning the geodesic collection A into B (connected graphs)."""
    A = [tuple(p.vertices if isinstance(p, Path) else p) for p in A]
    B = [tuple(p.vertices if isinstance(p, Path) else p) for p in B]
    for p in A + B:
        if not is_shortest(g, p):
            raise GraphError(f"{p} is not a geodesic")
    if len(A) != len(B) or _color_totals(g, A) != _color_totals(g, B):
        raise RewriteError("the collections carry different colors")
    state = dict(enumerate(A))
    trace = RewriteTrace(dict(state), list(B))
    if sorted(map(Path, A)) == sorted(map(Path, B)):
        return trace
    quick = _one_move(g, state, B)
    if quick is not None:
        trace.moves = quick
    else:
        try:
            trace.moves = _compress(_rewriter(g).solve(state, B))
        except RewriteError:
            trace.moves = _search(g, state, B)
            trace.strategy = "search"
    trace.replay(g)
    return trace


SEARCH_LIMIT = 200_000


def _geodesic_classes(g: ColoredGraph) -> dict:
    """Oriented geodesics grouped by their color sequence."""
    cached = g.__dict__.get("_geodesic_classes")
    if cached is None:
        cached = {}
        for a in g.vertices:
            for b in g.vertices:
                try:
                    p = tuple(shortest_path(g, a, b).vertices)
                except GraphError:
                    continue
                cached.setdefault(color_sequence(g, p), []).append(p)
        g.__dict__["_geodesic_classes"] = cached
    return cached


def _search(g: ColoredGraph, state: dict, target: list, limit: int = SEARCH_LIMIT) -> list[Move]:
    """Breadth-first search over both move types; the fallback when a
    swap cannot be lifted through the peeled edge."""
    ids = sorted(state)
    classes = _geodesic_classes(g)
    goal = tuple(sorted(Path(p) for p in target))

    def key(paths):
        return tuple(sorted(Path(p) for p in paths))

    def neighbours(paths):
        for k, p in enumerate(paths):
            for q in classes.get(color_sequence(g, p), []):
                if Path(q) != Path(p):
                    yield Move("iso", (ids[k],), (p,), (q,)), k, None, q, None
        for k, l in combinations(range(len(paths)), 2):
            p = paths[k]
            for q in (paths[l], paths[l][::-1]):
                for x in set(p) & set(q):
                    a, b = swap_result(p, q, x)
                    if is_shortest(g, a) and is_shortest(g, b):
                        yield Move("swap", (ids[k], ids[l]), (p, q), (a, b), x), k, l, a, b

    start = tuple(state[i] for i in ids)
    parent = {key(start): None}
    frontier = [start]
    while frontier:
        nxt = []
        for paths in frontier:
            if key(paths) == goal:
                moves = []
                k = key(paths)
                while parent[k] is not None:
                    prev, mv = parent[k]
                    moves.append(mv)
                    k = prev
                return moves[::-1]
            for mv, k, l, a, b in neighbours(paths):
                new = list(paths)
                new[k] = a
                if l is not None:
                    new[l] = b
                new = tuple(new)
                nk = key(new)
                if nk in parent:
                    continue
                parent[nk] = (key(paths), mv)
                nxt.append(new)
                if len(parent) > limit:
                    raise RewriteError(f"search gave up after {limit} states")
        frontier = nxt
    raise RewriteError("no sequence of moves reaches the target")


@dataclass(frozen=True)
class Certificate:
    in_kernel: bool
    trace: Optional[RewriteTrace] = None


def kernel_membership(g: ColoredGraph, b: Binomial) -> Certificate:
    if psi_image(g, b.lhs) != psi_image(g, b.rhs):
        return Certificate(False)
    A = [pair_path(g, *f).vertices for f in b.lhs.factors]
    B = [pair_path(g, *f).vertices for f in b.rhs.factors]
    comps = _component_of(g)
    if len({id(comps[p[0]]) for p in A + B}) > 1:
        # rewrite within each component separately
        moves = []
        trace = RewriteTrace(dict(enumerate(A)), B)
        for comp in {id(c): c for c in comps.values()}.values():
            a = [p for p in A if comps[p[0]] is comp]
            bb = [p for p in B if comps[p[0]] is comp]
            if not a and not bb:
                continue
            sub = rewrite_paths(comp, a, bb)
            ids = [i for i, p in enumerate(A) if comps[p[0]] is comp]
            for mv in sub.moves:
                moves.append(Move(mv.kind, tuple(ids[i] for i in mv.ids), mv.before, mv.after, mv.x))
        trace.moves = moves
        trace.replay(g)
        return Certificate(True, trace)
    return Certificate(True, rewrite_paths(comps[A[0][0]], A, B))
