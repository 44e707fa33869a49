"""Exact truncated power series for the image of sigma-polynomials.

Variables are pairs (kind, Color).  Kind "y" is a graded variable: y of a
vertex color stands for 1 - k_vv, y of an edge color for -k_uv.  Kind "z"
is ungraded and stands for 1/(1 - y) of a vertex color; it only appears in
the edge-graded walk expansion used by the non-binomiality witnesses.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, Optional, Sequence

from .graphs import Color, ColoredGraph
from .ideal import SigmaMonomial, _pair, _vkey

Y = "y"
Z = "z"
# Monomials are packed into ints: field 0 holds the graded degree, field k
# the exponent of the k-th registered variable.  Products are then sums.
_FIELD = 12
_MASK = (1 << _FIELD) - 1
_SLOT: dict = {}
_VARS: list = []


def _slot(var) -> int:
    s = _SLOT.get(var)
    if s is None:
        _VARS.append(var)
        s = _SLOT[var] = len(_VARS) * _FIELD
    return s


def _unit(var) -> int:
    return (1 << _slot(var)) + (1 if var[0] == Y else 0)


def _encode(exps) -> int:
    return sum(e * _unit(var) for var, e in exps)


def _decode(code: int) -> tuple:
    out = []
    code >>= _FIELD
    k = 0
    while code:
        e = code & _MASK
        if e:
            out.append((_VARS[k], e))
        code >>= _FIELD
        k += 1
    return tuple(sorted(out))


def _grade(exps: tuple) -> int:
    return sum(e for (kind, _), e in exps if kind == Y)


class TruncatedSeries:
    """Polynomial in the series variables with every graded degree <= bound."""

    __slots__ = ("packed", "bound")

    def __init__(self, terms: Optional[Mapping] = None, bound: int = 6):
        self.bound = bound
        packed: dict = defaultdict(int)
        for exps, c in (terms or {}).items():
            if c and _grade(exps) <= bound:
                packed[_encode(exps)] += c
        self.packed = {k: v for k, v in packed.items() if v}

    @classmethod
    def _of(cls, packed: dict, bound: int) -> "TruncatedSeries":
        out = cls(bound=bound)
        out.packed = {k: v for k, v in packed.items() if v and k & _MASK <= bound}
        return out

    @property
    def terms(self) -> dict:
        return {_decode(k): c for k, c in self.packed.items()}

    @classmethod
    def one(cls, bound: int) -> "TruncatedSeries":
        return cls({(): 1}, bound)

    @classmethod
    def var(cls, kind: str, color: Color, bound: int) -> "TruncatedSeries":
        return cls({(((kind, color), 1),): 1}, bound)

    def is_zero(self) -> bool:
        return not self.packed

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        out = dict(self.packed)
        for k, c in other.packed.items():
            out[k] = out.get(k, 0) + c
        return TruncatedSeries._of(out, min(self.bound, other.bound))

    def __neg__(self):
        return TruncatedSeries._of({k: -c for k, c in self.packed.items()}, self.bound)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        return TruncatedSeries._of({k: c * v for k, v in self.packed.items()}, self.bound)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        bound = min(self.bound, other.bound)
        right: dict = defaultdict(list)
        for k, c in other.packed.items():
            right[k & _MASK].append((k, c))
        out: dict = defaultdict(int)
        for k1, c1 in self.packed.items():
            room = bound - (k1 & _MASK)
            for g2, terms in right.items():
                if g2 <= room:
                    for k2, c2 in terms:
                        out[k1 + k2] += c1 * c2
        return TruncatedSeries._of(out, bound)

    def component(self, degree: int) -> "TruncatedSeries":
        """The homogeneous part of the given graded degree."""
        return TruncatedSeries._of({k: c for k, c in self.packed.items() if k & _MASK == degree}, self.bound)

    def truncate(self, bound: int) -> "TruncatedSeries":
        return TruncatedSeries._of(self.packed, min(bound, self.bound))

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.packed == other.packed

    def __repr__(self):
        terms = self.terms
        if not terms:
            return "0"
        parts = []
        for k in sorted(terms, key=lambda k: (_grade(k), k)):
            mono = "*".join(f"{kind}_{c.label}" + (f"^{e}" if e > 1 else "") for (kind, c), e in k) or "1"
            parts.append(f"{terms[k]}*{mono}")
        return " + ".join(parts)

    def as_dict(self) -> dict:
        terms = self.terms
        out = {}
        for k in sorted(terms, key=lambda k: (_grade(k), k)):
            mono = "*".join(f"{kind}_{c!r}" + (f"^{e}" if e > 1 else "") for (kind, c), e in k) or "1"
            out[mono] = str(terms[k])
        return out


class SigmaPolynomial:
    """Polynomial in the covariance entries with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping] = None):
        acc: dict[SigmaMonomial, Fraction] = defaultdict(Fraction)
        for m, c in (terms or {}).items():
            acc[m] += Fraction(c)
        self.terms = {m: c for m, c in acc.items() if c}

    @classmethod
    def from_binomial(cls, b) -> "SigmaPolynomial":
        return cls({b.lhs: 1}) - cls({b.rhs: 1})

    @classmethod
    def monomial(cls, m: SigmaMonomial, c=1) -> "SigmaPolynomial":
        return cls({m: c})

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SigmaPolynomial(out)

    def __neg__(self):
        return SigmaPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out: dict = defaultdict(Fraction)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out[m1 * m2] += c1 * c2
        return SigmaPolynomial(out)

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> list[SigmaMonomial]:
        return sorted(self.terms)

    def __eq__(self, other):
        return isinstance(other, SigmaPolynomial) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{m}" for m, c in sorted(self.terms.items()))


MAX_DET_SIZE = 8


def det_polynomial(rows: Sequence[str], cols: Sequence[str]) -> SigmaPolynomial:
    """det of the submatrix of Sigma with the given ordered rows and columns.

    Laplace expansion along rows, memoized over the set of columns left.
    """
    if len(rows) != len(cols):
        raise ValueError("rows and columns must have equal size")
    if len(rows) > MAX_DET_SIZE:
        raise ValueError(f"determinant of size {len(rows)} exceeds {MAX_DET_SIZE}")
    k = len(rows)
    memo: dict[int, dict] = {}

    def expand(i: int, mask: int) -> dict:
        if i == k:
            return {SigmaMonomial(): 1}
        hit = memo.get(mask)
        if hit is not None:
            return hit
        out: dict = defaultdict(int)
        sign = 1
        for j in range(k):
            if mask >> j & 1:
                continue
            f = SigmaMonomial([(rows[i], cols[j])])
            for m, c in expand(i + 1, mask | 1 << j).items():
                out[f * m] += sign * c
            sign = -sign
        res = {m: c for m, c in out.items() if c}
        memo[mask] = res
        return res

    return SigmaPolynomial(expand(0, 0))


# -- series of single covariance entries ----------------------------------------


def _walk_rows(g: ColoredGraph, i: str, steps: int, bound: int, *, stay: bool, zfactors: bool) -> dict:
    """Weighted walks from i with at most `steps` steps, in packed form.

    A step along an edge multiplies by y of its color (and by z of the
    vertex entered when zfactors is set); with `stay`, a step may also
    remain at v and multiply by y of v's color.
    """
    z = (lambda v: _unit((Z, g.color(v)))) if zfactors else (lambda v: 0)
    moves = {}
    for v in g.vertices:
        out = [(w, _unit((Y, g.edge_color(v, w))) + z(w)) for w in g.neighbors(v)]
        if stay:
            out.append((v, _unit((Y, g.color(v)))))
        moves[v] = out
    start = z(i)
    layer = {i: {start: 1}}
    total: dict = defaultdict(lambda: defaultdict(int))
    total[i][start] += 1
    for _ in range(steps):
        nxt: dict = defaultdict(lambda: defaultdict(int))
        for v, poly in layer.items():
            for w, code in moves[v]:
                bucket = nxt[w]
                for e, c in poly.items():
                    bucket[e + code] += c
        layer = nxt
        for w, poly in layer.items():
            tw = total[w]
            for e, c in poly.items():
                tw[e] += c
    return {v: TruncatedSeries._of(total[v], bound) for v in g.vertices}


def _row_y(g: ColoredGraph, i: str, D: int) -> dict[str, TruncatedSeries]:
    """Row i of (I - Psi)^-1 truncated at total degree D.

    Psi has y of the vertex color on the diagonal and y of the edge color
    on edges; every step of the Neumann series adds one degree, so the
    sum stops after D steps.
    """
    cache = g.__dict__.setdefault("_row_y_cache", {})
    if (i, D) not in cache:
        cache[(i, D)] = _walk_rows(g, i, D, D, stay=True, zfactors=False)
    return cache[(i, D)]


def sigma_series(g: ColoredGraph, i: str, j: str, D: int) -> TruncatedSeries:
    """Walk-series expansion of rho(sigma_ij) truncated at total degree D."""
    if D < 0:
        raise ValueError("degree bound must be non-negative")
    return _row_y(g, i, D)[j]


def _row_zy(g: ColoredGraph, i: str, E: int) -> dict[str, TruncatedSeries]:
    """Row i of the walk sum with z factors kept symbolic, walks of <= E edges."""
    cache = g.__dict__.setdefault("_row_zy_cache", {})
    if (i, E) not in cache:
        cache[(i, E)] = _walk_rows(g, i, E, E, stay=False, zfactors=True)
    return cache[(i, E)]


def walk_series(g: ColoredGraph, i: str, j: str, E: int) -> TruncatedSeries:
    """rho(sigma_ij) graded by edge degree, vertex factors as z variables.

    Each edge-degree component is a finite sum over walks with that many
    edges, so the truncation is exact through degree E.
    """
    return _row_zy(g, i, E)[j]


def evaluate_monomial(g: ColoredGraph, m: SigmaMonomial, D: int, *, edge_graded: bool = False) -> TruncatedSeries:
    cache = g.__dict__.setdefault("_monomial_cache", {})
    key = (m.factors, D, edge_graded)
    hit = cache.get(key)
    if hit is not None:
        return hit
    entry = walk_series if edge_graded else sigma_series
    out = TruncatedSeries.one(D)
    for a, b in m.factors:
        out = out * entry(g, a, b, D)
    cache[key] = out
    return out


def evaluate_sigma_poly(g: ColoredGraph, p: SigmaPolynomial, D: int = 6, *, edge_graded: bool = False) -> TruncatedSeries:
    """rho_G(p) truncated at degree D."""
    out = TruncatedSeries(bound=D)
    for m, c in p.terms.items():
        out = out + evaluate_monomial(g, m, D, edge_graded=edge_graded).scale(c)
    return out
