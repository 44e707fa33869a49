"""Independent checks on the algebraic side.

Sampling points of the model, exact and floating vanishing tests, the
non-binomiality witness polynomials, the Jordan closure test for complete
graphs and the Jacobian rank of the parametrization.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .blocks import EQUAL_LENGTH, BlockViolation
from .flows import lift, path_matrix_minor
from .graphs import ColoredGraph, GraphError
from .ideal import SigmaMonomial, _vkey, decide_binomial
from .regularity import EDGE_REGULAR, EDGE_TRIANGLE_REGULAR, VERTEX_REGULAR
from .series import (
    SigmaPolynomial,
    TruncatedSeries,
    det_polynomial,
    evaluate_monomial,
)

DEFAULT_SEED = 20240611


class SingularSampleError(ArithmeticError):
    pass


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator; ``stream`` selects an independent substream."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def _color_values(g: ColoredGraph, rng: np.random.Generator, rational: bool) -> dict:
    maxdeg = max((g.degree(v) for v in g.vertices), default=0)
    eps = Fraction(1, maxdeg + 2)  # strictly below 1/(maxdeg + 1)
    out = {}
    for c in g.colors:
        if c.namespace == "vertex":
            if rational:
                out[c] = 1 + Fraction(int(rng.integers(0, 65)), 64)
            else:
                out[c] = float(rng.uniform(1, 2))
        else:
            if rational:
                out[c] = eps * Fraction(int(rng.integers(-63, 64)), 64)
            else:
                out[c] = float(rng.uniform(-1, 1)) * float(eps)
    return out


def matrix_from_colors(g: ColoredGraph, values: dict, rational: bool = False):
    n = len(g)
    if rational:
        K = [[Fraction(0)] * n for _ in range(n)]
    else:
        K = np.zeros((n, n))
    for i, v in enumerate(g.vertices):
        K[i][i] = values[g.color(v)]
    for u, v in g.edges:
        i, j = g.index[u], g.index[v]
        K[i][j] = K[j][i] = values[g.edge_color(u, v)]
    return K


def numeric_sample(g: ColoredGraph, seed: int = DEFAULT_SEED, *, rational: bool = False, stream: int = 0):
    """A concentration matrix in the model space, diagonally dominant.

    Each color gets one value: diagonal colors in [1, 2], edge colors in
    (-eps, eps) with eps = 1/(max degree + 2).  Gershgorin makes the result
    positive definite.
    """
    rng = make_rng(seed, stream)
    return matrix_from_colors(g, _color_values(g, rng, rational), rational)


def rational_inverse(K: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(K)
    M = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(K)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SingularSampleError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


def covariance_sample(g: ColoredGraph, seed: int = DEFAULT_SEED, *, rational: bool = False, stream: int = 0):
    """Sigma = K^-1 for a sampled K; singular draws are skipped silently."""
    for attempt in range(100):
        K = numeric_sample(g, seed, rational=rational, stream=stream * 100 + attempt)
        try:
            if rational:
                return rational_inverse(K)
            if np.linalg.cond(K) > 1e12:
                continue
            return np.linalg.inv(K)
        except SingularSampleError:
            continue
    raise SingularSampleError("could not draw a regular sample")


def evaluate_at(g: ColoredGraph, p: SigmaPolynomial, S) -> tuple:
    """(value, scale) of p at the covariance matrix S."""
    idx = g.index
    value = 0
    scale = 0
    for m, c in p.terms.items():
        t = c if S is not None and isinstance(S, list) else float(c)
        for a, b in m.factors:
            t = t * S[idx[a]][idx[b]]
        value += t
        scale = max(scale, abs(t))
    return value, scale


@dataclass
class VanishReport:
    vanishes: bool
    seed: int
    trials: int
    rational: bool
    residuals: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "vanishes": self.vanishes,
            "seed": self.seed,
            "trials": self.trials,
            "rational": self.rational,
            "max_residual": str(max(self.residuals, default=0)),
        }


def vanish_report(
    g: ColoredGraph,
    polys: Sequence[SigmaPolynomial],
    trials: int = 5,
    tol: float = 1e-9,
    seed: int = DEFAULT_SEED,
    rational: bool = False,
) -> list[VanishReport]:
    """Evaluate several polynomials on shared samples."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    reports = [VanishReport(True, seed, trials, rational) for _ in polys]
    for t in range(trials):
        S = covariance_sample(g, seed, rational=rational, stream=t)
        for rep, p in zip(reports, polys):
            value, scale = evaluate_at(g, p, S)
            res = abs(value)
            rep.residuals.append(res if rational else res / scale if scale else res)
            limit = 0 if rational else tol * scale
            if res > limit:
                rep.vanishes = False
    return reports


def numeric_vanish(
    g: ColoredGraph,
    p: SigmaPolynomial,
    trials: int = 5,
    tol: float = 1e-9,
    seed: int = DEFAULT_SEED,
    rational: bool = False,
) -> bool:
    """Whether p vanishes at sampled points of the model.

    Floating mode accepts |p| <= tol * (largest monomial value); rational
    mode demands an exact zero.
    """
    return vanish_report(g, [p], trials, tol, seed, rational)[0].vanishes


# -- non-binomiality witnesses ------------------------------------------------

BLOCK_1 = "block-1"
BLOCK_2 = "block-2"
VERTEX_CASE = "vertex"
EDGE_CASE = "edge"


@dataclass(frozen=True)
class Witness:
    polynomial: SigmaPolynomial
    monomial: SigmaMonomial
    case: str
    vertices: tuple  # (u, v) or ((u1, v1), (u2, v2))
    distance: int
    degree_bound: int  # edge degree through which the monomial is isolated
    minors: tuple  # ((rows, cols), ...) with signs +1, -1

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "vertices": [list(x) if isinstance(x, tuple) else x for x in self.vertices],
            "distance": self.distance,
            "degree_bound": self.degree_bound,
            "monomial": str(self.monomial),
            "minors": [{"rows": list(r), "cols": list(c)} for r, c in self.minors],
            "terms": len(self.polynomial),
        }


def _sorted(vs) -> list[str]:
    return sorted(vs, key=_vkey)


def _diag(vs) -> list[tuple[str, str]]:
    return [(v, v) for v in vs]


def block_witness(g: ColoredGraph, u: str, v: str, case: str = BLOCK_1) -> Witness:
    """det Sigma_AB with A = N(u) + u, B = N(u) + v."""
    d = g.distance(u, v)
    nu = _sorted(g.neighbors(u))
    rows, cols = [u] + nu, [v] + nu
    mono = SigmaMonomial([(u, v)] + _diag(nu))
    bound = d if case == BLOCK_1 else d + 1
    return Witness(det_polynomial(rows, cols), mono, case, (u, v), d, bound, ((tuple(rows), tuple(cols)),))


def vertex_witness(g: ColoredGraph, u: str, v: str) -> Witness:
    """det Sigma_AA - det Sigma_BB for two vertices of one color."""
    if g.color(u) != g.color(v):
        raise GraphError("vertex witness needs two vertices of the same color")
    N = g.neighbors
    d = g.distance(u, v)
    if d >= 2:
        common = _sorted(N(u) | N(v))
        A, B = [u] + common, [v] + common
    else:
        A = _sorted((N(u) | N(v)) - {v})
        B = _sorted((N(u) | N(v)) - {u})
    poly = det_polynomial(A, A) - det_polynomial(B, B)
    return Witness(poly, SigmaMonomial(_diag(A)), VERTEX_CASE, (u, v), d, 2, ((tuple(A), tuple(A)), (tuple(B), tuple(B))))


def edge_witness(g: ColoredGraph, e1: Sequence[str], e2: Sequence[str]) -> Witness:
    """Difference of two almost-principal minors for two edges of one color.

    The polynomial lies in the ideal whenever the edge colors agree; it
    isolates the distinguished monomial when the edges differ in their
    endpoint colors or incident triangles.
    """
    (u1, v1), (u2, v2) = e1, e2
    if g.edge_color(u1, v1) != g.edge_color(u2, v2):
        raise GraphError("edge witness needs two edges of the same color")
    A = set((u1, v1, u2, v2))
    for x in (u1, v1, u2, v2):
        A |= g.neighbors(x)
    A = _sorted(A)
    minors = []
    for a, b in ((u1, v1), (u2, v2)):
        rows = [x for x in A if x != a]
        # b is replaced by a in place, so the edge term sits on the diagonal
        cols = [a if x == b else x for x in rows]
        minors.append((tuple(rows), tuple(cols)))
    poly = det_polynomial(*minors[0]) - det_polynomial(*minors[1])
    mono = SigmaMonomial([(v1, u1)] + _diag(x for x in A if x not in (u1, v1)))
    return Witness(poly, mono, EDGE_CASE, ((u1, v1), (u2, v2)), 1, 3, tuple(minors))


def witness_nonbinomial(g: ColoredGraph) -> Witness:
    """The determinantal polynomial exhibiting a non-binomial ideal.

    The construction follows the first failure found by the decision:
    block structure, then vertex regularity, then edge and edge-triangle
    regularity.
    """
    dec = decide_binomial(g)
    if dec.binomial:
        raise GraphError("the ideal is binomial; no witness exists")
    comp = g.induced(dec.component)
    w = dec.witness
    if isinstance(w, BlockViolation):
        return block_witness(comp, w.u, w.v, BLOCK_1 if w.kind == EQUAL_LENGTH else BLOCK_2)
    kind, pair = w
    if kind == VERTEX_REGULAR:
        return vertex_witness(comp, *pair)
    if kind in (EDGE_REGULAR, EDGE_TRIANGLE_REGULAR):
        return edge_witness(comp, *pair)
    raise GraphError(f"no witness construction for failure kind {kind!r}")


def monomial_signature(g: ColoredGraph, m: SigmaMonomial, E: int) -> TruncatedSeries:
    """rho(m) through edge degree E, vertex factors kept as z variables."""
    return evaluate_monomial(g, m, E, edge_graded=True)


def witness_partners(g: ColoredGraph, w: Witness, E: Optional[int] = None) -> list[SigmaMonomial]:
    """Other monomials of the witness whose image agrees with the distinguished
    one through edge degree E.  An empty list certifies non-binomiality."""
    E = w.degree_bound if E is None else E
    target = monomial_signature(g, w.monomial, E)
    out = []
    for m in w.polynomial.monomials():
        if m != w.monomial and monomial_signature(g, m, E) == target:
            out.append(m)
    return out


# -- fundamental identity -----------------------------------------------------


def fundamental_identity(g: ColoredGraph, A: Sequence[str], B: Sequence[str], seed: int = DEFAULT_SEED) -> tuple[float, float]:
    """Both sides of rho(det Sigma_AB) = Delta_AB(M) * prod_B z at random y.

    The y values are small enough for all walk sums to converge.
    """
    rng = make_rng(seed, 7)
    maxdeg = max((g.degree(v) for v in g.vertices), default=0)
    r = 0.5 / (maxdeg + 1)
    y = {c: float(rng.uniform(-r, r)) for c in g.colors}
    n = len(g)
    Psi = np.zeros((n, n))
    for i, v in enumerate(g.vertices):
        Psi[i, i] = y[g.color(v)]
    for u, v in g.edges:
        Psi[g.index[u], g.index[v]] = Psi[g.index[v], g.index[u]] = y[g.edge_color(u, v)]
    S = np.linalg.inv(np.eye(n) - Psi)
    ia, ib = [g.index[a] for a in A], [g.index[b] for b in B]
    lhs = float(np.linalg.det(S[np.ix_(ia, ib)])) if ia else 1.0
    minor = path_matrix_minor(lift(g, y), ia, ib)
    rhs = minor * float(np.prod([1 / (1 - y[g.color(b)]) for b in B]))
    return lhs, rhs


# -- Jordan closure and dimension -----------------------------------------------


def _square_entries(g: ColoredGraph) -> dict:
    """Entries of K^2 for symbolic K, as multisets of color pairs."""
    vs = g.vertices

    def k(a, b):
        return g.color(a) if a == b else g.edge_color(a, b)

    out = {}
    for i, a in enumerate(vs):
        for b in vs[i:]:
            out[(a, b)] = Counter(tuple(sorted((k(a, l), k(l, b)))) for l in vs)
    return out


def jordan_closure(g: ColoredGraph) -> bool:
    """Whether K^2 stays in the model space for generic symbolic K.

    For a complete graph the model space is closed under the Jordan product
    exactly when equally colored entries of K^2 coincide as polynomials.
    """
    if not g.is_complete():
        raise GraphError("Jordan closure is defined here for complete graphs only")
    seen: dict = {}
    for (a, b), poly in _square_entries(g).items():
        key = g.color(a) if a == b else g.edge_color(a, b)
        if key in seen and seen[key] != poly:
            return False
        seen.setdefault(key, poly)
    return True


RANK_GAP = 1e-6


def jacobian(g: ColoredGraph, seed: int = DEFAULT_SEED, stream: int = 0) -> np.ndarray:
    """Derivative of theta -> K(theta)^-1, one column per color."""
    colors = list(g.colors)
    rng = make_rng(seed, 11, stream)
    K = matrix_from_colors(g, _color_values(g, rng, False))
    S = np.linalg.inv(K)
    n = len(g)
    iu = np.triu_indices(n)
    cols = []
    for c in colors:
        E = np.zeros((n, n))
        for i, v in enumerate(g.vertices):
            if g.color(v) == c:
                E[i, i] = 1
        for u, v in g.edges:
            if g.edge_color(u, v) == c:
                E[g.index[u], g.index[v]] = E[g.index[v], g.index[u]] = 1
        cols.append((-S @ E @ S)[iu])
    return np.array(cols).T


def model_dimension(g: ColoredGraph, seed: int = DEFAULT_SEED) -> int:
    """Numeric rank of the Jacobian of the parametrization at a sample."""
    if len(g) and not g.is_connected():
        raise GraphError("model_dimension expects a connected graph")
    for stream in range(10):
        J = jacobian(g, seed, stream)
        if not J.size:
            return 0
        s = np.linalg.svd(J, compute_uv=False)
        if s[0] == 0:
            continue
        return int(np.sum(s > RANK_GAP * s[0]))
    raise SingularSampleError("no usable sample")
