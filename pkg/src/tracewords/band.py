"""Periodic band matrices: constrained index counts and volume coefficients.

A band matrix of half-width ``b`` keeps entry ``(i, j)`` only when the
cyclic distance ``min(|i-j|, N-|i-j|)`` is at most ``b`` and scales the
kept entries by ``1/sqrt(l)``, ``l = min(2b+1, N)``.

For a pairing, the indices that survive are labelings of the slot classes
in which the two indices of every letter are within distance ``b``.  The
constraint graph has one vertex per slot class and one edge per distinct
pair of classes that some letter connects.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

from .errors import TooLargeError, UnsupportedConfigurationError
from .expansion import sphere_count
from .pairings import Glue, Layout, iter_raw
from .topology import glue_raw, search_pairings
from .words import Ensemble, Word, as_word, star

MAX_COMPONENT_VERTICES = 8
MAX_WORK = 10**8

# lambda = 0 regime: N = n^3 and b = n^2, so b grows like N^(2/3)
ZERO_LAMBDA_LADDER = (3, 4, 5, 6, 7, 8, 9, 10)
# lambda > 0 regime: b = round(lambda * N)
POSITIVE_LAMBDA_LADDER = (8, 16, 24, 32, 40, 48, 64)
LADDER_POINTS = 5


@dataclass(frozen=True)
class BandConfig:
    N: int
    b: int
    l: int = field(init=False)

    def __post_init__(self):
        if self.N < 1 or self.b < 1:
            raise ValueError("need N >= 1 and b >= 1")
        object.__setattr__(self, "l", min(2 * self.b + 1, self.N))


@dataclass(frozen=True)
class ConstraintGraph:
    n_vertices: int
    edges: frozenset  # of (u, v) with u < v

    @classmethod
    def from_edges(cls, n_vertices: int, edges) -> "ConstraintGraph":
        clean = set()
        for u, v in edges:
            if u != v:
                clean.add((min(u, v), max(u, v)))
        return cls(n_vertices, frozenset(clean))

    @classmethod
    def from_pairing(cls, layout: Layout, chosen: Sequence[tuple[int, int, Glue]]) -> "ConstraintGraph":
        surface = glue_raw(layout, chosen)
        labels: dict[int, int] = {}
        for r in surface.slot_classes:
            labels.setdefault(r, len(labels))
        edges = []
        for e in range(layout.m):
            x, y = layout.entry(e)
            edges.append((labels[surface.slot_classes[x]], labels[surface.slot_classes[y]]))
        return cls.from_edges(len(labels), edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def components(self) -> list[list[int]]:
        adj = self.adjacency()
        seen = [False] * self.n_vertices
        out = []
        for s in range(self.n_vertices):
            if seen[s]:
                continue
            seen[s] = True
            order = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        order.append(v)
                        queue.append(v)
            out.append(order)
        return out

    def is_cycle(self) -> bool:
        """Connected with every vertex of degree two (at least three vertices)."""
        if self.n_vertices < 3 or len(self.components()) != 1:
            return False
        return all(len(nb) == 2 for nb in self.adjacency())


def cycle_graph(m: int) -> ConstraintGraph:
    """The cycle ``C_m``; ``C_1`` is a single vertex and ``C_2`` a single edge after deduplication."""
    return ConstraintGraph.from_edges(m, [(i, (i + 1) % m) for i in range(m)])


@lru_cache(maxsize=8)
def _band_rows(N: int, b: int) -> np.ndarray:
    i = np.arange(N)
    d = np.abs(i[:, None] - i[None, :])
    return np.minimum(d, N - d) <= b


def _rooted_count(order: list[int], adj: list[list[int]], N: int, b: int) -> int:
    """Labelings of one component with its first vertex fixed at 0."""
    V = len(order)
    if V == 1:
        return 1
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[pos[u] for u in adj[v] if pos[u] < i] for i, v in enumerate(order)]
    rows = _band_rows(N, b)
    label = [0] * V

    def rec(i: int) -> int:
        mask = rows[label[earlier[i][0]]]
        for j in earlier[i][1:]:
            mask = mask & rows[label[j]]
        if i == V - 1:
            return int(np.count_nonzero(mask))
        total = 0
        for x in np.flatnonzero(mask):
            label[i] = int(x)
            total += rec(i + 1)
        return total

    return rec(1)


def band_index_count(
    graph: ConstraintGraph,
    cfg: BandConfig,
    max_vertices: int = MAX_COMPONENT_VERTICES,
) -> int:
    """Labelings of the vertices by ``0..N-1`` with adjacent labels within distance ``b``.

    Each component is counted as ``N`` times the labelings with its first
    vertex pinned, by depth-first search in breadth-first vertex order.
    Raises :class:`TooLargeError` for components with more than
    ``max_vertices`` vertices or when ``l^(V-1)`` exceeds ``10^8``.
    """
    adj = graph.adjacency()
    total = 1
    for order in graph.components():
        V = len(order)
        if V > max_vertices or cfg.l ** (V - 1) > MAX_WORK:
            raise TooLargeError(
                f"component with {V} vertices at l={cfg.l} exceeds the band count bounds"
            )
        total *= cfg.N * _rooted_count(order, adj, cfg.N, cfg.b)
    return total


# ---------------------------------------------------------------------------
# volume coefficients


def _config_for(N: int, lam: float) -> BandConfig:
    if lam >= 0.5:
        return BandConfig(N, N)
    return BandConfig(N, max(1, round(lam * N)))


def _neville(xs: Sequence[float], ys: Sequence[float], x0: float = 0.0) -> float:
    p = list(ys)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = ((x0 - xs[i + k]) * p[i] + (xs[i] - x0) * p[i + 1]) / (xs[i] - xs[i + k])
    return p[0]


@dataclass(frozen=True)
class AlphaEstimate:
    value: float
    error: float
    sizes: tuple[int, ...]
    ratios: tuple[float, ...]


def alpha_estimate(graph: ConstraintGraph, lam: float = 0.0) -> AlphaEstimate:
    """Volume coefficient of ``graph`` from exact counts and extrapolation.

    The ratio ``count / (N^c l^(V-c))`` is computed on the five largest
    sizes of a fixed ladder that fit the count bounds.  For ``lam == 0``,
    ``N = n^3`` and ``b = n^2``; otherwise ``b = round(lam N)`` and
    ``lam > 1/2`` means the full band.  The ratios
    are extrapolated to ``1/l -> 0`` by polynomial interpolation; the error
    is the largest change when any single size is left out.
    """
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    c = len(graph.components())
    V = graph.n_vertices
    sizes, hs, ratios = [], [], []
    if lam == 0:
        cfgs = [BandConfig(n ** 3, n ** 2) for n in ZERO_LAMBDA_LADDER]
    else:
        cfgs = [_config_for(N, lam) for N in POSITIVE_LAMBDA_LADDER]
    # the largest sizes whose counts stay within the work bound
    biggest = max((len(o) for o in graph.components()), default=1)
    cfgs = [cfg for cfg in cfgs if cfg.l ** (biggest - 1) <= MAX_WORK][-LADDER_POINTS:]
    if len(cfgs) < 3:
        raise TooLargeError(f"graph with a {biggest}-vertex component is too large for the size ladder")
    for cfg in cfgs:
        count = band_index_count(graph, cfg)
        ratio = Fraction(count, cfg.N ** c * cfg.l ** (V - c))
        sizes.append(cfg.N)
        hs.append(1.0 / cfg.l)
        ratios.append(float(ratio))
    if len(set(hs)) == 1:
        # full band at every size: the ratio is exactly 1
        return AlphaEstimate(ratios[-1], 0.0, tuple(sizes), tuple(ratios))
    value = _neville(hs, ratios)
    error = max(
        abs(value - _neville(hs[:i] + hs[i + 1:], ratios[:i] + ratios[i + 1:]))
        for i in range(len(hs))
    )
    return AlphaEstimate(value, error, tuple(sizes), tuple(ratios))


def alpha(graph: ConstraintGraph, lam: float = 0.0) -> float:
    return alpha_estimate(graph, lam).value


def alpha_cycle(m: int) -> float:
    """``(1/pi) * integral of sinc(t)^m over the real line``.

    Uses oscillatory quadrature on ``[0, inf)`` at 30 significant digits;
    the absolute error is far below ``1e-6``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    with mpmath.workdps(30):
        f = lambda t: (mpmath.sin(t) / t) ** m if t != 0 else mpmath.mpf(1)
        integral = mpmath.quadosc(f, [0, mpmath.inf], period=2 * mpmath.pi)
        return float(2 * integral / mpmath.pi)


# ---------------------------------------------------------------------------
# expansions


def _require_complex_ginibre(words: Sequence[Word]) -> None:
    for w in words:
        for letter in w:
            if letter.ensemble is not Ensemble.GINIBRE_COMPLEX:
                raise UnsupportedConfigurationError("band expansions take complex Ginibre letters only")


def band_genus_expansion(
    words,
    cfg: BandConfig,
    max_length: int | None = 24,
    max_vertices: int = MAX_COMPONENT_VERTICES,
) -> Fraction:
    """Exact ``E[prod Tr w_j]`` for band matrices: sum of counts times ``l^(-m/2)``."""
    if isinstance(words, (Word, str)):
        words = [words]
    words = [as_word(w) for w in words]
    _require_complex_ginibre(words)
    layout = Layout(words)
    layout.check_size(max_length)
    total = 0
    for chosen in iter_raw(layout):
        graph = ConstraintGraph.from_pairing(layout, chosen)
        total += band_index_count(graph, cfg, max_vertices)
    return Fraction(total, cfg.l ** (layout.m // 2))


def spherical_graphs(words) -> list[ConstraintGraph]:
    """Constraint graphs of the pairings that glue ``words`` into one sphere."""
    layout = Layout([as_word(w) for w in words])
    out = []
    for chosen in search_pairings(layout, 0, layout.k):
        if glue_raw(layout, chosen).is_sphere:
            out.append(ConstraintGraph.from_pairing(layout, chosen))
    return out


@dataclass(frozen=True)
class BandCltParams:
    a: int
    b: float
    c: float
    b_error: float
    c_error: float


def band_clt_params(w, lam: float = 0.0) -> BandCltParams:
    """``a_w`` and the volume-weighted counts over (w, w*) and (w, w)."""
    w = as_word(w)
    _require_complex_ginibre([w])
    cache: dict = {}

    def weigh(graphs):
        total, err = 0.0, 0.0
        for g in graphs:
            if g not in cache:
                cache[g] = alpha_estimate(g, lam)
            total += cache[g].value
            err += cache[g].error
        return total, err

    b, b_err = weigh(spherical_graphs([w, star(w)]))
    c, c_err = weigh(spherical_graphs([w, w]))
    return BandCltParams(sphere_count([w]), b, c, b_err, c_err)
