"""Small-world statistics of a student graph.

Path-based quantities come from per-source BFS distance tallies rather than
matrix powers: the distance histogram yields the average geodesic, the
diameter, the reachability curve and pairs-within-k in one pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np
from scipy.sparse import csgraph

from . import _kernels
from .errors import UndefinedMetricError
from .projection import StudentGraph, binary_view

EXACT_NODE_LIMIT = 50_000


# --------------------------------------------------------------------------
# components


def connected_components(g: StudentGraph) -> list[np.ndarray]:
    """Node-index arrays, largest first; ties broken by smallest member id."""
    if g.n == 0:
        return []
    _, labels = csgraph.connected_components(binary_view(g), directed=False)
    groups: dict[int, list[int]] = {}
    for node, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(node)
    comps = [np.array(v, dtype=np.int64) for v in groups.values()]
    # node indices follow ascending id, so comp[0] is the smallest member id
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def largest_component(g: StudentGraph) -> StudentGraph:
    comps = connected_components(g)
    if not comps:
        return g
    if len(comps[0]) == g.n:
        return g
    return g.induced(comps[0])


# --------------------------------------------------------------------------
# distances


@dataclass(frozen=True)
class DistanceTally:
    """Ordered-pair counts by hop distance over ``n_sources`` BFS roots."""

    n: int
    n_sources: int
    counts: np.ndarray  # counts[d] = ordered pairs at distance d, d >= 1

    @property
    def exact(self) -> bool:
        return self.n_sources == self.n

    @property
    def reachable_pairs(self) -> int:
        return int(self.counts.sum())

    def within(self, k: int) -> int:
        return int(self.counts[1:k + 1].sum())

    @property
    def max_distance(self) -> int:
        nz = np.flatnonzero(self.counts)
        return int(nz[-1]) if len(nz) else 0

    @property
    def distance_sum(self) -> int:
        return int(np.dot(np.arange(len(self.counts), dtype=np.int64), self.counts))


def distance_tally(
    g: StudentGraph,
    workers: int = 1,
    exact_limit: int = EXACT_NODE_LIMIT,
    n_samples: int = 2000,
    seed: int = 0,
) -> DistanceTally:
    """All-source BFS tally; above ``exact_limit`` nodes, a seeded source sample."""
    if g.n > exact_limit:
        rng = np.random.default_rng(seed)
        sources = np.sort(rng.choice(g.n, size=min(n_samples, g.n), replace=False))
    else:
        sources = np.arange(g.n)
    counts = _kernels.run_chunked(_kernels.bfs_histogram, sources, g.indptr, g.indices, workers=workers)
    if counts is None:
        counts = np.zeros(1, dtype=np.int64)
    nz = np.flatnonzero(counts)
    counts = counts[: (nz[-1] + 1 if len(nz) else 1)]
    return DistanceTally(g.n, len(sources), counts)


def _connected_tally(g: StudentGraph, tally: DistanceTally | None, workers: int) -> DistanceTally:
    if g.n < 2:
        raise UndefinedMetricError("path metrics need at least two nodes")
    tally = tally or distance_tally(g, workers=workers)
    if tally.exact and tally.reachable_pairs != g.n * (g.n - 1):
        raise UndefinedMetricError("path metrics are defined on a connected component")
    return tally


def average_geodesic(g: StudentGraph, tally: DistanceTally | None = None, workers: int = 1) -> float:
    """Mean shortest-path length over all node pairs of a connected graph."""
    tally = _connected_tally(g, tally, workers)
    return tally.distance_sum / tally.reachable_pairs


def diameter(g: StudentGraph, tally: DistanceTally | None = None, workers: int = 1) -> int:
    tally = _connected_tally(g, tally, workers)
    return tally.max_distance


@dataclass(frozen=True)
class ReachabilityCurve:
    k: tuple[int, ...]
    rho: tuple[float, ...]
    limit: float


def reachability_curve(
    g: StudentGraph, k_max: int, tally: DistanceTally | None = None, workers: int = 1
) -> ReachabilityCurve:
    """rho(k) = share of non-zero entries of A_binary^k (unit diagonal)."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    n = g.n
    if n == 0:
        return ReachabilityCurve(tuple(range(1, k_max + 1)), (0.0,) * k_max, 0.0)
    tally = tally or distance_tally(g, workers=workers)
    scale = n / tally.n_sources  # 1 for exact tallies
    cum = np.cumsum(tally.counts)
    rho = []
    for k in range(1, k_max + 1):
        within = cum[min(k, len(cum) - 1)]
        rho.append(float((n + within * scale) / (n * n)))
    limit = float((n + tally.reachable_pairs * scale) / (n * n))
    return ReachabilityCurve(tuple(range(1, k_max + 1)), tuple(rho), limit)


def pairs_within(g: StudentGraph, k: int, tally: DistanceTally | None = None, workers: int = 1) -> float:
    """Percent of unordered node pairs at distance <= k; unreachable pairs count as not within."""
    n = g.n
    if n < 2:
        raise UndefinedMetricError("pair share needs at least two nodes")
    tally = tally or distance_tally(g, workers=workers)
    return 100.0 * tally.within(k) * (n / tally.n_sources) / (n * (n - 1))


# --------------------------------------------------------------------------
# triangles


def triangles_per_node(g: StudentGraph) -> np.ndarray:
    """T(v) for every node, each triangle found once from its lowest-ranked vertex."""
    n = g.n
    deg = g.degrees()
    tri = np.zeros(n, dtype=np.int64)
    # orient each edge from lower (degree, index) to higher; each triangle is found once
    rank = np.lexsort((np.arange(n), deg))
    pos = np.empty(n, dtype=np.int64)
    pos[rank] = np.arange(n)
    out = [set() for _ in range(n)]
    for u, v in zip(g.src.tolist(), g.dst.tolist()):
        if pos[u] < pos[v]:
            out[u].add(v)
        else:
            out[v].add(u)
    for u in range(n):
        fu = out[u]
        for v in fu:
            common = fu & out[v]
            if common:
                c = len(common)
                tri[u] += c
                tri[v] += c
                for w in common:
                    tri[w] += 1
    return tri


def local_clustering(g: StudentGraph, tri: np.ndarray | None = None) -> np.ndarray:
    """c(v) = 2T(v) / (d(d-1)); nodes of degree < 2 get 0."""
    tri = triangles_per_node(g) if tri is None else tri
    d = g.degrees().astype(np.float64)
    c = np.zeros(g.n, dtype=np.float64)
    ok = d >= 2
    c[ok] = 2.0 * tri[ok] / (d[ok] * (d[ok] - 1.0))
    return c


def average_local_clustering(
    g: StudentGraph, tri: np.ndarray | None = None, exclude_low_degree: bool = False
) -> float:
    c = local_clustering(g, tri)
    if exclude_low_degree:
        c = c[g.degrees() >= 2]
    return float(c.mean()) if len(c) else 0.0


def global_transitivity(g: StudentGraph, tri: np.ndarray | None = None) -> float:
    """3 x triangles / connected triples; 0 when there are no triples."""
    tri = triangles_per_node(g) if tri is None else tri
    d = g.degrees().astype(np.int64)
    triads = int((d * (d - 1) // 2).sum())
    if triads == 0:
        return 0.0
    triangles = int(tri.sum()) // 3
    return 3.0 * triangles / triads


# --------------------------------------------------------------------------
# counts and densities


def network_density(g: StudentGraph) -> float:
    if g.n < 2:
        raise UndefinedMetricError("density needs at least two nodes")
    return 2.0 * g.m / (g.n * (g.n - 1))


def average_degree(g: StudentGraph) -> float:
    if g.n == 0:
        raise UndefinedMetricError("average degree of an empty graph")
    return 2.0 * g.m / g.n


def average_edge_weight(g: StudentGraph) -> float:
    """Mean weekly contact hours over edges."""
    if g.m == 0:
        raise UndefinedMetricError("graph has no edges")
    return float(g.contact.mean())


# --------------------------------------------------------------------------
# the report


TABLE_LABELS = {
    "nodes_full": "Nodes, full graph",
    "edges_full": "Edges, full graph",
    "nodes_lcc": "Nodes, n",
    "edges_lcc": "Edges, m",
    "avg_degree": "Average degree",
    "pct_in_largest_component": "Percent nodes in largest comp.",
    "avg_edge_weight": "Average edge weight",
    "avg_geodesic": "Average geodesic distance, l_G",
    "diameter": "Diameter of network",
    "local_clustering": "Unweighted local C_G",
    "global_transitivity": "Unweighted global T_G",
    "network_density": "Network density, r_G",
}


def snake_label(label: str) -> str:
    out = []
    for ch in label.lower():
        out.append(ch if ch.isalnum() else "_")
    s = "".join(out)
    while "__" in s:
        s = s.replace("__", "_")
    return s.strip("_")


@dataclass(frozen=True)
class MetricsReport:
    """One column of the metric tables; field order follows the table rows."""

    nodes_full: int
    edges_full: int
    nodes_lcc: int
    edges_lcc: int
    avg_degree: float
    pct_in_largest_component: float
    avg_edge_weight: float
    avg_geodesic: float
    diameter: int
    local_clustering: float
    global_transitivity: float
    network_density: float

    def rows(self) -> list[tuple[str, str, object]]:
        """(table label, structured key, value) in table order."""
        out = []
        for f in fields(self):
            label = TABLE_LABELS[f.name]
            out.append((label, snake_label(label), getattr(self, f.name)))
        return out

    def as_dict(self) -> dict:
        return {key: value for _, key, value in self.rows()}


def _nan_if_undefined(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except UndefinedMetricError:
        return math.nan


def full_report(
    g: StudentGraph,
    workers: int = 1,
    lcc_tally: DistanceTally | None = None,
    exclude_low_degree: bool = False,
) -> MetricsReport:
    """Whole-graph counts plus largest-component statistics.

    Statistics that are undefined on the component (a single node, no edges)
    are reported as NaN.
    """
    lcc = largest_component(g)
    if lcc_tally is None and lcc.n >= 2:
        lcc_tally = distance_tally(lcc, workers=workers)
    tri = triangles_per_node(lcc)
    return MetricsReport(
        nodes_full=g.n,
        edges_full=g.m,
        nodes_lcc=lcc.n,
        edges_lcc=lcc.m,
        avg_degree=_nan_if_undefined(average_degree, lcc),
        pct_in_largest_component=100.0 * lcc.n / g.n if g.n else math.nan,
        avg_edge_weight=_nan_if_undefined(average_edge_weight, lcc),
        avg_geodesic=_nan_if_undefined(average_geodesic, lcc, lcc_tally),
        diameter=_nan_if_undefined(diameter, lcc, lcc_tally),
        local_clustering=average_local_clustering(lcc, tri, exclude_low_degree) if lcc.n else math.nan,
        global_transitivity=global_transitivity(lcc, tri),
        network_density=_nan_if_undefined(network_density, lcc),
    )


def component_reports(g: StudentGraph, min_size: int = 2, workers: int = 1) -> list[MetricsReport]:
    """One report per component of at least ``min_size`` nodes, largest first."""
    out = []
    for comp in connected_components(g):
        if len(comp) < min_size:
            break
        out.append(full_report(g.induced(comp), workers=workers))
    return out


def limiting_reachability(sizes: Sequence[int]) -> float:
    """Sum of squared component shares: the value rho(k) converges to."""
    total = sum(sizes)
    return sum((v / total) ** 2 for v in sizes)
