"""Brute-force reference implementations used only by the tests.

Nothing here imports the package's graph code; inputs are plain edge lists
and dense numpy matrices.
"""

from __future__ import annotations

import itertools

import numpy as np

INF = np.iinfo(np.int64).max // 4
# 1/c for c in 1..4 becomes an integer after scaling by 12; zero contact maps to 1e6
WEIGHT_SCALE = 12


def random_edges(rng: np.random.Generator, n: int, p: float, max_contact: int = 4, zero_contact: float = 0.0):
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            c = 0 if rng.random() < zero_contact else int(rng.integers(1, max_contact + 1))
            edges.append((u, v, 1, c))
    return edges


def dense_adjacency(n: int, edges) -> np.ndarray:
    a = np.zeros((n, n), dtype=bool)
    for u, v, *_ in edges:
        a[u, v] = a[v, u] = True
    return a


def integer_weights(n: int, edges) -> np.ndarray:
    """Scaled reciprocal-contact weights as exact integers; INF marks non-edges."""
    w = np.full((n, n), INF, dtype=np.int64)
    for u, v, _, c in edges:
        x = WEIGHT_SCALE * 10**6 if c == 0 else WEIGHT_SCALE // c
        w[u, v] = w[v, u] = x
    return w


def floyd_warshall(w: np.ndarray) -> np.ndarray:
    d = w.copy()
    np.fill_diagonal(d, 0)
    for k in range(len(d)):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


def hop_distances(a: np.ndarray) -> np.ndarray:
    w = np.where(a, 1, INF).astype(np.int64)
    return floyd_warshall(w)


def union_find_components(n: int, edges) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, *_ in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values(), key=lambda c: (-len(c), c[0]))


def boolean_power_density(a: np.ndarray, k: int) -> float:
    """Share of non-zero entries of (A + I)^k, by repeated boolean products."""
    n = len(a)
    b = (a | np.eye(n, dtype=bool)).astype(np.int64)
    p = np.eye(n, dtype=np.int64)
    for _ in range(k):
        p = (p @ b > 0).astype(np.int64)
    return float(np.count_nonzero(p)) / (n * n)


def triangles_and_triads(a: np.ndarray):
    """Per-node triangle counts (each triangle listed once as i < j < k) and total triads."""
    n = len(a)
    tri = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for j in np.flatnonzero(a[i, i + 1:]) + i + 1:
            ks = np.flatnonzero(a[i, j + 1:] & a[j, j + 1:]) + j + 1
            tri[i] += len(ks)
            tri[j] += len(ks)
            tri[ks] += 1
    deg = a.sum(axis=1).astype(np.int64)
    triads = int(sum(d * (d - 1) // 2 for d in deg.tolist()))
    return tri, deg, triads


def local_clustering(a: np.ndarray) -> np.ndarray:
    """Closed neighbor pairs over all neighbor pairs, 0 below degree 2."""
    n = len(a)
    c = np.zeros(n)
    for v in range(n):
        nb = np.flatnonzero(a[v])
        if len(nb) < 2:
            continue
        closed = int(a[np.ix_(nb, nb)].sum()) // 2
        c[v] = closed / (len(nb) * (len(nb) - 1) / 2)
    return c


def path_counts(w: np.ndarray, d: np.ndarray) -> np.ndarray:
    """sigma[s, t]: number of shortest s-t paths, by dynamic programming over distance order."""
    n = len(w)
    sigma = np.zeros((n, n))
    adj = w < INF
    for s in range(n):
        sigma[s, s] = 1.0
        for t in np.argsort(d[s], kind="stable"):
            if t == s or d[s, t] >= INF:
                continue
            preds = adj[:, t] & (d[s] + np.where(adj[:, t], w[:, t], 0) == d[s, t]) & (d[s] < INF)
            sigma[s, t] = sigma[s, preds].sum()
    return sigma


def naive_betweenness(w: np.ndarray) -> np.ndarray:
    """Raw betweenness over unordered pairs {s, t}, v not an endpoint."""
    n = len(w)
    d = floyd_warshall(w)
    sigma = path_counts(w, d)
    b = np.zeros(n)
    reach = d < INF
    iu = np.triu(np.ones((n, n), dtype=bool), 1)
    for v in range(n):
        through = reach[:, v][:, None] & reach[v, :][None, :] & (d[:, v][:, None] + d[v, :][None, :] == d)
        mask = through & iu
        mask[v, :] = False
        mask[:, v] = False
        num = sigma[:, v][:, None] * sigma[v, :][None, :]
        b[v] = (num[mask] / sigma[mask]).sum()
    return b


def normalize_betweenness(b: np.ndarray, components) -> np.ndarray:
    out = np.zeros_like(b)
    for comp in components:
        size = len(comp)
        if size > 2:
            out[comp] = 2.0 * b[comp] / ((size - 1) * (size - 2))
    return out
