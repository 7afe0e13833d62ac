"""Compiled graph traversals over CSR arrays.

Every kernel processes a fixed chunk of sources sequentially and releases
the GIL, so callers can fan chunks out over threads and still reduce the
per-chunk results in ascending chunk order. Results are therefore
independent of the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numba
import numpy as np

SOURCE_CHUNK = 64


@numba.njit(cache=True, nogil=True)
def bfs_histogram(indptr, indices, sources):
    """Tally of ordered (source, target) pairs by hop distance; index 0 unused."""
    n = len(indptr) - 1
    hist = np.zeros(n + 1, dtype=np.int64)
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in sources:
        dist[:] = -1
        dist[s] = 0
        head, tail = 0, 1
        queue[0] = s
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v] + 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dv
                    hist[dv] += 1
                    queue[tail] = w
                    tail += 1
    return hist


@numba.njit(cache=True, nogil=True)
def brandes_unweighted(indptr, indices, sources):
    """Sum over sources of Brandes dependencies (ordered pairs)."""
    n = len(indptr) - 1
    score = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    for s in sources:
        dist[:] = -1
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        head, tail = 0, 1
        order[0] = s
        while head < tail:
            v = order[head]
            head += 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for k in range(tail - 1, 0, -1):
            w = order[k]
            coeff = (1.0 + delta[w]) / sigma[w]
            for p in range(indptr[w], indptr[w + 1]):
                v = indices[p]
                if dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] * coeff
            score[w] += delta[w]
    return score


@numba.njit(cache=True, nogil=True)
def _heap_push(keys, vals, size, key, val):
    i = size
    keys[i] = key
    vals[i] = val
    while i > 0:
        parent = (i - 1) >> 1
        if keys[parent] < keys[i] or (keys[parent] == keys[i] and vals[parent] <= vals[i]):
            break
        keys[parent], keys[i] = keys[i], keys[parent]
        vals[parent], vals[i] = vals[i], vals[parent]
        i = parent
    return size + 1


@numba.njit(cache=True, nogil=True)
def _heap_pop(keys, vals, size):
    key, val = keys[0], vals[0]
    size -= 1
    keys[0] = keys[size]
    vals[0] = vals[size]
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        c = left
        right = left + 1
        if right < size and (keys[right] < keys[left] or (keys[right] == keys[left] and vals[right] < vals[left])):
            c = right
        if keys[i] < keys[c] or (keys[i] == keys[c] and vals[i] <= vals[c]):
            break
        keys[c], keys[i] = keys[i], keys[c]
        vals[c], vals[i] = vals[i], vals[c]
        i = c
    return key, val, size


@numba.njit(cache=True, nogil=True)
def brandes_weighted(indptr, indices, weights, rel_eps, sources):
    """Dijkstra-based Brandes; path lengths within ``rel_eps`` count as equal."""
    n = len(indptr) - 1
    score = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.float64)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    done = np.empty(n, dtype=np.bool_)
    order = np.empty(n, dtype=np.int64)
    cap = len(indices) + 1
    hkeys = np.empty(cap, dtype=np.float64)
    hvals = np.empty(cap, dtype=np.int64)
    for s in sources:
        dist[:] = np.inf
        sigma[:] = 0.0
        delta[:] = 0.0
        done[:] = False
        dist[s] = 0.0
        sigma[s] = 1.0
        size = _heap_push(hkeys, hvals, 0, 0.0, s)
        count = 0
        while size > 0:
            d, v, size = _heap_pop(hkeys, hvals, size)
            if done[v] or d > dist[v]:
                continue
            done[v] = True
            order[count] = v
            count += 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if done[w]:
                    continue
                alt = dist[v] + weights[p]
                cur = dist[w]
                tol = rel_eps * max(alt, cur) if cur < np.inf else 0.0
                if cur == np.inf or alt < cur - tol:
                    dist[w] = alt
                    sigma[w] = sigma[v]
                    size = _heap_push(hkeys, hvals, size, alt, w)
                elif alt <= cur + tol:
                    sigma[w] += sigma[v]
        for k in range(count - 1, 0, -1):
            w = order[k]
            coeff = (1.0 + delta[w]) / sigma[w]
            dw = dist[w]
            for p in range(indptr[w], indptr[w + 1]):
                v = indices[p]
                if not done[v]:
                    continue
                alt = dist[v] + weights[p]
                if abs(alt - dw) <= rel_eps * max(alt, dw) and dist[v] < dw:
                    delta[v] += sigma[v] * coeff
            score[w] += delta[w]
    return score


def run_chunked(kernel, sources, *args, workers=1, chunk=SOURCE_CHUNK):
    """Apply ``kernel(*args, source_chunk)`` over fixed chunks, summing in chunk order."""
    sources = np.asarray(sources, dtype=np.int64)
    chunks = [sources[i:i + chunk] for i in range(0, len(sources), chunk)]
    if not chunks:
        return None
    if workers <= 1 or len(chunks) == 1:
        parts = [kernel(*args, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: kernel(*args, c), chunks))
    total = parts[0].copy()
    for p in parts[1:]:
        total += p
    return total
