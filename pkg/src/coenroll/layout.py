"""Fruchterman-Reingold positions in the unit square, for external plotting."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .projection import StudentGraph

_ROW_CHUNK = 512
_MIN_DIST = 1e-3


@dataclass(frozen=True)
class LayoutCoordinates:
    node_ids: tuple[str, ...]
    x: np.ndarray
    y: np.ndarray
    school: tuple[str, ...]
    b_norm: np.ndarray

    def records(self):
        for i, nid in enumerate(self.node_ids):
            yield nid, float(self.x[i]), float(self.y[i]), self.school[i], float(self.b_norm[i])


def _repulsion(pos: np.ndarray, k2: float) -> np.ndarray:
    disp = np.zeros_like(pos)
    for a in range(0, len(pos), _ROW_CHUNK):
        delta = pos[a:a + _ROW_CHUNK, None, :] - pos[None, :, :]
        dist = np.maximum(np.sqrt((delta ** 2).sum(-1)), _MIN_DIST)
        # self-pairs have zero delta and contribute nothing
        disp[a:a + _ROW_CHUNK] = (delta * (k2 / dist ** 2)[..., None]).sum(axis=1)
    return disp


def fruchterman_reingold(
    g: StudentGraph, iterations: int = 50, seed: int = 0, initial_temperature: float = 0.1
) -> np.ndarray:
    """(n, 2) positions; repulsion k^2/d between all pairs, attraction d^2/k on edges.

    The per-step displacement cap cools linearly from ``initial_temperature``
    to zero; positions are clamped to [0, 1] after every step.
    """
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    n = g.n
    if n == 0:
        return np.zeros((0, 2))
    if n == 1:
        return np.array([[0.5, 0.5]])
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    k = math.sqrt(1.0 / n)
    k2 = k * k
    temp = initial_temperature
    cool = initial_temperature / (iterations + 1)
    src, dst = g.src, g.dst
    for _ in range(iterations):
        disp = _repulsion(pos, k2)
        delta = pos[src] - pos[dst]
        dist = np.maximum(np.sqrt((delta ** 2).sum(-1)), _MIN_DIST)
        pull = delta * (dist / k)[:, None]
        np.subtract.at(disp, src, pull)
        np.add.at(disp, dst, pull)
        length = np.maximum(np.sqrt((disp ** 2).sum(-1)), 1e-12)
        pos += disp * (np.minimum(length, temp) / length)[:, None]
        np.clip(pos, 0.0, 1.0, out=pos)
        temp -= cool
    return pos


def layout_fr(
    g: StudentGraph, iterations: int = 50, seed: int = 0, b_norm: np.ndarray | None = None
) -> LayoutCoordinates:
    pos = fruchterman_reingold(g, iterations, seed)
    schools = g.node_attrs.get("school")
    school = tuple(getattr(s, "value", str(s)) for s in schools) if schools is not None else ("unspecified",) * g.n
    bn = np.zeros(g.n) if b_norm is None else np.asarray(b_norm, dtype=float)
    return LayoutCoordinates(g.node_ids, pos[:, 0].copy(), pos[:, 1].copy(), school, bn)
