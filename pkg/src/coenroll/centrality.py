"""Betweenness centrality, pivotal students and the courses they take."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .enrollment import EnrollmentDataset
from .metrics import connected_components
from .projection import StudentGraph

REL_EPS = 1e-12
DEFAULT_PIVOTAL = 100


class Mode(str, Enum):
    UNWEIGHTED = "unweighted"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class CentralityResult:
    node_ids: tuple[str, ...]
    raw: np.ndarray
    normalized: np.ndarray
    ranking: np.ndarray  # node indices, highest betweenness first
    mode: Mode

    def records(self):
        """(student_id, raw, normalized, rank) in ranking order, rank starting at 1."""
        for pos, i in enumerate(self.ranking.tolist(), start=1):
            yield self.node_ids[i], float(self.raw[i]), float(self.normalized[i]), pos

    def top(self, k: int) -> list[str]:
        return [self.node_ids[i] for i in self.ranking[:k].tolist()]


def _component_sizes(g: StudentGraph) -> np.ndarray:
    size = np.zeros(g.n, dtype=np.int64)
    for comp in connected_components(g):
        size[comp] = len(comp)
    return size


def betweenness(
    g: StudentGraph,
    mode: Mode | str = Mode.UNWEIGHTED,
    workers: int = 1,
    rel_eps: float = REL_EPS,
) -> CentralityResult:
    """Exact betweenness over unordered pairs, endpoints excluded.

    Unweighted mode runs BFS on the binary graph; weighted mode runs Dijkstra
    on edge weights 1/contact_duration. The normalized value divides by
    (n-1)(n-2)/2 with n the size of the node's own component.
    """
    mode = Mode(mode)
    sources = np.arange(g.n)
    if mode is Mode.UNWEIGHTED:
        acc = _kernels.run_chunked(_kernels.brandes_unweighted, sources, g.indptr, g.indices, workers=workers)
    else:
        w = g.adjacency_weights(weighted=True)
        if len(w) and not np.all(w > 0):
            raise AssertionError("edge weights must be positive")
        acc = _kernels.run_chunked(
            _kernels.brandes_weighted, sources, g.indptr, g.indices, w, rel_eps, workers=workers
        )
    raw = np.zeros(g.n) if acc is None else acc / 2.0
    size = _component_sizes(g).astype(np.float64)
    norm = np.zeros(g.n)
    big = size > 2
    norm[big] = 2.0 * raw[big] / ((size[big] - 1.0) * (size[big] - 2.0))
    ranking = np.lexsort((np.arange(g.n), -raw))
    return CentralityResult(g.node_ids, raw, norm, ranking, mode)


@dataclass(frozen=True)
class PivotalSet:
    student_ids: tuple[str, ...]  # ranked
    mode: Mode
    k: int


def pivotal_students(
    g: StudentGraph,
    mode: Mode | str = Mode.UNWEIGHTED,
    k: int = DEFAULT_PIVOTAL,
    workers: int = 1,
    centrality: CentralityResult | None = None,
) -> PivotalSet:
    """The top-``k`` students by betweenness; ties go to the smaller id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    result = centrality or betweenness(g, mode, workers=workers)
    return PivotalSet(tuple(result.top(k)), result.mode, k)


def pivotal_course_tally(d: EnrollmentDataset, p: PivotalSet) -> list[tuple[str, int]]:
    """Pivotal enrollments per course code, most first, ties by code."""
    pivotal = set(p.student_ids)
    missing = pivotal.difference(d.students)
    if missing:
        raise ValueError(f"pivotal students not in dataset: {sorted(missing)[:5]}")
    counts = Counter(
        d.sections[secid].course_code for sid, secid in d.enrollments if sid in pivotal
    )
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
