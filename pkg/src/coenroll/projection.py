"""Two-mode student x section incidence and its one-mode student projection."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import sparse

from .enrollment import EnrollmentDataset
from .errors import EmptyDatasetError

ZERO_CONTACT_WEIGHT = 1e6


@dataclass(frozen=True)
class IncidenceMatrix:
    """Sparse binary D: row i = student_ids[i], column j = section_ids[j]."""

    student_ids: tuple[str, ...]
    section_ids: tuple[str, ...]
    rows: np.ndarray
    cols: np.ndarray
    section_hours: np.ndarray
    node_attrs: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.student_ids)

    @property
    def m(self) -> int:
        return len(self.section_ids)

    def to_dense(self) -> np.ndarray:
        D = np.zeros((self.n, self.m), dtype=np.int64)
        D[self.rows, self.cols] = 1
        return D


def build_incidence(d: EnrollmentDataset) -> IncidenceMatrix:
    if d.is_empty():
        raise EmptyDatasetError("cannot build an incidence matrix from an empty dataset")
    student_ids = tuple(d.students)
    section_ids = tuple(d.sections)
    s_index = {s: i for i, s in enumerate(student_ids)}
    c_index = {c: j for j, c in enumerate(section_ids)}
    rows = np.fromiter((s_index[s] for s, _ in d.enrollments), dtype=np.int64, count=d.n_enrollments)
    cols = np.fromiter((c_index[c] for _, c in d.enrollments), dtype=np.int64, count=d.n_enrollments)
    hours = np.array([d.sections[c].weekly_contact_hours for c in section_ids], dtype=np.int64)
    students = [d.students[s] for s in student_ids]
    attrs = {
        "career": [s.career for s in students],
        "rank": [s.rank for s in students],
        "school": [s.school for s in students],
        "own_sections": np.bincount(rows, minlength=len(student_ids)),
    }
    return IncidenceMatrix(student_ids, section_ids, rows, cols, hours, attrs)


class StudentGraph:
    """Undirected student graph with per-edge shared-section count and contact hours.

    Edges are stored once with ``src < dst`` (node indices, which follow
    ascending student id) and sorted. A symmetric CSR adjacency is built for
    traversal; ``adj_edge`` maps every adjacency slot back to its edge.
    """

    def __init__(
        self,
        node_ids: Sequence[str],
        src,
        dst,
        shared=None,
        contact=None,
        node_attrs: dict | None = None,
        zero_contact_weight: float = ZERO_CONTACT_WEIGHT,
    ):
        self.node_ids = tuple(node_ids)
        n = len(self.node_ids)
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        m = len(src)
        shared = np.ones(m, dtype=np.int64) if shared is None else np.asarray(shared, dtype=np.int64)
        contact = shared.copy() if contact is None else np.asarray(contact, dtype=np.int64)
        if m:
            if np.any(src == dst):
                raise ValueError("self-loop edges are not stored")
            if np.any(shared < 1):
                raise ValueError("shared_sections must be >= 1 on every edge")
            if np.any(contact < 0):
                raise ValueError("contact duration must be nonnegative")
            lo, hi = np.minimum(src, dst), np.maximum(src, dst)
            if lo.min() < 0 or hi.max() >= n:
                raise ValueError("edge endpoint out of range")
            order = np.lexsort((hi, lo))
            lo, hi, shared, contact = lo[order], hi[order], shared[order], contact[order]
            key = lo * n + hi
            if np.any(key[1:] == key[:-1]):
                raise ValueError("duplicate edge")
            src, dst = lo, hi
        self.src = src
        self.dst = dst
        self.shared = shared
        self.contact = contact
        self.zero_contact_weight = float(zero_contact_weight)
        self.node_attrs = dict(node_attrs or {})
        self._build_csr()

    def _build_csr(self):
        n, m = self.n, self.m
        heads = np.concatenate([self.src, self.dst])
        tails = np.concatenate([self.dst, self.src])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((tails, heads))
        self.indices = tails[order].astype(np.int64)
        self.adj_edge = eid[order].astype(np.int64)
        counts = np.bincount(heads, minlength=n) if n else np.zeros(0, dtype=np.int64)
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=self.indptr[1:])

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_edges(cls, nodes, edges, **kw) -> "StudentGraph":
        """Build from ``nodes`` (count or id list) and ``(u, v[, shared, contact])`` tuples.

        With an integer node count, ids are zero-padded so lexicographic order
        matches numeric order.
        """
        if isinstance(nodes, int):
            width = max(1, len(str(max(nodes - 1, 0))))
            node_ids = [f"{i:0{width}d}" for i in range(nodes)]
            index = None
        else:
            node_ids = list(nodes)
            if node_ids != sorted(node_ids):
                raise ValueError("node ids must be sorted")
            index = {v: i for i, v in enumerate(node_ids)}
        src, dst, shared, contact = [], [], [], []
        for e in edges:
            u, v = (e[0], e[1]) if index is None else (index[e[0]], index[e[1]])
            src.append(u)
            dst.append(v)
            shared.append(e[2] if len(e) > 2 else 1)
            contact.append(e[3] if len(e) > 3 else (e[2] if len(e) > 2 else 1))
        return cls(node_ids, src, dst, shared, contact, **kw)

    # -- basic properties ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.node_ids)

    @property
    def m(self) -> int:
        return len(self.src)

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def edge_weights(self) -> np.ndarray:
        """Weighted-view edge weights: 1 / contact_duration (large constant at 0)."""
        w = np.full(self.m, self.zero_contact_weight, dtype=np.float64)
        nz = self.contact > 0
        w[nz] = 1.0 / self.contact[nz]
        return w

    def adjacency_weights(self, weighted: bool) -> np.ndarray:
        if not weighted:
            return np.ones(len(self.indices), dtype=np.float64)
        return self.edge_weights()[self.adj_edge]

    def induced(self, nodes) -> "StudentGraph":
        """Subgraph on the given node indices (kept in ascending order)."""
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[nodes] = np.arange(len(nodes))
        keep = (remap[self.src] >= 0) & (remap[self.dst] >= 0)
        attrs = {}
        for k, v in self.node_attrs.items():
            attrs[k] = v[nodes] if isinstance(v, np.ndarray) else [v[i] for i in nodes]
        return StudentGraph(
            [self.node_ids[i] for i in nodes],
            remap[self.src[keep]],
            remap[self.dst[keep]],
            self.shared[keep],
            self.contact[keep],
            attrs,
            self.zero_contact_weight,
        )

    def with_contact(self, contact) -> "StudentGraph":
        return StudentGraph(
            self.node_ids, self.src, self.dst, self.shared, contact, self.node_attrs, self.zero_contact_weight
        )

    def __repr__(self):
        return f"StudentGraph(n={self.n}, m={self.m})"


def project(dm: IncidenceMatrix, zero_contact_weight: float = ZERO_CONTACT_WEIGHT) -> StudentGraph:
    """One-mode projection A = D D^T, computed one section at a time.

    Each section contributes every pair of its members once; pairs are then
    merged so that ``shared`` counts common sections and ``contact`` sums the
    sections' weekly contact hours.
    """
    n = dm.n
    order = np.lexsort((dm.rows, dm.cols))
    rows, cols = dm.rows[order], dm.cols[order]
    bounds = np.flatnonzero(np.diff(cols)) + 1
    starts = np.concatenate([[0], bounds])
    ends = np.concatenate([bounds, [len(cols)]])

    keys, hours = [], []
    for a, b in zip(starts, ends):
        size = b - a
        if size < 2:
            continue
        members = rows[a:b]
        iu, ju = np.triu_indices(size, k=1)
        keys.append(members[iu] * n + members[ju])
        hours.append(np.full(len(iu), dm.section_hours[cols[a]], dtype=np.int64))
    if keys:
        all_keys = np.concatenate(keys)
        all_hours = np.concatenate(hours)
        uniq, inverse = np.unique(all_keys, return_inverse=True)
        shared = np.bincount(inverse)
        contact = np.bincount(inverse, weights=all_hours).astype(np.int64)
        src, dst = uniq // n, uniq % n
    else:
        src = dst = shared = contact = np.zeros(0, dtype=np.int64)
    return StudentGraph(dm.student_ids, src, dst, shared, contact, dm.node_attrs, zero_contact_weight)


def build_graph(d: EnrollmentDataset, zero_contact_weight: float = ZERO_CONTACT_WEIGHT) -> StudentGraph:
    return project(build_incidence(d), zero_contact_weight)


def binary_view(g: StudentGraph) -> sparse.csr_matrix:
    """A_binary as a sparse 0/1 matrix with unit diagonal."""
    n = g.n
    data = np.ones(2 * g.m + n, dtype=np.int8)
    r = np.concatenate([g.src, g.dst, np.arange(n)])
    c = np.concatenate([g.dst, g.src, np.arange(n)])
    return sparse.csr_matrix((data, (r, c)), shape=(n, n))


def nonzero_density(a) -> float:
    """Fraction of non-zero entries in a square matrix."""
    n = a.shape[0]
    nnz = a.count_nonzero() if sparse.issparse(a) else int(np.count_nonzero(a))
    return nnz / (n * n)


def write_edge_list(g: StudentGraph, target) -> None:
    """One undirected edge per line with src_id < dst_id."""
    own = isinstance(target, (str, Path))
    fh = open(target, "w", newline="", encoding="utf-8") if own else target
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["src_id", "dst_id", "shared_sections", "contact_hours"])
        ids = g.node_ids
        for u, v, s, c in zip(g.src.tolist(), g.dst.tolist(), g.shared.tolist(), g.contact.tolist()):
            w.writerow([ids[u], ids[v], s, c])
    finally:
        if own:
            fh.close()
