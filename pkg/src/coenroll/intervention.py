"""Simulated moves of sections to online delivery and before/after comparison."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .centrality import DEFAULT_PIVOTAL, Mode, betweenness, pivotal_course_tally, pivotal_students
from .enrollment import Career, EnrollmentDataset, Scope, subset
from .errors import DataWarning, EmptyDatasetError
from .metrics import (
    TABLE_LABELS,
    DistanceTally,
    MetricsReport,
    connected_components,
    full_report,
    snake_label,
)
from .projection import StudentGraph, build_graph

QUINTILES = (20, 40, 60, 80)
DEFAULT_COURSES = 25


class PlanKind(str, Enum):
    SIZE_THRESHOLD = "size_threshold"
    SCALPEL = "scalpel"
    TWO_PASS_SCALPEL = "two_pass_scalpel"


@dataclass(frozen=True)
class InterventionPlan:
    kind: PlanKind
    parameters: dict
    removed_section_ids: tuple[str, ...]
    removed_course_codes: tuple[str, ...]
    sections_before: int
    students_before: int
    students_after: int

    @property
    def removed_section_count(self) -> int:
        return len(self.removed_section_ids)

    @property
    def removed_share(self) -> float:
        """Removed sections as a fraction of all sections before removal."""
        return self.removed_section_count / self.sections_before if self.sections_before else 0.0

    @property
    def students_dropped(self) -> int:
        return self.students_before - self.students_after

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "parameters": dict(self.parameters),
            "sections_before": self.sections_before,
            "sections_after": self.sections_before - self.removed_section_count,
            "removed_section_count": self.removed_section_count,
            "removed_share": self.removed_share,
            "students_before": self.students_before,
            "students_after": self.students_after,
            "students_dropped": self.students_dropped,
            "removed_course_codes": list(self.removed_course_codes),
            "removed_section_ids": list(self.removed_section_ids),
        }


def _remove_sections(d: EnrollmentDataset, section_ids) -> EnrollmentDataset:
    gone = frozenset(section_ids)
    if not gone:
        return d
    out = d.restrict(lambda st, sec: sec.id not in gone)
    if out.is_empty():
        raise EmptyDatasetError("removal leaves no enrollments")
    return out


def _plan(kind, params, d, after, removed_ids, codes=None) -> InterventionPlan:
    if codes is None:
        codes = sorted({d.sections[s].course_code for s in removed_ids})
    return InterventionPlan(
        kind=kind,
        parameters=params,
        removed_section_ids=tuple(sorted(removed_ids)),
        removed_course_codes=tuple(codes),
        sections_before=d.n_sections,
        students_before=d.n_students,
        students_after=after.n_students,
    )


# --------------------------------------------------------------------------
# size-based removal


def enrollment_quintiles(d: EnrollmentDataset, quantiles=QUINTILES) -> list[int]:
    """Section-size thresholds by share of student enrollment.

    ``t_q`` is the smallest size s such that sections smaller than s hold at
    least q percent of all student-section enrollments.
    """
    if d.is_empty():
        raise EmptyDatasetError("quintiles of an empty dataset")
    sizes = np.array([s.enrollment_count for s in d.sections.values()], dtype=np.int64)
    total = int(sizes.sum())
    # held[s] = enrollments in sections of size < s, for s = 0 .. max+1
    per_size = np.bincount(sizes, weights=sizes).astype(np.int64)
    held = np.concatenate([[0], np.cumsum(per_size)])
    out = []
    for q in quantiles:
        s = int(np.argmax(held * 100 >= q * total))
        out.append(s)
    return out


def remove_sections_by_size(d: EnrollmentDataset, threshold: float) -> tuple[EnrollmentDataset, InterventionPlan]:
    """Move every section with enrollment >= ``threshold`` online."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    removed = [s.id for s in d.sections.values() if s.enrollment_count >= threshold]
    after = _remove_sections(d, removed)
    params = {"threshold": threshold if math.isfinite(threshold) else "inf"}
    return after, _plan(PlanKind.SIZE_THRESHOLD, params, d, after, removed)


# --------------------------------------------------------------------------
# scalpel


def _top_courses(analysis: EnrollmentDataset, mode, k, c, workers) -> list[str]:
    g = build_graph(analysis)
    result = betweenness(g, mode, workers=workers)
    tally = pivotal_course_tally(analysis, pivotal_students(g, k=k, centrality=result))
    if len(tally) < c:
        warnings.warn(
            f"only {len(tally)} courses hold pivotal students; removing all of them", DataWarning, stacklevel=3
        )
    return [code for code, _ in tally[:c]]


def scalpel(
    d: EnrollmentDataset,
    mode: Mode | str = Mode.UNWEIGHTED,
    k: int = DEFAULT_PIVOTAL,
    c: int = DEFAULT_COURSES,
    analysis_scope: Scope | str | None = None,
    workers: int = 1,
) -> tuple[EnrollmentDataset, InterventionPlan]:
    """Move online every section of the ``c`` courses most taken by pivotal students.

    Pivotal students are the top ``k`` by betweenness on ``d`` (or on the
    ``analysis_scope`` population); removal always applies to all of ``d``.
    """
    mode = Mode(mode)
    params = {"mode": mode.value, "k": k, "c": c}
    if analysis_scope is not None:
        params["analysis_scope"] = analysis_scope if isinstance(analysis_scope, str) else analysis_scope.label()
    if c <= 0:
        return d, _plan(PlanKind.SCALPEL, params, d, d, [], [])
    analysis = d if analysis_scope is None else subset(d, analysis_scope)
    codes = _top_courses(analysis, mode, k, c, workers)
    chosen = set(codes)
    removed = [s.id for s in d.sections.values() if s.course_code in chosen]
    after = _remove_sections(d, removed)
    return after, _plan(PlanKind.SCALPEL, params, d, after, removed, codes)


def two_pass_scalpel(
    d: EnrollmentDataset,
    mode: Mode | str = Mode.UNWEIGHTED,
    k: int = DEFAULT_PIVOTAL,
    c: int = DEFAULT_COURSES,
    graduate_courses: int = 5,
    undergraduate_courses: int = 5,
    workers: int = 1,
) -> tuple[EnrollmentDataset, InterventionPlan]:
    """University-wide scalpel, then per-career scalpels on what remains.

    The second pass picks pivotal students separately in the graduate-only
    and undergraduate-only populations of the first-pass result, with its
    own course budget for each, and removes the union university-wide.
    """
    mode = Mode(mode)
    first, plan1 = scalpel(d, mode, k, c, workers=workers)
    codes2 = []
    for career, budget in ((Career.GRADUATE, graduate_courses), (Career.UNDERGRADUATE, undergraduate_courses)):
        if budget <= 0:
            continue
        try:
            population = subset(first, Scope("career", frozenset({career})))
        except EmptyDatasetError:
            continue
        for code in _top_courses(population, mode, k, budget, workers):
            if code not in codes2:
                codes2.append(code)
    chosen = set(codes2)
    removed2 = [s.id for s in first.sections.values() if s.course_code in chosen]
    after = _remove_sections(first, removed2)
    params = {
        "mode": mode.value,
        "k": k,
        "c": c,
        "graduate_courses": graduate_courses,
        "undergraduate_courses": undergraduate_courses,
    }
    removed = list(plan1.removed_section_ids) + removed2
    codes = list(plan1.removed_course_codes) + [x for x in codes2 if x not in plan1.removed_course_codes]
    return after, _plan(PlanKind.TWO_PASS_SCALPEL, params, d, after, removed, codes)


# --------------------------------------------------------------------------
# comparison


PAIRS_WITHIN_K = 4


@dataclass(frozen=True)
class Analysis:
    """Graph, report and pairs-within-k share of one dataset."""

    graph: StudentGraph
    report: MetricsReport
    pairs_within: float
    pairs_scope: str
    k: int = PAIRS_WITHIN_K


def analyze(
    d: EnrollmentDataset,
    k: int = PAIRS_WITHIN_K,
    pairs_scope: str = "all",
    workers: int = 1,
) -> Analysis:
    """Metrics report plus percent of node pairs within ``k`` hops.

    ``pairs_scope`` is ``"all"`` (every retained node, unreachable pairs
    count as not within) or ``"lcc"`` (largest component only).
    """
    if pairs_scope not in ("all", "lcc"):
        raise ValueError("pairs_scope must be 'all' or 'lcc'")
    g = build_graph(d)
    comps = connected_components(g)
    lcc_nodes = comps[0]
    # BFS from largest-component sources never leaves it, so one pass serves both scopes
    lcc_counts = _kernels.run_chunked(_kernels.bfs_histogram, lcc_nodes, g.indptr, g.indices, workers=workers)
    rest = np.setdiff1d(np.arange(g.n), lcc_nodes)
    rest_counts = _kernels.run_chunked(_kernels.bfs_histogram, rest, g.indptr, g.indices, workers=workers)
    all_counts = lcc_counts.copy() if rest_counts is None else lcc_counts + rest_counts

    def trim(c):
        nz = np.flatnonzero(c)
        return c[: (nz[-1] + 1 if len(nz) else 1)]

    lcc_tally = DistanceTally(len(lcc_nodes), len(lcc_nodes), trim(lcc_counts))
    report = full_report(g, workers=workers, lcc_tally=lcc_tally if len(lcc_nodes) >= 2 else None)
    if pairs_scope == "all":
        n, within = g.n, int(all_counts[1:k + 1].sum())
    else:
        n, within = len(lcc_nodes), lcc_tally.within(k)
    share = 100.0 * within / (n * (n - 1)) if n >= 2 else math.nan
    return Analysis(g, report, share, pairs_scope, k)


COMPARISON_ROWS = (
    ("nodes_full", "Nodes"),
    ("edges_full", TABLE_LABELS["edges_full"]),
    ("nodes_lcc", TABLE_LABELS["nodes_lcc"]),
    ("edges_lcc", TABLE_LABELS["edges_lcc"]),
    ("avg_degree", TABLE_LABELS["avg_degree"]),
    ("pct_in_largest_component", TABLE_LABELS["pct_in_largest_component"]),
    ("avg_edge_weight", TABLE_LABELS["avg_edge_weight"]),
    ("avg_geodesic", TABLE_LABELS["avg_geodesic"]),
    ("diameter", TABLE_LABELS["diameter"]),
    ("pairs_within", "Node pairs within distance 4"),
    ("local_clustering", TABLE_LABELS["local_clustering"]),
    ("global_transitivity", TABLE_LABELS["global_transitivity"]),
    ("network_density", TABLE_LABELS["network_density"]),
)


@dataclass(frozen=True)
class ComparisonReport:
    before: MetricsReport
    after: MetricsReport
    pairs_within_before: float
    pairs_within_after: float
    sections_before: int
    sections_after: int
    pairs_scope: str = "all"
    k: int = PAIRS_WITHIN_K
    extra: dict = field(default_factory=dict)

    def _value(self, report, pairs, key):
        return pairs if key == "pairs_within" else getattr(report, key)

    def rows(self) -> list[tuple[str, str, object, object, object]]:
        """(label, structured key, before, after, after - before) in table order."""
        out = []
        for key, label in COMPARISON_ROWS:
            if key == "pairs_within":
                label = f"Node pairs within distance {self.k}"
            b = self._value(self.before, self.pairs_within_before, key)
            a = self._value(self.after, self.pairs_within_after, key)
            out.append((label, snake_label(label), b, a, a - b))
        return out

    def delta(self, key: str):
        b = self._value(self.before, self.pairs_within_before, key)
        a = self._value(self.after, self.pairs_within_after, key)
        return a - b


def compare(
    before: EnrollmentDataset,
    after: EnrollmentDataset,
    k: int = PAIRS_WITHIN_K,
    pairs_scope: str = "all",
    workers: int = 1,
) -> ComparisonReport:
    a0 = analyze(before, k, pairs_scope, workers)
    a1 = a0 if after is before else analyze(after, k, pairs_scope, workers)
    return ComparisonReport(
        before=a0.report,
        after=a1.report,
        pairs_within_before=a0.pairs_within,
        pairs_within_after=a1.pairs_within,
        sections_before=before.n_sections,
        sections_after=after.n_sections,
        pairs_scope=pairs_scope,
        k=k,
    )
