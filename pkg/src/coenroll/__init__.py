"""Co-enrollment contact networks for a university population.

Enrollment records become a student graph whose edges join students who
share a section. Path-length and clustering statistics describe that graph;
betweenness picks out the students whose courses are worth moving online.
"""

import os as _os

# numba's default TBB layer warns when the TBB runtime is missing
_os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

__version__ = "0.1.0"

from .centrality import Mode, betweenness, pivotal_course_tally, pivotal_students  # noqa: E402
from .enrollment import EnrollmentDataset, Scope, filter_in_person, parse_enrollment, subset, write_enrollment  # noqa: E402
from .errors import (  # noqa: E402
    CoenrollError,
    DataWarning,
    EmptyDatasetError,
    InfeasibleError,
    ParseError,
    TaxonomyError,
    UndefinedMetricError,
)
from .intervention import compare, enrollment_quintiles, remove_sections_by_size, scalpel, two_pass_scalpel  # noqa: E402
from .metrics import full_report, reachability_curve  # noqa: E402
from .projection import StudentGraph, build_graph, build_incidence, project  # noqa: E402
from .synthgen import SynthConfig, generate, load_config  # noqa: E402

__all__ = [
    "CoenrollError", "DataWarning", "EmptyDatasetError", "EnrollmentDataset", "InfeasibleError", "Mode",
    "ParseError", "Scope", "StudentGraph", "SynthConfig", "TaxonomyError", "UndefinedMetricError",
    "betweenness", "build_graph", "build_incidence", "compare", "enrollment_quintiles", "filter_in_person",
    "full_report", "generate", "load_config", "parse_enrollment", "pivotal_course_tally", "pivotal_students",
    "project", "reachability_curve", "remove_sections_by_size", "scalpel", "subset", "two_pass_scalpel",
    "write_enrollment",
]
