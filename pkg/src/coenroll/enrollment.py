"""Enrollment records and the population slices taken from them.

A dataset is an immutable collection of (student, section) enrollment pairs
plus the records they reference. Students and sections left without any
pair are dropped whenever a dataset is constructed, so every filter
automatically discards orphaned students.
"""

from __future__ import annotations

import csv
import io
import re
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import DataWarning, EmptyDatasetError, ParseError, TaxonomyError


class Career(str, Enum):
    UNDERGRADUATE = "undergraduate"
    GRADUATE = "graduate"


class Rank(str, Enum):
    FRESHMAN = "freshman"
    SOPHOMORE = "sophomore"
    JUNIOR = "junior"
    SENIOR = "senior"
    MASTERS = "masters"
    DOCTORAL = "doctoral"
    UNSPECIFIED = "unspecified"


class School(str, Enum):
    AH = "AH"
    ATEC = "ATEC"
    BBS = "BBS"
    EPPS = "EPPS"
    ECS = "ECS"
    IS = "IS"
    SOM = "SOM"
    NSM = "NSM"
    EMGT = "EMGT"
    UNSPECIFIED = "unspecified"


class Delivery(str, Enum):
    IN_PERSON = "in_person"
    ONLINE = "online"


CAREER_CODES = {"UG": Career.UNDERGRADUATE, "GR": Career.GRADUATE}
RANK_CODES = {
    "FR": Rank.FRESHMAN,
    "SO": Rank.SOPHOMORE,
    "JR": Rank.JUNIOR,
    "SR": Rank.SENIOR,
    "MA": Rank.MASTERS,
    "PHD": Rank.DOCTORAL,
    "NA": Rank.UNSPECIFIED,
}
DELIVERY_CODES = {"P": Delivery.IN_PERSON, "O": Delivery.ONLINE}

UNDERGRADUATE_RANKS = frozenset(
    {Rank.FRESHMAN, Rank.SOPHOMORE, Rank.JUNIOR, Rank.SENIOR}
)
GRADUATE_RANKS = frozenset({Rank.MASTERS, Rank.DOCTORAL})

COLUMNS = (
    "student_id",
    "student_career",
    "student_rank",
    "section_id",
    "course_code",
    "delivery",
)
OPTIONAL_COLUMNS = ("student_school",)

# 8xxx research credits are kept in the graph but left out of per-level reports.
REPORTED_LEVELS = (1, 2, 3, 4, 5, 6, 7)

_COURSE_RE = re.compile(r"^([A-Za-z]+)(\d{4})$")


def _code_for(mapping, value):
    for code, member in mapping.items():
        if member is value:
            return code
    raise KeyError(value)


@dataclass(frozen=True)
class Student:
    id: str
    career: Career
    rank: Rank = Rank.UNSPECIFIED
    school: School = School.UNSPECIFIED

    def __post_init__(self):
        if self.rank in UNDERGRADUATE_RANKS and self.career is not Career.UNDERGRADUATE:
            raise ValueError(f"student {self.id}: rank {self.rank.value} requires undergraduate career")
        if self.rank in GRADUATE_RANKS and self.career is not Career.GRADUATE:
            raise ValueError(f"student {self.id}: rank {self.rank.value} requires graduate career")


@dataclass(frozen=True)
class Section:
    id: str
    course_code: str
    school: School
    level: int
    weekly_contact_hours: int
    delivery: Delivery = Delivery.IN_PERSON
    enrollment_count: int = 0


@dataclass(frozen=True)
class CourseInfo:
    level: int
    weekly_contact_hours: int
    school: School


# --------------------------------------------------------------------------
# course numbering


def normalize_course_code(code: str) -> str:
    """Strip internal whitespace and upper-case the prefix: "cs 4485" -> "CS4485"."""
    return "".join(code.split()).upper()


def split_course_code(code: str) -> tuple[str, str]:
    m = _COURSE_RE.match(normalize_course_code(code))
    if m is None:
        raise TaxonomyError(f"course code {code!r} is not an alphabetic prefix followed by 4 digits")
    prefix, digits = m.groups()
    if not 1 <= int(digits[0]) <= 8:
        raise TaxonomyError(f"course code {code!r}: level digit must be 1-8")
    return prefix, digits


def load_prefix_map(path: str | Path | None = None) -> dict[str, School]:
    """Read a two-column (prefix, school) file; the shipped default if no path."""
    if path is None:
        text = resources.files("coenroll").joinpath("data/prefix_schools.csv").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    out = {}
    reader = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(reader, start=1):
        if not row or (lineno == 1 and row[0].strip().lower() == "prefix"):
            continue
        if len(row) != 2:
            raise ParseError("prefix map rows need exactly two columns", lineno)
        prefix, school = row[0].strip().upper(), row[1].strip()
        try:
            out[prefix] = School(school)
        except ValueError:
            raise ParseError(f"unknown school {school!r}", lineno) from None
    return out


_DEFAULT_PREFIX_MAP: dict[str, School] | None = None


def default_prefix_map() -> dict[str, School]:
    global _DEFAULT_PREFIX_MAP
    if _DEFAULT_PREFIX_MAP is None:
        _DEFAULT_PREFIX_MAP = load_prefix_map()
    return _DEFAULT_PREFIX_MAP


def course_taxonomy(
    course_code: str,
    prefix_map: Mapping[str, School] | None = None,
    strict: bool = False,
) -> CourseInfo:
    """Decode level (first digit), weekly contact hours (second digit), and school.

    >>> course_taxonomy("CS 4485")
    CourseInfo(level=4, weekly_contact_hours=4, school=<School.ECS: 'ECS'>)
    """
    prefix, digits = split_course_code(course_code)
    table = default_prefix_map() if prefix_map is None else prefix_map
    school = table.get(prefix)
    if school is None:
        if strict:
            raise TaxonomyError(f"unknown course prefix {prefix!r}")
        warnings.warn(f"unknown course prefix {prefix!r}; school set to unspecified", DataWarning, stacklevel=2)
        school = School.UNSPECIFIED
    return CourseInfo(int(digits[0]), int(digits[1]), school)


# --------------------------------------------------------------------------
# dataset


class EnrollmentDataset:
    """Immutable students/sections/enrollments triple.

    Construction drops duplicate pairs, students without enrollments and
    sections without enrollments, and recomputes every section's
    ``enrollment_count``.
    """

    def __init__(
        self,
        students: Iterable[Student],
        sections: Iterable[Section],
        enrollments: Iterable[tuple[str, str]],
    ):
        student_map = {}
        for s in students:
            if s.id in student_map and student_map[s.id] != s:
                raise ValueError(f"conflicting records for student {s.id}")
            student_map[s.id] = s
        section_map = {}
        for sec in sections:
            if sec.id in section_map and replace(section_map[sec.id], enrollment_count=0) != replace(sec, enrollment_count=0):
                raise ValueError(f"conflicting records for section {sec.id}")
            section_map[sec.id] = sec

        pairs = set()
        for sid, secid in enrollments:
            if sid not in student_map:
                raise ValueError(f"enrollment references unknown student {sid}")
            if secid not in section_map:
                raise ValueError(f"enrollment references unknown section {secid}")
            pairs.add((sid, secid))

        counts = Counter(secid for _, secid in pairs)
        enrolled = {sid for sid, _ in pairs}
        self._students = MappingProxyType(
            {sid: student_map[sid] for sid in sorted(enrolled)}
        )
        self._sections = MappingProxyType(
            {
                secid: replace(section_map[secid], enrollment_count=counts[secid])
                for secid in sorted(counts)
            }
        )
        self._enrollments = tuple(sorted(pairs))
        self.duplicates_dropped = 0

    @property
    def students(self) -> Mapping[str, Student]:
        return self._students

    @property
    def sections(self) -> Mapping[str, Section]:
        return self._sections

    @property
    def enrollments(self) -> tuple[tuple[str, str], ...]:
        return self._enrollments

    @property
    def n_students(self) -> int:
        return len(self._students)

    @property
    def n_sections(self) -> int:
        return len(self._sections)

    @property
    def n_enrollments(self) -> int:
        return len(self._enrollments)

    def is_empty(self) -> bool:
        return not self._enrollments

    def sections_of(self) -> dict[str, list[str]]:
        """student id -> sorted section ids."""
        out = defaultdict(list)
        for sid, secid in self._enrollments:
            out[sid].append(secid)
        return dict(out)

    def students_of(self) -> dict[str, list[str]]:
        """section id -> sorted student ids."""
        out = defaultdict(list)
        for sid, secid in self._enrollments:
            out[secid].append(sid)
        for v in out.values():
            v.sort()
        return dict(out)

    def restrict(self, keep_pair) -> "EnrollmentDataset":
        """New dataset keeping the pairs for which ``keep_pair(student, section)`` is true."""
        pairs = [
            (sid, secid)
            for sid, secid in self._enrollments
            if keep_pair(self._students[sid], self._sections[secid])
        ]
        return EnrollmentDataset(self._students.values(), self._sections.values(), pairs)

    def __eq__(self, other):
        if not isinstance(other, EnrollmentDataset):
            return NotImplemented
        return (
            dict(self._students) == dict(other._students)
            and dict(self._sections) == dict(other._sections)
            and self._enrollments == other._enrollments
        )

    def __repr__(self):
        return (
            f"EnrollmentDataset(students={self.n_students}, sections={self.n_sections}, "
            f"enrollments={self.n_enrollments})"
        )


# --------------------------------------------------------------------------
# file format


def _open_text(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            yield from fh
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        yield from source
    else:
        yield from source


def parse_enrollment(
    source,
    prefix_map: Mapping[str, School] | None = None,
    strict: bool = False,
) -> EnrollmentDataset:
    """Read an enrollment file from a path, an open text file or any iterable of lines.

    Duplicate (student, section) rows are collapsed with a ``DataWarning``
    unless ``strict``, in which case they raise, as do unknown prefixes.
    """
    reader = csv.reader(_open_text(source))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise EmptyDatasetError("enrollment stream is empty") from None
    if tuple(header[: len(COLUMNS)]) != COLUMNS or len(header) > len(COLUMNS) + len(OPTIONAL_COLUMNS) or (
        len(header) > len(COLUMNS) and tuple(header[len(COLUMNS):]) != OPTIONAL_COLUMNS[: len(header) - len(COLUMNS)]
    ):
        raise ParseError(f"header must be {','.join(COLUMNS)}[,student_school]; got {','.join(header)}", 1)
    width = len(header)
    has_school = width > len(COLUMNS)

    table = default_prefix_map() if prefix_map is None else prefix_map
    students: dict[str, Student] = {}
    sections: dict[str, Section] = {}
    pairs: set[tuple[str, str]] = set()
    duplicates = 0
    unknown_prefixes: set[str] = set()

    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != width:
            raise ParseError(f"expected {width} columns, found {len(row)}", lineno)
        row = [c.strip() for c in row]
        sid, career_code, rank_code, secid, code, delivery_code = row[:6]
        if not sid or not secid:
            raise ParseError("missing student_id or section_id", lineno)
        try:
            career = CAREER_CODES[career_code]
            rank = RANK_CODES[rank_code]
            delivery = DELIVERY_CODES[delivery_code]
        except KeyError as exc:
            raise ParseError(f"unrecognized code {exc.args[0]!r}", lineno) from None
        school = School.UNSPECIFIED
        if has_school and row[6]:
            try:
                school = School(row[6])
            except ValueError:
                raise ParseError(f"unknown school {row[6]!r}", lineno) from None
        try:
            student = Student(sid, career, rank, school)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None

        try:
            prefix, digits = split_course_code(code)
        except TaxonomyError as exc:
            raise ParseError(str(exc), lineno) from None
        course_school = table.get(prefix)
        if course_school is None:
            if strict:
                raise ParseError(f"unknown course prefix {prefix!r}", lineno)
            unknown_prefixes.add(prefix)
            course_school = School.UNSPECIFIED
        section = Section(secid, prefix + digits, course_school, int(digits[0]), int(digits[1]), delivery)

        if students.setdefault(sid, student) != student:
            raise ParseError(f"student {sid} has inconsistent career/rank/school", lineno)
        if sections.setdefault(secid, section) != section:
            raise ParseError(f"section {secid} has inconsistent course code or delivery", lineno)
        if (sid, secid) in pairs:
            if strict:
                raise ParseError(f"duplicate enrollment ({sid}, {secid})", lineno)
            duplicates += 1
            continue
        pairs.add((sid, secid))

    if not pairs:
        raise EmptyDatasetError("enrollment stream has no data rows")
    if unknown_prefixes:
        warnings.warn(
            f"unknown course prefixes mapped to school unspecified: {', '.join(sorted(unknown_prefixes))}",
            DataWarning,
            stacklevel=2,
        )
    if duplicates:
        warnings.warn(f"{duplicates} duplicate enrollment row(s) dropped", DataWarning, stacklevel=2)
    ds = EnrollmentDataset(students.values(), sections.values(), pairs)
    ds.duplicates_dropped = duplicates
    return ds


def write_enrollment(d: EnrollmentDataset, target) -> None:
    """Write ``d`` in the enrollment file format (with the student_school column)."""
    own = isinstance(target, (str, Path))
    fh = open(target, "w", newline="", encoding="utf-8") if own else target
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS + OPTIONAL_COLUMNS)
        for sid, secid in d.enrollments:
            st = d.students[sid]
            sec = d.sections[secid]
            w.writerow(
                [
                    sid,
                    _code_for(CAREER_CODES, st.career),
                    _code_for(RANK_CODES, st.rank),
                    secid,
                    sec.course_code,
                    _code_for(DELIVERY_CODES, sec.delivery),
                    st.school.value,
                ]
            )
    finally:
        if own:
            fh.close()


# --------------------------------------------------------------------------
# filters


def filter_in_person(d: EnrollmentDataset) -> EnrollmentDataset:
    """Drop online sections and any student left without an in-person section."""
    return d.restrict(lambda st, sec: sec.delivery is Delivery.IN_PERSON)


@dataclass(frozen=True)
class Scope:
    """A population selector: ``kind`` is career, rank, level or school."""

    kind: str
    values: frozenset

    KINDS = ("career", "rank", "level", "school")

    @classmethod
    def parse(cls, text: str) -> "Scope":
        """Parse ``"level=5,6"``, ``"rank=FR"``, ``"career=graduate"``, ``"school=ECS"``."""
        if "=" not in text:
            raise ValueError(f"scope must look like kind=value[,value]: {text!r}")
        kind, _, raw = text.partition("=")
        kind = kind.strip().lower()
        items = [v.strip() for v in raw.split(",") if v.strip()]
        if not items:
            raise ValueError(f"scope {text!r} has no values")
        if kind == "career":
            values = frozenset(CAREER_CODES.get(v.upper()) or Career(v.lower()) for v in items)
        elif kind == "rank":
            values = frozenset(RANK_CODES.get(v.upper()) or Rank(v.lower()) for v in items)
        elif kind == "level":
            values = frozenset(int(v.rstrip("x")) for v in items)
            if not all(1 <= v <= 8 for v in values):
                raise ValueError("course levels are 1-8")
        elif kind == "school":
            values = frozenset(School(v.upper()) if v.lower() != "unspecified" else School.UNSPECIFIED for v in items)
        else:
            raise ValueError(f"unknown scope kind {kind!r}; expected one of {', '.join(cls.KINDS)}")
        return cls(kind, values)

    def label(self) -> str:
        vals = sorted(v.value if isinstance(v, Enum) else str(v) for v in self.values)
        return f"{self.kind}={','.join(vals)}"


def subset(d: EnrollmentDataset, scope: Scope | str) -> EnrollmentDataset:
    """Restrict ``d`` to one population.

    Career, rank and school scopes keep the selected students with all their
    enrollments. A level scope keeps only enrollments in sections at the
    selected levels, so students appear only if they take such a section.
    """
    if isinstance(scope, str):
        scope = Scope.parse(scope)
    if scope.kind == "career":
        out = d.restrict(lambda st, sec: st.career in scope.values)
    elif scope.kind == "rank":
        out = d.restrict(lambda st, sec: st.rank in scope.values)
    elif scope.kind == "school":
        out = d.restrict(lambda st, sec: st.school in scope.values)
    elif scope.kind == "level":
        out = d.restrict(lambda st, sec: sec.level in scope.values)
    else:
        raise ValueError(f"unknown scope kind {scope.kind!r}")
    if out.is_empty():
        raise EmptyDatasetError(f"scope {scope.label()} selects no enrollments")
    return out
