import io
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coenroll.enrollment import (
    Career,
    Delivery,
    Rank,
    School,
    Scope,
    course_taxonomy,
    filter_in_person,
    parse_enrollment,
    subset,
    write_enrollment,
)
from coenroll.errors import DataWarning, EmptyDatasetError, ParseError, TaxonomyError

HEADER = "student_id,student_career,student_rank,section_id,course_code,delivery\n"


def parse(body: str, **kw):
    return parse_enrollment(io.StringIO(HEADER + body), **kw)


def test_two_rows_one_section():
    d = parse("s1,UG,FR,secA,CS1301,P\ns2,UG,SO,secA,CS1301,P\n")
    assert (d.n_students, d.n_sections, d.n_enrollments) == (2, 1, 2)
    assert d.sections["secA"].enrollment_count == 2


def test_duplicate_row_warns_once_and_collapses():
    with pytest.warns(DataWarning, match="1 duplicate"):
        d = parse("s1,UG,FR,secA,CS1301,P\ns1,UG,FR,secA,CS1301,P\ns2,UG,FR,secA,CS1301,P\n")
    assert d.n_enrollments == 2
    assert d.duplicates_dropped == 1


def test_duplicate_row_is_error_when_strict():
    with pytest.raises(ParseError, match="line 3"):
        parse("s1,UG,FR,secA,CS1301,P\ns1,UG,FR,secA,CS1301,P\n", strict=True)


def test_short_course_code_names_line():
    with pytest.raises(ParseError, match="line 3"):
        parse("s1,UG,FR,secA,CS1301,P\ns2,UG,FR,secB,CS12,P\n")


@pytest.mark.parametrize(
    "row",
    [
        "s1,UG,FR,secA,CS1301",  # missing column
        "s1,XX,FR,secA,CS1301,P",  # bad career
        "s1,UG,FR,secA,CS1301,Z",  # bad delivery
        "s1,GR,FR,secA,CS1301,P",  # freshman cannot be graduate
        "s1,UG,FR,secA,CS9301,P",  # level digit out of range
    ],
)
def test_malformed_rows(row):
    with pytest.raises(ParseError, match="line 2"):
        parse(row + "\n")


def test_inconsistent_student_record():
    with pytest.raises(ParseError, match="inconsistent"):
        parse("s1,UG,FR,secA,CS1301,P\ns1,UG,SO,secB,CS1301,P\n")


def test_bad_header():
    with pytest.raises(ParseError, match="line 1"):
        parse_enrollment(io.StringIO("a,b,c\n"))


def test_empty_stream():
    with pytest.raises(EmptyDatasetError):
        parse_enrollment(io.StringIO(""))
    with pytest.raises(EmptyDatasetError):
        parse("")


@pytest.mark.parametrize(
    "code, level, hours, school",
    [
        ("CS4485", 4, 4, School.ECS),
        ("GOVT2305", 2, 3, School.EPPS),
        ("HUMA1301", 1, 3, School.AH),
        ("cs 4485", 4, 4, School.ECS),
    ],
)
def test_course_taxonomy(code, level, hours, school):
    info = course_taxonomy(code)
    assert (info.level, info.weekly_contact_hours, info.school) == (level, hours, school)


def test_unknown_prefix():
    with pytest.warns(DataWarning):
        assert course_taxonomy("ZZZZ1301").school is School.UNSPECIFIED
    with pytest.raises(TaxonomyError):
        course_taxonomy("ZZZZ1301", strict=True)
    with pytest.raises(TaxonomyError):
        course_taxonomy("CS130")


def test_filter_in_person_identity_and_orphans():
    d = parse("s1,UG,FR,secA,CS1301,P\ns2,UG,FR,secA,CS1301,P\n")
    assert filter_in_person(d) == d
    d = parse("s1,UG,FR,secB,CS1301,O\ns2,UG,FR,secA,CS1301,P\ns2,UG,FR,secB,CS1301,O\n")
    f = filter_in_person(d)
    assert "s1" not in f.students and "secB" not in f.sections
    assert f.n_students == 1


def test_online_drop_matches_scan(pinned_raw):
    f = filter_in_person(pinned_raw)
    in_person_students = {s for s, c in pinned_raw.enrollments if pinned_raw.sections[c].delivery is Delivery.IN_PERSON}
    online_only = set(pinned_raw.students) - in_person_students
    assert pinned_raw.n_students - f.n_students == len(online_only)
    assert any(s.delivery is Delivery.ONLINE for s in pinned_raw.sections.values())


def test_rank_subset():
    d = parse("s1,UG,FR,secA,CS1301,P\ns2,UG,SR,secA,CS1301,P\n")
    assert subset(d, "rank=FR").n_students == 1
    with pytest.raises(EmptyDatasetError):
        subset(d, "rank=PHD")


def test_level_scope_groups_masters_levels():
    s = Scope.parse("level=5,6")
    assert s.values == frozenset({5, 6})
    d = parse("s1,GR,MA,a,CS5301,P\ns2,GR,MA,b,CS6301,P\ns3,GR,PHD,c,CS7301,P\n")
    assert set(subset(d, s).students) == {"s1", "s2"}


def test_level_scope_matches_scan(pinned):
    want = {s for s, c in pinned.enrollments if pinned.sections[c].level == 1}
    assert set(subset(pinned, "level=1").students) == want


def test_career_and_school_scope(pinned):
    gr = subset(pinned, "career=GR")
    assert all(s.career is Career.GRADUATE for s in gr.students.values())
    ecs = subset(pinned, "school=ECS")
    assert all(s.school is School.ECS for s in ecs.students.values())
    # a career scope keeps each student's whole schedule
    sched = pinned.sections_of()
    assert all(sorted(v) == sorted(sched[k]) for k, v in gr.sections_of().items())


@pytest.mark.parametrize("text", ["level", "kind=1", "level=9", "rank=XX", "level="])
def test_bad_scope(text):
    with pytest.raises(ValueError):
        Scope.parse(text)


def test_scope_labels():
    assert Scope.parse("rank=FR").label() == "rank=freshman"
    assert Scope.parse("level=6,5").label() == "level=5,6"


_ids = st.text(alphabet="abcdefgh0123", min_size=1, max_size=4)
_rows = st.lists(
    st.tuples(
        _ids,
        st.sampled_from(["FR", "SO", "JR", "SR", "MA", "PHD"]),
        _ids,
        st.sampled_from(["CS1301", "MATH2413", "ACCT6301", "HUMA1301"]),
        st.sampled_from(["P", "O"]),
    ),
    min_size=1,
    max_size=40,
)


@settings(max_examples=60, deadline=None)
@given(_rows)
def test_write_then_parse_round_trip(rows):
    seen_student, seen_section, lines = {}, {}, []
    for sid, rank, secid, code, dl in rows:
        rank = seen_student.setdefault(sid, rank)
        code, dl = seen_section.setdefault(secid, (code, dl))
        career = "GR" if rank in ("MA", "PHD") else "UG"
        lines.append(f"{sid},{career},{rank},{secid},{code},{dl}\n")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DataWarning)
        d = parse("".join(lines))
    buf = io.StringIO()
    write_enrollment(d, buf)
    buf.seek(0)
    again = parse_enrollment(buf)
    assert again == d
    # invariants: every student and section appears in some pair; counts agree
    assert {s for s, _ in d.enrollments} == set(d.students)
    assert {c for _, c in d.enrollments} == set(d.sections)
    assert sum(s.enrollment_count for s in d.sections.values()) == d.n_enrollments
    assert all(st_.rank in (Rank.FRESHMAN, Rank.SOPHOMORE, Rank.JUNIOR, Rank.SENIOR, Rank.MASTERS, Rank.DOCTORAL)
               for st_ in d.students.values())
