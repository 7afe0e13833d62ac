"""Small hand-built and random enrollment datasets."""

from __future__ import annotations

import numpy as np

from coenroll.enrollment import Career, Delivery, EnrollmentDataset, Rank, School, Section, Student

UG = (Rank.FRESHMAN, Rank.SOPHOMORE, Rank.JUNIOR, Rank.SENIOR)
GR = (Rank.MASTERS, Rank.DOCTORAL)
SCHOOLS = (School.ECS, School.SOM, School.NSM)
PREFIX = {School.ECS: "CS", School.SOM: "ACCT", School.NSM: "MATH"}


def student(sid: str, rank: Rank = Rank.FRESHMAN, school: School = School.ECS) -> Student:
    career = Career.GRADUATE if rank in GR else Career.UNDERGRADUATE
    return Student(sid, career, rank, school)


def section(secid: str, code: str = "CS1301", hours: int | None = None, delivery=Delivery.IN_PERSON, school=School.ECS):
    digits = code.lstrip("ABCDEFGHIJKLMNOPQRSTUVWXYZ")
    level = int(digits[0])
    return Section(secid, code, school, level, int(digits[1]) if hours is None else hours, delivery)


def dataset(pairs, ranks=None, codes=None, hours=None, schools=None, online=()) -> EnrollmentDataset:
    """Dataset from (student, section) pairs; per-id attributes default sensibly."""
    ranks, codes, hours, schools = ranks or {}, codes or {}, hours or {}, schools or {}
    sids = sorted({s for s, _ in pairs})
    secids = sorted({c for _, c in pairs})
    students = [student(s, ranks.get(s, Rank.FRESHMAN), schools.get(s, School.ECS)) for s in sids]
    sections = [
        section(c, codes.get(c, "CS1301"), hours.get(c), Delivery.ONLINE if c in online else Delivery.IN_PERSON)
        for c in secids
    ]
    return EnrollmentDataset(students, sections, pairs)


def random_dataset(rng: np.random.Generator, n_students: int, n_courses: int, max_sections: int = 2,
                   per_student: tuple[int, int] = (1, 4)) -> EnrollmentDataset:
    """Random mixed-career population; course codes carry level and contact hours."""
    students = []
    for i in range(n_students):
        rank = (UG + GR)[int(rng.integers(0, 6))]
        students.append(student(f"S{i:04d}", rank, SCHOOLS[int(rng.integers(0, 3))]))
    sections = []
    for c in range(n_courses):
        school = SCHOOLS[c % 3]
        code = f"{PREFIX[school]}{int(rng.integers(1, 9))}{int(rng.integers(0, 5))}{c:02d}"
        for k in range(int(rng.integers(1, max_sections + 1))):
            digits = code[len(PREFIX[school]):]
            sections.append(Section(f"{code}.{k}", code, school, int(digits[0]), int(digits[1])))
    pairs = []
    for s in students:
        for j in rng.choice(len(sections), size=min(len(sections), int(rng.integers(per_student[0], per_student[1] + 1))), replace=False):
            pairs.append((s.id, sections[int(j)].id))
    return EnrollmentDataset(students, sections, pairs)
