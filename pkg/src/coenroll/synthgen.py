"""Seeded generator of university-shaped enrollment datasets.

Students belong to a school and a rank. Each course slot is filled with a
general-education core course (probability depends on rank), a major course
from the student's school (occasionally another school's) at a level drawn
from the rank's level mix, or an individual-instruction section. Course
demand is then split into sections whose capacities are drawn from the
configured size mixtures.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .enrollment import (
    RANK_CODES,
    Career,
    Delivery,
    EnrollmentDataset,
    School,
    Section,
    Student,
    course_taxonomy,
    default_prefix_map,
)
from .errors import InfeasibleError

RANKS = ("FR", "SO", "JR", "SR", "MA", "PHD")
GRAD_RANKS = ("MA", "PHD")

# Prefixes used for generated codes. Core courses draw from general-education
# subjects; major courses use each school's own subjects.
CORE_PREFIXES = (
    "RHET", "MATH", "HIST", "GOVT", "CHEM", "BIOL", "PHYS", "PSY", "ECON",
    "PHIL", "HUMA", "ARTS", "LIT", "SOC", "CRIM", "NATS", "ATCM", "MUSI",
)
SCHOOL_PREFIXES = {
    "AH": ("HIST", "LIT", "PHIL", "ARTS", "HUMA"),
    "ATEC": ("ATCM",),
    "BBS": ("PSY", "NSC", "CGS", "SPAU"),
    "EPPS": ("ECON", "GOVT", "CRIM", "PA", "SOC"),
    "ECS": ("CS", "EE", "CE", "SE", "MECH", "BMEN"),
    "IS": ("ISIS", "ISNS", "ED"),
    "SOM": ("ACCT", "FIN", "MKT", "ITSS", "OPRE", "ENTP", "BA", "MIS"),
    "NSM": ("MATH", "BIOL", "CHEM", "PHYS", "STAT"),
}

SIZE_RTOL = 0.1  # documented tolerance for section-capacity mixture checks


def _parse_map(text: str, value=float) -> dict:
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        k, _, v = item.partition(":")
        out[k.strip()] = value(v.strip())
    return out


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("-")
    lo = int(lo)
    hi = int(hi) if hi else lo
    if hi < lo:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def _parse_mixture(text: str) -> tuple[tuple[float, int, int], ...]:
    """``"0.5:2-12;0.5:13-40"`` -> ((0.5, 2, 12), (0.5, 13, 40))."""
    comps = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        w, _, r = item.partition(":")
        lo, hi = _parse_range(r)
        comps.append((float(w), lo, hi))
    return tuple(comps)


def _fmt_map(d: dict) -> str:
    return ",".join(f"{k}:{_fmt_value(v)}" for k, v in d.items())


def _fmt_value(v) -> str:
    if isinstance(v, tuple):
        return f"{v[0]}-{v[1]}"
    return repr(v) if isinstance(v, float) else str(v)


@dataclass(frozen=True)
class SynthConfig:
    name: str = "custom"
    seed: int = 0
    students: dict = field(default_factory=lambda: {"FR": 300, "SO": 220, "JR": 420, "SR": 500, "MA": 440, "PHD": 120})
    school_weights_ug: dict = field(
        default_factory=lambda: {"ECS": 0.30, "SOM": 0.22, "NSM": 0.14, "BBS": 0.10, "EPPS": 0.08, "AH": 0.06, "ATEC": 0.07, "IS": 0.03}
    )
    school_weights_gr: dict = field(
        default_factory=lambda: {"ECS": 0.34, "SOM": 0.34, "NSM": 0.10, "BBS": 0.07, "EPPS": 0.08, "AH": 0.03, "ATEC": 0.04}
    )
    courses_per_student: dict = field(
        default_factory=lambda: {"FR": (4, 5), "SO": (4, 5), "JR": (4, 5), "SR": (4, 5), "MA": (3, 4), "PHD": (2, 3)}
    )
    core_courses: int = 30
    core_popularity_exponent: float = 0.4
    core_prob: dict = field(default_factory=lambda: {"FR": 0.6, "SO": 0.4, "JR": 0.1, "SR": 0.05, "MA": 0.0, "PHD": 0.0})
    core_levels: dict = field(default_factory=lambda: {"1": 0.6, "2": 0.4})
    major_courses_per_level: dict = field(
        default_factory=lambda: {"1": 4, "2": 6, "3": 22, "4": 28, "5": 22, "6": 22, "7": 10, "8": 5}
    )
    major_popularity_shape: float = 1.0
    min_courses_per_pool: int = 2
    independent_courses_per_pool: int = 8
    levels: dict = field(
        default_factory=lambda: {
            "FR": {"1": 0.75, "2": 0.2, "3": 0.05},
            "SO": {"1": 0.25, "2": 0.5, "3": 0.2, "4": 0.05},
            "JR": {"2": 0.15, "3": 0.6, "4": 0.25},
            "SR": {"2": 0.05, "3": 0.3, "4": 0.62, "5": 0.03},
            "MA": {"5": 0.45, "6": 0.5, "7": 0.05},
            "PHD": {"6": 0.4, "7": 0.45, "8": 0.15},
        }
    )
    cross_school_prob: dict = field(default_factory=lambda: {"UG": 0.12, "GR": 0.05})
    graduate_undergrad_leak: float = 0.05
    independent_prob: dict = field(default_factory=lambda: {"FR": 0.0, "SO": 0.0, "JR": 0.03, "SR": 0.06, "MA": 0.05, "PHD": 0.35})
    section_size_core: tuple = ((0.5, 60, 120), (0.5, 120, 200))
    section_size_major: tuple = ((0.7, 25, 45), (0.3, 45, 80))
    section_size_independent: tuple = ((1.0, 1, 3),)
    online_share: float = 0.02
    contact_hours: dict = field(default_factory=lambda: {"1": 0.05, "2": 0.05, "3": 0.8, "4": 0.1})

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        def probs(name, d):
            for k, v in d.items():
                if not 0.0 <= v <= 1.0:
                    raise InfeasibleError(f"{name}[{k}] = {v} is not a probability")

        for r in RANKS:
            if self.students.get(r, 0) < 0:
                raise InfeasibleError(f"negative student count for {r}")
            lo, hi = self.courses_per_student.get(r, (0, 0))
            if lo < 1 and self.students.get(r, 0):
                raise InfeasibleError(f"students of rank {r} need at least one course")
        probs("core_prob", self.core_prob)
        probs("cross_school_prob", self.cross_school_prob)
        probs("independent_prob", self.independent_prob)
        if not 0.0 <= self.online_share <= 1.0:
            raise InfeasibleError("online_share must be in [0, 1]")
        if not 0.0 <= self.graduate_undergrad_leak <= 1.0:
            raise InfeasibleError("graduate_undergrad_leak must be in [0, 1]")
        for name in ("section_size_core", "section_size_major", "section_size_independent"):
            mix = getattr(self, name)
            if not mix or any(w < 0 or lo < 1 for w, lo, _ in mix) or sum(w for w, _, _ in mix) <= 0:
                raise InfeasibleError(f"{name} is not a valid size mixture")
        for h in self.contact_hours:
            if not 0 <= int(h) <= 9:
                raise InfeasibleError("contact hours are a single digit")
        if self.independent_courses_per_pool < 1:
            raise InfeasibleError("independent_courses_per_pool must be >= 1")
        if self.core_courses < 0:
            raise InfeasibleError("core_courses must be >= 0")
        if any(v < 0 for v in self.major_courses_per_level.values()):
            raise InfeasibleError("major course counts must be >= 0")

    # -- flat key/value text ------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name == "students":
                for r in RANKS:
                    lines.append(f"students.{r} = {v.get(r, 0)}")
            elif f.name == "levels":
                for r in RANKS:
                    lines.append(f"levels.{r} = {_fmt_map(v.get(r, {}))}")
            elif isinstance(v, dict):
                lines.append(f"{f.name} = {_fmt_map(v)}")
            elif f.name.startswith("section_size"):
                lines.append(f"{f.name} = " + ";".join(f"{w!r}:{lo}-{hi}" for w, lo, hi in v))
            else:
                lines.append(f"{f.name} = {_fmt_value(v)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SynthConfig":
        base = cls()
        kw = {"students": dict(base.students), "levels": {k: dict(v) for k, v in base.levels.items()}}
        names = {f.name for f in dataclasses.fields(cls)}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line {lineno}: expected key = value")
            key, _, value = (s.strip() for s in line.partition("="))
            if key.startswith("students."):
                kw["students"][key.split(".", 1)[1]] = int(value)
            elif key.startswith("levels."):
                kw["levels"][key.split(".", 1)[1]] = _parse_map(value)
            elif key == "courses_per_student":
                kw[key] = _parse_map(value, _parse_range)
            elif key in ("major_courses_per_level",):
                kw[key] = _parse_map(value, int)
            elif key.startswith("section_size"):
                kw[key] = _parse_mixture(value)
            elif key in names:
                default = getattr(base, key)
                if isinstance(default, dict):
                    kw[key] = _parse_map(value)
                elif isinstance(default, bool):
                    kw[key] = value.lower() in ("1", "true", "yes")
                elif isinstance(default, int):
                    kw[key] = int(value)
                elif isinstance(default, float):
                    kw[key] = float(value)
                else:
                    kw[key] = value
            else:
                raise ValueError(f"config line {lineno}: unknown key {key!r}")
        return cls(**kw)


BUILTIN_CONFIGS = ("utd-like-2k",)


def load_config(name_or_path: str | Path) -> SynthConfig:
    """A shipped config by name (e.g. ``"utd-like-2k"``) or a config file path."""
    if str(name_or_path) in BUILTIN_CONFIGS:
        text = resources.files("coenroll").joinpath(f"data/{name_or_path}.conf").read_text("utf-8")
    else:
        text = Path(name_or_path).read_text("utf-8")
    return SynthConfig.from_text(text)


# --------------------------------------------------------------------------
# generation


def _weights(d: dict, keys) -> np.ndarray:
    w = np.array([float(d.get(k, 0.0)) for k in keys])
    if w.sum() <= 0:
        raise InfeasibleError("weights sum to zero")
    return w / w.sum()


@dataclass
class _Course:
    code: str
    school: str
    level: int
    hours: int
    kind: str  # core | major | independent
    popularity: float = 1.0


class _Catalog:
    def __init__(self, cfg: SynthConfig, rng: np.random.Generator):
        self.rng = rng
        self.taken: set[str] = set()
        hours_keys = sorted(cfg.contact_hours)
        self.hours_keys = [int(h) for h in hours_keys]
        self.hours_p = _weights(cfg.contact_hours, hours_keys)
        self.core: list[_Course] = []
        self.major: dict[tuple[str, int], list[_Course]] = {}
        self.independent: dict[tuple[str, int], list[_Course]] = {}

        lv_keys = sorted(cfg.core_levels)
        lv_p = _weights(cfg.core_levels, lv_keys) if cfg.core_courses else None
        for i in range(cfg.core_courses):
            prefix = CORE_PREFIXES[i % len(CORE_PREFIXES)]
            level = int(lv_keys[rng.choice(len(lv_keys), p=lv_p)])
            c = self._new(prefix, level, self._hours(), "core")
            c.popularity = 1.0 / (i + 1) ** cfg.core_popularity_exponent
            self.core.append(c)

        n_schools = len(SCHOOL_PREFIXES)
        ug_w = _weights(cfg.school_weights_ug, list(SCHOOL_PREFIXES))
        gr_w = _weights(cfg.school_weights_gr, list(SCHOOL_PREFIXES))
        for s_i, (school, prefixes) in enumerate(SCHOOL_PREFIXES.items()):
            for lv in sorted(cfg.major_courses_per_level):
                level = int(lv)
                # catalogue size tracks the school's share of its career's students
                share = (ug_w if level <= 4 else gr_w)[s_i] * n_schools
                count = max(cfg.min_courses_per_pool, int(round(cfg.major_courses_per_level[lv] * share)))
                pool = []
                for j in range(count):
                    c = self._new(prefixes[j % len(prefixes)], level, self._hours(), "major")
                    c.popularity = float(rng.gamma(cfg.major_popularity_shape))
                    pool.append(c)
                self.major[(school, level)] = pool
            for level in (3, 4, 5, 6, 7, 8):
                # individual instruction: zero scheduled contact hours
                self.independent[(school, level)] = [
                    self._new(prefixes[j % len(prefixes)], level, 0, "independent")
                    for j in range(cfg.independent_courses_per_pool)
                ]

    def _hours(self) -> int:
        return self.hours_keys[self.rng.choice(len(self.hours_keys), p=self.hours_p)]

    def _new(self, prefix, level, hours, kind) -> _Course:
        for _ in range(200):
            code = f"{prefix}{level}{hours}{int(self.rng.integers(0, 100)):02d}"
            if code not in self.taken:
                self.taken.add(code)
                info = course_taxonomy(code, default_prefix_map(), strict=True)
                return _Course(code, info.school.value, level, hours, kind)
        raise InfeasibleError(f"course number space for {prefix} {level}xxx exhausted")

    def all_courses(self):
        yield from self.core
        for key in sorted(self.major):
            yield from self.major[key]
        for key in sorted(self.independent):
            yield from self.independent[key]


def _draw_size(rng, mixture) -> int:
    w = np.array([c[0] for c in mixture], dtype=float)
    i = rng.choice(len(mixture), p=w / w.sum())
    _, lo, hi = mixture[i]
    return int(rng.integers(lo, hi + 1))


def generate(cfg: SynthConfig) -> EnrollmentDataset:
    """Generate a dataset (including online sections) deterministically from ``cfg.seed``."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    catalog = _Catalog(cfg, rng)

    ug_schools = sorted(cfg.school_weights_ug)
    gr_schools = sorted(cfg.school_weights_gr)
    ug_p = _weights(cfg.school_weights_ug, ug_schools)
    gr_p = _weights(cfg.school_weights_gr, gr_schools)
    core_pop = np.array([c.popularity for c in catalog.core])
    core_pop = core_pop / core_pop.sum() if len(core_pop) else core_pop

    students: list[Student] = []
    choices: dict[str, list[_Course]] = {}
    width = max(5, len(str(sum(cfg.students.values()))))
    idx = 0
    for rank in RANKS:
        grad = rank in GRAD_RANKS
        career = Career.GRADUATE if grad else Career.UNDERGRADUATE
        schools, school_p = (gr_schools, gr_p) if grad else (ug_schools, ug_p)
        lv_keys = sorted(cfg.levels.get(rank, {}))
        if not lv_keys:
            raise InfeasibleError(f"no course levels configured for rank {rank}")
        lv_p = _weights(cfg.levels[rank], lv_keys)
        lo, hi = cfg.courses_per_student.get(rank, (1, 1))
        p_core = cfg.core_prob.get(rank, 0.0) if catalog.core else 0.0
        p_ind = cfg.independent_prob.get(rank, 0.0)
        p_cross = cfg.cross_school_prob.get("GR" if grad else "UG", 0.0)

        for _ in range(cfg.students.get(rank, 0)):
            sid = f"S{idx:0{width}d}"
            idx += 1
            school = schools[rng.choice(len(schools), p=school_p)]
            students.append(Student(sid, career, RANK_CODES[rank], School(school)))
            want = int(rng.integers(lo, hi + 1))
            picked: list[_Course] = []
            attempts = 0
            while len(picked) < want:
                attempts += 1
                if attempts > 50 * want:
                    raise InfeasibleError(f"cannot fill {want} distinct courses for a {rank} student in {school}")
                u = rng.random()
                if u < p_core:
                    course = catalog.core[rng.choice(len(catalog.core), p=core_pop)]
                elif u < p_core + p_ind:
                    level = max(int(lv_keys[rng.choice(len(lv_keys), p=lv_p)]), 3)
                    pool = catalog.independent[(school, level)]
                    course = pool[rng.choice(len(pool))]
                else:
                    home = school
                    if rng.random() < p_cross:
                        home = schools[rng.choice(len(schools), p=school_p)]
                    level = int(lv_keys[rng.choice(len(lv_keys), p=lv_p)])
                    if grad and cfg.graduate_undergrad_leak and rng.random() < cfg.graduate_undergrad_leak:
                        level = int(rng.choice([3, 4]))
                    pool = catalog.major.get((home, level), [])
                    if not pool:
                        continue
                    pop = np.array([c.popularity for c in pool])
                    course = pool[rng.choice(len(pool), p=pop / pop.sum())]
                if course not in picked:
                    picked.append(course)
            choices[sid] = picked

    demand: dict[str, list[str]] = {}
    for sid in sorted(choices):
        for course in choices[sid]:
            demand.setdefault(course.code, []).append(sid)

    sections: list[Section] = []
    pairs: list[tuple[str, str]] = []
    mixtures = {
        "core": cfg.section_size_core,
        "major": cfg.section_size_major,
        "independent": cfg.section_size_independent,
    }
    for course in catalog.all_courses():
        enrollees = demand.get(course.code)
        if not enrollees:
            continue
        order = rng.permutation(len(enrollees))
        pos = 0
        k = 0
        while pos < len(enrollees):
            cap = _draw_size(rng, mixtures[course.kind])
            secid = f"{course.code}.{k:03d}"
            delivery = Delivery.ONLINE if rng.random() < cfg.online_share else Delivery.IN_PERSON
            sections.append(Section(secid, course.code, School(course.school), course.level, course.hours, delivery))
            for j in order[pos:pos + cap]:
                pairs.append((enrollees[j], secid))
            pos += cap
            k += 1
    return EnrollmentDataset(students, sections, pairs)
