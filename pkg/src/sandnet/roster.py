"""Student rosters: CSV ingestion, synthetic generation, and the friend
approximation network (FAN).

A roster row carries uid, semester, group, grade, gender, major, year, and
an optional mean received intergrade. Two students are approximately
friends when they sit in the same class section (semester) and either share
a project group or share both major and college year.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Sequence

from .errors import RosterError
from .graphs import Graph
from .rng import SplitMix64, derive_seed

GENDERS = ("M", "F", "O")  # O = other/unknown
LETTERS = ("A", "B", "C", "D")  # D stands for D-or-below

ROSTER_HEADER = ("uid", "semester", "group", "grade", "gender", "major", "year", "intergrade")

DEFAULT_MAJORS = ("CS", "ENGR", "PW", "MGT", "BIO")
DEFAULT_YEARS = (2, 3, 4)

_GROUP_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789"
_MEMBER_ALPHABET = "123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class StudentRecord:
    uid: str
    semester: str
    group: str
    grade: float
    gender: str
    major: str
    year: int
    intergrade: float | None = None


def _check_record(rec: StudentRecord, where: str) -> None:
    if not rec.uid:
        raise RosterError(f"{where}: empty uid")
    if not rec.group or rec.uid[0] != rec.group:
        raise RosterError(
            f"{where}: uid {rec.uid!r} does not start with its group id {rec.group!r}"
        )
    if not rec.semester:
        raise RosterError(f"{where}: empty semester")
    if not 0.0 <= rec.grade <= 100.0:
        raise RosterError(f"{where}: grade {rec.grade} outside [0, 100]")
    if rec.gender not in GENDERS:
        raise RosterError(f"{where}: gender {rec.gender!r} not one of {GENDERS}")
    if not rec.major:
        raise RosterError(f"{where}: empty major")
    if not 1 <= rec.year <= 6:
        raise RosterError(f"{where}: year {rec.year} outside 1..6")
    if rec.intergrade is not None and not 0.0 <= rec.intergrade <= 100.0:
        raise RosterError(f"{where}: intergrade {rec.intergrade} outside [0, 100]")


class Roster:
    """Ordered student records with a uid -> contiguous node id index."""

    __slots__ = ("_index", "records")

    def __init__(self, records: Iterable[StudentRecord], rows: Sequence[int] | None = None):
        records = tuple(records)
        if not records:
            raise RosterError("roster has no records")
        index: dict[str, int] = {}
        group_semester: dict[str, str] = {}
        for pos, rec in enumerate(records):
            where = f"row {rows[pos]}" if rows is not None else f"record {pos}"
            _check_record(rec, where)
            if rec.uid in index:
                raise RosterError(f"{where}: duplicate uid {rec.uid!r}")
            index[rec.uid] = pos
            prior = group_semester.setdefault(rec.group, rec.semester)
            if prior != rec.semester:
                raise RosterError(
                    f"{where}: group {rec.group!r} spans semesters {prior!r} and {rec.semester!r}"
                )
        self.records = records
        self._index = index

    def index_of(self, uid: str) -> int:
        return self._index[uid]

    @property
    def uids(self) -> tuple[str, ...]:
        return tuple(rec.uid for rec in self.records)

    @property
    def semesters(self) -> tuple[str, ...]:
        """Distinct semesters in first-seen order."""
        seen: dict[str, None] = {}
        for rec in self.records:
            seen.setdefault(rec.semester, None)
        return tuple(seen)

    @property
    def groups(self) -> tuple[str, ...]:
        """Distinct groups in first-seen order."""
        seen: dict[str, None] = {}
        for rec in self.records:
            seen.setdefault(rec.group, None)
        return tuple(seen)

    def subset_semester(self, semester: str) -> "Roster":
        picked = [rec for rec in self.records if rec.semester == semester]
        if not picked:
            raise RosterError(f"no records for semester {semester!r}")
        return Roster(picked)

    def grades(self) -> list[float]:
        return [rec.grade for rec in self.records]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[StudentRecord]:
        return iter(self.records)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Roster):
            return NotImplemented
        return self.records == other.records

    def __repr__(self) -> str:
        return f"Roster({len(self.records)} records, {len(self.groups)} groups)"


def parse_roster(text: str) -> Roster:
    """Parse roster CSV with the exact header uid,semester,group,grade,gender,
    major,year,intergrade. '#' comment lines and blank lines are skipped;
    every error names the offending physical line number."""
    header_seen = False
    records: list[StudentRecord] = []
    rows: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        try:
            fields = next(csv.reader([raw]))
        except csv.Error as exc:
            raise RosterError(f"row {lineno}: malformed CSV ({exc})") from None
        fields = [f.strip() for f in fields]
        if not header_seen:
            if tuple(f.lower() for f in fields) != ROSTER_HEADER:
                raise RosterError(
                    f"row {lineno}: header must be {','.join(ROSTER_HEADER)!r}, got {raw!r}"
                )
            header_seen = True
            continue
        if len(fields) != len(ROSTER_HEADER):
            raise RosterError(
                f"row {lineno}: expected {len(ROSTER_HEADER)} fields, got {len(fields)}"
            )
        uid, semester, group, grade_s, gender, major, year_s, inter_s = fields
        try:
            grade = float(grade_s)
        except ValueError:
            raise RosterError(f"row {lineno}: grade {grade_s!r} is not a number") from None
        try:
            year = int(year_s)
        except ValueError:
            raise RosterError(f"row {lineno}: year {year_s!r} is not an integer") from None
        if inter_s == "":
            intergrade = None
        else:
            try:
                intergrade = float(inter_s)
            except ValueError:
                raise RosterError(
                    f"row {lineno}: intergrade {inter_s!r} is not a number"
                ) from None
        records.append(
            StudentRecord(uid, semester, group, grade, gender.upper(), major, year, intergrade)
        )
        rows.append(lineno)
    if not header_seen:
        raise RosterError("roster text has no header row")
    return Roster(records, rows)


def _fmt_number(x: float) -> str:
    """Shortest exact decimal: integers drop the trailing .0."""
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def emit_roster(roster: Roster, header_comment: str | None = None) -> str:
    """Roster CSV text; parse_roster(emit_roster(r)) == r."""
    out = io.StringIO()
    if header_comment is not None:
        out.write(f"# {header_comment}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(ROSTER_HEADER)
    for rec in roster.records:
        writer.writerow(
            [
                rec.uid,
                rec.semester,
                rec.group,
                _fmt_number(rec.grade),
                rec.gender,
                rec.major,
                str(rec.year),
                "" if rec.intergrade is None else _fmt_number(rec.intergrade),
            ]
        )
    return out.getvalue()


def semester_labels(count: int) -> list[str]:
    """Opaque semester labels: F2012, S2013, F2013, ..."""
    labels = []
    year, fall = 2012, True
    for _ in range(count):
        labels.append(f"{'F' if fall else 'S'}{year}")
        if fall:
            year += 1
        fall = not fall
    return labels


# Target letter-class mix for synthetic grades; largest-remainder rounding
# guarantees at least one A, B, and C once the roster has 12+ students.
_LETTER_WEIGHTS = (("A", 0.30), ("B", 0.40), ("C", 0.22), ("D", 0.08))
_LETTER_RANGES = {"A": (90, 98), "B": (80, 89), "C": (70, 79), "D": (58, 69)}


def _letter_pool(n: int) -> list[str]:
    counts = {letter: int(w * n) for letter, w in _LETTER_WEIGHTS}
    remainders = sorted(
        _LETTER_WEIGHTS, key=lambda lw: (lw[1] * n) - int(lw[1] * n), reverse=True
    )
    short = n - sum(counts.values())
    for letter, _ in remainders[:short]:
        counts[letter] += 1
    pool = []
    for letter, _ in _LETTER_WEIGHTS:
        pool.extend(letter * counts[letter])
    return pool


def synthetic_roster(
    students: int,
    groups: int,
    semesters: int,
    seed: int,
    majors: Sequence[str] = DEFAULT_MAJORS,
    years: Sequence[int] = DEFAULT_YEARS,
) -> Roster:
    """Deterministic stand-in roster for the unpublished classroom data.

    Students are split over `groups` near-equal project groups, groups over
    `semesters` class sections. Majors and years are dealt round-robin over
    a shuffled (major, year) grid within each semester, which keeps the FAN
    near-regular: every node gets its in-group edges plus at most a couple
    of cross-group ones. Grades follow a three-band letter mix so A/B/C all
    occur from 12 students up; intergrades track grades with small noise.
    """
    if students < 1:
        raise RosterError(f"students must be >= 1, got {students}")
    if not 1 <= groups <= students:
        raise RosterError(f"groups must be in 1..{students}, got {groups}")
    if not 1 <= semesters <= groups:
        raise RosterError(f"semesters must be in 1..{groups}, got {semesters}")
    if groups > len(_GROUP_ALPHABET):
        raise RosterError(f"at most {len(_GROUP_ALPHABET)} groups supported, got {groups}")
    if not majors:
        raise RosterError("majors pool is empty")
    if not years or any(not 1 <= y <= 6 for y in years):
        raise RosterError(f"years must be a nonempty subset of 1..6, got {years!r}")

    rng = SplitMix64(derive_seed(seed, students, groups, semesters))

    base, extra = divmod(students, groups)
    group_sizes = [base + 1 if gi < extra else base for gi in range(groups)]
    if min(group_sizes) < 1:
        raise RosterError("more groups than students")
    sem_names = semester_labels(semesters)
    gbase, gextra = divmod(groups, semesters)
    group_semester = []
    for si in range(semesters):
        group_semester.extend([si] * (gbase + 1 if si < gextra else gbase))

    max_size = max(group_sizes)
    if max_size > len(_MEMBER_ALPHABET):
        raise RosterError(f"group size {max_size} exceeds uid alphabet")

    letters = _letter_pool(students)
    rng.shuffle(letters)

    # Per-semester shuffled (major, year) deal keeps cell occupancy low.
    cells = [(m, y) for m in majors for y in years]
    deal: dict[int, list[tuple[str, int]]] = {}
    for si in range(semesters):
        order = list(cells)
        rng.shuffle(order)
        deal[si] = order
    cursor = {si: 0 for si in range(semesters)}

    records = []
    student = 0
    for gi in range(groups):
        si = group_semester[gi]
        gid = _GROUP_ALPHABET[gi]
        for member in range(group_sizes[gi]):
            major, year = deal[si][cursor[si] % len(deal[si])]
            cursor[si] += 1
            r = rng.randint(40)
            gender = "M" if r < 19 else ("F" if r < 38 else "O")
            letter = letters[student]
            lo, hi = _LETTER_RANGES[letter]
            grade = float(lo + rng.randint(hi - lo + 1))
            intergrade = float(min(100, max(0, int(grade) + rng.randint(13) - 6)))
            records.append(
                StudentRecord(
                    uid=f"{gid}{_MEMBER_ALPHABET[member]}",
                    semester=sem_names[si],
                    group=gid,
                    grade=grade,
                    gender=gender,
                    major=major,
                    year=year,
                    intergrade=intergrade,
                )
            )
            student += 1
    return Roster(records)


def build_fan(roster: Roster) -> Graph:
    """Friend approximation network: nodes are roster records in order;
    an edge joins i != j iff same semester and (same group, or same major
    and same year)."""
    recs = roster.records
    n = len(recs)
    edges = []
    for i in range(n):
        ri = recs[i]
        for j in range(i + 1, n):
            rj = recs[j]
            if ri.semester != rj.semester:
                continue
            if ri.group == rj.group or (ri.major == rj.major and ri.year == rj.year):
                edges.append((i, j))
    return Graph(n, edges, labels=roster.uids)


def letter_grade(grade: float, bands: tuple[float, float, float] = (90.0, 80.0, 70.0)) -> str:
    """Letter class for a numeric grade: A/B/C at the given cutoffs (default
    90/80/70), 'D' for everything below the C band."""
    if not 0.0 <= grade <= 100.0:
        raise RosterError(f"grade {grade} outside [0, 100]")
    a, b, c = bands
    if not a > b > c:
        raise RosterError(f"bands must be strictly decreasing, got {bands}")
    if grade >= a:
        return "A"
    if grade >= b:
        return "B"
    if grade >= c:
        return "C"
    return "D"


def with_grades(roster: Roster, grades: Sequence[float]) -> Roster:
    """Copy of the roster with grades replaced record-by-record (fixture
    helper for correlation tests and demos)."""
    if len(grades) != len(roster):
        raise RosterError(f"{len(grades)} grades for {len(roster)} records")
    return Roster(replace(rec, grade=float(g)) for rec, g in zip(roster.records, grades))
