"""Subgroup data for the Mathieu group M11.

The generator strings below are copied verbatim from a GAP session
(``MathieuGroup(11)`` and ``ConjugacyClassesSubgroups``), in GAP's class
order.  Class 39 is M11 itself.  Expected H^1 values are kept as
expectations only; :mod:`hnpobs.obstruction` recomputes them.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .permcore import (
    DEFAULT_CAP,
    Group,
    Subgroup,
    are_conjugate,
    fingerprint,
    group_from_generators,
    parse_permutation,
    subgroup_from_generators,
    sylow_p,
    write_generator_file,
)

M11_DEGREE = 11
M11_ORDER = 7920
# GAP: MathieuGroup(11)
M11_GENERATORS = ("(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)")

# GAP: List(M11H, Order)
PROPER_CLASS_ORDERS = (
    1, 2, 3, 4, 4, 5, 6, 6, 6, 8, 8, 8, 9, 10, 11, 12, 12, 16, 18, 18, 20, 24,
    24, 36, 36, 36, 48, 55, 60, 60, 72, 72, 72, 120, 144, 360, 660, 720)


class _Row(NamedTuple):
    cid: int
    label: str          # GAP StructureDescription
    name: str           # name used in the published tables
    order: int
    syl2: str
    h1: tuple | None    # expected H^1 invariants; None for M11 itself
    nker: tuple | None  # GAP FirstObstructionN(...).ker[1]
    dnr: tuple | None   # GAP FirstObstructionDnr(...).Dnr[1]
    gens: tuple


_ROWS = (
    _Row(1, "1", "{1}", 1, "1", (), (), (),
         ("()",)),
    _Row(2, "C2", "C2", 2, "C2", (2,), (2,), (),
         ("( 2, 8)( 3, 4)( 5, 6)(10,11)",)),
    _Row(3, "C3", "C3", 3, "1", (), (3,), (3,),
         ("( 2, 3,11)( 4, 8,10)( 5, 6, 7)",)),
    _Row(4, "C2 x C2", "V4", 4, "V4", (), (2, 2), (2, 2),
         ("( 1, 2)( 3, 7)( 4, 5)( 8,11)", "( 3,11)( 4, 5)( 6,10)( 7, 8)")),
    _Row(5, "C4", "C4", 4, "C4", (2,), (4,), (2,),
         ("( 2, 5, 3, 8)( 4,10, 6, 7)",)),
    _Row(6, "C5", "C5", 5, "1", (), (5,), (5,),
         ("( 1, 6, 4, 3, 5)( 2, 8,10, 7,11)",)),
    _Row(7, "S3", "S3^(1)", 6, "C2", (2,), (2,), (),
         ("( 1, 9)( 2, 3)( 4, 8)( 5, 6)", "( 2, 3,11)( 4, 8,10)( 5, 6, 7)")),
    _Row(8, "S3", "S3^(2)", 6, "C2", (2,), (2,), (),
         ("( 2, 8)( 3, 4)( 5, 6)(10,11)", "( 2, 3,11)( 4, 8,10)( 5, 6, 7)")),
    _Row(9, "C6", "C6", 6, "C2", (2,), (6,), (3,),
         ("( 1, 6, 9)( 2,11, 7,10, 4, 5)( 3, 8)",)),
    _Row(10, "Q8", "Q8", 8, "Q8", (), (2, 2), (2, 2),
         ("( 2, 4, 3, 6)( 5, 7, 8,10)", "( 2, 5, 3, 8)( 4,10, 6, 7)")),
    _Row(11, "C8", "C8", 8, "C8", (2,), (8,), (4,),
         ("( 1, 3,11, 6, 7,10, 4, 5)( 8, 9)",)),
    _Row(12, "D8", "D4", 8, "D8", (), (2, 2), (2, 2),
         ("( 1,10)( 5,11)( 6, 9)( 7, 8)", "( 1, 4)( 3,10)( 5, 8)( 6, 9)")),
    _Row(13, "C3 x C3", "C3 x C3", 9, "1", (), (3, 3), (3, 3),
         ("( 2, 3,11)( 4, 8,10)( 5, 6, 7)", "( 2, 7, 8)( 3, 5,10)( 4,11, 6)")),
    _Row(14, "D10", "D5", 10, "C2", (2,), (2,), (),
         ("( 1, 6)( 2,10)( 4, 5)( 7,11)", "( 2, 8)( 3, 4)( 5, 6)(10,11)")),
    _Row(15, "C11", "C11", 11, "1", (), (11,), (11,),
         ("( 1, 8, 7, 9, 3, 4, 5,10, 6, 2,11)",)),
    _Row(16, "A4", "A4", 12, "V4", (), (3,), (3,),
         ("( 2, 8)( 3, 4)( 5, 6)(10,11)", "( 1, 6, 8)( 2, 7, 5)( 4,11,10)")),
    _Row(17, "D12", "D6", 12, "V4", (), (2, 2), (2, 2),
         ("( 1, 6)( 2,10)( 4, 5)( 7,11)", "( 1, 9)( 2, 4)( 3, 8)(10,11)")),
    _Row(18, "QD16", "QD8", 16, "QD16", (), (2, 2), (2, 2),
         ("( 1, 2)( 3, 7)( 4, 5)( 8,11)", "( 3,10,11, 6)( 4, 8, 5, 7)")),
    _Row(19, "(C3 x C3) : C2", "(C3 x C3) : C2", 18, "C2", (2,), (2,), (),
         ("( 2,11)( 4, 7)( 5,10)( 6, 8)", "( 3,11)( 4, 5)( 6,10)( 7, 8)", "( 2, 8)( 3, 4)( 5, 6)(10,11)")),
    _Row(20, "C3 x S3", "C3 x S3", 18, "C2", (2,), (6,), (3,),
         ("( 1, 9)( 2, 3)( 4, 8)( 5, 6)", "( 1, 9)( 2, 5, 4)( 3, 7, 8,11, 6,10)")),
    _Row(21, "C5 : C4", "C5 : C4", 20, "C4", (2,), (4,), (2,),
         ("( 1, 6)( 2,10)( 4, 5)( 7,11)", "( 2,10, 8,11)( 3, 6, 4, 5)")),
    _Row(22, "SL(2,3)", "SL(2,3)", 24, "Q8", (), (3,), (3,),
         ("( 1, 6, 4, 2, 5,10)( 3,11, 9)( 7, 8)", "( 1, 8, 6, 2, 7, 5)( 3,11, 9)( 4,10)")),
    _Row(23, "S4", "S4", 24, "D8", (), (2,), (2,),
         ("( 2, 4, 3, 6)( 5, 7, 8,10)", "( 1, 8)( 2, 4)( 5,11)( 7,10)")),
    _Row(24, "(C3 x C3) : C4", "((C3 x C3) : C4)^(1)", 36, "C4", (2,), (4,), (2,),
         ("( 3,11)( 4, 5)( 6,10)( 7, 8)", "( 1, 6, 5, 3)( 7,11,10, 8)")),
    _Row(25, "(C3 x C3) : C4", "((C3 x C3) : C4)^(2)", 36, "C4", (2,), (4,), (2,),
         ("( 2,11)( 4, 7)( 5,10)( 6, 8)", "( 2,10, 8,11)( 3, 6, 4, 5)")),
    _Row(26, "S3 x S3", "S3 x S3", 36, "V4", (), (2, 2), (2, 2),
         ("( 1, 9)( 2,11, 3)( 4, 7, 8, 5,10, 6)", "( 1, 9)( 2, 5, 4)( 3, 7, 8,11, 6,10)")),
    _Row(27, "GL(2,3)", "GL(2,3)", 48, "QD16", (), (2,), (2,),
         ("( 1, 9)( 2,10,11, 6, 7, 4, 5, 3)", "( 1, 8)( 2, 4)( 5,11)( 7,10)")),
    _Row(28, "C11 : C5", "C11 : C5", 55, "1", (), (5,), (5,),
         ("( 1, 2, 8, 7, 9)( 3,11,10, 6, 4)", "( 1, 4, 2, 5,11)( 3, 6,10, 7, 9)")),
    _Row(29, "A5", "A5^(1)", 60, "V4", (), (), (),
         ("( 1, 6)( 2,10)( 4, 5)( 7,11)", "( 1, 7, 6, 3, 9)( 2,10, 8, 4, 5)")),
    _Row(30, "A5", "A5^(2)", 60, "V4", (), (), (),
         ("( 2,11)( 4, 7)( 5,10)( 6, 8)", "( 1, 6)( 2,10)( 4, 5)( 7,11)", "( 2, 8)( 3, 4)( 5, 6)(10,11)")),
    _Row(31, "(C3 x C3) : Q8", "(C3 x C3) : Q8", 72, "Q8", (), (2, 2), (2, 2),
         ("( 2,11)( 4, 7)( 5,10)( 6, 8)", "( 2, 5, 8, 6)( 3,10, 4,11)", "( 2,10, 8,11)( 3, 6, 4, 5)")),
    _Row(32, "(S3 x S3) : C2", "(S3 x S3) : C2", 72, "D8", (), (2, 2), (2, 2),
         ("( 1, 4)( 2, 9)( 3, 8)( 6, 7)", "( 1, 4, 6,11,10, 8)( 2, 9)( 3, 7, 5)")),
    _Row(33, "(C3 x C3) : C8", "(C3 x C3) : C8", 72, "C8", (2,), (8,), (4,),
         ("( 2,11)( 4, 7)( 5,10)( 6, 8)", "( 1, 9)( 2, 5, 3,11, 8, 6, 4,10)")),
    _Row(34, "S5", "S5", 120, "D8", (), (2,), (2,),
         ("( 1, 6)( 2,10)( 4, 5)( 7,11)", "( 1, 7, 6, 9,11, 3)( 2, 5)( 4, 8,10)")),
    _Row(35, "(C3 x C3) : QD16", "(C3 x C3) : QD8", 144, "QD16", (), (2, 2), (2, 2),
         ("( 1, 9)( 2,11, 3)( 4, 7, 8, 5,10, 6)", "( 2, 6, 8, 5)( 3,11, 4,10)")),
    _Row(36, "A6", "A6", 360, "D8", (), (), (),
         ("( 1, 7, 8, 5)( 3,10, 9,11)", "( 1, 2)( 3, 6)( 5, 9)( 8,10)")),
    _Row(37, "PSL(2,11)", "PSL(2,11)", 660, "V4", (), (), (),
         ("( 1, 2)( 4, 9)( 6, 7)(10,11)", "( 1, 8)( 3, 9)( 5, 7)(10,11)", "( 2,11)( 4, 7)( 5,10)( 6, 8)")),
    _Row(38, "A6 . C2", "M10", 720, "QD16", (), (2,), (2,),
         ("( 1, 7, 8, 5)( 3,10, 9,11)", "( 1, 6, 2, 3)( 5, 8, 9,10)")),
    _Row(39, "M11", "M11", 7920, "QD16", None, None, None,
         ("( 1, 9)( 2, 3)( 4, 8)( 5, 6)", "( 1,10, 2,11)( 4, 7, 9, 6)")),
)

# the published tables use index-based names for these types
INDEX_NAMES = {
    "C2 x C2": "V4",
    "D8": "D4",
    "D10": "D5",
    "D12": "D6",
    "QD16": "QD8",
    "(C3 x C3) : QD16": "(C3 x C3) : QD8",
    "A6 . C2": "M10",
}

# Sylow 2-subgroup column: fingerprint label -> table text
SYL2_NAMES = {"1": "1", "C2": "C2", "C4": "C4", "C8": "C8", "C2 x C2": "V4",
              "Q8": "Q8", "D8": "D8", "QD16": "QD16"}


@dataclass(frozen=True)
class FixtureClass:
    cid: int
    label: str
    name: str
    subgroup: Subgroup
    expected_order: int
    expected_syl2: str
    expected_h1: tuple | None
    transcript_nker: tuple | None
    transcript_dnr: tuple | None
    generator_text: tuple[str, ...]

    @property
    def index(self) -> int:
        return self.subgroup.parent.order // self.subgroup.order


@dataclass(frozen=True)
class FixtureSet:
    group: Group
    classes: tuple[FixtureClass, ...]      # all 39, M11 last
    provenance: str = ("GAP 4 session: MathieuGroup(11); "
                       "ConjugacyClassesSubgroups2(M11) representatives")

    @property
    def proper(self) -> tuple[FixtureClass, ...]:
        return self.classes[:-1]

    def by_id(self, cid: int) -> FixtureClass:
        return self.classes[cid - 1]

    def lookup(self, key: str | int) -> FixtureClass:
        """Find a class by id, GAP label, or table name.

        Ambiguous labels (two classes of S3, A5, (C3 x C3) : C4) need a
        suffix, e.g. ``S3^(2)``; a bare ambiguous label is an error.
        """
        if isinstance(key, int) or str(key).strip().isdigit():
            cid = int(key)
            if not 1 <= cid <= len(self.classes):
                raise KeyError(f"class id {cid} outside 1..{len(self.classes)}")
            return self.by_id(cid)
        want = _norm(str(key))
        hits = [c for c in self.classes if want in (_norm(c.name), _norm(c.label))]
        if not hits:
            hits = [c for c in self.classes if _norm(INDEX_NAMES.get(c.label, "")) == want]
        if len(hits) != 1:
            if not hits:
                raise KeyError(f"no fixture class named {key!r}")
            raise KeyError(f"{key!r} is ambiguous: classes {[c.cid for c in hits]}")
        return hits[0]


def _norm(s: str) -> str:
    s = "".join(s.split()).lower()
    return s.replace("{1}", "1").replace("^", "")


@lru_cache(maxsize=None)
def load_m11(cap: int = DEFAULT_CAP) -> Group:
    gens = [parse_permutation(g, M11_DEGREE) for g in M11_GENERATORS]
    return group_from_generators(gens, cap=cap)


@lru_cache(maxsize=None)
def load_subgroup_table(cap: int = DEFAULT_CAP) -> FixtureSet:
    G = load_m11(cap)
    classes = []
    for row in _ROWS:
        perms = [parse_permutation(g, M11_DEGREE) for g in row.gens]
        H = subgroup_from_generators(G, perms)
        classes.append(FixtureClass(row.cid, row.label, row.name, H, row.order, row.syl2,
                                    row.h1, row.nker, row.dnr, row.gens))
    fs = FixtureSet(G, tuple(classes))
    # cheap checks every load; the full pass is verify_fixtures
    bad = [c.cid for c in fs.classes if c.subgroup.order != c.expected_order]
    if bad or G.order != M11_ORDER:
        raise FixtureError(f"embedded fixture orders do not match for classes {bad}")
    return fs


class FixtureError(RuntimeError):
    pass


@dataclass
class VerificationReport:
    checks: list[tuple[str, bool, str]]

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def summary(self) -> str:
        n = sum(ok for _, ok, _ in self.checks)
        return f"{n}/{len(self.checks)} ok"


def verify_fixtures(fs: FixtureSet, strict: bool = True) -> VerificationReport:
    """Re-check every embedded fact; one check per proper class.

    With ``strict`` a failure raises :class:`FixtureError` naming the class.
    """
    G = fs.group
    checks = []
    orders = tuple(c.subgroup.order for c in fs.proper)
    if orders != PROPER_CLASS_ORDERS:
        raise FixtureError(f"class orders {orders} differ from the recorded list")
    for c in fs.proper:
        problems = []
        H = c.subgroup
        if H.order != c.expected_order:
            problems.append(f"order {H.order} != {c.expected_order}")
        if G.order % H.order:
            problems.append("order does not divide |G|")
        if c.index != M11_ORDER // c.expected_order:
            problems.append(f"index {c.index}")
        fp = fingerprint(H)
        if fp.label != c.label:
            problems.append(f"structure {fp.label!r} != {c.label!r}")
        syl = SYL2_NAMES.get(fingerprint(sylow_p(G, 2, H)).label, "?")
        if syl != c.expected_syl2:
            problems.append(f"Syl2 {syl} != {c.expected_syl2}")
        for d in fs.proper:
            if d.cid < c.cid and d.expected_order == c.expected_order:
                if are_conjugate(G, d.subgroup, H) is not None:
                    problems.append(f"conjugate to class {d.cid}")
        checks.append((f"class {c.cid} ({c.name})", not problems, "; ".join(problems)))
        if problems and strict:
            raise FixtureError(f"class {c.cid}: {'; '.join(problems)}")
    return VerificationReport(checks)


def export_fixtures(fs: FixtureSet) -> dict[str, str]:
    """Generator files for M11 and each class, keyed by file name."""
    out = {"m11.gens": write_generator_file(
        list(fs.group.generators), M11_DEGREE, "M11 = MathieuGroup(11)")}
    for c in fs.classes:
        out[f"class{c.cid:02d}.gens"] = write_generator_file(
            [parse_permutation(g, M11_DEGREE) for g in c.generator_text], M11_DEGREE,
            f"class {c.cid}: {c.label}")
    return out
