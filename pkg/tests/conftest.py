import numpy as np
import pytest

from hnpobs.fixtures import load_subgroup_table
from hnpobs.permcore import (
    conjugate_subgroup,
    are_conjugate,
    group_from_generators,
    parse_permutation,
    subgroup_from_indices,
)

# small groups for brute-force oracles; name -> (degree, generators)
CORPUS = {
    "S3": (3, ["(1,2,3)", "(1,2)"]),
    "C2xC2": (4, ["(1,2)(3,4)", "(1,3)(2,4)"]),
    "D8": (4, ["(1,2,3,4)", "(1,3)"]),
    "Q8": (8, ["(1,2,4,7)(3,6,8,5)", "(1,3,4,8)(2,5,7,6)"]),
    "D10": (5, ["(1,2,3,4,5)", "(2,5)(3,4)"]),
    "A4": (4, ["(1,2,3)", "(2,3,4)"]),
    "D12": (6, ["(1,2,3,4,5,6)", "(2,6)(3,5)"]),
    "C3xS3": (6, ["(1,2,3)", "(4,5,6)", "(4,5)"]),
    "S4": (4, ["(1,2,3,4)", "(1,2)"]),
    "A5": (5, ["(1,2,3,4,5)", "(1,2,3)"]),
}
CORPUS_ORDERS = {"S3": 6, "C2xC2": 4, "D8": 8, "Q8": 8, "D10": 10, "A4": 12,
                 "D12": 12, "C3xS3": 18, "S4": 24, "A5": 60}


def perm(text, degree):
    return parse_permutation(text, degree)


def corpus_group(name):
    deg, gens = CORPUS[name]
    return group_from_generators([perm(g, deg) for g in gens])


def all_subgroups(G):
    """Every subgroup, as joins of cyclic subgroups iterated to a fixpoint."""
    cyc = {}
    for g in range(G.order):
        C = subgroup_from_indices(G, [g])
        cyc.setdefault(C.key, C)
    subs = dict(cyc)
    frontier = list(subs.values())
    cyclics = list(cyc.values())
    while frontier:
        new = []
        for A in frontier:
            for C in cyclics:
                if C.issubset(A):
                    continue
                J = subgroup_from_indices(G, list(A.gens) + list(C.gens))
                if J.key not in subs:
                    subs[J.key] = J
                    new.append(J)
        frontier = new
    return sorted(subs.values(), key=lambda S: (S.order, S.key))


def class_reps(G, subs):
    reps = []
    for S in subs:
        if not any(R.order == S.order and are_conjugate(G, R, S) is not None for R in reps):
            reps.append(S)
    return reps


def cyclic_subgroups(G):
    out = {}
    for g in range(G.order):
        C = subgroup_from_indices(G, [g])
        out.setdefault(C.key, C)
    return list(out.values())


def h_orbit_reps(G, H, subs):
    """One subgroup from each orbit of H acting on ``subs`` by conjugation."""
    seen, reps = set(), []
    for C in subs:
        if C.key in seen:
            continue
        orbit = {C.key}
        frontier = [C]
        while frontier:
            nxt = []
            for D in frontier:
                for h in H.gens:
                    E = conjugate_subgroup(D, h)
                    if E.key not in orbit:
                        orbit.add(E.key)
                        nxt.append(E)
            frontier = nxt
        seen |= orbit
        reps.append(C)
    return reps


@pytest.fixture(scope="session")
def fs():
    return load_subgroup_table()


@pytest.fixture(scope="session")
def m11(fs):
    return fs.group


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
