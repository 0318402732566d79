"""First obstruction to the Hasse norm principle (Drakokhrust-Platonov).

For ``H <= G`` (the Galois groups of L/K and L/k) everything lives inside
``H^ab = H/[H,H]``:

* ``Ker psi1`` -- kernel of the inclusion-induced map ``H^ab -> G^ab``;
* ``Dnr`` -- the contribution of the unramified places, the image of
  ``Phi^G(H) = <[h,x] : x in G, h in H, x^-1 h x in H>``;
* ``Dr(Gv)`` -- the contribution of one place with decomposition group Gv:
  ``phi1(Ker psi2)`` where ``psi2, phi1`` leave ``+_w H_w^ab`` for the
  double cosets ``H x Gv``, ``H_w = H & x Gv x^-1``.

``Obs1 = Ker psi1 / (Dnr + sum of Dr(Gv))``.  When the Schur multiplier of G
vanishes this is the whole obstruction and ``Ker psi1 / Dnr`` is
``H^1(k, Pic X)``; the caller has to assert that fact explicitly.
"""
from __future__ import annotations

import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import abgrp
from .abgrp import AbHom, FinAb, SubAb
from .permcore import (
    Group,
    Subgroup,
    _closure,
    are_conjugate,
    conjugate_into,
    conjugate_subgroup,
    double_coset_reps,
    normalizer,
    subgroup_from_indices,
    subgroup_from_mask,
)


class SchurAssertionMissing(ValueError):
    """Raised when H^1 is requested without asserting M(G) = 0."""


class NotASubgroup(ValueError):
    pass


def _check_sub(G: Group, *subs: Subgroup):
    for S in subs:
        if S.parent is not G:
            raise NotASubgroup("subgroup does not belong to the given group")


def first_obstruction_N(G: Group, H: Subgroup) -> SubAb:
    """``Ker(H^ab -> G^ab)``."""
    _check_sub(G, H)
    psi1 = abgrp.induced_hom(abgrp.abelianization(H), abgrp.abelianization(G.whole))
    return abgrp.kernel(psi1)


def phi_G_of_H(G: Group, H: Subgroup, chunk: int = 64) -> Subgroup:
    """Subgroup generated by ``[h, x]`` over all ``x in G``, ``h in H & xHx^-1``."""
    _check_sub(G, H)
    hit = G.memo.get(("phi", H.key))
    if hit is not None:
        return hit
    comms = np.zeros(G.order, dtype=bool)
    m = H.members
    for start in range(0, len(m), chunk):
        h = m[start:start + chunk, None]
        moved = G.conj(h, G.all[None, :])   # x^-1 h x
        ok = H.mask[moved]
        # [h, x] = h^-1 x^-1 h x
        c = G.mul(np.broadcast_to(G.inv[h], moved.shape)[ok], moved[ok])
        comms[c] = True
    comms[0] = False
    mask = _closure(G, np.flatnonzero(comms))
    res = H if mask.sum() == H.order else subgroup_from_mask(G, mask)
    G.memo[("phi", H.key)] = res
    return res


def first_obstruction_Dnr(G: Group, H: Subgroup) -> SubAb:
    """Image of ``Phi^G(H)`` in ``H^ab``."""
    ab = abgrp.abelianization(H)
    phi = phi_G_of_H(G, H)
    return SubAb(ab.group, [ab.projection(g) for g in phi.gens])


@dataclass(frozen=True)
class LocalDatum:
    """One place w above v: the double coset ``H x Gv``."""

    rep: int
    hw: Subgroup
    hw_ab: FinAb
    to_gv: AbHom   # h -> x^-1 h x, into Gv^ab
    to_h: AbHom    # inclusion, into H^ab


def _local_subgroups(G: Group, H: Subgroup, Gv: Subgroup):
    """Yield ``(x, H & x Gv x^-1)`` over double-coset representatives."""
    reps = np.array([x for x, _ in double_coset_reps(G, H, Gv)], dtype=np.intp)
    m = H.members
    cache: dict[bytes, Subgroup] = {}
    for lo in range(0, len(reps), 256):
        block = reps[lo:lo + 256]
        inside = Gv.mask[G.conj(m[None, :], block[:, None])]
        for x, row in zip(block, inside):
            sel = m[row]
            key = sel.tobytes()
            hw = cache.get(key)
            if hw is None:
                if len(sel) == 1:
                    hw = G.trivial
                elif len(sel) == H.order:
                    hw = H
                else:
                    mask = np.zeros(G.order, dtype=bool)
                    mask[sel] = True
                    hw = G.memo.get(("sub", key))
                    if hw is None:
                        hw = subgroup_from_mask(G, mask)
                        G.memo[("sub", key)] = hw
                cache[key] = hw
            yield int(x), hw


def local_decomposition(G: Group, H: Subgroup, Gv: Subgroup) -> list[LocalDatum]:
    _check_sub(G, H, Gv)
    ab_h = abgrp.abelianization(H)
    ab_v = abgrp.abelianization(Gv)
    out = []
    for x, hw in _local_subgroups(G, H, Gv):
        ab_w = abgrp.abelianization(hw)
        out.append(LocalDatum(x, hw, ab_w.group,
                              abgrp.induced_hom(ab_w, ab_v, conj=x),
                              abgrp.induced_hom(ab_w, ab_h)))
    return out


def first_obstruction_Dr(G: Group, H: Subgroup, Gv: Subgroup) -> SubAb:
    """``phi1(Ker psi2^v)`` as a subgroup of ``H^ab``.

    ``phi1(Ker psi2) = {a : (a, 0) in (phi1, psi2)(D)}``, and the image of D
    in ``H^ab + Gv^ab`` is spanned by the images of the generators of the
    summands, so only the distinct image pairs are kept.
    """
    _check_sub(G, H, Gv)
    ab_h = abgrp.abelianization(H)
    ab_v = abgrp.abelianization(Gv)
    pairs = set()
    seen_hw: dict[tuple, None] = {}
    for x, hw in _local_subgroups(G, H, Gv):
        if hw.order == 1:
            continue
        ab_w = abgrp.abelianization(hw)
        if not ab_w.group.rank:
            continue
        to_gv = abgrp.induced_hom(ab_w, ab_v, conj=x)
        key = (hw.key, to_gv.images)
        if key in seen_hw:
            continue
        seen_hw[key] = None
        to_h = abgrp.induced_hom(ab_w, ab_h)
        pairs.update(zip(to_h.images, to_gv.images))
    pairs = sorted(pairs)
    if not pairs:
        return ab_h.group.trivial_subgroup()
    b = ab_v.group.invariants
    rows = [list(v) for _, v in pairs] + [
        [d if i == j else 0 for j in range(len(b))] for i, d in enumerate(b)]
    ker = abgrp.left_kernel(rows, len(b))
    t = len(pairs)
    gens = []
    for c in ker:
        vec = [0] * ab_h.group.rank
        for ci, (a, _) in zip(c[:t], pairs):
            if ci:
                vec = [s + ci * y for s, y in zip(vec, a)]
        gens.append(vec)
    return SubAb(ab_h.group, gens)


def ngh_orbit_reps(G: Group, H: Subgroup, Gv: Subgroup) -> list[Subgroup]:
    """Conjugates of Gv up to conjugation by ``N_G(H)``.

    One conjugate ``Gv^x`` per double coset ``N_G(Gv) x N_G(H)``.
    """
    _check_sub(G, H, Gv)
    nh = _normalizer_cached(G, H)
    nv = _normalizer_cached(G, Gv)
    return [conjugate_subgroup(Gv, x) for x, _ in double_coset_reps(G, nv, nh)]


def _normalizer_cached(G: Group, S: Subgroup) -> Subgroup:
    key = ("norm", S.key)
    hit = G.memo.get(key)
    if hit is None:
        hit = G.memo[key] = normalizer(G, S)
    return hit


@dataclass
class OrbitResult:
    gv: Subgroup
    dr: SubAb
    full: bool   # Dr + Dnr == Ker psi1


@dataclass
class ClassVerdict:
    cid: int
    label: str
    gv: Subgroup
    orbit: list[OrbitResult]

    @property
    def verdict(self) -> bool:
        return any(o.full for o in self.orbit)

    @property
    def uniform(self) -> bool:
        return len({o.full for o in self.orbit}) == 1


@dataclass
class ObstructionReport:
    group: Group
    subgroup: Subgroup
    ker_psi1: SubAb
    dnr: SubAb
    unramified_obs: tuple[int, ...]      # Ker psi1 / Dnr
    h1_invariants: tuple[int, ...] | None  # set only under the M(G)=0 assertion
    per_class: list[ClassVerdict] = field(default_factory=list)
    minimal_true: list[int] = field(default_factory=list)

    def counts(self) -> tuple[int, int]:
        t = sum(c.verdict for c in self.per_class)
        return t, len(self.per_class) - t

    def verdict_of(self, cid: int) -> bool:
        return next(c.verdict for c in self.per_class if c.cid == cid)


# -- process-pool plumbing: workers inherit the group through fork ----------

_POOL_GROUP: Group | None = None


def _pool(jobs: int, G: Group):
    global _POOL_GROUP
    _POOL_GROUP = G
    return ProcessPoolExecutor(max_workers=jobs, mp_context=multiprocessing.get_context("fork"))


def _orbit_task(args):
    h_gens, v_gens = args
    G = _POOL_GROUP
    H = subgroup_from_indices(G, h_gens)
    Gv = subgroup_from_indices(G, v_gens)
    return _orbit_plain(G, H, Gv)


def _orbit_plain(G, H, Gv):
    out = []
    for rep in ngh_orbit_reps(G, H, Gv):
        dr = first_obstruction_Dr(G, H, rep)
        out.append((rep.gens, dr.canonical_gens()))
    return out


def _h1_task(h_gens):
    G = _POOL_GROUP
    H = subgroup_from_indices(G, h_gens)
    return _unramified_plain(G, H)


def _unramified_plain(G, H):
    ker = first_obstruction_N(G, H)
    dnr = first_obstruction_Dnr(G, H)
    return ker.canonical_gens(), dnr.canonical_gens()


def _map(fn, tasks, jobs: int, G: Group):
    if jobs <= 1 or len(tasks) <= 1:
        global _POOL_GROUP
        _POOL_GROUP = G
        return [fn(t) for t in tasks]
    with _pool(jobs, G) as ex:
        return list(ex.map(fn, tasks))


def unramified_obstructions(G: Group, subgroups: Sequence[Subgroup], jobs: int = 1):
    """``(Ker psi1, Dnr)`` for many subgroups, optionally in worker processes."""
    for H in subgroups:
        _check_sub(G, H)
    raw = _map(_h1_task, [H.gens for H in subgroups], jobs, G)
    out = []
    for H, (kg, dg) in zip(subgroups, raw):
        fin = abgrp.abelianization(H).group
        out.append((SubAb(fin, kg), SubAb(fin, dg)))
    return out


def _require_schur(schur_trivial):
    if not schur_trivial:
        raise SchurAssertionMissing(
            "Ker psi1/Dnr equals H^1(k, Pic X) only when the Schur multiplier M(G) "
            "vanishes; pass schur_trivial=<provenance of M(G)=0> to assert it")


def h1_flabby_invariants(G: Group, H: Subgroup, schur_trivial: str | None = None) -> tuple[int, ...]:
    """Invariants of ``Ker psi1 / Dnr`` under the assertion ``M(G) = 0``."""
    _require_schur(schur_trivial)
    _check_sub(G, H)
    ker = first_obstruction_N(G, H)
    return abgrp.subquotient_invariants(ker, first_obstruction_Dnr(G, H))


def h1_table(G: Group, subgroups: Sequence[Subgroup], schur_trivial: str | None = None,
             jobs: int = 1) -> list[tuple[int, ...]]:
    _require_schur(schur_trivial)
    return [abgrp.subquotient_invariants(k, d)
            for k, d in unramified_obstructions(G, subgroups, jobs)]


def classify_decomposition_groups(G: Group, H: Subgroup, classes: Sequence[Subgroup],
                                  class_ids: Sequence[int] | None = None,
                                  labels: Sequence[str] | None = None,
                                  schur_trivial: str | None = None,
                                  check_classes: bool = True,
                                  jobs: int = 1) -> ObstructionReport:
    """Decide, for every class of candidate decomposition groups, whether one
    place with that decomposition group kills the first obstruction."""
    _check_sub(G, H, *classes)
    ids = list(class_ids) if class_ids is not None else list(range(1, len(classes) + 1))
    names = list(labels) if labels is not None else [""] * len(classes)
    if check_classes:
        for i, A in enumerate(classes):
            for B in classes[:i]:
                if A.order == B.order and are_conjugate(G, A, B) is not None:
                    raise ValueError("decomposition-group classes are not pairwise non-conjugate")
    ker = first_obstruction_N(G, H)
    dnr = first_obstruction_Dnr(G, H)
    base = abgrp.subquotient_invariants(ker, dnr)
    raw = _map(_orbit_task, [(H.gens, C.gens) for C in classes], jobs, G)
    per = []
    fin = ker.ambient
    for cid, name, C, orbit in zip(ids, names, classes, raw):
        results = []
        for rep_gens, dr_gens in orbit:
            dr = SubAb(fin, dr_gens)
            full = abgrp.join(dr, dnr).order == ker.order
            results.append(OrbitResult(subgroup_from_indices(G, rep_gens), dr, full))
        per.append(ClassVerdict(cid, name, C, results))
    report = ObstructionReport(G, H, ker, dnr, base,
                               base if schur_trivial else None, per)
    report.minimal_true = minimal_true_classes(G, report)
    return report


def minimal_true_classes(G: Group, report: ObstructionReport) -> list[int]:
    """True classes with no smaller true class conjugate into them."""
    true = [c for c in report.per_class if c.verdict]
    out = []
    for c in true:
        below = any(d.gv.order < c.gv.order and conjugate_into(G, d.gv, c.gv) is not None
                    for d in true)
        if not below:
            out.append(c.cid)
    return sorted(out)


@dataclass
class ScenarioReport:
    obs_invariants: tuple[int, ...]
    hnp_holds: bool
    sha_invariants: tuple[int, ...]
    at_invariants: tuple[int, ...]
    h1_invariants: tuple[int, ...]
    tamagawa: Fraction
    strict: bool = False


def evaluate_scenario(G: Group, H: Subgroup, places: Sequence[Subgroup],
                      schur_trivial: str | None = None, strict: bool = False) -> ScenarioReport:
    """Obstruction when the given decomposition groups occur (plus unramified places).

    ``strict`` drops the unramified term from ``obs_invariants`` only; Sha,
    A(T) and the Tamagawa number always include it, since every cyclic
    subgroup occurs as an unramified decomposition group.
    """
    _require_schur(schur_trivial)
    _check_sub(G, H, *places)
    ker = first_obstruction_N(G, H)
    dnr = first_obstruction_Dnr(G, H)
    local = ker.ambient.trivial_subgroup()
    for P in places:
        local = abgrp.join(local, first_obstruction_Dr(G, H, P))
    full = abgrp.join(dnr, local)
    sha = abgrp.subquotient_invariants(ker, full)
    h1 = abgrp.subquotient_invariants(ker, dnr)
    at = abgrp.subquotient_invariants(full, dnr)
    obs = abgrp.subquotient_invariants(ker, local) if strict else sha
    size = 1
    for d in sha:
        size *= d
    return ScenarioReport(obs, not sha, sha, at, h1, Fraction(1, size), strict)
