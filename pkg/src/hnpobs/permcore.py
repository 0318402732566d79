"""Permutation groups small enough to enumerate completely.

A :class:`Group` stores every element as a row of an integer array and
answers products by vectorised composition plus a hash lookup.  Subgroups
are boolean masks over the parent's element indices, which makes
intersections, normalizers and conjugacy tests plain array sweeps.

Products compose left to right: ``(p * q)(i) == q(p(i))``.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

DEFAULT_CAP = 10_000


class PermutationParseError(ValueError):
    pass


class GroupTooLarge(RuntimeError):
    pass


class NotInGroup(ValueError):
    pass


class Permutation:
    """A bijection of ``{1..degree}``.  Stored 0-based, printed 1-based."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Left-to-right product of 1-based cycles."""
        perm = list(range(degree))
        for cyc in cycles:
            step = list(range(degree))
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                step[a - 1] = b - 1
            perm = [step[p] for p in perm]
        return cls(perm)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        return self.images[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Permutation([other.images[i] for i in self.images])

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def __pow__(self, n: int) -> "Permutation":
        base = self if n >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(n)):
            result = result * base
        return result

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i + 1)
                i = self.images[i]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation('{self}', degree={self.degree})"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: int) -> Permutation:
    """Parse cycle notation such as ``"(3,7,11,8)(4,10,5,6)"``."""
    s = "".join(text.split())
    if not s:
        raise PermutationParseError("empty permutation text")
    pos = 0
    cycles = []
    for m in _CYCLE_RE.finditer(s):
        if m.start() != pos:
            raise PermutationParseError(f"unexpected text {s[pos:m.start()]!r} in {text!r}")
        pos = m.end()
        body = m.group(1)
        if body == "":
            continue
        try:
            pts = [int(tok) for tok in body.split(",")]
        except ValueError:
            raise PermutationParseError(f"bad cycle ({body}) in {text!r}") from None
        if len(set(pts)) != len(pts):
            raise PermutationParseError(f"repeated point in cycle ({body})")
        for p in pts:
            if not 1 <= p <= degree:
                raise PermutationParseError(f"point {p} outside 1..{degree}")
        cycles.append(pts)
    if pos != len(s):
        raise PermutationParseError(f"unexpected text {s[pos:]!r} in {text!r}")
    return Permutation.from_cycles(cycles, degree)


def read_generator_file(text: str) -> list[Permutation]:
    """Parse the one-permutation-per-line generator format.

    ``#`` starts a comment; an optional ``degree N`` line must come first,
    otherwise the degree is the largest point mentioned.
    """
    lines = []
    degree = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("degree"):
            if degree is not None or lines:
                raise PermutationParseError("'degree' line must come first")
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise PermutationParseError(f"bad degree line {raw!r}")
            degree = int(parts[1])
            continue
        lines.append(line)
    if degree is None:
        points = [int(p) for line in lines for p in re.findall(r"\d+", line)]
        degree = max(points, default=1)
    return [parse_permutation(line, degree) for line in lines]


def write_generator_file(perms: Sequence[Permutation], degree: int, comment: str = "") -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"degree {degree}")
    out.extend(str(p) for p in perms)
    return "\n".join(out) + "\n"


class Group:
    """A fully enumerated permutation group.

    Element 0 is the identity; the remaining indices follow a breadth-first
    search over the generators in the order given.
    """

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None,
                 cap: int = DEFAULT_CAP):
        if degree is None:
            if not generators:
                raise ValueError("degree required for an empty generator list")
            degree = generators[0].degree
        for g in generators:
            if g.degree != degree:
                raise ValueError("generators have unequal degrees")
        self.degree = degree
        self.cap = cap
        self.generators = tuple(generators)
        self.memo: dict = {}  # derived per-subgroup data (abelianizations)
        rng = np.random.default_rng(0x5EED)
        self._weights = rng.integers(1, 2**63, size=degree, dtype=np.uint64) | np.uint64(1)
        self._enumerate()

    def _hash(self, rows: np.ndarray) -> np.ndarray:
        return (rows.astype(np.uint64) * self._weights).sum(axis=1, dtype=np.uint64)

    def _enumerate(self):
        deg = self.degree
        ident = np.arange(deg, dtype=np.int16)[None, :]
        gens = np.array([g.images for g in self.generators], dtype=np.int16).reshape(-1, deg)
        chunks = [ident]
        seen = {int(self._hash(ident)[0]): 0}
        frontier = ident
        count = 1
        while len(frontier) and len(gens):
            # row k*ngens + j is frontier[k] * gens[j]
            prod = gens[:, frontier].transpose(1, 0, 2).reshape(-1, deg)
            codes = self._hash(prod)
            fresh = []
            for pos, c in enumerate(codes.tolist()):
                if c not in seen:
                    seen[c] = count
                    count += 1
                    fresh.append(pos)
            if count > self.cap:
                raise GroupTooLarge(f"group order exceeds cap {self.cap}")
            frontier = prod[fresh]
            chunks.append(frontier)
        self.perms = np.ascontiguousarray(np.concatenate(chunks))
        self.perms.flags.writeable = False
        codes = self._hash(self.perms)
        self._order_by_code = np.argsort(codes, kind="stable")
        self._sorted_codes = codes[self._order_by_code]
        if len(np.unique(codes)) != len(codes):  # pragma: no cover - astronomically unlikely
            raise RuntimeError("hash collision between group elements")
        inv = np.argsort(self.perms, axis=1).astype(np.int16)
        self.inv = self._lookup(inv)
        self.inv.flags.writeable = False
        self.all = np.arange(len(self.perms))

    def _lookup(self, rows: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self._sorted_codes, self._hash(rows))
        return self._order_by_code[pos]

    @property
    def order(self) -> int:
        return len(self.perms)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<Group degree={self.degree} order={self.order}>"

    def mul(self, a, b) -> np.ndarray:
        """Vectorised product of index arrays (broadcasting)."""
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        shape = a.shape
        pa = self.perms[a.ravel()]
        pb = self.perms[b.ravel()]
        comp = np.take_along_axis(pb, pa.astype(np.intp), axis=1)
        return self._lookup(comp).reshape(shape)

    def conj(self, a, g) -> np.ndarray:
        """``g^-1 a g`` on index arrays."""
        g = np.asarray(g)
        return self.mul(self.mul(self.inv[g], a), g)

    def element(self, i: int) -> Permutation:
        return Permutation(self.perms[i].tolist())

    def index_of(self, perm: Permutation) -> int | None:
        if perm.degree != self.degree:
            return None
        row = np.array([perm.images], dtype=np.int16)
        pos = int(np.searchsorted(self._sorted_codes, self._hash(row))[0])
        if pos >= self.order:
            return None
        idx = int(self._order_by_code[pos])
        return idx if tuple(self.perms[idx].tolist()) == perm.images else None

    def require_index(self, perm: Permutation) -> int:
        idx = self.index_of(perm)
        if idx is None:
            raise NotInGroup(f"{perm} is not an element of the group")
        return idx

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        orders[0] = 1
        cur = self.all.copy()
        k = 1
        while (orders == 0).any():
            cur = self.mul(cur, self.all)
            k += 1
            orders[(cur == 0) & (orders == 0)] = k
        orders.flags.writeable = False
        return orders

    @cached_property
    def whole(self) -> "Subgroup":
        gens = tuple(self.require_index(g) for g in self.generators)
        mask = np.ones(self.order, dtype=bool)
        return Subgroup._make(self, mask, gens)

    @cached_property
    def trivial(self) -> "Subgroup":
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        return Subgroup._make(self, mask, ())

    def power(self, i: int, n: int) -> int:
        n %= int(self.element_orders[i])
        r = 0
        for _ in range(n):
            r = int(self.mul(r, i))
        return r


def group_from_generators(gens: Sequence[Permutation], cap: int = DEFAULT_CAP,
                          degree: int | None = None) -> Group:
    return Group(gens, degree=degree, cap=cap)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """Members of a subgroup as a mask over the parent's element indices."""

    parent: Group
    mask: np.ndarray = field(repr=False)
    gens: tuple[int, ...]

    @classmethod
    def _make(cls, parent: Group, mask: np.ndarray, gens: Sequence[int]) -> "Subgroup":
        mask = np.asarray(mask, dtype=bool)
        mask.flags.writeable = False
        return cls(parent, mask, tuple(int(g) for g in gens))

    @cached_property
    def members(self) -> np.ndarray:
        m = np.flatnonzero(self.mask)
        m.flags.writeable = False
        return m

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self):
        return self.order

    @cached_property
    def key(self) -> bytes:
        return self.members.tobytes()

    def __contains__(self, i) -> bool:
        return bool(self.mask[int(i)])

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.key == self.key)

    def __hash__(self):
        return hash(self.key)

    def issubset(self, other: "Subgroup") -> bool:
        _same_parent(self, other)
        return bool(other.mask[self.members].all())

    def gen_perms(self) -> list[Permutation]:
        return [self.parent.element(g) for g in self.gens]

    def is_abelian(self) -> bool:
        G = self.parent
        g = np.array(self.gens, dtype=np.intp)
        if len(g) < 2:
            return True
        return bool((G.mul(g[:, None], g[None, :]) == G.mul(g[None, :], g[:, None])).all())

    def __repr__(self):
        return f"<Subgroup order={self.order} gens={[str(p) for p in self.gen_perms()]}>"


def _same_parent(a: Subgroup, b: Subgroup):
    if a.parent is not b.parent:
        raise ValueError("subgroups have different parent groups")


def _closure(G: Group, gens: Sequence[int], start: np.ndarray | None = None) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool) if start is None else start.copy()
    mask[0] = True
    frontier = np.flatnonzero(mask)
    gens = np.asarray(gens, dtype=np.intp)
    if len(gens) == 0:
        return mask
    while len(frontier):
        prod = np.unique(G.mul(frontier[:, None], gens[None, :]).ravel())
        frontier = prod[~mask[prod]]
        mask[frontier] = True
    return mask


def subgroup_from_indices(G: Group, gens: Sequence[int]) -> Subgroup:
    gens = [int(g) for g in gens if int(g) != 0]
    return Subgroup._make(G, _closure(G, gens), gens)


def subgroup_from_generators(G: Group, gens: Sequence[Permutation]) -> Subgroup:
    return subgroup_from_indices(G, [G.require_index(g) for g in gens])


def subgroup_from_mask(G: Group, mask: np.ndarray) -> Subgroup:
    """Wrap a mask already known to be a subgroup, choosing generators greedily."""
    mask = np.asarray(mask, dtype=bool)
    cur = np.zeros(G.order, dtype=bool)
    cur[0] = True
    gens = []
    members = np.flatnonzero(mask)
    total = len(members)
    # try high-order elements first: fewer generators, cheaper closures
    orders = G.element_orders[members]
    for i in members[np.lexsort((members, -orders))]:
        if cur.sum() == total:
            break
        if not cur[i]:
            gens.append(int(i))
            cur = _closure(G, gens, cur)
    if not np.array_equal(cur, mask):
        raise ValueError("mask is not closed under multiplication")
    return Subgroup._make(G, mask, gens)


def conjugate_subgroup(H: Subgroup, g: int) -> Subgroup:
    """``H^g = {g^-1 h g}``."""
    G = H.parent
    g = int(g)
    if not 0 <= g < G.order:
        raise NotInGroup(f"element index {g} not in parent")
    mask = np.zeros(G.order, dtype=bool)
    mask[G.conj(H.members, g)] = True
    gens = [int(x) for x in G.conj(np.array(H.gens, dtype=np.intp), g)] if H.gens else []
    return Subgroup._make(G, mask, gens)


def intersect(A: Subgroup, B: Subgroup) -> Subgroup:
    _same_parent(A, B)
    mask = A.mask & B.mask
    if mask.sum() == A.order:
        return A
    if mask.sum() == B.order:
        return B
    return subgroup_from_mask(A.parent, mask)


def _conjugating_mask(G: Group, A: Subgroup, B: Subgroup) -> np.ndarray:
    """Boolean over G: which g satisfy A^g <= B."""
    ok = np.ones(G.order, dtype=bool)
    for s in A.gens:
        ok &= B.mask[G.conj(s, G.all)]
    return ok


def normalizer(G: Group, H: Subgroup) -> Subgroup:
    if H.parent is not G:
        raise ValueError("subgroup of a different group")
    return subgroup_from_mask(G, _conjugating_mask(G, H, H))


def are_conjugate(G: Group, A: Subgroup, B: Subgroup) -> int | None:
    """An element ``g`` with ``A^g == B``, or ``None``."""
    _same_parent(A, B)
    if A.order != B.order:
        return None
    if _order_histogram(A) != _order_histogram(B):
        return None
    hits = np.flatnonzero(_conjugating_mask(G, A, B))
    return int(hits[0]) if len(hits) else None


def conjugate_into(G: Group, A: Subgroup, B: Subgroup) -> int | None:
    """An element ``g`` with ``A^g <= B``, or ``None``."""
    _same_parent(A, B)
    if B.order % A.order:
        return None
    hits = np.flatnonzero(_conjugating_mask(G, A, B))
    return int(hits[0]) if len(hits) else None


def commutator(G: Group, a, b) -> np.ndarray:
    """``[a, b] = a^-1 b^-1 a b``."""
    return G.mul(G.mul(G.inv[a], G.inv[b]), G.mul(a, b))


def derived_subgroup(H: Subgroup) -> Subgroup:
    """Normal closure in H of the commutators of its generators."""
    G = H.parent
    gens = np.array(H.gens, dtype=np.intp)
    if len(gens) < 2:
        return G.trivial
    comms = np.unique(commutator(G, gens[:, None], gens[None, :]).ravel())
    comms = [int(c) for c in comms if c != 0]
    mask = _closure(G, comms)
    ngens = list(comms)
    while True:
        extra = np.unique(G.conj(np.array(ngens, dtype=np.intp)[:, None], gens[None, :]).ravel())
        extra = extra[~mask[extra]]
        if not len(extra):
            break
        ngens.append(int(extra[0]))
        mask = _closure(G, ngens, mask)
    if mask.sum() == H.order:
        return H
    return subgroup_from_mask(G, mask)


def derived_subgroup_exhaustive(H: Subgroup) -> Subgroup:
    """Reference version: closure of every commutator of H's elements."""
    G = H.parent
    m = H.members
    comms = np.unique(commutator(G, m[:, None], m[None, :]).ravel())
    return subgroup_from_mask(G, _closure(G, comms[comms != 0]))


def double_coset_reps(G: Group, H: Subgroup, K: Subgroup) -> list[tuple[int, int]]:
    """Double cosets ``H x K`` as ``(least element index, size)``, in index order."""
    labels = _double_coset_labels(G, H, K)
    n, first, sizes = np.unique(labels, return_index=True, return_counts=True)
    order = np.argsort(first)
    return [(int(first[i]), int(sizes[i])) for i in order]


def _double_coset_labels(G: Group, H: Subgroup, K: Subgroup) -> np.ndarray:
    src, dst = [], []
    for h in H.gens:
        src.append(G.all)
        dst.append(G.mul(h, G.all))
    for k in K.gens:
        src.append(G.all)
        dst.append(G.mul(G.all, k))
    if not src:
        return G.all.copy()
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(G.order, G.order))
    _, labels = connected_components(graph, directed=False)
    return labels


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def sylow_p(G: Group, p: int, within: Subgroup | None = None) -> Subgroup:
    """A Sylow p-subgroup of ``within`` (default: all of G).

    Grows a p-subgroup P by the least-index p-element of N(P) outside P until
    it reaches the full p-part of the order.
    """
    H = G.whole if within is None else within
    n = H.order
    target = 1
    while n % p == 0:
        n //= p
        target *= p
    P = G.trivial
    ords = G.element_orders
    is_p_elt = np.zeros(G.order, dtype=bool)
    pe = ords.copy()
    while True:
        done = pe % p == 0
        if not done.any():
            break
        pe = np.where(done, pe // p, pe)
    is_p_elt = (pe == 1) & (ords > 1)
    while P.order < target:
        N = _conjugating_mask(G, P, P) & H.mask
        cand = np.flatnonzero(N & is_p_elt & ~P.mask)
        P = subgroup_from_indices(G, list(P.gens) + [int(cand[0])])
    return P


def _order_histogram(H: Subgroup) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(Counter(H.parent.element_orders[H.members].tolist()).items()))


@dataclass(frozen=True)
class Fingerprint:
    order: int
    abelian: bool
    exponent: int
    element_order_histogram: tuple[tuple[int, int], ...]
    derived_length: int  # -1 when the derived series stalls above the identity
    center_order: int
    label: str


# (order, element-order histogram) -> structure label, for the non-abelian
# isomorphism types among the subgroups of M11.
_NONABELIAN_LABELS = {
    (6, ((1, 1), (2, 3), (3, 2))): "S3",
    (8, ((1, 1), (2, 1), (4, 6))): "Q8",
    (8, ((1, 1), (2, 5), (4, 2))): "D8",
    (10, ((1, 1), (2, 5), (5, 4))): "D10",
    (12, ((1, 1), (2, 3), (3, 8))): "A4",
    (12, ((1, 1), (2, 7), (3, 2), (6, 2))): "D12",
    (16, ((1, 1), (2, 5), (4, 6), (8, 4))): "QD16",
    (18, ((1, 1), (2, 9), (3, 8))): "(C3 x C3) : C2",
    (18, ((1, 1), (2, 3), (3, 8), (6, 6))): "C3 x S3",
    (20, ((1, 1), (2, 5), (4, 10), (5, 4))): "C5 : C4",
    (24, ((1, 1), (2, 1), (3, 8), (4, 6), (6, 8))): "SL(2,3)",
    (24, ((1, 1), (2, 9), (3, 8), (4, 6))): "S4",
    (36, ((1, 1), (2, 9), (3, 8), (4, 18))): "(C3 x C3) : C4",
    (36, ((1, 1), (2, 15), (3, 8), (6, 12))): "S3 x S3",
    (48, ((1, 1), (2, 13), (3, 8), (4, 6), (6, 8), (8, 12))): "GL(2,3)",
    (55, ((1, 1), (5, 44), (11, 10))): "C11 : C5",
    (60, ((1, 1), (2, 15), (3, 20), (5, 24))): "A5",
    (72, ((1, 1), (2, 9), (3, 8), (4, 54))): "(C3 x C3) : Q8",
    (72, ((1, 1), (2, 21), (3, 8), (4, 18), (6, 24))): "(S3 x S3) : C2",
    (72, ((1, 1), (2, 9), (3, 8), (4, 18), (8, 36))): "(C3 x C3) : C8",
    (120, ((1, 1), (2, 25), (3, 20), (4, 30), (5, 24), (6, 20))): "S5",
    (144, ((1, 1), (2, 21), (3, 8), (4, 54), (6, 24), (8, 36))): "(C3 x C3) : QD16",
    (360, ((1, 1), (2, 45), (3, 80), (4, 90), (5, 144))): "A6",
    (660, ((1, 1), (2, 55), (3, 110), (5, 264), (6, 110), (11, 120))): "PSL(2,11)",
    (720, ((1, 1), (2, 45), (3, 80), (4, 270), (5, 144), (8, 180))): "A6 . C2",
    (7920, ((1, 1), (2, 165), (3, 440), (4, 990), (5, 1584), (6, 1320),
            (8, 1980), (11, 1440))): "M11",
}
_LABELLED_ORDERS = frozenset(
    [1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 16, 18, 20, 24, 36, 48, 55, 60, 72,
     120, 144, 360, 660, 720, 7920])


def _abelian_label(hist: tuple[tuple[int, int], ...], order: int) -> str:
    # an abelian group is determined by how many elements have each order
    counts = dict(hist)
    invariants = []
    for p in _prime_factors(order):
        # number of elements killed by p^k, for k = 1, 2, ...
        killed = [sum(c for o, c in counts.items() if (p ** k) % o == 0 and _is_power(o, p))
                  for k in range(0, 40)]
        ranks = []  # ranks[k] = number of cyclic factors of order > p^k
        for k in range(len(killed) - 1):
            if killed[k + 1] == killed[k]:
                break
            ranks.append(round(math.log(killed[k + 1] // killed[k], p)))
        parts = []
        for k, r in enumerate(ranks):
            nxt = ranks[k + 1] if k + 1 < len(ranks) else 0
            parts.extend([p ** (k + 1)] * (r - nxt))
        invariants.append(sorted(parts, reverse=True))
    # combine primary parts into invariant factors, largest first
    width = max((len(x) for x in invariants), default=0)
    factors = []
    for i in range(width):
        factors.append(math.prod(x[i] for x in invariants if i < len(x)))
    if not factors:
        return "1"
    return " x ".join(f"C{d}" for d in factors)


def _is_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def fingerprint(H: Subgroup) -> Fingerprint:
    G = H.parent
    hist = _order_histogram(H)
    abelian = H.is_abelian()
    exponent = math.lcm(*(o for o, _ in hist))
    length = 0
    cur = H
    while cur.order > 1:
        nxt = derived_subgroup(cur)
        if nxt.order == cur.order:
            length = -1
            break
        cur = nxt
        length += 1
    gens = np.array(H.gens, dtype=np.intp)
    m = H.members
    if len(gens):
        central = (G.mul(m[:, None], gens[None, :]) == G.mul(gens[None, :], m[:, None])).all(axis=1)
        center = int(central.sum())
    else:
        center = 1
    if H.order not in _LABELLED_ORDERS:
        label = f"order-{H.order}-unrecognized"
    elif abelian:
        label = _abelian_label(hist, H.order)
    else:
        label = _NONABELIAN_LABELS.get((H.order, hist), f"order-{H.order}-unrecognized")
    return Fingerprint(H.order, abelian, exponent, hist, length, center, label)
