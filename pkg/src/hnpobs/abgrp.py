"""Finite abelian groups with exact integer arithmetic.

A :class:`FinAb` is ``Z/d1 + ... + Z/dr`` with ``d1 | d2 | ... | dr`` and
every ``di >= 2``; the trivial group has no invariants.  Elements are integer
tuples reduced modulo the invariants.  Subgroups (:class:`SubAb`) are kept
as generator lists and every order or membership question goes through the
Smith normal form of a stacked relation matrix.

Matrices are plain lists of lists of Python ints.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .permcore import Subgroup, derived_subgroup

IntMatrix = list[list[int]]


def identity_matrix(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: IntMatrix, B: IntMatrix, inner: int | None = None) -> IntMatrix:
    if inner is None:
        inner = len(B)
    ncols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(ncols)]
            for i in range(len(A))]


def determinant(A: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def _snf(M: Sequence[Sequence[int]], ncols: int | None = None):
    """Return (S, U, V, Vinv) with U*M*V = S."""
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    U = identity_matrix(m)
    V = identity_matrix(n)
    Vinv = identity_matrix(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return A, U, V, Vinv
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(A[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, U, V, Vinv


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None):
    """``(S, U, V)`` with ``U @ M @ V == S``, U and V unimodular.

    S is diagonal with non-negative entries, each dividing the next.
    """
    S, U, V, _ = _snf(M, ncols)
    return S, U, V


def left_kernel(A: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Basis of ``{z : z @ A == 0}`` over the integers (unimodular row reduction)."""
    E = [[int(x) for x in row] for row in A]
    m = len(E)
    U = identity_matrix(m)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if E[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(E[i][c]))
            E[r], E[p] = E[p], E[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if E[i][c]:
                    q = E[i][c] // E[r][c]
                    E[i] = [a - q * b for a, b in zip(E[i], E[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    done = done and E[i][c] == 0
            if done:
                break
        if E[r][c]:
            r += 1
    return [U[i] for i in range(r, m)]


class Presentation(NamedTuple):
    invariants: tuple[int, ...]
    to_new: IntMatrix     # n x r: raw row vector x maps to x @ to_new (mod invariants)
    from_new: IntMatrix   # r x n: new generator j is raw vector from_new[j]


def present(relations: Sequence[Sequence[int]], n: int) -> Presentation:
    """Normal form of the finite group ``Z^n / rowspan(relations)``."""
    S, _, V, Vinv = _snf(relations, n)
    diag = [S[i][i] if i < len(S) else 0 for i in range(n)]
    if any(d == 0 for d in diag):
        raise ValueError("relations do not present a finite group")
    kept = [i for i, d in enumerate(diag) if d > 1]
    return Presentation(tuple(diag[i] for i in kept),
                        [[row[i] for i in kept] for row in V],
                        [list(Vinv[i]) for i in kept])


@dataclass(frozen=True)
class FinAb:
    """``Z/d1 + ... + Z/dr`` in invariant-factor form.

    ``lifts`` optionally records, for each generator, a witness element of the
    group this one was built from; lifts never affect equality.
    """

    invariants: tuple[int, ...]
    lifts: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants)
        object.__setattr__(self, "invariants", inv)
        if any(d < 2 for d in inv) or any(b % a for a, b in zip(inv, inv[1:])):
            raise ValueError(f"not an invariant-factor list: {inv}")
        if self.lifts is not None and len(self.lifts) != len(inv):
            raise ValueError("one lift per generator required")

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.rank:
            raise ValueError(f"vector {tuple(v)} has wrong length for {self}")
        return tuple(int(x) % d for x, d in zip(v, self.invariants))

    def basis(self) -> list[tuple[int, ...]]:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def elements(self):
        return itertools.product(*(range(d) for d in self.invariants))

    def whole(self) -> "SubAb":
        return SubAb(self, self.basis())

    def trivial_subgroup(self) -> "SubAb":
        return SubAb(self, [])

    def __str__(self):
        return " x ".join(f"Z/{d}" for d in self.invariants) or "0"


def from_presentation(relations: Sequence[Sequence[int]], n: int):
    p = present(relations, n)
    return FinAb(p.invariants), p


@dataclass(frozen=True)
class AbHom:
    """Homomorphism given by the images of the domain generators."""

    domain: FinAb
    codomain: FinAb
    images: tuple[tuple[int, ...], ...]

    @property
    def matrix(self) -> IntMatrix:
        """Row i is the image of domain generator i."""
        return [list(v) for v in self.images]

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.codomain.rank
        for c, img in zip(v, self.images):
            if c:
                for j, x in enumerate(img):
                    out[j] += c * x
        return self.codomain.reduce(out)

    def compose(self, other: "AbHom") -> "AbHom":
        """``self o other``."""
        return AbHom(other.domain, self.codomain, tuple(self(img) for img in other.images))


class IllDefinedMap(ValueError):
    pass


def hom_from_images(dom: FinAb, cod: FinAb, images: Sequence[Sequence[int]]) -> AbHom:
    if len(images) != dom.rank:
        raise IllDefinedMap(f"{len(images)} images for {dom.rank} generators")
    imgs = tuple(cod.reduce(v) for v in images)
    for d, img in zip(dom.invariants, imgs):
        if any((d * x) % e for x, e in zip(img, cod.invariants)):
            raise IllDefinedMap(f"image {img} has order not dividing {d}")
    return AbHom(dom, cod, imgs)


@dataclass(frozen=True)
class SubAb:
    """Subgroup of ``ambient`` spanned by ``gens``."""

    ambient: FinAb
    gens: tuple[tuple[int, ...], ...]

    def __init__(self, ambient: FinAb, gens: Sequence[Sequence[int]]):
        object.__setattr__(self, "ambient", ambient)
        red = (ambient.reduce(g) for g in gens)
        object.__setattr__(self, "gens", tuple(g for g in red if any(g)))

    def _relations(self) -> IntMatrix:
        r = self.ambient.rank
        rel = [[d if i == j else 0 for j in range(r)] for i, d in enumerate(self.ambient.invariants)]
        return rel + [list(g) for g in self.gens]

    def quotient_presentation(self) -> Presentation:
        return present(self._relations(), self.ambient.rank)

    @property
    def order(self) -> int:
        return self.ambient.order // math.prod(self.quotient_presentation().invariants)

    @property
    def invariants(self) -> tuple[int, ...]:
        """Invariant factors of the subgroup itself."""
        s = len(self.gens)
        if not s:
            return ()
        rel = [list(g) for g in self.gens] + [
            [d if i == j else 0 for j in range(self.ambient.rank)]
            for i, d in enumerate(self.ambient.invariants)]
        ker = [row[:s] for row in left_kernel(rel, self.ambient.rank)]
        return present(ker, s).invariants

    def contains(self, v: Sequence[int]) -> bool:
        v = self.ambient.reduce(v)
        return not any(v) or SubAb(self.ambient, self.gens + (v,)).order == self.order

    def issubset(self, other: "SubAb") -> bool:
        _same_ambient(self, other)
        return all(other.contains(g) for g in self.gens)

    def same_as(self, other: "SubAb") -> bool:
        return self.issubset(other) and other.issubset(self)

    def canonical_gens(self) -> tuple[tuple[int, ...], ...]:
        """Echelon-form generators; equal subgroups give equal lists."""
        r = self.ambient.rank
        rows = self._relations()
        # row echelon form of the lattice, then reduce above the pivots
        E = [list(x) for x in rows]
        piv_rows = []
        top = 0
        for c in range(r):
            while True:
                nz = [i for i in range(top, len(E)) if E[i][c]]
                if not nz:
                    break
                p = min(nz, key=lambda i: abs(E[i][c]))
                E[top], E[p] = E[p], E[top]
                done = True
                for i in range(top + 1, len(E)):
                    if E[i][c]:
                        q = E[i][c] // E[top][c]
                        E[i] = [a - q * b for a, b in zip(E[i], E[top])]
                        done = done and E[i][c] == 0
                if done:
                    break
            if top < len(E) and E[top][c]:
                if E[top][c] < 0:
                    E[top] = [-a for a in E[top]]
                for i in range(top):
                    q = E[i][c] // E[top][c]
                    E[i] = [a - q * b for a, b in zip(E[i], E[top])]
                piv_rows.append(top)
                top += 1
        out = []
        for i in piv_rows:
            g = self.ambient.reduce(E[i])
            if any(g):
                out.append(g)
        return tuple(out)

    def __str__(self):
        return f"<{', '.join(map(str, self.canonical_gens()))}> <= {self.ambient}"


def _same_ambient(a: SubAb, b: SubAb):
    if a.ambient != b.ambient:
        raise ValueError("subgroups of different ambient groups")


def kernel(f: AbHom) -> SubAb:
    m, n = f.domain.rank, f.codomain.rank
    A = [list(img) for img in f.images] + [
        [d if i == j else 0 for j in range(n)] for i, d in enumerate(f.codomain.invariants)]
    ker = left_kernel(A, n)
    return SubAb(f.domain, [row[:m] for row in ker])


def image(f: AbHom) -> SubAb:
    return SubAb(f.codomain, f.images)


def pushforward(f: AbHom, S: SubAb) -> SubAb:
    if S.ambient != f.domain:
        raise ValueError("subgroup is not inside the domain")
    return SubAb(f.codomain, [f(g) for g in S.gens])


def join(A: SubAb, B: SubAb) -> SubAb:
    _same_ambient(A, B)
    return SubAb(A.ambient, A.gens + B.gens)


def quotient(G: FinAb, S: SubAb) -> tuple[FinAb, AbHom]:
    """``G/S`` and the projection onto it."""
    if S.ambient != G:
        raise ValueError("subgroup of a different group")
    p = S.quotient_presentation()
    Q = FinAb(p.invariants, lifts=tuple(G.reduce(v) for v in p.from_new))
    return Q, AbHom(G, Q, tuple(Q.reduce(row) for row in p.to_new))


def quotient_invariants(G: FinAb, S: SubAb) -> tuple[int, ...]:
    if S.ambient != G:
        raise ValueError("subgroup of a different group")
    return S.quotient_presentation().invariants


def subquotient_invariants(A: SubAb, B: SubAb) -> tuple[int, ...]:
    """Invariants of ``A/B`` for ``B <= A``."""
    _same_ambient(A, B)
    if not B.issubset(A):
        raise ValueError("B is not contained in A")
    _, proj = quotient(A.ambient, B)
    return pushforward(proj, A).invariants


def direct_sum(parts: Sequence[FinAb]) -> tuple[FinAb, list[AbHom]]:
    moduli = [d for P in parts for d in P.invariants]
    n = len(moduli)
    rel = [[d if i == j else 0 for j in range(n)] for i, d in enumerate(moduli)]
    p = present(rel, n)
    total = FinAb(p.invariants)
    inj, off = [], 0
    for P in parts:
        imgs = [total.reduce(p.to_new[off + j]) for j in range(P.rank)]
        inj.append(AbHom(P, total, tuple(imgs)))
        off += P.rank
    return total, inj


class Projection:
    """Map from member indices of a permutation subgroup to ``H^ab`` coordinates."""

    def __init__(self, subgroup: Subgroup, table: np.ndarray, fin: FinAb):
        self.subgroup = subgroup
        self.table = table  # |G| x rank, rows of non-members are zero
        self.fin = fin

    def __call__(self, idx: int) -> tuple[int, ...]:
        if not self.subgroup.mask[int(idx)]:
            raise ValueError(f"element {idx} is not in the subgroup")
        return tuple(int(x) for x in self.table[int(idx)])

    def many(self, idx) -> np.ndarray:
        return self.table[np.asarray(idx)]


class Abelianization(NamedTuple):
    group: FinAb
    projection: Projection


def abelianization(H: Subgroup) -> Abelianization:
    """``H/[H,H]`` with lifts in H and the projection from H."""
    G = H.parent
    key = ("ab", H.key)
    hit = G.memo.get(key)
    if hit is not None:
        return hit
    s = len(H.gens)
    if s == 0:
        fin = FinAb(())
        res = Abelianization(fin, Projection(H, np.zeros((G.order, 0), dtype=np.int64), fin))
        G.memo[key] = res
        return res
    D = derived_subgroup(H)
    members = H.members
    local = np.full(G.order, -1, dtype=np.int64)
    local[members] = np.arange(len(members))
    if D.gens:
        src = np.concatenate([np.arange(len(members))] * len(D.gens))
        dst = np.concatenate([local[G.mul(n, members)] for n in D.gens])
        graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)),
                           shape=(len(members), len(members)))
        _, lab = connected_components(graph, directed=False)
    else:
        lab = np.arange(len(members))
    # renumber cosets by their least member
    _, first, coset = np.unique(lab, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    coset = order[coset]
    reps = members[np.sort(first)]
    q = len(reps)
    gens = np.array(H.gens, dtype=np.intp)
    # coset of rep(c) * g_i
    step = coset[local[G.mul(reps[:, None], gens[None, :])]]
    vec: list[list[int] | None] = [None] * q
    vec[0] = [0] * s
    relations = []
    queue = [0]
    for c in queue:
        for i in range(s):
            nxt = int(step[c, i])
            v = list(vec[c])
            v[i] += 1
            if vec[nxt] is None:
                vec[nxt] = v
                queue.append(nxt)
            else:
                rel = [a - b for a, b in zip(v, vec[nxt])]
                if any(rel):
                    relations.append(rel)
    p = present(relations, s)
    fin_inv = p.invariants
    coords = np.zeros((q, len(fin_inv)), dtype=np.int64)
    for c in range(q):
        for j, d in enumerate(fin_inv):
            coords[c, j] = sum(vec[c][i] * p.to_new[i][j] for i in range(s)) % d
    table = np.zeros((G.order, len(fin_inv)), dtype=np.int64)
    table[members] = coords[coset]
    lifts = []
    for row in p.from_new:
        x = 0
        for i, e in enumerate(row):
            if e:
                x = int(G.mul(x, G.power(int(gens[i]), e)))
        lifts.append(x)
    fin = FinAb(fin_inv, lifts=tuple(lifts))
    res = Abelianization(fin, Projection(H, table, fin))
    G.memo[key] = res
    return res


def induced_hom(src: Abelianization, dst: Abelianization, conj: int = 0) -> AbHom:
    """``h [S,S] -> c^-1 h c [T,T]`` on abelianizations, ``c`` an element index.

    With ``conj == 0`` this is the inclusion-induced map.
    """
    S = src.projection.subgroup
    G = S.parent
    members = G.conj(S.members, conj) if conj else S.members
    if not dst.projection.subgroup.mask[members].all():
        raise ValueError("conjugated subgroup is not inside the target")
    lifts = np.array(src.group.lifts or (), dtype=np.intp)
    if len(lifts):
        moved = G.conj(lifts, conj) if conj else lifts
        imgs = [tuple(int(x) for x in row) for row in dst.projection.many(moved)]
    else:
        imgs = []
    return hom_from_images(src.group, dst.group, imgs)
