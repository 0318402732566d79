import itertools
import math
import random

import numpy as np
import pytest
from conftest import CORPUS, all_subgroups, corpus_group
from hypothesis import given, settings
from hypothesis import strategies as st

from hnpobs import abgrp
from hnpobs.abgrp import (
    AbHom,
    FinAb,
    IllDefinedMap,
    SubAb,
    determinant,
    direct_sum,
    hom_from_images,
    join,
    kernel,
    left_kernel,
    matmul,
    present,
    pushforward,
    quotient,
    quotient_invariants,
    smith_normal_form,
    subquotient_invariants,
)
from hnpobs.permcore import derived_subgroup


# -- oracles ------------------------------------------------------------------

def invariants_from_counts(killed_by):
    """Invariant factors of a finite abelian group from n -> #{x : n x = 0}."""
    order = killed_by(0)
    primary = []
    for p in (q for q in range(2, order + 1) if order % q == 0 and all(q % r for r in range(2, q))):
        sizes = [1]
        k = 1
        while True:
            sizes.append(killed_by(p ** k) if k else 1)
            if sizes[-1] == sizes[-2]:
                break
            k += 1
        # ranks[k] = #cyclic p-factors of order >= p^(k+1)
        ranks = [round(math.log(sizes[i + 1] // sizes[i], p)) for i in range(len(sizes) - 2)]
        parts = []
        for i, r in enumerate(ranks):
            nxt = ranks[i + 1] if i + 1 < len(ranks) else 0
            parts += [p ** (i + 1)] * (r - nxt)
        primary.append(sorted(parts))
    width = max((len(x) for x in primary), default=0)
    padded = [[1] * (width - len(x)) + x for x in primary]
    return tuple(d for d in (math.prod(col) for col in zip(*padded)) if d > 1)


def brute_span(A: FinAb, gens):
    span = {A.zero()}
    frontier = list(span)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = A.reduce([a + b for a, b in zip(x, g)])
                if y not in span:
                    span.add(y)
                    new.append(y)
        frontier = new
    return span


def brute_subgroup_invariants(A, gens):
    span = brute_span(A, gens)

    def killed(n):
        if n == 0:
            return len(span)
        return sum(1 for x in span if not any(A.reduce([n * a for a in x])))
    return invariants_from_counts(killed)


def random_finab(r):
    k = r.randint(0, 3)
    inv = []
    for _ in range(k):
        base = inv[-1] if inv else 1
        inv.append(base * r.choice([2, 2, 3, 4, 5, 6]))
    return FinAb(tuple(inv))


def random_vecs(r, A, n):
    return [tuple(r.randrange(d) for d in A.invariants) for _ in range(n)]


# -- Smith normal form -------------------------------------------------------------

def check_snf(M, ncols):
    S, U, V = smith_normal_form(M, ncols)
    m = len(M)
    assert matmul(matmul(U, M), V) == S
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [S[i][i] for i in range(min(m, ncols))]
    for i in range(m):
        for j in range(ncols):
            if i != j:
                assert S[i][j] == 0
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0
    return diag


def test_snf_1000_random_matrices():
    r = random.Random(1)
    for _ in range(1000):
        m, n = r.randint(1, 8), r.randint(1, 8)
        M = [[r.randint(-20, 20) for _ in range(n)] for _ in range(m)]
        check_snf(M, n)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(
    st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=1, max_size=6)))
def test_snf_hypothesis(M):
    check_snf(M, len(M[0]))


def test_snf_small_examples():
    assert check_snf([[2, 4], [6, 8]], 2) == [2, 4]
    assert check_snf([[0, 0], [0, 0]], 2) == [0, 0]
    assert check_snf([[6]], 1) == [6]
    assert check_snf([[2, 0], [0, 3]], 2) == [1, 6]


def test_determinant():
    assert determinant([[1, 2], [3, 4]]) == -2
    assert determinant([[2, 0, 0], [0, 3, 0], [1, 1, 5]]) == 30
    assert determinant([[1, 2], [2, 4]]) == 0


def test_left_kernel():
    r = random.Random(7)
    for _ in range(200):
        m, n = r.randint(1, 6), r.randint(1, 5)
        A = [[r.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        K = left_kernel(A, n)
        for z in K:
            assert matmul([z], A) == [[0] * n]
        # rank + nullity
        S, _, _ = smith_normal_form(A, n)
        rank = sum(1 for i in range(min(m, n)) if S[i][i])
        assert len(K) == m - rank


def test_present_contract():
    r = random.Random(3)
    for _ in range(200):
        n = r.randint(1, 4)
        rel = [[r.randint(-9, 9) for _ in range(n)] for _ in range(r.randint(0, 3))]
        rel += [[6 if i == j else 0 for j in range(n)] for i in range(n)]
        p = present(rel, n)
        Q = FinAb(p.invariants)
        if not Q.rank:
            continue
        for row in rel:   # relations die
            assert not any(Q.reduce(matmul([row], p.to_new)[0]))
        for j, v in enumerate(p.from_new):   # new generator j round-trips
            assert Q.reduce(matmul([v], p.to_new)[0]) == Q.basis()[j]


def test_present_infinite_rejected():
    with pytest.raises(ValueError):
        present([[2, 0]], 2)


def test_finab_validation():
    with pytest.raises(ValueError):
        FinAb((4, 2))
    with pytest.raises(ValueError):
        FinAb((1,))
    assert FinAb(()).order == 1


# -- subgroups, kernels, quotients --------------------------------------------

def test_subab_against_brute_force():
    r = random.Random(11)
    for _ in range(150):
        A = random_finab(r)
        gens = random_vecs(r, A, r.randint(0, 3))
        S = SubAb(A, gens)
        span = brute_span(A, S.gens)
        assert S.order == len(span)
        assert S.invariants == brute_subgroup_invariants(A, S.gens)
        for v in random_vecs(r, A, 5):
            assert S.contains(v) == (A.reduce(v) in span)
        assert brute_span(A, S.canonical_gens()) == span


def test_canonical_gens_identify_subgroups():
    A = FinAb((2, 4))
    assert SubAb(A, [(1, 2)]).canonical_gens() == SubAb(A, [(1, 2), (0, 0)]).canonical_gens()
    assert SubAb(A, [(0, 1)]).canonical_gens() == SubAb(A, [(0, 3)]).canonical_gens()
    assert SubAb(A, [(1, 0), (0, 2)]).same_as(SubAb(A, [(1, 2), (1, 0)]))


def test_quotient_against_brute_force():
    r = random.Random(12)
    for _ in range(150):
        A = random_finab(r)
        S = SubAb(A, random_vecs(r, A, r.randint(0, 2)))
        Q, proj = quotient(A, S)
        assert Q.order * S.order == A.order
        assert quotient_invariants(A, S) == Q.invariants
        span = brute_span(A, S.gens)
        for x in span:
            assert not any(proj(x))
        # the projection is onto and cosets are fibres
        fibres = {}
        for x in A.elements():
            fibres.setdefault(proj(x), set()).add(x)
        assert len(fibres) == Q.order
        assert all(len(f) == S.order for f in fibres.values())
        for x, lift in enumerate(Q.lifts or ()):
            assert proj(lift) == Q.basis()[x]


def test_kernel_image_against_brute_force():
    r = random.Random(13)
    made = 0
    while made < 120:
        A, B = random_finab(r), random_finab(r)
        imgs = random_vecs(r, B, A.rank)
        try:
            f = hom_from_images(A, B, imgs)
        except IllDefinedMap:
            continue
        made += 1
        K = kernel(f)
        brute = {x for x in A.elements() if not any(f(x))}
        assert brute_span(A, K.gens) == brute
        assert K.order * abgrp.image(f).order == A.order


def test_hom_well_definedness():
    with pytest.raises(IllDefinedMap):
        hom_from_images(FinAb((2,)), FinAb((3,)), [(1,)])
    f = hom_from_images(FinAb((2,)), FinAb((4,)), [(2,)])
    assert f((1,)) == (2,)


def test_compose_and_pushforward():
    A, B, C = FinAb((12,)), FinAb((6,)), FinAb((3,))
    f = AbHom(A, B, ((1,),))
    g = AbHom(B, C, ((1,),))
    h = g.compose(f)
    assert h.domain == A and h.codomain == C and h((1,)) == (1,)
    assert pushforward(f, SubAb(A, [(6,)])).order == 1
    assert pushforward(f, SubAb(A, [(4,)])).order == 3


def test_join_and_subquotient():
    A = FinAb((2, 4))
    X, Y = SubAb(A, [(1, 0)]), SubAb(A, [(0, 2)])
    J = join(X, Y)
    assert J.order == 4 and J.invariants == (2, 2)
    assert subquotient_invariants(J, X) == (2,)
    assert subquotient_invariants(A.whole(), Y) == (2, 2)
    with pytest.raises(ValueError):
        subquotient_invariants(X, Y)


def test_direct_sum():
    total, inj = direct_sum([FinAb((2,)), FinAb((3,)), FinAb((2, 2))])
    assert total.invariants == (2, 2, 6)
    assert sum(kernel(i).order == 1 for i in inj) == 3
    images = [abgrp.image(i) for i in inj]
    assert join(join(images[0], images[1]), images[2]).order == total.order


# -- abelianization -------------------------------------------------------------

@pytest.mark.parametrize("name", list(CORPUS))
def test_abelianization_order_and_projection(name):
    G = corpus_group(name)
    for H in all_subgroups(G):
        ab, proj = abgrp.abelianization(H)
        D = derived_subgroup(H)
        assert ab.order * D.order == H.order
        m = H.members
        # projection is a homomorphism with kernel [H, H]
        table = proj.many(m)
        assert (D.mask[m] == ~table.any(axis=1)).all()
        if ab.rank:
            lhs = proj.many(G.mul(m[:, None], m[None, :]))
            rhs = (table[:, None, :] + table[None, :, :]) % np.array(ab.invariants)
            assert (lhs == rhs).all()
        for j, lift in enumerate(ab.lifts or ()):
            assert proj(lift) == ab.basis()[j]


def test_abelianization_of_m11_classes(fs):
    for c in fs.classes:
        assert abgrp.abelianization(c.subgroup).group.invariants == (c.transcript_nker or ())


def test_induced_hom_requires_containment():
    G = corpus_group("S4")
    subs = all_subgroups(G)
    A = next(S for S in subs if S.order == 3)
    B = next(S for S in subs if S.order == 4 and not A.issubset(S))
    with pytest.raises(ValueError):
        abgrp.induced_hom(abgrp.abelianization(A), abgrp.abelianization(B))


def test_induced_hom_with_conjugation():
    G = corpus_group("S4")
    for A, B in itertools.product(all_subgroups(G), repeat=2):
        for x in range(0, G.order, 5):
            inside = B.mask[G.conj(A.members, x)].all()
            if not inside:
                continue
            f = abgrp.induced_hom(abgrp.abelianization(A), abgrp.abelianization(B), conj=x)
            pa, pb = abgrp.abelianization(A).projection, abgrp.abelianization(B).projection
            for a in A.members:
                want = pb(int(G.conj(a, x)))
                assert f(pa(int(a))) == want
