import random

import pytest

from rfcert import perm as P
from rfcert import words as W
from rfcert.findex import (FiniteQuotient, SubgroupFI, intersect, is_subgroup_of, kernel_contained,
                           normal_core, phi_invariant, phi_stable_closure, phi_stable_core,
                           regular_form, same_subgroup, subgroup_from_gens, todd_coxeter)
from rfcert.groups import FgAbelianGroup, FreeGroup, GroupError, Homomorphism

import oracles

SEED = 20240601


def _random_perm(rng, n):
    p = list(range(n))
    rng.shuffle(p)
    return tuple(p)


def _random_action(rng, ngens, lo=1, hi=4):
    n = rng.randint(lo, hi)
    return tuple(_random_perm(rng, n) for _ in range(ngens))


def _random_endo(rng, F, maxlen=3):
    out = []
    for _ in range(F.ngens):
        w = W.word((rng.randrange(F.ngens), rng.choice((-1, 1))) for _ in range(rng.randint(0, maxlen)))
        out.append(F.normal_form(w))
    return Homomorphism(F, F, out)


def test_todd_coxeter_free_index():
    F = FreeGroup(2)
    T = subgroup_from_gens(F, [W.gen(0, 2), W.gen(1), W.mul(W.gen(0), W.gen(1), W.gen(0, -1))])
    assert T.index() == 2


def test_todd_coxeter_dihedral():
    # <a, b | a^4, b^2, (ab)^2> has order 8
    rels = [W.gen(0, 4), W.gen(1, 2), W.mul(W.gen(0), W.gen(1), W.gen(0), W.gen(1))]
    assert todd_coxeter(2, rels, []).index() == 8
    assert todd_coxeter(2, rels, [W.gen(1)]).index() == 4


def test_todd_coxeter_stabilizer_membership():
    rels = [W.gen(0, 3), W.gen(1, 2), W.mul(W.gen(0), W.gen(1), W.gen(0), W.gen(1))]
    F = FreeGroup(2)
    T = todd_coxeter(2, rels, [W.gen(1)])
    S = SubgroupFI(F, T.perms(), "stabilizer")
    assert S.contains_word(W.gen(1))
    assert not S.contains_word(W.gen(0))


def test_todd_coxeter_budget():
    with pytest.raises(Exception):
        todd_coxeter(2, [], [], max_cosets=50)


def test_intersection_and_inclusion_match_oracle():
    rng = random.Random(SEED)
    F = FreeGroup(2)
    for _ in range(80):
        a = _random_action(rng, 2)
        b = _random_action(rng, 2)
        Sa, Sb = SubgroupFI(F, a), SubgroupFI(F, b)
        assert kernel_contained(Sa, Sb) == oracles.kernel_le(a, b)
        assert same_subgroup(Sa, Sb) == oracles.same_kernel(a, b)
        assert intersect(Sa, Sb).index() == oracles.joint_order(a, b)


def test_stabilizer_forms():
    F = FreeGroup(2)
    S = SubgroupFI(F, [(1, 0, 2), (0, 2, 1)], "stabilizer")
    assert S.index() == 3
    core = normal_core(S)
    assert core.kind == "kernel" and core.index() == 6
    R = regular_form(core)
    assert R.kind == "stabilizer" and same_subgroup(R, core)
    assert is_subgroup_of(core, S)
    assert not is_subgroup_of(S, core)


def test_bad_images_rejected():
    F = FreeGroup(2)
    with pytest.raises(GroupError):
        SubgroupFI(F, [(0, 0), (1, 0)])
    with pytest.raises(GroupError):
        SubgroupFI(F, [(1, 0)])


def test_pullback():
    F, A = FreeGroup(2), FgAbelianGroup(1, [])
    f = Homomorphism(F, A, [(2,), (3,)])
    N = SubgroupFI(A, [(1, 2, 3, 4, 5, 0)])
    M = N.pullback(f)
    assert M.index() == 6
    assert M.contains_word(W.mul(W.gen(0, 3), W.gen(1, 2)))


def test_stable_core_matches_oracle():
    rng = random.Random(SEED + 2)
    F = FreeGroup(2)
    for _ in range(40):
        phi = _random_endo(rng, F)
        q = _random_action(rng, 2, 2)
        M = phi_stable_core(phi, SubgroupFI(F, q))
        seq = oracles.stable_core_oracle([phi.source.elem_word(x) for x in phi.images], q)
        assert M.index() == oracles.joint_order(*seq)
        assert phi_invariant(phi, M)


def test_stable_closure_induces_bijection():
    rng = random.Random(SEED + 3)
    F = FreeGroup(2)
    for _ in range(60):
        phi = _random_endo(rng, F)
        q = _random_action(rng, 2, 2)
        M0 = phi_stable_core(phi, SubgroupFI(F, q))
        M, j = phi_stable_closure(phi, M0)
        assert kernel_contained(M0, M)
        Q = FiniteQuotient(M)
        assert sorted(Q.induced_map(phi)) == list(range(len(Q)))


def test_closure_requires_invariance():
    F = FreeGroup(1)
    phi = Homomorphism(F, F, [W.gen(0, 2)])
    G = FreeGroup(2)
    swap = Homomorphism(G, G, [W.gen(1), W.gen(0)])
    N = SubgroupFI(G, [(1, 0), (0, 1)])
    with pytest.raises(GroupError):
        phi_stable_closure(swap, N)
    N3 = SubgroupFI(F, [(1, 2, 0)])
    M, _ = phi_stable_closure(phi, N3)
    assert M.index() == 3


def test_finite_quotient_words():
    F = FreeGroup(2)
    S = SubgroupFI(F, [(1, 2, 0), (1, 0, 2)])
    Q = FiniteQuotient(S)
    assert len(Q) == 6
    for x, w in Q.words.items():
        assert P.eval_word(w, S.images, 3) == x
    reg = Q.regular_images()
    assert len(P.closure(reg)) == 6
