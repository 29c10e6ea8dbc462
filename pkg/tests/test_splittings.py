import random
from math import gcd

import pytest

from rfcert import words as W
from rfcert.abelian import multiple_subgroup
from rfcert.findex import is_subgroup_of, same_subgroup
from rfcert.groups import (FgAbelianGroup, FinitePermGroup, GroupError, Homomorphism, abelian_hom,
                           cyclic_group)
from rfcert.splittings import (Amalgam, HNNData, compatible_pair_cyclic, compatible_pair_normal,
                               embed_cert_amalgam, embed_cert_hnn, finite_quotient_injective_on_factors,
                               hnn_finite_realization, quasipotency_abelian, quasipotency_sequence,
                               trivial_subgroup)

import oracles

SEED = 20240601


def _finite_amalgam():
    """``Z/4 *_{Z/2} Z/6``."""
    A, B, H = cyclic_group(4, "a"), cyclic_group(6, "b"), cyclic_group(2, "h")
    i1 = Homomorphism(H, A, [A.power(A.gen(0), 2)])
    i2 = Homomorphism(H, B, [B.power(B.gen(0), 3)])
    return Amalgam(A, B, H, i1, i2)


def _torus_knot():
    """``<x, y | x^2 = y^3>`` as ``Z *_Z Z``."""
    X, Y, H = FgAbelianGroup(1, [], ["x"]), FgAbelianGroup(1, [], ["y"]), FgAbelianGroup(1, [], ["h"])
    return Amalgam(X, Y, H, abelian_hom(H, X, [[2]]), abelian_hom(H, Y, [[3]]))


def _check_cert(cert, relators):
    assert oracles.relators_hold(relators, cert.images)
    for _, words, constraint, kind in cert.factors:
        assert oracles.embedding_holds(cert.images, words, constraint, kind)


# --- amalgams -----------------------------------------------------------------------

def test_amalgam_syllables():
    am = _finite_amalgam()
    names = {"a": 0, "b": 1}
    assert am.is_trivial(W.parse_word("a^2*b^3", names))
    assert am.is_trivial(W.parse_word("a^2*b*a^2*b^-1", names))
    assert not am.is_trivial(W.parse_word("a*b", names))
    assert len(am.syllables(W.parse_word("a*b*a*b", names))) == 4


def test_amalgam_rejects_non_injective():
    A, H = cyclic_group(2, "a"), cyclic_group(4, "h")
    B = cyclic_group(4, "b")
    with pytest.raises(GroupError):
        Amalgam(A, B, H, Homomorphism(H, A, [A.gen(0)]), Homomorphism(H, B, [B.gen(0)]))


def test_finite_quotient_faithful_on_factors():
    S3 = FinitePermGroup(3, [(1, 2, 0), (1, 0, 2)], names=["r", "s"])
    Z6 = cyclic_group(6, "u")
    Z3 = cyclic_group(3, "c")
    iA = Homomorphism(Z3, S3, [S3.gen(0)])
    iB = Homomorphism(Z3, Z6, [Z6.power(Z6.gen(0), 2)])
    R = finite_quotient_injective_on_factors(S3, Z6, Z3, iA, iB)
    assert R.degree == 6
    assert len(oracles.closure(R.images_a, R.degree)) == 6
    assert len(oracles.closure(R.images_b, R.degree)) == 6
    # the shared generator acts identically through both factors
    ca = oracles.evaluate(S3.elem_word(iA.images[0]), R.images_a, R.degree)
    cb = oracles.evaluate(Z6.elem_word(iB.images[0]), R.images_b, R.degree)
    assert ca == cb


def test_finite_amalgam_certificate():
    am = _finite_amalgam()
    N1, N2 = trivial_subgroup(am.G1), trivial_subgroup(am.G2)
    cert = embed_cert_amalgam(am, N1, N2)
    assert cert.degree == 12
    _check_cert(cert, am.relators())


def test_normal_pair_abelian():
    am = _torus_knot()
    N1, N2 = multiple_subgroup(am.G1, 3), multiple_subgroup(am.G2, 2)
    pair = compatible_pair_normal(am, N1, N2)
    P1, P2 = pair.P
    assert is_subgroup_of(P1, N1) and is_subgroup_of(P2, N2)
    assert same_subgroup(P1.pullback(am.i1), P2.pullback(am.i2))
    cert = embed_cert_amalgam(am, N1, N2, "normal")
    _check_cert(cert, am.relators())


def test_cyclic_pair_matches_normal_conditions():
    am = _torus_knot()
    N1, N2 = multiple_subgroup(am.G1, 5), multiple_subgroup(am.G2, 4)
    pair = compatible_pair_cyclic(am, N1, N2)
    P1, P2 = pair.P
    assert same_subgroup(P1.pullback(am.i1), P2.pullback(am.i2))
    cert = embed_cert_amalgam(am, N1, N2, "cyclic")
    _check_cert(cert, am.relators())


def test_unknown_strategy():
    am = _finite_amalgam()
    N = trivial_subgroup(am.G1), trivial_subgroup(am.G2)
    with pytest.raises(GroupError):
        embed_cert_amalgam(am, *N, strategy="bogus")
    with pytest.raises(GroupError):
        embed_cert_amalgam(am, *N, strategy="supplied")


def test_random_torus_knot_constraints():
    rng = random.Random(SEED)
    for _ in range(8):
        p, q = rng.randint(1, 4), rng.randint(1, 4)
        X, Y, H = FgAbelianGroup(1, [], ["x"]), FgAbelianGroup(1, [], ["y"]), FgAbelianGroup(1, [], ["h"])
        am = Amalgam(X, Y, H, abelian_hom(H, X, [[p]]), abelian_hom(H, Y, [[q]]))
        N1, N2 = multiple_subgroup(X, rng.randint(1, 4)), multiple_subgroup(Y, rng.randint(1, 4))
        for strategy in ("normal", "cyclic"):
            _check_cert(embed_cert_amalgam(am, N1, N2, strategy), am.relators())


# --- HNN extensions -------------------------------------------------------------------

def test_hnn_realization_conjugates():
    D = FinitePermGroup(4, [(1, 2, 3, 0), (3, 2, 1, 0)])
    r, s = D.gen(0), D.gen(1)
    # A = <r^2>, B = <r^2>; and A = <s>, B = <r s>
    for a, b in [(D.power(r, 2), D.power(r, 2)), (s, D.mul(r, s))]:
        R = hnn_finite_realization(D, [a], [b])
        rho_a = oracles.evaluate(D.elem_word(a), R.images, R.degree)
        rho_b = oracles.evaluate(D.elem_word(b), R.images, R.degree)
        sig = R.sigma
        assert oracles.mul(oracles.mul(oracles.inv(sig), rho_a), sig) == rho_b


def test_hnn_identity_association():
    Z = FgAbelianGroup(1, [], ["a"])
    data = HNNData(Z, [(2,)], [(2,)])
    cert = embed_cert_hnn(data, multiple_subgroup(Z, 4))
    assert cert.data["sigma_identity"]
    _check_cert(cert, data.relators())


def test_hnn_swap():
    Z2 = FgAbelianGroup(2, [], ["a", "b"])
    data = HNNData(Z2, [(1, 0)], [(0, 1)])
    cert = embed_cert_hnn(data, multiple_subgroup(Z2, 2))
    assert not cert.data["sigma_identity"]
    _check_cert(cert, data.relators())


def test_hnn_finite_base():
    C = cyclic_group(4, "a")
    data = HNNData(C, [C.gen(0)], [C.power(C.gen(0), 3)])
    cert = embed_cert_hnn(data, trivial_subgroup(C))
    _check_cert(cert, data.relators())


def test_hnn_rejects_non_isomorphism():
    Z = FgAbelianGroup(1, [], ["a"])
    with pytest.raises(GroupError):
        HNNData(FgAbelianGroup(0, [4], ["a"]), [(1,)], [(2,)])
    assert HNNData(Z, [(1,)], [(2,)])


# --- quasipotency ------------------------------------------------------------------------

def _powers_in(A, N, a, bound):
    x, out = A.identity(), []
    for i in range(bound):
        if N.contains(x):
            out.append(i)
        x = A.mul(x, a)
    return out


@pytest.mark.parametrize("torsion,a", [([], (1,)), ([], (2,)), ([2], (1, 1)), ([6], (0, 2))])
def test_quasipotency_abelian(torsion, a):
    A = FgAbelianGroup(1, torsion)
    a = A.reduce(a)
    seq = quasipotency_sequence(A, a)
    o = A.element_order(a)
    for n in range(1, 6):
        N = seq(n)
        step = n * seq.k if o == 0 else gcd(n * seq.k, o)
        bound = 3 * n * seq.k if o == 0 else o
        # brute force: a^i lies in N exactly for the multiples of the predicted step
        assert _powers_in(A, N, a, bound) == list(range(0, bound, step))


def test_quasipotency_indices():
    Z = FgAbelianGroup(1, [])
    assert quasipotency_abelian(Z, (1,), 5)[1].index() == 5
    k, N = quasipotency_abelian(Z, (2,), 3)
    assert (k, N.index()) == (1, 6)
    A = FgAbelianGroup(1, [2])
    k, N = quasipotency_abelian(A, (1, 1), 2)
    assert (k, N.index()) == (2, 8)
