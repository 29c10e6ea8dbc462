"""Acceptance criteria 1-10; each test prints one PASS/FAIL line (also shown in the summary)."""

import io
import itertools
import json
import random
import time
from contextlib import redirect_stdout
from pathlib import Path

from rfcert import checker
from rfcert import spec_io as S
from rfcert import words as W
from rfcert.abelian import multiple_subgroup
from rfcert.ahnn import AscHNN, lift_separate, separate, verify_separation
from rfcert.cli import build, main, verify_certificate
from rfcert.findex import SubgroupFI, phi_stable_closure, phi_stable_core
from rfcert.groups import (FgAbelianGroup, FinitePermGroup, FreeGroup, Homomorphism, abelian_hom,
                           cyclic_group)
from rfcert.propp import witness_abelian, witness_finite
from rfcert.raag import Raag, RaagGraph, special_embed, special_subgroup_table
from rfcert.splittings import (Amalgam, HNNData, embed_cert_hnn, finite_quotient_injective_on_factors)

import oracles

SEED = 20240601
DATA = Path(__file__).parent / "data"
SPECS = DATA / "specs"


def _bs12():
    Z = FgAbelianGroup(1, [], ["a"])
    return AscHNN(Z, abelian_hom(Z, Z, [[2]]))


def _z3_f2():
    doc = S.parse_spec((SPECS / "z3_f2.json").read_text())
    return build(doc.group)


# --- AC1 ------------------------------------------------------------------------------

def test_ac1_bs12_separation(ac):
    with ac(1, "BS(1,2) separation suite: 50 words, checker-accepted, a -> order 6"):
        t0 = time.perf_counter()
        G = _bs12()
        rng = random.Random(SEED)
        done = 0
        while done < 50:
            w = G.random_word(rng, rng.randint(1, 12))
            if oracles.bs12_affine(w) == oracles.BS12_ID:
                continue
            cert = separate(G, w)
            assert checker.check_separation(G.base.relators(), G.phi_words(), cert.images, w)
            done += 1
        cert = separate(G, G.parse("a"))
        n = cert.degree
        target = oracles.closure(cert.images, n)
        assert len(target) == 6
        # exhaustive check in the 6-element target: relators hold, a survives, the group is nonabelian
        assert oracles.relators_hold(G.relators(), cert.images)
        assert oracles.evaluate(G.parse("a"), cert.images, n) != oracles.ident(n)
        assert any(oracles.mul(x, y) != oracles.mul(y, x) for x in target for y in target)
        assert time.perf_counter() - t0 < 5


# --- AC2 ------------------------------------------------------------------------------

def _cyc(n):
    return tuple(list(range(1, n)) + [0]) if n > 1 else (0,)


def _dsum(*ps):
    out, off = [], 0
    for p in ps:
        out += [off + v for v in p]
        off += len(p)
    return tuple(out)


def _dihedral(n):
    return [_cyc(n), tuple((-i) % n for i in range(n))]


def _dicyclic(n):
    """Regular action of ``<a, b | a^2n, b^2 = a^n, b^-1 a b = a^-1>`` (Q8 for n = 2)."""
    m = 2 * n
    els = [(k, e) for e in (0, 1) for k in range(m)]
    pos = {x: i for i, x in enumerate(els)}

    def mul(x, y):
        (k, e), (j, f) = x, y
        k2 = (k + (j if e == 0 else -j)) % m
        return ((k2 + n) % m, 0) if e + f == 2 else (k2, e + f)

    return [tuple(pos[mul(x, g)] for x in els) for g in [(1, 0), (0, 1)]]


def small_groups():
    I = oracles.ident
    c2, c3, c4, c8 = _cyc(2), _cyc(3), _cyc(4), _cyc(8)
    out = {f"Z{n}": [_cyc(n)] for n in range(1, 17)}
    out.update({f"D{2 * n}": _dihedral(n) for n in range(3, 9)})
    out.update({"Q8": _dicyclic(2), "Dic12": _dicyclic(3), "Q16": _dicyclic(4)})
    out["Z2^2"] = [_dsum(c2, I(2)), _dsum(I(2), c2)]
    out["Z2^3"] = [_dsum(c2, I(2), I(2)), _dsum(I(2), c2, I(2)), _dsum(I(2), I(2), c2)]
    out["Z4xZ2"] = [_dsum(c4, I(2)), _dsum(I(4), c2)]
    out["Z4xZ4"] = [_dsum(c4, I(4)), _dsum(I(4), c4)]
    out["Z3xZ3"] = [_dsum(c3, I(3)), _dsum(I(3), c3)]
    out["Z2xZ8"] = [_dsum(c2, I(8)), _dsum(I(2), c8)]
    r, s = _dihedral(4)
    out["D8xZ2"] = [_dsum(r, I(2)), _dsum(s, I(2)), _dsum(I(4), c2)]
    return out


def test_ac2_property_p_oracle(ac):
    with ac(2, "Property P: witness_finite matches brute force on groups of order <= 16"):
        t0 = time.perf_counter()
        mismatches = 0
        for name, gens in small_groups().items():
            n = len(gens[0])
            G = FinitePermGroup(n, gens)
            assert G.order() <= 16, name
            elems = list(G.elements())
            normals = oracles.normal_subgroups(elems, n)
            for imgs, m in oracles.endomorphisms(gens, n):
                phi = Homomorphism(G, G, list(imgs))
                for g in elems:
                    w = witness_finite(G, phi, g)
                    verdict, first = oracles.property_p_brute(normals, n, m, g)
                    ok = verdict and w.trivial_from == first
                    ok = ok and oracles.biconditional_holds(m, g, lambda x: w.N.contains(x), oracles.ident(n))
                    mismatches += not ok
        assert mismatches == 0
        assert time.perf_counter() - t0 < 60


# --- AC3 ------------------------------------------------------------------------------

def _random_perm(rng, n):
    p = list(range(n))
    rng.shuffle(p)
    return tuple(p)


def test_ac3_stabilization_invariants(ac):
    with ac(3, "stable core and closure postconditions on 100 random free-group triples"):
        rng = random.Random(SEED)
        failures = 0
        for _ in range(100):
            r = rng.randint(1, 3)
            F = FreeGroup(r)
            phi_words = [W.word((rng.randrange(r), rng.choice((-1, 1))) for _ in range(rng.randint(0, 3)))
                         for _ in range(r)]
            phi = Homomorphism(F, F, [F.normal_form(w) for w in phi_words])
            d = rng.randint(1, 4)
            q = tuple(_random_perm(rng, d) for _ in range(r))
            N = SubgroupFI(F, q)
            assert N.index() <= 24
            M = phi_stable_core(phi, N)
            Mc, j = phi_stable_closure(phi, M)
            m, mc = M.images, Mc.images
            seq = oracles.stable_core_oracle(phi_words, q)
            checks = [
                oracles.kernel_le(m, q),                                   # M <= N
                oracles.kernel_le(m, oracles.compose(phi_words, m)),       # phi(M) <= M
                oracles.same_kernel(m, [tuple(_dsum(*ps)) for ps in zip(*seq)]),  # largest such
                oracles.kernel_le(m, mc),                                  # M <= closure
                oracles.kernel_le(mc, oracles.compose(phi_words, mc)),     # closure invariant
                oracles.induced_bijective(phi_words, mc),                  # bijective on G/M
            ]
            # the closure is ker(q_M o phi^j) for the first j where the image order stops dropping
            layers = [m]
            for _ in range(j + 1):
                layers.append(oracles.compose(phi_words, layers[-1]))
            orders = [oracles.joint_order(x) for x in layers]
            checks.append(orders[j] == orders[j + 1] and all(orders[i] != orders[i + 1] for i in range(j)))
            checks.append(oracles.same_kernel(mc, layers[j]))
            failures += not all(checks)
        assert failures == 0


# --- AC4 ------------------------------------------------------------------------------

def _det(M):
    if len(M) == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    return sum((-1) ** j * M[0][j] * _det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(3))


def test_ac4_abelian_prime(ac):
    with ac(4, "abelian witnesses: prime avoids det and a, orbit mod p avoids zero"):
        t0 = time.perf_counter()
        rng = random.Random(SEED)
        failures = done = 0
        while done < 100:
            n = rng.choice((2, 3))
            M = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
            det = _det(M)
            a = tuple(rng.randint(-5, 5) for _ in range(n))
            if det == 0 or not any(a):
                continue
            A = FgAbelianGroup(n, [])
            w = witness_abelian(A, abelian_hom(A, A, M), a)
            p = w.data.get("prime")
            ok = w.method == "abelian-prime" and det % p != 0 and any(x % p for x in a)
            # orbit of a mod p under M: must avoid zero through a full period (period <= p^n)
            x, seen = tuple(v % p for v in a), set()
            while ok and x not in seen:
                seen.add(x)
                ok = any(x)
                x = tuple(sum(M[i][k] * x[k] for k in range(n)) % p for i in range(n))
            ok = ok and len(seen) <= p ** n
            failures += not ok
            done += 1
        assert failures == 0
        assert time.perf_counter() - t0 < 10


# --- AC5 ------------------------------------------------------------------------------

def _z3_f2_words(rng, G, count):
    """Pure-fiber, pure-base, mixed and stable-letter words, in rotation."""
    c, x, y, t = 0, 1, 2, 3
    kinds = [
        lambda: [(c, rng.choice((1, 2)))],
        lambda: [(rng.choice((x, y)), rng.choice((-2, -1, 1, 2))) for _ in range(rng.randint(1, 4))],
        lambda: [(rng.choice((c, x, y)), rng.choice((-1, 1, 2))) for _ in range(rng.randint(2, 5))],
        lambda: [(t, -1)] + [(rng.choice((c, x, y)), rng.choice((-1, 1))) for _ in range(3)] + [(t, 1)],
    ]
    out = []
    while len(out) < count:
        w = W.word(kinds[len(out) % 4]())
        if not G.is_trivial(G.normal_form(w)):
            out.append(w)
    return out


def test_ac5_z3_f2_pipeline(ac):
    with ac(5, "Z/3 x| F2 ascending HNN: 20 separation certificates accepted"):
        G = _z3_f2()
        rng = random.Random(SEED)
        for w in _z3_f2_words(rng, G, 20):
            cert = separate(G, w)
            n = cert.degree
            assert verify_separation(cert, G)
            assert oracles.relators_hold(G.relators(), cert.images)
            assert oracles.evaluate(w, cert.images, n) != oracles.ident(n)


# --- AC6 ------------------------------------------------------------------------------

def test_ac6_lift(ac):
    with ac(6, "lift through Z/2 fiber over the BS(1,2) base separates the fiber generator"):
        F = cyclic_group(2, "f")
        Z = FgAbelianGroup(1, [], ["a"])
        phi = abelian_hom(Z, Z, [[2]])
        f = W.gen(0)
        cert, Hp = lift_separate(F, Z, phi, [[(1, 0)]], [(1, 0)], f)
        assert checker.check_separation(Hp.base.relators(), Hp.phi_words(), cert.images, f)
        assert oracles.relators_hold(Hp.relators(), cert.images)
        assert oracles.evaluate(f, cert.images, cert.degree) != oracles.ident(cert.degree)


# --- AC7 ------------------------------------------------------------------------------

def test_ac7_splittings(ac):
    with ac(7, "Z/4 *_{Z/2} Z/6 faithful on factors; <a,t | [t,a^2]> embedding with N = 4Z"):
        A, B, C = cyclic_group(4, "a"), cyclic_group(6, "b"), cyclic_group(2, "h")
        iA = Homomorphism(C, A, [A.power(A.gen(0), 2)])
        iB = Homomorphism(C, B, [B.power(B.gen(0), 3)])
        Amalgam(A, B, C, iA, iB)
        R = finite_quotient_injective_on_factors(A, B, C, iA, iB)
        d = R.degree
        # exhaustive faithfulness: distinct factor elements act differently
        for G, imgs in ((A, R.images_a), (B, R.images_b)):
            acts = {oracles.evaluate(G.elem_word(x), imgs, d) for x in G.elements()}
            assert len(acts) == G.order()
        h = oracles.evaluate(A.elem_word(iA.images[0]), R.images_a, d)
        assert h == oracles.evaluate(B.elem_word(iB.images[0]), R.images_b, d)

        Z = FgAbelianGroup(1, [], ["a"])
        data = HNNData(Z, [(2,)], [(2,)])
        N = multiple_subgroup(Z, 4)
        cert = embed_cert_hnn(data, N)
        assert oracles.relators_hold(data.relators(), cert.images)
        for _, words, constraint, kind in cert.factors:
            assert oracles.embedding_holds(cert.images, words, constraint, kind)
        assert checker.check_embedding(data.relators(), data.ngens, cert.images,
                                       [(w, c, k) for _, w, c, k in cert.factors])


# --- AC8 ------------------------------------------------------------------------------

def labeled_graphs(max_n=4):
    for n in range(1, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            yield n, [p for k, p in enumerate(pairs) if mask >> k & 1]


def _iso_class(n, edges):
    return min(tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in edges))
               for p in itertools.permutations(range(n)))


def test_ac8_raag(ac):
    with ac(8, "RAAG special embeddings on all graphs with <= 4 vertices; normal forms vs oracle"):
        t0 = time.perf_counter()
        rng = random.Random(SEED)
        classes = set()
        certs = 0
        for n, edges in labeled_graphs():
            classes.add((n, _iso_class(n, edges)))
            G = Raag(RaagGraph([f"v{i}" for i in range(n)], edges))
            for r in range(1, n + 1):
                for Xp in itertools.combinations(range(n), r):
                    k = len(Xp)
                    for j in range(1, 5):
                        # U: preimage of j Z under the map sending the first generator to 1, the rest to 0
                        gens = [W.gen(0, j)] + [W.mul(W.gen(0, i), W.gen(y), W.gen(0, -i))
                                                for y in range(1, k) for i in range(j)]
                        sub, table = special_subgroup_table(G, list(Xp), gens)
                        assert table.index() == j
                        U = table.subgroup(sub)
                        cert = special_embed(G, list(Xp), U)
                        assert oracles.relators_hold(G.relators(), cert.images)
                        for _, words, constraint, kind in cert.factors:
                            assert oracles.embedding_holds(cert.images, words, constraint, kind)
                        certs += 1
            for _ in range(20):
                w = W.word((rng.randrange(n), rng.choice((-1, 1))) for _ in range(rng.randint(0, 6)))
                v = G.normal_form(w)
                reduced = oracles.raag_reduced_set(oracles.letters(w), G.commute)
                assert oracles.raag_equal(oracles.letters(v), oracles.letters(w), G.commute)
                assert len(oracles.letters(v)) == len(next(iter(reduced)))
                assert all(G.normal_form(W.word(u)) == v for u in reduced)
        assert len(classes) == 1 + 2 + 4 + 11
        assert sum(1 for c in classes if c[0] == 4) == 11
        assert certs > 0
        assert time.perf_counter() - t0 < 120


# --- AC9 ------------------------------------------------------------------------------

def _minimal_bs12(e):
    return not (e.k > 0 and e.l > 0 and e.g[0] % 2 == 0)


def _minimal_z3_f2(e):
    # phi(G) = Z/3 x| <x^3, y^3>
    return not (e.k > 0 and e.l > 0 and oracles.free_syllables_divisible(e.g[1], 3))


def test_ac9_hnn_normal_forms(ac):
    with ac(9, "HNN normal forms: nf(uv) = nf(nf(u) nf(v)) and minimality on 500 pairs each"):
        rng = random.Random(SEED)
        failures = 0
        for G, minimal in ((_bs12(), _minimal_bs12), (_z3_f2(), _minimal_z3_f2)):
            for _ in range(500):
                u = G.random_word(rng, rng.randint(0, 6))
                v = G.random_word(rng, rng.randint(0, 6))
                nu, nv = G.normal_form(u), G.normal_form(v)
                lhs = G.normal_form(W.mul(u, v))
                rhs = G.normal_form(W.mul(G.element_word(nu), G.element_word(nv)))
                failures += lhs != rhs or not all(minimal(e) for e in (nu, nv, lhs))
                if isinstance(G.base, FgAbelianGroup):
                    failures += oracles.bs12_affine(G.element_word(lhs)) != oracles.bs12_affine(W.mul(u, v))
        assert failures == 0


# --- AC10 -----------------------------------------------------------------------------

def _run_corpus(out_dir):
    corpus = json.loads((DATA / "corpus.json").read_text())
    files = []
    for i, (command, spec, extra) in enumerate(corpus):
        path = out_dir / f"{i:02d}_{command}_{spec}.json"
        with redirect_stdout(io.StringIO()):
            code = main([command, str(SPECS / f"{spec}.json"), *extra, "-o", str(path)])
        assert code == 0, (command, spec)
        files.append(path)
    return files


def test_ac10_cli_determinism(ac, tmp_path):
    with ac(10, "CLI: byte-identical corpus runs, verify accepts all, rejects 20 mutants"):
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        first = _run_corpus(tmp_path / "a")
        second = _run_corpus(tmp_path / "b")
        assert [p.read_bytes() for p in first] == [p.read_bytes() for p in second]
        for p in first:
            with redirect_stdout(io.StringIO()):
                assert main(["verify", str(p)]) == 0, p.name
        mutants = sorted((DATA / "mutants").glob("*.json"))
        assert len(mutants) == 20
        for p in mutants:
            assert not verify_certificate(json.loads(p.read_text())), p.name
            with redirect_stdout(io.StringIO()):
                assert main(["verify", str(p)]) == 1, p.name
