"""Brute-force oracles, written without the package so they can judge it.

Permutations are tuples acting on the right: ``mul(p, q)`` applies ``p``
first.  Words are sequences of ``(generator, exponent)``.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction


def mul(p, q):
    return tuple(q[i] for i in p)


def inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def ident(n):
    return tuple(range(n))


def evaluate(word, gens, n):
    x = ident(n)
    for g, e in word:
        p = gens[g] if e > 0 else inv(gens[g])
        for _ in range(abs(e)):
            x = mul(x, p)
    return x


def closure(gens, n):
    e = ident(n)
    seen = {e}
    todo = [e]
    for x in todo:
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def words_bfs(gens, n):
    """Element -> a word in the generators."""
    e = ident(n)
    words = {e: ()}
    todo = [e]
    for x in todo:
        for k, g in enumerate(gens):
            y = mul(x, g)
            if y not in words:
                words[y] = words[x] + ((k, 1),)
                todo.append(y)
    return words


# --- finite groups --------------------------------------------------------------

def all_subgroups(elements, n):
    elements = list(elements)
    triv = frozenset([ident(n)])
    found = {triv}
    todo = [triv]
    for S in todo:
        for x in elements:
            if x in S:
                continue
            T = frozenset(closure(list(S) + [x], n))
            if T not in found:
                found.add(T)
                todo.append(T)
    return found


def is_normal(S, elements):
    return all(mul(mul(inv(g), s), g) in S for g in elements for s in S)


def endomorphisms(gens, n):
    """Every generator assignment that extends to an endomorphism, as element maps."""
    elements = list(words_bfs(gens, n))
    out = []
    for imgs in itertools.product(elements, repeat=len(gens)):
        m = {ident(n): ident(n)}
        todo = [ident(n)]
        ok = True
        for x in todo:
            for g, h in zip(gens, imgs):
                y, v = mul(x, g), mul(m[x], h)
                if y in m:
                    if m[y] != v:
                        ok = False
                        break
                else:
                    m[y] = v
                    todo.append(y)
            if not ok:
                break
        if ok:
            out.append((imgs, m))
    return out


def normal_subgroups(elements, n):
    elements = list(elements)
    return [S for S in all_subgroups(elements, n) if is_normal(S, elements)]


def property_p_brute(normals, n, phi, g):
    """Definition verdict over the given normal subgroups, plus the first trivial iterate."""
    orbit = []
    x = g
    seen = set()
    while x not in seen:
        seen.add(x)
        orbit.append(x)
        x = phi[x]
    e = ident(n)
    # a trivial iterate may lie in N; every earlier one must not
    first = next((i for i, y in enumerate(orbit) if y == e), None)
    prefix = orbit if first is None else orbit[:first]
    verdict = any(all(y not in S for y in prefix) for S in normals)
    return verdict, first


def biconditional_holds(phi, g, in_N, e):
    x = g
    seen = set()
    while x not in seen:
        seen.add(x)
        if in_N(x) != (x == e):
            return False
        x = phi[x]
    return True


# --- kernels of actions of free groups ------------------------------------------------

def joint_order(*actions):
    """Image order of the direct sum of several generator-image tuples."""
    ngens = len(actions[0])
    gens = []
    sizes = [len(a[0]) for a in actions]
    n = sum(sizes)
    for k in range(ngens):
        p = []
        off = 0
        for a, s in zip(actions, sizes):
            p.extend(off + v for v in a[k])
            off += s
        gens.append(tuple(p))
    return len(closure(gens, n))


def same_kernel(a, b):
    o = joint_order(a, b)
    return o == joint_order(a) == joint_order(b)


def kernel_le(a, b):
    """``ker a <= ker b``."""
    return joint_order(a, b) == joint_order(a)


def compose(phi_words, images):
    n = len(images[0])
    return tuple(evaluate(w, images, n) for w in phi_words)


def stable_core_oracle(phi_words, q_images, steps=200):
    """Direct sum of ``q o phi^i`` over all distinct ``i`` up to a large cap."""
    seq = [tuple(q_images)]
    seen = {seq[0]}
    for _ in range(steps):
        nxt = compose(phi_words, seq[-1])
        if nxt in seen:
            break
        seen.add(nxt)
        seq.append(nxt)
    return seq


def induced_bijective(phi_words, images):
    n = len(images[0])
    words = words_bfs(images, n)
    targets = {evaluate(_expand(w, phi_words), images, n) for w in words.values()}
    return len(targets) == len(words)


def _expand(word, phi_words):
    out = []
    for g, e in word:
        w = phi_words[g]
        if e < 0:
            w = [(a, -b) for a, b in reversed(w)]
        out.extend(list(w) * abs(e))
    return out


# --- right-angled Artin groups ----------------------------------------------------------

def raag_reduced_set(word, commute):
    """All minimal-length words reachable by commuting swaps and free cancellation."""
    start = tuple(word)
    seen = {start}
    todo = deque([start])
    while todo:
        w = todo.popleft()
        for i in range(len(w) - 1):
            (a, x), (b, y) = w[i], w[i + 1]
            if a == b and x == -y:
                v = w[:i] + w[i + 2:]
            elif a != b and commute(a, b):
                v = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
            else:
                continue
            if v not in seen:
                seen.add(v)
                todo.append(v)
    m = min(len(v) for v in seen)
    return {v for v in seen if len(v) == m}


def raag_equal(u, v, commute):
    w = tuple(u) + tuple((g, -e) for g, e in reversed(v))
    return () in raag_reduced_set(w, commute)


def letters(word):
    out = []
    for g, e in word:
        out.extend([(g, 1 if e > 0 else -1)] * abs(e))
    return tuple(out)


# --- embedding certificates ------------------------------------------------------------

def embedding_holds(images, factor_words, constraint, kind):
    """Every factor element fixing point 0 under ``theta`` lies in the constraint subgroup.

    Enumerates the joint image of the factor in ``Sym(theta) x Sym(constraint)``.
    """
    n = len(images[0])
    m = len(constraint[0]) if constraint else 1
    gens = []
    for w, c in zip(factor_words, constraint):
        x = evaluate(w, images, n)
        gens.append(x + tuple(v + n for v in c))
    for p in closure(gens, n + m):
        if p[0] != 0:
            continue
        y = tuple(v - n for v in p[n:])
        if kind == "kernel" and y != ident(m):
            return False
        if kind == "stabilizer" and y[0] != 0:
            return False
    return True


def relators_hold(relators, images):
    n = len(images[0])
    return all(evaluate(r, images, n) == ident(n) for r in relators)


# --- BS(1,2) -------------------------------------------------------------------------------

# faithful affine model of <a, t | t^-1 a t = a^2>; matrices multiply left to right
_A = ((Fraction(1), Fraction(1)), (Fraction(0), Fraction(1)))
_T = ((Fraction(1, 2), Fraction(0)), (Fraction(0), Fraction(1)))


def _mm(x, y):
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def _minv(x):
    (a, b), (c, d) = x
    det = a * d - b * c
    return ((d / det, -b / det), (-c / det, a / det))


def bs12_affine(word):
    """Matrix of a word in generators ``a`` (index 0) and ``t`` (index 1)."""
    m = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    for g, e in word:
        base = _A if g == 0 else _T
        step = base if e > 0 else _minv(base)
        for _ in range(abs(e)):
            m = _mm(m, step)
    return m


BS12_ID = bs12_affine(())


def free_syllables_divisible(word, k):
    """A reduced free word lies in ``<x_1^k, ..., x_n^k>`` iff every syllable exponent is divisible by ``k``."""
    return all(e % k == 0 for _, e in word)
