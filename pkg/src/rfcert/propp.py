"""Property P witnesses.

For an endomorphism ``phi`` of ``G`` and ``g`` in ``G`` a witness is a
``phi``-invariant normal subgroup ``N`` of finite index such that
``phi^i(g)`` lies in ``N`` only when ``phi^i(g) = 1``.  ``trivial_from`` is
the first ``i`` with ``phi^i(g) = 1`` (``None`` when the orbit never dies).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import abelian as AB
from . import intlat
from . import perm as P
from .findex import (BudgetExhausted, FiniteQuotient, SubgroupFI, compose_endo, intersect,
                     kernel_contained, normal_core, phi_invariant, phi_stable_core)
from .groups import (FgAbelianGroup, FinitePermGroup, FreeGroup, Group, GroupError, Homomorphism,
                     PcGroup, SplitExtensionGroup, abelian_hom, abelian_matrix, hom_power)
from .pcgs import Extension, derived_extension, power_subgroup, regular_quotient
from .stallings import subgroup_rank

DEFAULT_BUDGET = 10 ** 6


class WitnessError(GroupError):
    pass


@dataclass
class PropPWitness:
    group: Group
    phi: Homomorphism
    element: object
    N: SubgroupFI
    trivial_from: int | None
    preperiod: int = 0
    period: int = 1
    method: str = ""
    data: dict = field(default_factory=dict)


def orbit_positions(phi: Homomorphism, N: SubgroupFI, g):
    """Positions of ``phi^i(g) N`` in ``G/N`` and ``(preperiod, period)``."""
    Q = FiniteQuotient(N)
    f = Q.induced_map(phi)
    p = Q.position[N.image(g)]
    seen = {}
    seq = []
    while p not in seen:
        seen[p] = len(seq)
        seq.append(p)
        p = f[p]
    return seq, seen[p], len(seq) - seen[p]


def first_trivial(phi: Homomorphism, g, bound: int):
    G = phi.source
    x = g
    for i in range(bound + 1):
        if G.is_identity(x):
            return i
        x = phi.apply_elem(x)
    return None


def check_witness(w: PropPWitness) -> bool:
    """Engine-side verification of the witness conditions."""
    G, phi, N = w.group, w.phi, normal_core(w.N)
    if not phi_invariant(phi, N):
        return False
    seq, pre, per = orbit_positions(phi, N, w.element)
    if w.trivial_from is None:
        return 0 not in seq
    x = w.element
    for i in range(w.trivial_from):
        if N.contains(x):
            return False
        x = phi.apply_elem(x)
    return G.is_identity(x)


def finish(G, phi, g, N, trivial_from, method, **data) -> PropPWitness:
    N = normal_core(N)
    seq, pre, per = orbit_positions(phi, N, g)
    w = PropPWitness(G, phi, g, N, trivial_from, pre, per, method, dict(data))
    if not check_witness(w):
        raise WitnessError(f"internal error: {method} produced an invalid witness")
    return w


def trivial_subgroup_finite(G: FinitePermGroup) -> SubgroupFI:
    return SubgroupFI(G, list(G.generators) or [], "kernel")


# --- finite ---------------------------------------------------------------

def witness_finite(G: FinitePermGroup, phi: Homomorphism, g) -> PropPWitness:
    k = first_trivial(phi, g, G.order())
    return finish(G, phi, g, trivial_subgroup_finite(G), k, "finite")


# --- abelian ----------------------------------------------------------------

def _primes():
    p = 2
    while True:
        if all(p % q for q in range(2, int(p ** 0.5) + 1)):
            yield p
        p += 1


def torsion_free_det(phi: Homomorphism) -> int:
    A = phi.source
    M = abelian_matrix(phi)
    return intlat.det([row[: A.rank] for row in M[: A.rank]])


def witness_abelian(A: FgAbelianGroup, phi: Homomorphism, a) -> PropPWitness:
    a = A.reduce(a)
    if A.is_identity(a):
        return finish(A, phi, a, SubgroupFI.whole(A), 0, "abelian-trivial")
    if AB.is_injective_abelian(phi):
        return _witness_abelian_mono(A, phi, a)
    C, s = AB.kernel_chain(phi)
    if AB.in_subgroup(A, a, C):
        x, l = a, 0
        while not A.is_identity(x):
            x = phi.apply_elem(x)
            l += 1
        orbit = []
        x = a
        for _ in range(l):
            orbit.append(x)
            x = phi.apply_elem(x)
        m = 2
        while True:
            N = AB.multiple_subgroup(A, m)
            if not any(N.contains(y) for y in orbit):
                return finish(A, phi, a, N, l, "abelian-dying", multiple=m)
            m += 1
    quo = AB.AbelianQuotient(A, C)
    phibar = quo.induced(phi)
    wbar = _witness_abelian_mono(quo.Q, phibar, quo.pi.apply_elem(a))
    N = wbar.N.pullback(quo.pi)
    return finish(A, phi, a, N, None, "abelian-quotient", kernel_step=s, inner=wbar.data)


def _witness_abelian_mono(A: FgAbelianGroup, phi: Homomorphism, a) -> PropPWitness:
    free = a[: A.rank]
    if any(free):
        det = torsion_free_det(phi)
        for p in _primes():
            if det % p and any(x % p for x in free):
                N = AB.multiple_subgroup(A, p)
                M = phi_stable_core(phi, N)
                return finish(A, phi, a, M, None, "abelian-prime", prime=p)
    # torsion element: the free summand misses the whole torsion orbit
    gens = []
    for i in range(A.rank):
        v = [0] * A.dim
        v[i] = 1
        gens.append(v)
    N = AB.lattice_subgroup(A, gens)
    return finish(A, phi, a, phi_stable_core(phi, N), None, "abelian-torsion")


# --- search over finite quotients ----------------------------------------------

def _sym_elements(d: int) -> list[tuple]:
    return list(itertools.permutations(range(d)))


def candidate_schedule(G: Group, max_degree: int = 8):
    """Deterministic candidate actions: abelianization mod d, then S_d tuples."""
    from .pcgs import Abelianization

    ab = None
    for d in range(2, max_degree + 1):
        if ab is None:
            ab = Abelianization(G)
        mod = _abelian_mod(ab, d)
        if mod is not None:
            yield ("ab", d, 0), mod
        elems = _sym_elements(d)
        for idx, tup in enumerate(itertools.product(elems, repeat=G.ngens)):
            yield ("sym", d, idx), list(tup)


def _abelian_mod(ab, d: int):
    """Action of ``G`` on ``(G^ab) / d (G^ab)`` via the abelianization."""
    Q = ab.Q
    N = AB.multiple_subgroup(Q, d)
    return [N.image(x) for x in ab.pi.images]


def _orbit_tuples(phi: Homomorphism, images, cap: int):
    """Eventually periodic sequence ``q o phi^n``; returns ``(seq, start_of_period)``."""
    deg = len(images[0]) if images else 1
    seen = {}
    seq = []
    cur = tuple(images)
    while cur not in seen:
        if len(seq) >= cap:
            return None
        seen[cur] = len(seq)
        seq.append(cur)
        cur = tuple(compose_endo(phi, cur, deg))
    return seq, seen[cur]


def search_quotient(G: Group, phi: Homomorphism, g, budget: int, prefix: int | None = None,
                    cap: int = 2000):
    """First scheduled action ``q`` with ``phi^n(g)`` surviving in ``ker`` of the stable core.

    With ``prefix = l`` only ``n < l`` must survive.  Returns ``(images, position)``.
    """
    gword = G.elem_word(g)
    count = 0
    pos = None
    for pos, images in candidate_schedule(G):
        count += 1
        if count > budget:
            raise BudgetExhausted(f"quotient search exhausted budget {budget} at {pos}", pos)
        if prefix is not None:
            ok = True
            deg = len(images[0])
            cur = list(images)
            for _ in range(prefix):
                if P.is_identity(P.eval_word(gword, cur, deg)):
                    ok = False
                    break
                cur = compose_endo(phi, cur, deg)
            if ok:
                return images, pos
            continue
        res = _orbit_tuples(phi, images, cap)
        if res is None:
            continue
        seq, start = res
        deg = len(images[0])
        if any(not P.is_identity(P.eval_word(gword, t, deg)) for t in seq[start:]):
            return images, pos
    raise BudgetExhausted(f"quotient search schedule ended at {pos}", pos)


# --- free -----------------------------------------------------------------------

def image_words(phi: Homomorphism, i: int) -> list:
    return [phi.source.elem_word(x) for x in hom_power(phi, i).images]


def rank_stabilization(phi: Homomorphism) -> tuple[int, list[int]]:
    G = phi.source
    ranks = [G.ngens]
    i = 0
    while True:
        r = subgroup_rank(G.ngens, image_words(phi, i + 1))
        ranks.append(r)
        if r == ranks[-2]:
            return i, ranks
        i += 1


def witness_free(G: FreeGroup, phi: Homomorphism, g, budget: int = DEFAULT_BUDGET) -> PropPWitness:
    g = G.normal_form(g)
    if G.is_identity(g):
        return finish(G, phi, g, SubgroupFI.whole(G), 0, "free-trivial")
    if G.ngens == 1:
        Z = FgAbelianGroup(1)
        e = sum(x for _, x in phi.images[0])
        phiA = abelian_hom(Z, Z, [[e]])
        wa = witness_abelian(Z, phiA, (sum(x for _, x in g),))
        N = SubgroupFI(G, wa.N.images, "kernel")
        return finish(G, phi, g, N, wa.trivial_from, "free-rank1", **wa.data)
    k, ranks = rank_stabilization(phi)
    x = hom_power(phi, k).apply_elem(g)
    if G.is_identity(x):
        l = first_trivial(phi, g, k)
        images, pos = search_quotient(G, phi, g, budget, prefix=l)
        M = phi_stable_core(phi, SubgroupFI(G, images, "kernel"))
        return finish(G, phi, g, M, l, "free-prefix", stabilization=k, schedule=list(pos))
    images, pos = search_quotient(G, phi, g, budget)
    M = phi_stable_core(phi, SubgroupFI(G, images, "kernel"))
    return finish(G, phi, g, M, None, "free-search", stabilization=k, schedule=list(pos))


# --- extensions -----------------------------------------------------------------

def compose_extension(ext: Extension, phi: Homomorphism, g, witness_N, witness_Q, provider) -> PropPWitness:
    """Climb a witness from ``N`` and ``Q = G/N`` to ``G``."""
    G = ext.G
    for x in ext.iota.images:
        if not ext.in_kernel(phi.apply_elem(x)):
            raise WitnessError("phi does not preserve the normal subgroup")
    phiQ = ext.induced(phi)
    phiN = ext.restrict(phi)
    gq = ext.pi.apply_elem(g)
    wq = witness_Q(ext.Q, phiQ, gq)
    if wq.trivial_from is None:
        U = wq.N.pullback(ext.pi)
        return finish(G, phi, g, U, None, "extension-c")
    k = wq.trivial_from
    h = g
    for _ in range(k):
        h = phi.apply_elem(h)
    n = ext.section(h)
    wn = witness_N(ext.N, phiN, n)
    U1 = provider(wn.N)
    U = U1 if k == 0 else intersect(U1, wq.N.pullback(ext.pi))
    U = phi_stable_core(phi, normal_core(U))
    tf = None if wn.trivial_from is None else k + wn.trivial_from
    return finish(G, phi, g, U, tf, "extension-a" if tf is not None else "extension-b", entry=k)


def fiber_provider(E: SplitExtensionGroup):
    """Action of ``E`` on the fiber (faithful on it), so ``ker cap F = 1``."""
    F = E.fiber
    elems = F.elements()
    idx = {f: i for i, f in enumerate(elems)}
    images = [tuple(idx[P.mul(f, g)] for f in elems) for g in F.generators]
    for k in range(E.base.ngens):
        inv = E._auto_inv[k]
        images.append(tuple(idx[inv[f]] for f in elems))
    U = SubgroupFI(E, images, "kernel")

    def provider(M: SubgroupFI) -> SubgroupFI:
        return U

    return provider


def split_extension_data(E: SplitExtensionGroup) -> Extension:
    F, B = E.fiber, E.base
    iota = Homomorphism(F, E, [E.gen(i) for i in range(E.nf)])

    def section(x):
        if not B.is_identity(x[1]):
            raise GroupError("element is not in the fiber")
        return x[0]

    pi = Homomorphism(E, B, [B.identity()] * E.nf + B.gens())
    lifts = [E.gen(E.nf + j) for j in range(B.ngens)]
    return Extension(E, F, iota, section, B, pi, lifts, "finite", fiber_provider(E))


def pc_provider(ext: Extension, budget: int = DEFAULT_BUDGET, max_m: int = 64):
    """Power subgroups ``P_m`` are cofinal among finite-index normal subgroups."""
    G = ext.G

    def provider(M: SubgroupFI) -> SubgroupFI:
        M = normal_core(M)
        for m in range(1, max_m + 1):
            theta = regular_quotient(G, power_subgroup(G, m))
            U = SubgroupFI(G, theta.images, "kernel")
            if not ext.N.ngens:
                return U
            UN = U.pullback(ext.iota)
            if kernel_contained(UN, M):
                return U
        raise BudgetExhausted(f"no power subgroup up to m={max_m} meets N inside M", max_m)

    return provider


def witness_polycyclic(G: PcGroup, phi: Homomorphism, g, budget: int = DEFAULT_BUDGET) -> PropPWitness:
    if G.is_identity(g):
        return finish(G, phi, g, SubgroupFI.whole(G), 0, "pc-trivial")
    ext = derived_extension(G)

    def wN(N, phiN, n):
        if not N.ngens:
            return PropPWitness(N, phiN, n, SubgroupFI.whole(N), 0)
        return witness_polycyclic(N, phiN, n, budget)

    def wQ(Q, phiQ, q):
        return witness_abelian(Q, phiQ, q)

    return compose_extension(ext, phi, g, wN, wQ, pc_provider(ext, budget))


def witness_series(E: SplitExtensionGroup, phi: Homomorphism, g, budget: int = DEFAULT_BUDGET) -> PropPWitness:
    """Finite fiber over a supported base: one step of the series induction."""
    if E.is_identity(g):
        return finish(E, phi, g, SubgroupFI.whole(E), 0, "series-trivial")
    ext = split_extension_data(E)

    def wN(N, phiN, n):
        return witness_finite(N, phiN, n)

    def wQ(Q, phiQ, q):
        return witness(Q, phiQ, q, budget)

    return compose_extension(ext, phi, g, wN, wQ, ext.provider)


def witness(G: Group, phi: Homomorphism, g, budget: int = DEFAULT_BUDGET) -> PropPWitness:
    """Dispatch on the group class."""
    if phi.source is not G or phi.target is not G:
        raise GroupError("witness needs an endomorphism of G")
    if isinstance(G, FinitePermGroup):
        return witness_finite(G, phi, g)
    if isinstance(G, FgAbelianGroup):
        return witness_abelian(G, phi, g)
    if isinstance(G, PcGroup):
        return witness_polycyclic(G, phi, g, budget)
    if isinstance(G, FreeGroup):
        return witness_free(G, phi, g, budget)
    if isinstance(G, SplitExtensionGroup):
        return witness_series(G, phi, g, budget)
    raise WitnessError(f"no witness engine for {G!r}")
