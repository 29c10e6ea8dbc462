"""Amalgamated products and HNN extensions: compatible pairs, finite
realizations injective on the vertex groups, and embedding certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Callable, Sequence

from . import abelian as AB
from . import checker
from . import intlat
from . import perm as P
from . import words as W
from .findex import (BudgetExhausted, FiniteQuotient, SubgroupFI, intersect, is_subgroup_of,
                     kernel_contained, normal_core, same_subgroup)
from .groups import (FgAbelianGroup, FinitePermGroup, FreeGroup, Group, GroupError, Homomorphism,
                     PcGroup, default_names)
from .words import Word

DEFAULT_BUDGET = 10**6


# --- splitting groups ---------------------------------------------------------

def _shift(w: Word, k: int) -> Word:
    return tuple((g + k, e) for g, e in w)


def _injective(f: Homomorphism) -> bool | None:
    S = f.source
    if isinstance(S, FinitePermGroup):
        return len({f.apply_elem(x) for x in S.elements()}) == S.order()
    if isinstance(S, FgAbelianGroup) and isinstance(f.target, FgAbelianGroup):
        return AB.is_injective_abelian(f)
    return None


class _MembershipOracle:
    """``x in i(H)`` with a preimage, for finite factors or abelian ``H`` in abelian factors."""

    def __init__(self, i: Homomorphism):
        self.i = i
        G = i.target
        self.G = G
        if isinstance(G, FinitePermGroup):
            H = i.source
            self._table = {G.identity(): H.identity()}
            queue = [G.identity()]
            for x in queue:
                for j, y in enumerate(i.images):
                    z = G.mul(x, y)
                    if z not in self._table:
                        self._table[z] = H.mul(self._table[x], H.gen(j))
                        queue.append(z)
        elif isinstance(G, FgAbelianGroup) and isinstance(i.source, FgAbelianGroup):
            M = AB.lift_matrix(i)
            tors = AB.relation_lattice(G)
            self._aug = [list(M[r]) + [v[r] for v in tors] for r in range(G.dim)]
        else:
            raise GroupError("no membership oracle for this configuration")

    def preimage(self, x):
        if hasattr(self, "_table"):
            return self._table.get(x)
        H = self.i.source
        sol = intlat.solve(self._aug, list(x), H.dim + len(self.G.torsion))
        return None if sol is None else H.reduce(sol[: H.dim])


class Amalgam(Group):
    """``G1 *_H G2`` on the generators of ``G1`` followed by those of ``G2``."""

    kind = "amalgam"

    def __init__(self, G1: Group, G2: Group, H: Group, i1: Homomorphism, i2: Homomorphism,
                 names: Sequence[str] | None = None, check: bool = True):
        if i1.source is not H or i2.source is not H or i1.target is not G1 or i2.target is not G2:
            raise GroupError("embeddings must map H into the two factors")
        self.G1, self.G2, self.H, self.i1, self.i2 = G1, G2, H, i1, i2
        self.names = tuple(names) if names is not None else tuple(G1.names) + tuple(G2.names)
        if len(self.names) != G1.ngens + G2.ngens or len(set(self.names)) != len(self.names):
            raise GroupError("amalgam needs distinct names for the factor generators")
        if check:
            for f in (i1, i2):
                if not f.is_valid():
                    raise GroupError("an embedding does not respect the relators of H")
                if _injective(f) is False:
                    raise GroupError("an embedding of H is not injective")
        self._oracles = None

    def relators(self) -> list[Word]:
        k = self.G1.ngens
        rels = list(self.G1.relators()) + [_shift(r, k) for r in self.G2.relators()]
        for a, b in zip(self.i1.images, self.i2.images):
            r = W.mul(self.G1.elem_word(a), W.inverse(_shift(self.G2.elem_word(b), k)))
            if r:
                rels.append(r)
        return rels

    def factor_words(self) -> tuple[list[Word], list[Word]]:
        k = self.G1.ngens
        return [W.gen(i) for i in range(k)], [W.gen(k + i) for i in range(self.G2.ngens)]

    def syllables(self, w: Word) -> list[tuple[int, object]]:
        """Alternating reduced syllables ``(side, factor element)``.

        A syllable lying in the image of ``H`` is transported into its
        neighbour, so the result is empty iff ``w`` is trivial.
        """
        self.check_word(w)
        if self._oracles is None:
            self._oracles = (_MembershipOracle(self.i1), _MembershipOracle(self.i2))
        k = self.G1.ngens
        facs = (self.G1, self.G2)
        homs = (self.i1, self.i2)
        out: list[list] = []

        def push(side, x):
            G = facs[side]
            if len(out) == 1 and out[0][0] != side:
                h = self._oracles[out[0][0]].preimage(out[0][1])
                if h is not None:
                    out[0] = [side, homs[side].apply_elem(h)]
            if out and out[-1][0] == side:
                out[-1][1] = G.mul(out[-1][1], x)
            else:
                out.append([side, x])
            # absorb syllables that fell into H
            while out:
                s, y = out[-1]
                if facs[s].is_identity(y):
                    out.pop()
                    continue
                h = self._oracles[s].preimage(y)
                if h is None or len(out) == 1:
                    break
                out.pop()
                o = 1 - s
                z = homs[o].apply_elem(h)
                out[-1][1] = facs[o].mul(out[-1][1], z)

        for g, e in w:
            side = 0 if g < k else 1
            idx = g if side == 0 else g - k
            G = facs[side]
            push(side, G.power(G.gen(idx), e))
        return [(s, x) for s, x in out]

    def is_trivial(self, w: Word) -> bool:
        return not self.syllables(w)


class HNNData(Group):
    """``<G, t | t^-1 h_j t = k_j>`` with ``phi(h_j) = k_j``; ``t`` is the last generator."""

    kind = "hnn"

    def __init__(self, G: Group, H_gens: Sequence, K_gens: Sequence, stable_name: str = "t",
                 check: bool = True):
        if len(H_gens) != len(K_gens):
            raise GroupError("phi needs one image per generator of H")
        self.G = G
        self.H_gens = list(H_gens)
        self.K_gens = list(K_gens)
        self.names = tuple(G.names) + (stable_name,)
        if len(set(self.names)) != len(self.names):
            raise GroupError("stable letter name clashes with a base generator")
        self.t = G.ngens
        if check and isinstance(G, (FinitePermGroup, FgAbelianGroup)):
            if not self._phi_is_iso():
                raise GroupError("the association H -> K is not a well-defined isomorphism")

    def _phi_is_iso(self) -> bool:
        G = self.G
        if isinstance(G, FinitePermGroup):
            try:
                _subgroup_map(G, self.H_gens, self.K_gens)
            except GroupError:
                return False
            return True
        # abelian: coefficient relations of the H generators map to those of K
        n = len(self.H_gens)
        if n == 0:
            return True
        R = AB.relation_lattice(G)
        a_h = [[v[i] for v in self.H_gens] + [r[i] for r in R] for i in range(G.dim)]
        a_k = [[v[i] for v in self.K_gens] + [r[i] for r in R] for i in range(G.dim)]
        rel_h = [v[:n] for v in intlat.nullspace(a_h, n + len(R))]
        rel_k = [v[:n] for v in intlat.nullspace(a_k, n + len(R))]
        return intlat.same_lattice(intlat.hermite_basis(rel_h, n), intlat.hermite_basis(rel_k, n), n)

    def relators(self) -> list[Word]:
        t = self.t
        rels = list(self.G.relators())
        for h, k in zip(self.H_gens, self.K_gens):
            r = W.mul(W.gen(t, -1), self.G.elem_word(h), W.gen(t), W.inverse(self.G.elem_word(k)))
            if r:
                rels.append(r)
        return rels


def _subgroup_map(G: FinitePermGroup, gens: Sequence, images: Sequence) -> dict:
    """Elementwise map of ``<gens>`` determined by generator images; checks it is an injective hom."""
    e = G.identity()
    table = {e: e}
    queue = [e]
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        for g, h in zip(gens, images):
            y = G.mul(x, g)
            v = G.mul(table[x], h)
            if y in table:
                if table[y] != v:
                    raise GroupError("generator images do not define a homomorphism")
            else:
                table[y] = v
                queue.append(y)
    if len(set(table.values())) != len(table):
        raise GroupError("generator images do not define an injective map")
    return table


# --- finite realizations ------------------------------------------------------

def _points(G: FinitePermGroup):
    elems = G.elements()
    return elems, {x: i for i, x in enumerate(elems)}


@dataclass
class FiniteAmalgamQuotient:
    """Action on ``S`` of ``A *_C B`` that is faithful on both factors."""

    degree: int
    images_a: list
    images_b: list


def finite_quotient_injective_on_factors(A: FinitePermGroup, B: FinitePermGroup, C: FinitePermGroup,
                                         iA: Homomorphism, iB: Homomorphism) -> FiniteAmalgamQuotient:
    """Free ``A``- and ``B``-actions on ``lcm(|A|, |B|)`` points agreeing on ``C``.

    ``S`` is ``A x blocks`` with ``A`` acting by right multiplication; the
    ``B``-action is transported along a ``C``-equivariant bijection that
    matches free ``C``-orbits in sorted-representative order.
    """
    ea, pa = _points(A)
    eb, pb = _points(B)
    ec = C.elements()
    na, nb = len(ea), len(eb)
    size = lcm(na, nb)
    ca = [iA.apply_elem(c) for c in ec]
    cb = [iB.apply_elem(c) for c in ec]
    if len(set(ca)) != len(ec) or len(set(cb)) != len(ec):
        raise GroupError("C must embed in both factors")

    def orbit_coords(elems, pos, n, cimg):
        """Point -> (orbit number, C element index) for the free right C-action."""
        coords = {}
        reps = []
        for p in range(size):
            if p in coords:
                continue
            reps.append(p)
            blk, x = divmod(p, n)
            for j, c in enumerate(cimg):
                q = blk * n + pos[_rmul(elems[x], c)]
                coords[q] = (len(reps) - 1, j)
        return coords

    coords_a = orbit_coords(ea, pa, na, ca)
    coords_b = orbit_coords(eb, pb, nb, cb)
    inv_b = {v: k for k, v in coords_b.items()}
    beta = [inv_b[coords_a[p]] for p in range(size)]
    beta_inv = P.inv(tuple(beta))

    def right_action(elems, pos, n, g):
        out = []
        for p in range(size):
            blk, x = divmod(p, n)
            out.append(blk * n + pos[_rmul(elems[x], g)])
        return tuple(out)

    images_a = [right_action(ea, pa, na, g) for g in A.generators]
    images_b = []
    for g in B.generators:
        rb = right_action(eb, pb, nb, g)
        images_b.append(tuple(beta_inv[rb[beta[p]]] for p in range(size)))
    R = FiniteAmalgamQuotient(size, images_a, images_b)
    if len(P.closure(images_a or [P.identity(size)])) != na:
        raise GroupError("internal error: A acts unfaithfully")
    if len(P.closure(images_b or [P.identity(size)])) != nb:
        raise GroupError("internal error: B acts unfaithfully")
    for c, x, y in zip(ec, ca, cb):
        if _eval_on(A, x, images_a, size) != _eval_on(B, y, images_b, size):
            raise GroupError("internal error: the two actions disagree on C")
    return R


def _rmul(x, g):
    return P.mul(x, g)


def _eval_on(G: FinitePermGroup, x, images, degree):
    return P.eval_word(G.elem_word(x), images, degree)


@dataclass
class FiniteHNNRealization:
    degree: int
    images: list
    sigma: tuple


def hnn_finite_realization(Hf: FinitePermGroup, A_gens: Sequence, B_gens: Sequence) -> FiniteHNNRealization:
    """Regular ``H`` and ``sigma`` with ``sigma^-1 rho(a) sigma = rho(phi(a))``, ``phi(A_gens[j]) = B_gens[j]``.

    ``sigma(r_i a) = s_i phi(a)`` for sorted left-coset representatives
    ``r_i`` of ``A`` and ``s_i`` of ``B``.
    """
    elems, pos = _points(Hf)
    n = len(elems)
    phi = _subgroup_map(Hf, A_gens, B_gens)
    A_elems = sorted(phi, key=lambda x: pos[x])
    B_elems = [phi[a] for a in A_elems]

    def cosets(sub):
        seen = {}
        reps = []
        for p in range(n):
            if p in seen:
                continue
            reps.append(elems[p])
            for j, a in enumerate(sub):
                seen[pos[P.mul(elems[p], a)]] = (len(reps) - 1, j)
        return reps

    ra = cosets(A_elems)
    rb = cosets(B_elems)
    sigma = [0] * n
    for r, s in zip(ra, rb):
        for a, b in zip(A_elems, B_elems):
            sigma[pos[P.mul(r, a)]] = pos[P.mul(s, b)]
    sigma = tuple(sigma)
    if not P.is_perm(sigma, n):
        raise GroupError("internal error: orbit matching is not a bijection")
    rho = {x: tuple(pos[P.mul(y, x)] for y in elems) for x in elems}
    si = P.inv(sigma)
    for a in A_elems:
        if P.mul(P.mul(si, rho[a]), sigma) != rho[phi[a]]:
            raise GroupError("internal error: sigma does not realize phi")
    return FiniteHNNRealization(n, [rho[g] for g in Hf.generators], sigma)


# --- compatible pairs -----------------------------------------------------------

@dataclass
class CompatiblePair:
    P: list
    data: dict = field(default_factory=dict)


def trivial_subgroup(G: Group) -> SubgroupFI:
    if not isinstance(G, FinitePermGroup):
        raise GroupError("the trivial subgroup has finite index only in a finite group")
    return SubgroupFI(G, list(G.generators), "kernel")


def normal_candidates(G: Group, max_m: int = 256):
    """Cofinal finite-index normal subgroups: trivial, ``mG`` or power subgroups."""
    if isinstance(G, FinitePermGroup):
        yield 0, trivial_subgroup(G)
        return
    if isinstance(G, FgAbelianGroup):
        for m in range(1, max_m + 1):
            yield m, AB.multiple_subgroup(G, m)
        return
    if isinstance(G, PcGroup):
        from .pcgs import power_subgroup, regular_quotient
        for m in range(1, max_m + 1):
            yield m, SubgroupFI(G, regular_quotient(G, power_subgroup(G, m)).images, "kernel")
        return
    raise GroupError(f"no built-in normal subgroup provider for {G.kind} groups")


def product_normal(M: SubgroupFI, U_gens: Sequence) -> SubgroupFI:
    """``U M`` for kernel-form ``M`` and a normal subgroup generated by ``U_gens``."""
    Q = FiniteQuotient(M)
    G = M.group
    ubar = [M.image(u) for u in U_gens]
    sub = P.closure(ubar) if ubar else [P.identity(Q.degree)]
    label = {}
    reps = []
    for x in Q.elements:
        if x in label:
            continue
        reps.append(x)
        for u in sub:
            label[P.mul(u, x)] = len(reps) - 1
    images = []
    for g in M.images:
        images.append(tuple(label[P.mul(r, g)] for r in reps))
    if not images:
        return SubgroupFI(G, [], "kernel")
    return SubgroupFI(G, images, "kernel")


def _exponent_of_image(S: SubgroupFI) -> int:
    e = 1
    for x in S.image_elements():
        e = lcm(e, P.order(x))
    return e


def compatible_pair_normal(am: Amalgam, N1: SubgroupFI, N2: SubgroupFI,
                           providers: Sequence[Callable] | None = None) -> CompatiblePair:
    """``P_i = U M_i`` with ``U`` characteristic in ``N = H`` inside ``N cap N_1 cap N_2``."""
    H = am.H
    C1, C2 = normal_core(N1), normal_core(N2)
    K = intersect(C1.pullback(am.i1), C2.pullback(am.i2))
    if isinstance(H, FinitePermGroup):
        e = 0
        U = trivial_subgroup(H)
        U_gens = []
    elif isinstance(H, FgAbelianGroup):
        e = _exponent_of_image(K)
        U = AB.multiple_subgroup(H, e)
        U_gens = [H.power(h, e) for h in H.gens()]
    else:
        raise GroupError("the shared subgroup must be finite or abelian without a provider")
    Ps = []
    Ms = []
    for side, (Gi, iota, Ci) in enumerate(((am.G1, am.i1, C1), (am.G2, am.i2, C2))):
        if providers is not None:
            Mi = providers[side](U)
        else:
            Mi = None
            for _, cand in normal_candidates(Gi):
                cand = intersect(cand, Ci)
                if kernel_contained(cand.pullback(iota), U):
                    Mi = cand
                    break
            if Mi is None:
                raise BudgetExhausted("no normal subgroup meets N inside U", side)
        Pi = product_normal(Mi, [iota.apply_elem(u) for u in U_gens])
        Ps.append(Pi)
        Ms.append(Mi)
    pair = CompatiblePair(Ps, {"strategy": "normal", "exponent": e, "U_index": U.index()})
    verify_pair_amalgam(am, pair, N1, N2)
    for Pi, Gi, iota in zip(Ps, (am.G1, am.G2), (am.i1, am.i2)):
        if not same_subgroup(Pi.pullback(iota), U):
            raise GroupError("internal error: P_i cap N differs from U")
    return pair


def verify_pair_amalgam(am: Amalgam, pair: CompatiblePair, N1: SubgroupFI, N2: SubgroupFI) -> None:
    P1, P2 = pair.P
    if not (is_subgroup_of(P1, N1) and is_subgroup_of(P2, N2)):
        raise GroupError("compatible pair is not inside the constraints")
    if not same_subgroup(P1.pullback(am.i1), P2.pullback(am.i2)):
        raise GroupError("P_1 cap H and P_2 cap H differ")


# --- quasipotency ---------------------------------------------------------------

@dataclass
class QuasipotencySequence:
    group: Group
    element: object
    k: int
    provider: Callable[[int], SubgroupFI]
    characteristic: bool

    def __call__(self, n: int) -> SubgroupFI:
        N = self.provider(n)
        if not quasipotency_holds(self.group, self.element, self.k, n, N):
            raise GroupError(f"quasipotency condition fails at n={n}")
        return N


def _element_order(G: Group, g) -> int:
    """Order of ``g`` (``0`` for infinite) where decidable directly."""
    if isinstance(G, FinitePermGroup):
        return G.element_order(g)
    if isinstance(G, FgAbelianGroup):
        return G.element_order(g)
    if isinstance(G, FreeGroup):
        return 1 if G.is_identity(g) else 0
    return 0 if not G.is_identity(g) else 1


def quasipotency_holds(G: Group, g, k: int, n: int, N: SubgroupFI) -> bool:
    """``<g> cap N = <g^{nk}>`` via the order ``m`` of ``g`` modulo ``N``."""
    m = P.order(N.image(g)) if N.kind == "kernel" else _stab_order(N, g)
    o = _element_order(G, g)
    if o == 0:
        return m == n * k
    return gcd(m, o) == gcd(n * k, o)


def _stab_order(N: SubgroupFI, g) -> int:
    p = N.image(g)
    x, m = p, 1
    while x[0] != 0:
        x = P.mul(x, p)
        m += 1
    return m


def quasipotency_abelian(A: FgAbelianGroup, a, n: int) -> tuple[int, SubgroupFI]:
    """``k = E`` (torsion exponent) and ``N_n = (n k d) A`` with ``d`` the free content of ``a``.

    For ``a`` of finite order, ``N_n = (n E) A`` meets the torsion trivially.
    """
    a = A.reduce(a)
    E = A.exponent() if A.torsion else 1
    d = AB.element_content(a[: A.rank])
    if d == 0:
        k = A.element_order(a) if not A.is_identity(a) else 1
        mult = n * E
    else:
        k = E
        mult = n * k * d
    while True:
        N = AB.multiple_subgroup(A, mult)
        if quasipotency_holds(A, a, k, n, N):
            return k, N
        k, mult = k * 2, mult * 2


def quasipotency_sequence(G: Group, g, budget: int = DEFAULT_BUDGET) -> QuasipotencySequence:
    if isinstance(G, FgAbelianGroup):
        k = quasipotency_abelian(G, g, 1)[0]
        return QuasipotencySequence(G, g, k, lambda n: quasipotency_abelian(G, g, n)[1], True)
    if isinstance(G, FinitePermGroup):
        k = max(G.element_order(g), 1)
        return QuasipotencySequence(G, g, k, lambda n: trivial_subgroup(G), True)
    return QuasipotencySequence(G, g, 1, lambda n: quasipotency_search(G, g, n, 1, budget), False)


def quasipotency_search(G: Group, g, n: int, k: int, budget: int = DEFAULT_BUDGET) -> SubgroupFI:
    """First scheduled action where ``g`` has order exactly ``n k``."""
    from .propp import candidate_schedule

    w = G.elem_word(g)
    target = n * k
    for count, (pos, images) in enumerate(candidate_schedule(G, max_degree=max(8, target))):
        if count >= budget:
            raise BudgetExhausted("quasipotency search budget exhausted", pos)
        deg = len(images[0]) if images else 1
        S = SubgroupFI(G, images, "kernel")
        if P.order(P.eval_word(w, S.images, deg)) != target:
            continue
        if not checker.relators_hold(G.relators(), S.images):
            continue
        return S
    raise BudgetExhausted("quasipotency schedule exhausted", None)


def compatible_pair_cyclic(am: Amalgam, N1: SubgroupFI, N2: SubgroupFI,
                           sequences: Sequence[QuasipotencySequence] | None = None,
                           budget: int = DEFAULT_BUDGET) -> CompatiblePair:
    """``P_1 = M1_{k2'} cap N_1`` and ``P_2 = M2_{k1'} cap N_2`` after rescaling by ``s``."""
    H = am.H
    if H.ngens > 1:
        raise GroupError("the shared subgroup must be cyclic on one generator")
    C1, C2 = normal_core(N1), normal_core(N2)
    if H.ngens == 0 or H.is_identity(H.gen(0)):
        pair = CompatiblePair([C1, C2], {"strategy": "cyclic", "trivial": True})
        verify_pair_amalgam(am, pair, N1, N2)
        return pair
    a1 = am.i1.images[0]
    a2 = am.i2.images[0]
    s = lcm(P.order(C1.image(a1)), P.order(C2.image(a2)))
    if sequences is None:
        sequences = (quasipotency_sequence(am.G1, a1, budget), quasipotency_sequence(am.G2, a2, budget))
    q1, q2 = sequences
    k1, k2 = s * q1.k, s * q2.k
    P1 = intersect(q1(k2 * s), C1)
    P2 = intersect(q2(k1 * s), C2)
    pair = CompatiblePair([P1, P2], {"strategy": "cyclic", "s": s, "k1": k1, "k2": k2})
    verify_pair_amalgam(am, pair, N1, N2)
    return pair


# --- embedding certificates -------------------------------------------------------

@dataclass
class EmbeddingCert:
    """``theta`` on the splitting group; ``U = theta^-1(Stab(0))`` meets each factor inside its constraint.

    ``factors`` holds ``(name, generator words, constraint images, constraint kind)``.
    """

    degree: int
    images: list
    factors: list
    data: dict = field(default_factory=dict)


def verify_embedding(cert: EmbeddingCert, relators: Sequence[Word], ngens: int) -> bool:
    return checker.check_embedding(relators, ngens, cert.images,
                                   [(w, c, k) for _, w, c, k in cert.factors])


def _quotient_group(S: SubgroupFI) -> tuple[FinitePermGroup, FiniteQuotient]:
    Q = FiniteQuotient(S)
    imgs = Q.regular_images()
    n = len(Q)
    return FinitePermGroup(n, imgs or [], names=default_names("q", len(imgs))), Q


def embed_cert_amalgam(am: Amalgam, N1: SubgroupFI, N2: SubgroupFI, strategy: str = "normal",
                       pair: CompatiblePair | None = None, budget: int = DEFAULT_BUDGET) -> EmbeddingCert:
    if strategy == "normal":
        pair = compatible_pair_normal(am, N1, N2)
    elif strategy == "cyclic":
        pair = compatible_pair_cyclic(am, N1, N2, budget=budget)
    elif strategy == "supplied":
        if pair is None:
            raise GroupError("the supplied strategy needs a compatible pair")
        verify_pair_amalgam(am, pair, N1, N2)
    else:
        raise GroupError(f"unknown pair strategy {strategy!r}")
    P1, P2 = (normal_core(p) for p in pair.P)
    A, QA = _quotient_group(P1)
    B, QB = _quotient_group(P2)
    # C = image of H in A x B; equal kernels make both projections injective
    ha = [QA.position[P1.image(am.i1.apply_elem(h))] for h in am.H.gens()]
    hb = [QB.position[P2.image(am.i2.apply_elem(h))] for h in am.H.gens()]
    ra = [QA_elem_perm(A, QA, p) for p in ha]
    rb = [QA_elem_perm(B, QB, p) for p in hb]
    deg_c = A.degree + B.degree
    cgens = [P.direct_sum([x, y]) for x, y in zip(ra, rb)]
    C = FinitePermGroup(deg_c, cgens, names=default_names("c", len(cgens)))
    iA = Homomorphism(C, A, ra)
    iB = Homomorphism(C, B, rb)
    R = finite_quotient_injective_on_factors(A, B, C, iA, iB)
    w1, w2 = am.factor_words()
    cert = EmbeddingCert(R.degree, list(R.images_a) + list(R.images_b),
                         [("G1", w1, list(N1.images), N1.kind), ("G2", w2, list(N2.images), N2.kind)],
                         {"construction": "amalgam", "P_index": [P1.index(), P2.index()],
                          **{k: v for k, v in pair.data.items()}})
    if not verify_embedding(cert, am.relators(), am.ngens):
        raise GroupError("internal error: amalgam embedding certificate failed verification")
    return cert


def QA_elem_perm(A: FinitePermGroup, Q: FiniteQuotient, position: int) -> tuple:
    """The element of the regular image group at ``position`` of the quotient."""
    w = Q.words[Q.elements[position]]
    return P.eval_word(w, list(A.generators), A.degree)


def hnn_pair(data: HNNData, N: SubgroupFI, strategy: str = "auto", supplied: SubgroupFI | None = None,
             max_m: int = 256) -> SubgroupFI:
    """``P`` normal of finite index, ``P <= N``, ``P cap K = phi(P cap H)``."""
    G = data.G
    core = normal_core(N)
    if strategy == "supplied":
        if supplied is None:
            raise GroupError("the supplied strategy needs P")
        Pn = normal_core(supplied)
    elif strategy in ("auto", "identity") and _same_elements(G, data.H_gens, data.K_gens):
        Pn = core
    elif strategy in ("auto", "abelian") and isinstance(G, FgAbelianGroup):
        Pn = None
        for m, cand in normal_candidates(G, max_m):
            cand = intersect(cand, core)
            if _hnn_matching(data, cand):
                Pn = cand
                break
        if Pn is None:
            raise BudgetExhausted(f"no P = mG cap N up to m={max_m} matches", max_m)
    elif strategy == "auto" and isinstance(G, FinitePermGroup):
        Pn = intersect(trivial_subgroup(G), core)
    else:
        raise GroupError("no built-in P strategy applies; supply P")
    if not is_subgroup_of(Pn, N) or not _hnn_matching(data, Pn):
        raise GroupError("P does not satisfy P <= N and P cap K = phi(P cap H)")
    return Pn


def _same_elements(G: Group, xs, ys) -> bool:
    return len(xs) == len(ys) and all(G.mul(x, G.inv(y)) == G.identity() for x, y in zip(xs, ys))


def _hnn_matching(data: HNNData, Pn: SubgroupFI) -> bool:
    """``phi`` descends to an isomorphism ``HP/P -> KP/P``."""
    Pn = normal_core(Pn)
    hs = [Pn.image(h) for h in data.H_gens]
    ks = [Pn.image(k) for k in data.K_gens]
    if not hs:
        return True
    joint = [P.direct_sum([a, b]) for a, b in zip(hs, ks)]
    o = len(P.closure(joint))
    return o == len(P.closure(hs)) == len(P.closure(ks))


def embed_cert_hnn(data: HNNData, N: SubgroupFI, strategy: str = "auto",
                   supplied: SubgroupFI | None = None) -> EmbeddingCert:
    Pn = hnn_pair(data, N, strategy, supplied)
    Hf, Q = _quotient_group(Pn)
    A = [QA_elem_perm(Hf, Q, Q.position[Pn.image(h)]) for h in data.H_gens]
    B = [QA_elem_perm(Hf, Q, Q.position[Pn.image(k)]) for k in data.K_gens]
    R = hnn_finite_realization(Hf, A, B)
    G = data.G
    cert = EmbeddingCert(R.degree, list(R.images) + [R.sigma],
                         [("G", [W.gen(i) for i in range(G.ngens)], list(N.images), N.kind)],
                         {"construction": "hnn", "P_index": Pn.index(),
                          "sigma_identity": P.is_identity(R.sigma)})
    if not verify_embedding(cert, data.relators(), data.ngens):
        raise GroupError("internal error: HNN embedding certificate failed verification")
    return cert
