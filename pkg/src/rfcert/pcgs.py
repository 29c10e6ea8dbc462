"""Subgroups of polycyclic groups via induced polycyclic sequences.

An induced pcgs stores at most one element per depth, with positive leading
exponent dividing the relative order.  Elements may carry a *tag* living in
another group (for instance a preimage under a homomorphism); tags follow
every product performed during closure, so sifting an element also expresses
it through the tags.
"""

from __future__ import annotations

from typing import Sequence

from . import intlat
from . import words as W
from .groups import (INF, FgAbelianGroup, Group, GroupError, Homomorphism, PcGroup,
                     FinitePermGroup)


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, u, v)`` with ``u*a + v*b = g = gcd(a, b) >= 0``."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        a, u0, v0 = -a, -u0, -v0
    return a, u0, v0


class _NoTag(Group):
    """Trivial tracker used when no tags are needed."""

    def identity(self):
        return None

    def mul(self, a, b):
        return None

    def inv(self, a):
        return None

    def power(self, x, e):
        return None

    def is_identity(self, x):
        return True


NOTAG = _NoTag()


class InducedPcgs:
    def __init__(self, G: PcGroup, gens: Sequence = (), tags: Sequence | None = None,
                 tracker: Group | None = None, normalizers: Sequence = ()):
        self.G = G
        self.tracker = tracker if tracker is not None else NOTAG
        self.pivots: dict[int, tuple] = {}
        self.residual_tags: list = []
        self.normalizers = list(normalizers)
        if tags is None:
            tags = [self.tracker.identity()] * len(gens)
        self._queue = list(zip(gens, tags))
        self._close()

    # pair arithmetic
    def _mul(self, a, b):
        return (self.G.mul(a[0], b[0]), self.tracker.mul(a[1], b[1]))

    def _inv(self, a):
        return (self.G.inv(a[0]), self.tracker.inv(a[1]))

    def _pow(self, a, e):
        return (self.G.power(a[0], e), self.tracker.power(a[1], e))

    def _conj(self, a, b):
        return self._mul(self._inv(b), self._mul(a, b))

    def lead(self, x) -> tuple[int, int]:
        d = self.G.depth(x)
        return d, (x[d] if d < len(x) else 0)

    def _reduce(self, item):
        """Sift ``item`` through the current pivots; returns a remainder pair."""
        G = self.G
        while True:
            d, a = self.lead(item[0])
            if d == len(G.orders) or d not in self.pivots:
                return item
            piv = self.pivots[d]
            b = piv[0][d]
            if a % b:
                return item
            item = self._mul(self._pow(piv, -(a // b)), item)

    def _set_pivot(self, d, item):
        self.pivots[d] = item
        r = self.G.orders[d]
        b = item[0][d]
        if r != INF:
            self._queue.append(self._pow(item, r // b))
        for e, other in list(self.pivots.items()):
            if e == d:
                continue
            self._queue.append(self._conj(item, other))
            self._queue.append(self._conj(other, item))
            self._queue.append(self._conj(item, self._inv(other)))
            self._queue.append(self._conj(other, self._inv(item)))
        for n in self.normalizers:
            pair = (n, self.tracker.identity())
            self._queue.append(self._conj(item, pair))
            self._queue.append(self._conj(item, self._inv(pair)))

    def _close(self):
        G = self.G
        while self._queue:
            item = self._reduce(self._queue.pop())
            d, a = self.lead(item[0])
            if d == len(G.orders):
                if not self.tracker.is_identity(item[1]):
                    self.residual_tags.append(item[1])
                continue
            r = G.orders[d]
            if d not in self.pivots:
                if r == INF:
                    self._set_pivot(d, item if a > 0 else self._inv(item))
                else:
                    g, u, _ = egcd(a, r)
                    if g == a:
                        self._set_pivot(d, item)
                    else:
                        self._set_pivot(d, self._pow(item, u % r))
                        self._queue.append(item)
                continue
            piv = self.pivots[d]
            g, u, v = egcd(a, piv[0][d])
            # leading exponent of the combination is gcd(a, b), also modulo r
            self._set_pivot(d, self._mul(self._pow(item, u), self._pow(piv, v)))
            self._queue.append(piv)
            self._queue.append(item)

    # queries ---------------------------------------------------------------

    def depths(self) -> list[int]:
        return sorted(self.pivots)

    def elements(self) -> list:
        return [self.pivots[d][0] for d in self.depths()]

    def tags(self) -> list:
        return [self.pivots[d][1] for d in self.depths()]

    def relative_orders(self) -> list[int]:
        out = []
        for d in self.depths():
            r = self.G.orders[d]
            out.append(INF if r == INF else r // self.pivots[d][0][d])
        return out

    def sift(self, x, tag=None):
        """``(exponents, remainder, tag)`` with ``x = prod T_i^{e_i} * remainder``."""
        ds = self.depths()
        pos = {d: i for i, d in enumerate(ds)}
        exps = [0] * len(ds)
        item = (x, self.tracker.identity() if tag is None else tag)
        acc = self.tracker.identity()
        G = self.G
        while True:
            d, a = self.lead(item[0])
            if d == len(G.orders) or d not in self.pivots:
                return exps, item[0], acc
            piv = self.pivots[d]
            b = piv[0][d]
            if a % b:
                return exps, item[0], acc
            c = a // b
            exps[pos[d]] += c
            item = self._mul(self._pow(piv, -c), item)
            acc = self.tracker.mul(acc, self.tracker.power(piv[1], c))

    def contains(self, x) -> bool:
        _, rem, _ = self.sift(x)
        return self.G.depth(rem) == len(self.G.orders)

    def express(self, x):
        """The tag product of a member, or ``None`` for non-members."""
        _, rem, acc = self.sift(x)
        if self.G.depth(rem) != len(self.G.orders):
            return None
        return acc

    def coordinates(self, x) -> list[int]:
        exps, rem, _ = self.sift(x)
        if self.G.depth(rem) != len(self.G.orders):
            raise GroupError("element is not in the subgroup")
        return exps

    def hirsch_length(self) -> int:
        return sum(1 for r in self.relative_orders() if r == INF)

    def coset_rep(self, x):
        """Canonical representative of ``x N`` for a normal subgroup ``N``."""
        G = self.G
        for d in self.depths():
            piv = self.pivots[d][0]
            b = piv[d]
            c = x[d] // b
            if c:
                x = G.mul(x, G.power(piv, -c))
        return x

    def as_group(self, names: Sequence[str] | None = None) -> tuple[PcGroup, Homomorphism]:
        """Own pc presentation on the induced sequence, with the inclusion map."""
        T = self.elements()
        orders = self.relative_orders()
        n = len(T)
        G = self.G

        def wordof(x):
            return W.word((i, e) for i, e in enumerate(self.coordinates(x)))

        powers = {i: wordof(G.power(T[i], orders[i])) for i in range(n) if orders[i] != INF}
        conj = {}
        conj_inv = {}
        for i in range(n):
            for j in range(i + 1, n):
                conj[(j, i)] = wordof(G.mul(G.inv(T[i]), G.mul(T[j], T[i])))
                if orders[i] == INF:
                    conj_inv[(j, i)] = wordof(G.mul(T[i], G.mul(T[j], G.inv(T[i]))))
        H = PcGroup(orders, powers, conj, conj_inv, names=names, check=False)
        return H, Homomorphism(H, G, T)


def normal_closure(G: PcGroup, gens: Sequence) -> InducedPcgs:
    return InducedPcgs(G, gens, normalizers=G.gens())


def derived_subgroup(G: PcGroup) -> InducedPcgs:
    comms = []
    gs = G.gens()
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            c = G.mul(G.mul(G.inv(gs[i]), G.inv(gs[j])), G.mul(gs[i], gs[j]))
            comms.append(c)
    return normal_closure(G, comms)


def power_subgroup(G: PcGroup, m: int) -> InducedPcgs:
    return normal_closure(G, [G.power(g, m) for g in G.gens()])


def image_pcgs(phi: Homomorphism) -> InducedPcgs:
    """Induced pcgs of ``phi(G)`` whose tags are preimages in the source."""
    src = phi.source
    return InducedPcgs(phi.target, list(phi.images), src.gens(), tracker=src)


def is_injective_pc(phi: Homomorphism) -> bool:
    """Exact for pc sources: injective iff no nontrivial preimage tag sifts away."""
    return not image_pcgs(phi).residual_tags


# --- abelianization --------------------------------------------------------

class Abelianization:
    """``pi: G -> Q = G/G'`` with chosen lifts of the generators of ``Q``."""

    def __init__(self, G: Group):
        n = G.ngens
        vecs = []
        for r in G.relators():
            v = [0] * n
            for g, e in r:
                v[g] += e
            vecs.append(v)
        rank, torsion, Pm = intlat.quotient(vecs, n)
        self.G = G
        self.Q = FgAbelianGroup(rank, torsion)
        self.matrix = Pm
        self.pi = Homomorphism(G, self.Q, [self.Q.reduce([row[i] for row in Pm]) for i in range(n)])
        dq = self.Q.dim
        aug = [list(Pm[i]) + [torsion[k] if i == rank + k else 0 for k in range(len(torsion))]
               for i in range(dq)]
        self.lift_vectors = []
        self.lifts = []
        for j in range(dq):
            x = intlat.solve(aug, [int(i == j) for i in range(dq)], n + len(torsion))
            if x is None:
                raise GroupError("abelianization map is not surjective")
            v = x[:n]
            self.lift_vectors.append(v)
            self.lifts.append(G.normal_form(W.word((i, c) for i, c in enumerate(v))))

    def lift(self, q):
        G = self.G
        x = G.identity()
        for j, c in enumerate(q):
            if c:
                x = G.mul(x, G.power(self.lifts[j], c))
        return x


# --- series -----------------------------------------------------------------

class Extension:
    """``N >-> G ->> Q`` with section data.

    ``iota: N -> G`` is the inclusion, ``section`` maps a ``G``-element lying
    in ``N`` to the corresponding ``N``-element, ``pi: G -> Q`` has kernel
    ``N`` and ``lifts[j]`` is a preimage of ``Q``-generator ``j``.
    """

    def __init__(self, G: Group, N: Group, iota: Homomorphism, section, Q: Group, pi: Homomorphism,
                 lifts: Sequence, factor_kind: str, provider=None):
        self.G, self.N, self.iota, self.section = G, N, iota, section
        self.Q, self.pi, self.lifts = Q, pi, list(lifts)
        self.factor_kind = factor_kind
        self.provider = provider

    def in_kernel(self, x) -> bool:
        return self.Q.is_identity(self.pi.apply_elem(x))

    def lift(self, q):
        x = self.G.identity()
        for g, e in self.Q.elem_word(q):
            x = self.G.mul(x, self.G.power(self.lifts[g], e))
        return x

    def decompose(self, x):
        """``x = lift(q) * iota(n)``; returns ``(q, n)``."""
        q = self.pi.apply_elem(x)
        rest = self.G.mul(self.G.inv(self.lift(q)), x)
        return q, self.section(rest)

    def recompose(self, q, n):
        return self.G.mul(self.lift(q), self.iota.apply_elem(n))

    def restrict(self, phi: Homomorphism) -> Homomorphism:
        """``phi`` restricted to ``N`` (requires ``phi(N) <= N``)."""
        imgs = [self.section(phi.apply_elem(x)) for x in self.iota.images]
        return Homomorphism(self.N, self.N, imgs)

    def induced(self, phi: Homomorphism) -> Homomorphism:
        """Endomorphism of ``Q`` induced by ``phi``."""
        return Homomorphism(self.Q, self.Q, [self.pi.apply_elem(phi.apply_elem(x)) for x in self.lifts])


def derived_extension(G: PcGroup) -> Extension:
    """``G' >-> G ->> G^ab``."""
    D = derived_subgroup(G)
    N, iota = D.as_group()
    ab = Abelianization(G)

    def section(x):
        return tuple(D.coordinates(x)) if N.ngens else ()

    return Extension(G, N, iota, _normalize_section(N, section), ab.Q, ab.pi, ab.lifts, "abelian")


def _normalize_section(N: PcGroup, section):
    def f(x):
        return N.normal_form(W.word((i, e) for i, e in enumerate(section(x))))
    return f


class NormalSeries:
    """Chain ``G = G_0 > G_1 > ... > G_r = 1`` of extensions with abelian factors."""

    def __init__(self, ambient: Group, extensions: list[Extension]):
        self.ambient = ambient
        self.extensions = extensions

    def __len__(self):
        return len(self.extensions)

    def factors(self) -> list[Group]:
        return [e.Q for e in self.extensions]

    def terms(self) -> list[Group]:
        return [self.ambient] + [e.N for e in self.extensions]


def derived_series(G: Group) -> NormalSeries:
    if isinstance(G, FgAbelianGroup):
        triv = PcGroup([], check=False)
        ext = Extension(G, triv, Homomorphism(triv, G, []), lambda x: (), G,
                        Homomorphism(G, G, G.gens()), G.gens(), "abelian")
        return NormalSeries(G, [ext])
    if not isinstance(G, PcGroup):
        raise GroupError("derived series needs a polycyclic or abelian group")
    exts = []
    cur = G
    while cur.ngens:
        ext = derived_extension(cur)
        exts.append(ext)
        if ext.N.ngens == cur.ngens and all(ext.N.orders[i] == cur.orders[i] for i in range(cur.ngens)):
            raise GroupError("derived series does not terminate: group is not solvable")
        cur = ext.N
    return NormalSeries(G, exts)


# --- finite quotients of pc groups ------------------------------------------

def regular_quotient(G: PcGroup, K: InducedPcgs, limit: int = 100000) -> Homomorphism:
    """Right-regular action of ``G`` on ``G/K`` for a normal finite-index ``K``."""
    reps = [K.coset_rep(G.identity())]
    pos = {reps[0]: 0}
    gens = G.gens()
    trans = [[] for _ in gens]
    i = 0
    while i < len(reps):
        x = reps[i]
        for k, g in enumerate(gens):
            y = K.coset_rep(G.mul(x, g))
            if y not in pos:
                pos[y] = len(reps)
                reps.append(y)
                if len(reps) > limit:
                    raise GroupError(f"quotient larger than {limit}")
            trans[k].append(pos[y])
        i += 1
    images = [tuple(t) for t in trans]
    T = FinitePermGroup(len(reps), images) if images else FinitePermGroup(1, [])
    return Homomorphism(G, T, images)
