"""Ascending HNN extensions ``<G, t | t^-1 g t = phi(g)>``: normal forms and
separation in finite quotients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import abelian as AB
from . import intlat
from . import perm as P
from . import words as W
from .findex import FiniteQuotient, phi_stable_closure, phi_stable_core
from .groups import (FgAbelianGroup, FinitePermGroup, FreeGroup, Group, GroupError, Homomorphism,
                     PcGroup, SplitExtensionGroup, abelian_matrix, hom_power)
from .pcgs import image_pcgs, is_injective_pc
from .propp import DEFAULT_BUDGET, witness
from .stallings import StallingsGraph
from .words import Word
from . import checker


class NotInjective(GroupError):
    pass


# --- phi-image membership -----------------------------------------------------

def base_part_hom(phi: Homomorphism) -> Homomorphism:
    """``phi`` on a split extension read on the base coordinates."""
    E = phi.source
    B = E.base
    return Homomorphism(B, B, [phi.images[E.nf + j][1] for j in range(B.ngens)])


class ImageOracle:
    """Decides ``h in phi(G)`` and returns a preimage."""

    def __init__(self, phi: Homomorphism):
        self.phi = phi
        G = phi.source
        self.G = G
        if isinstance(G, FreeGroup):
            self._graph = StallingsGraph(G.ngens, [G.elem_word(x) for x in phi.images])
        elif isinstance(G, FgAbelianGroup):
            M = abelian_matrix(phi)
            tors = AB.relation_lattice(G)
            self._aug = [list(M[i]) + [v[i] for v in tors] for i in range(G.dim)]
        elif isinstance(G, FinitePermGroup):
            self._table = {}
            for x in G.elements():
                self._table.setdefault(phi.apply_elem(x), x)
        elif isinstance(G, PcGroup):
            self._pcgs = image_pcgs(phi)
        elif isinstance(G, SplitExtensionGroup):
            self._base = ImageOracle(base_part_hom(phi))
            self._fiber = {}
            for f in G.fiber.elements():
                img = phi.apply_elem((f, G.base.identity()))
                if not G.base.is_identity(img[1]):
                    raise GroupError("phi does not preserve the fiber")
                self._fiber.setdefault(img[0], f)
        else:
            raise GroupError(f"no phi-image membership for {G!r}")

    def preimage(self, h):
        G = self.G
        if isinstance(G, FreeGroup):
            ok, expr = self._graph.contains(G.elem_word(h))
            return G.normal_form(expr) if ok else None
        if isinstance(G, FgAbelianGroup):
            x = intlat.solve(self._aug, list(h), G.dim + len(G.torsion))
            return None if x is None else G.reduce(x[: G.dim])
        if isinstance(G, FinitePermGroup):
            return self._table.get(h)
        if isinstance(G, PcGroup):
            return self._pcgs.express(h)
        b = self._base.preimage(h[1])
        if b is None:
            return None
        lb = (G.fiber.identity(), b)
        r = G.mul(h, G.inv(self.phi.apply_elem(lb)))
        f = self._fiber.get(r[0])
        if f is None:
            return None
        return G.mul((f, G.base.identity()), lb)


def is_injective(phi: Homomorphism) -> bool | None:
    """``True``/``False`` when decided, ``None`` when undecidable here."""
    G = phi.source
    if isinstance(G, FreeGroup):
        return StallingsGraph(G.ngens, [G.elem_word(x) for x in phi.images]).rank() == G.ngens
    if isinstance(G, FgAbelianGroup):
        return AB.is_injective_abelian(phi)
    if isinstance(G, FinitePermGroup):
        return len({phi.apply_elem(x) for x in G.elements()}) == G.order()
    if isinstance(G, PcGroup):
        return is_injective_pc(phi)
    if isinstance(G, SplitExtensionGroup):
        fib = set()
        for f in G.fiber.elements():
            img = phi.apply_elem((f, G.base.identity()))
            if not G.base.is_identity(img[1]):
                return None
            fib.add(img[0])
        if len(fib) != G.fiber.order():
            return False
        return is_injective(base_part_hom(phi))
    return None


# --- the extension ----------------------------------------------------------------

@dataclass(frozen=True)
class HNNElement:
    k: int
    g: object
    l: int


class AscHNN:
    def __init__(self, base: Group, phi: Homomorphism, stable_name: str = "t", check: bool = True):
        if phi.source is not base or phi.target is not base:
            raise GroupError("phi must be an endomorphism of the base")
        if check and not phi.is_valid():
            raise GroupError("phi does not respect the base relators")
        self.base = base
        self.phi = phi
        self.names = tuple(base.names) + (stable_name,)
        if len(set(self.names)) != len(self.names):
            raise GroupError("stable letter name clashes with a base generator")
        self.t = base.ngens
        self.injective = is_injective(phi)
        self._oracle = None

    @property
    def ngens(self) -> int:
        return len(self.names)

    def name_map(self):
        return {n: i for i, n in enumerate(self.names)}

    def parse(self, text: str) -> Word:
        return W.parse_word(text, self.name_map())

    def format(self, w: Word) -> str:
        return W.format_word(w, self.names)

    def relators(self) -> list[Word]:
        t = self.t
        rels = list(self.base.relators())
        for i, x in enumerate(self.phi.images):
            r = W.mul(W.gen(t, -1), W.gen(i), W.gen(t), W.inverse(self.base.elem_word(x)))
            if r:
                rels.append(r)
        return rels

    def phi_words(self) -> list[Word]:
        return [self.base.elem_word(x) for x in self.phi.images]

    def oracle(self) -> ImageOracle:
        if self._oracle is None:
            self._oracle = ImageOracle(self.phi)
        return self._oracle

    def require_injective(self):
        if self.injective is not True:
            raise NotInjective("word problem needs a verified monomorphism; this extension is endomorphism-only")

    def normal_form(self, w: Word) -> HNNElement:
        return hnn_normal_form(self, w)

    def element_word(self, e: HNNElement) -> Word:
        return W.mul(W.gen(self.t, e.k), self.base.elem_word(e.g), W.gen(self.t, -e.l))

    def is_trivial(self, e: HNNElement) -> bool:
        return e.k == 0 and e.l == 0 and self.base.is_identity(e.g)

    def t_exponent(self, w: Word) -> int:
        return sum(e for g, e in w if g == self.t)

    def random_word(self, rng, syllables: int) -> Word:
        out = []
        for _ in range(syllables):
            out.append((rng.randrange(self.ngens), rng.choice((-2, -1, 1, 2))))
        return W.word(out)


def hnn_normal_form(Gp: AscHNN, w: Word) -> HNNElement:
    """Minimal ``t^k g t^-l`` form."""
    Gp.require_injective()
    B, phi, t = Gp.base, Gp.phi, Gp.t
    for g, _ in w:
        if not 0 <= g < Gp.ngens:
            raise GroupError(f"generator index {g} out of range")
    k, x, l = 0, B.identity(), 0
    for g, e in W.letters(w):
        if g == t:
            if e > 0:
                if l > 0:
                    l -= 1
                else:
                    k, x = k + 1, phi.apply_elem(x)
            else:
                l += 1
        else:
            y = hom_power(phi, l).images[g]
            x = B.mul(x, y if e > 0 else B.inv(y))
    oracle = Gp.oracle()
    while k > 0 and l > 0:
        pre = oracle.preimage(x)
        if pre is None:
            break
        k, x, l = k - 1, pre, l - 1
    return HNNElement(k, x, l)


# --- separation ---------------------------------------------------------------------

@dataclass
class SeparationCert:
    degree: int
    images: list
    element: Word
    data: dict = field(default_factory=dict)


def _semidirect_target(Q: FiniteQuotient, fbar: tuple, m: int):
    """Right-regular action of ``(G/M) x| Z/m`` with ``t^-1 q t = fbar(q)``."""
    n = len(Q)
    elems = Q.elements
    pos = Q.position
    inv = P.inv(fbar)
    # powers of fbar^-1 as maps on positions
    pows = [P.identity(n)]
    for _ in range(1, m):
        pows.append(P.mul(pows[-1], inv))
    gens = [Q.position[g] for g in Q.subgroup.images]

    def point(q, s):
        return q * m + s

    images = []
    for gx in gens:
        img = [0] * (n * m)
        for q in range(n):
            for s in range(m):
                twisted = elems[pows[s][gx]]
                img[point(q, s)] = point(pos[P.mul(elems[q], twisted)], s)
        images.append(tuple(img))
    timg = [0] * (n * m)
    for q in range(n):
        for s in range(m):
            timg[point(q, s)] = point(q, (s + 1) % m)
    images.append(tuple(timg))
    return images


def separate(Gp: AscHNN, x: Word, budget: int = DEFAULT_BUDGET) -> SeparationCert:
    e = hnn_normal_form(Gp, x)
    if Gp.is_trivial(e):
        raise GroupError("the element is trivial; nothing to separate")
    B, phi = Gp.base, Gp.phi
    shift = abs(e.k - e.l) + 1
    if B.is_identity(e.g):
        m = shift
        images = [P.identity(m)] * B.ngens + [P.cycle(m, list(range(m))) if m > 1 else (0,)]
        cert = SeparationCert(m, images, W.word(x), {"method": "stable-letter", "m": m})
    else:
        wit = witness(B, phi, e.g, budget)
        M0 = phi_stable_core(phi, wit.N)
        M, j = phi_stable_closure(phi, M0)
        Q = FiniteQuotient(M)
        fbar = Q.induced_map(phi)
        if sorted(fbar) != list(range(len(Q))):
            raise GroupError("internal error: induced map on the quotient is not bijective")
        d = P.order(fbar)
        m = d * shift
        images = _semidirect_target(Q, fbar, m)
        cert = SeparationCert(len(Q) * m, images, W.word(x),
                              {"method": "semidirect", "m": m, "order": d, "quotient": len(Q),
                               "closure_steps": j, "witness": wit.method})
    if not verify_separation(cert, Gp):
        raise GroupError("internal error: separation certificate failed verification")
    return cert


def verify_separation(cert: SeparationCert, Gp: AscHNN) -> bool:
    return checker.check_separation(Gp.base.relators(), Gp.phi_words(), cert.images, cert.element)


# --- lifting through a finite fiber ------------------------------------------------

def lift_extension(F: FinitePermGroup, base: Group, phi: Homomorphism,
                   action: Sequence[Sequence], t_action: Sequence, stable_name: str = "t") -> AscHNN:
    """``F x| G_phi`` rewritten as the ascending HNN extension of ``H = F x| G``.

    ``action[k]`` and ``t_action`` give the fiber automorphisms attached to
    base generator ``k`` and to ``t`` (as images of the fiber generators),
    with ``b f b^-1 = alpha_b(f)``.
    """
    H = SplitExtensionGroup(F, base, action)
    tmap = {f: P.eval_word(F.elem_word(f), [tuple(v) for v in t_action], F.degree) for f in F.elements()}
    if len(set(tmap.values())) != F.order():
        raise GroupError("the stable letter must act by an automorphism of the fiber")
    for r in F.relators():
        if not P.is_identity(P.eval_word(r, [tuple(v) for v in t_action], F.degree)):
            raise GroupError("the stable letter action is not a homomorphism of the fiber")
    tinv = {v: k for k, v in tmap.items()}
    # psi(h) = t^-1 h t: on the fiber this is alpha_t^-1
    imgs = [(tinv[f], base.identity()) for f in F.generators]
    imgs += [(F.identity(), y) for y in phi.images]
    psi = Homomorphism(H, H, imgs)
    if not psi.is_valid():
        raise GroupError("the action data does not define an extension of the ascending HNN group")
    return AscHNN(H, psi, stable_name)


def lift_separate(F: FinitePermGroup, base: Group, phi: Homomorphism, action, t_action, e: Word,
                  budget: int = DEFAULT_BUDGET) -> tuple[SeparationCert, AscHNN]:
    Hp = lift_extension(F, base, phi, action, t_action)
    if Hp.injective is not True:
        raise NotInjective("the induced endomorphism of the fiber extension is not verified injective")
    return separate(Hp, e, budget), Hp
