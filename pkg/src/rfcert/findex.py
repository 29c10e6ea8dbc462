"""Finite-index subgroups: coset enumeration, cores, intersections, and
stabilization under an endomorphism.

A finite-index subgroup is stored through an action of the ambient group on
finitely many points (one permutation per generator).  In ``kernel`` form the
subgroup is the kernel of the action; in ``stabilizer`` form it is the
stabilizer of point 0 (a coset table).
"""

from __future__ import annotations

from typing import Sequence

from . import perm as P
from . import words as W
from .groups import Group, GroupError, Homomorphism, FinitePermGroup
from .words import Word


class BudgetExhausted(RuntimeError):
    """A bounded search or enumeration hit its budget."""

    def __init__(self, message: str, position=None):
        super().__init__(message)
        self.position = position


class SubgroupFI:
    def __init__(self, group: Group, images: Sequence[Sequence[int]], kind: str = "kernel"):
        if kind not in ("kernel", "stabilizer"):
            raise ValueError(f"unknown subgroup form {kind!r}")
        if len(images) != group.ngens:
            raise GroupError("one permutation per ambient generator is required")
        images = tuple(tuple(int(v) for v in p) for p in images)
        degree = len(images[0]) if images else 1
        for p in images:
            if not P.is_perm(p, degree):
                raise GroupError("subgroup action images must be permutations of equal degree")
        self.group = group
        self.images = images
        self.degree = degree
        self.kind = kind
        self._index = None

    @classmethod
    def from_hom(cls, f: Homomorphism) -> "SubgroupFI":
        if not isinstance(f.target, FinitePermGroup):
            raise GroupError("kernel form needs a map into a finite permutation group")
        return cls(f.source, f.images, "kernel")

    @classmethod
    def whole(cls, group: Group) -> "SubgroupFI":
        return cls(group, [(0,)] * group.ngens, "kernel")

    def image_of_word(self, w: Word) -> tuple:
        self.group.check_word(w)
        return P.eval_word(w, self.images, self.degree)

    def image(self, x) -> tuple:
        return self.image_of_word(self.group.elem_word(x))

    def contains_word(self, w: Word) -> bool:
        p = self.image_of_word(w)
        return P.is_identity(p) if self.kind == "kernel" else p[0] == 0

    def contains(self, x) -> bool:
        return self.contains_word(self.group.elem_word(x))

    def image_elements(self, limit: int | None = None) -> list:
        if not self.images:
            return [P.identity(self.degree)]
        return P.closure(list(self.images), limit)

    def index(self) -> int:
        if self._index is None:
            if self.kind == "kernel":
                self._index = len(self.image_elements())
            else:
                self._index = len(P.orbit(self.images, 0))
        return self._index

    def pullback(self, f: Homomorphism) -> "SubgroupFI":
        """Preimage under ``f: H -> self.group``."""
        if f.target is not self.group:
            raise GroupError("pullback along a map with the wrong target")
        return SubgroupFI(f.source, [self.image(x) for x in f.images], self.kind)

    def as_hom(self) -> Homomorphism:
        T = FinitePermGroup(self.degree, self.images)
        return Homomorphism(self.group, T, list(self.images))

    def __repr__(self):
        return f"SubgroupFI({self.kind}, degree={self.degree}, group={self.group!r})"


# --- coset enumeration -----------------------------------------------------

class CosetTable:
    """Complete coset table; ``rows[c][2*i]`` is ``c * g_i``, ``rows[c][2*i+1]`` is ``c * g_i^-1``."""

    def __init__(self, ngens: int, rows: list[list[int]]):
        self.ngens = ngens
        self.rows = rows

    def __len__(self):
        return len(self.rows)

    def index(self) -> int:
        return len(self.rows)

    def perm(self, i: int) -> tuple:
        return tuple(r[2 * i] for r in self.rows)

    def perms(self) -> list[tuple]:
        return [self.perm(i) for i in range(self.ngens)]

    def trace(self, w: Word, start: int = 0) -> int:
        c = start
        for g, e in w:
            col = 2 * g + (0 if e > 0 else 1)
            for _ in range(abs(e)):
                c = self.rows[c][col]
        return c

    def subgroup(self, group: Group) -> SubgroupFI:
        return SubgroupFI(group, self.perms(), "stabilizer")


def _letters(w: Word) -> list[int]:
    return [2 * g + (0 if s > 0 else 1) for g, s in W.letters(w)]


def todd_coxeter(ngens: int, relators: Sequence[Word], subgroup_gens: Sequence[Word],
                 max_cosets: int = 100000) -> CosetTable:
    """HLT coset enumeration; the result is renumbered in breadth-first order."""
    ncols = 2 * ngens
    rels = [_letters(r) for r in relators if r]
    hgens = [_letters(h) for h in subgroup_gens if h]
    table: list[list] = [[None] * ncols]
    p = [0]

    def rep(c):
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def merge(a, b, queue):
        a, b = rep(a), rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        p[b] = a
        queue.append(b)

    def coincidence(a, b):
        queue = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(ncols):
                d = table[g][x]
                if d is None:
                    continue
                if table[d][x ^ 1] == g:
                    table[d][x ^ 1] = None
                mu, nu = rep(g), rep(d)
                if table[mu][x] is not None:
                    merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] is not None:
                    merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def define(c, x):
        if len(table) >= max_cosets:
            raise BudgetExhausted(f"coset enumeration reached max_cosets={max_cosets}", len(table))
        d = len(table)
        table.append([None] * ncols)
        p.append(d)
        table[c][x] = d
        table[d][x ^ 1] = c

    def scan_and_fill(c, word):
        f = b = c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            define(f, word[i])

    for h in hgens:
        scan_and_fill(rep(0), h)
    c = 0
    while c < len(table):
        if p[c] == c:
            for r in rels:
                scan_and_fill(c, r)
                if p[c] != c:
                    break
            if p[c] == c:
                for x in range(ncols):
                    if table[c][x] is None:
                        define(c, x)
        c += 1
    # breadth-first renumbering from the subgroup coset
    start = rep(0)
    order = {start: 0}
    queue = [start]
    i = 0
    while i < len(queue):
        c = queue[i]
        i += 1
        for x in range(ncols):
            d = rep(table[c][x])
            if d not in order:
                order[d] = len(queue)
                queue.append(d)
    rows = [[order[rep(table[c][x])] for x in range(ncols)] for c in queue]
    return CosetTable(ngens, rows)


def coset_table(G: Group, subgroup_gens: Sequence[Word], max_cosets: int = 100000) -> CosetTable:
    return todd_coxeter(G.ngens, G.relators(), subgroup_gens, max_cosets)


def subgroup_from_gens(G: Group, subgroup_gens: Sequence[Word], max_cosets: int = 100000) -> SubgroupFI:
    return coset_table(G, subgroup_gens, max_cosets).subgroup(G)


# --- cores and intersections ----------------------------------------------

def normal_core(S: SubgroupFI) -> SubgroupFI:
    """Kernel of the action on the orbit of point 0 (the normal core for stabilizers)."""
    if S.kind == "kernel":
        return S
    pts = P.orbit(S.images, 0)
    return SubgroupFI(S.group, [P.restrict(p, pts) for p in S.images], "kernel")


def _product_action(a: tuple, b: tuple) -> tuple:
    n = len(b)
    return tuple(a[i] * n + b[j] for i in range(len(a)) for j in range(n))


def regular_form(S: SubgroupFI) -> SubgroupFI:
    """Kernel subgroup presented as the stabilizer of the identity in the regular action."""
    if S.kind == "stabilizer":
        return S
    elems = S.image_elements()
    index = {x: i for i, x in enumerate(elems)}
    images = [tuple(index[P.mul(x, g)] for x in elems) for g in S.images]
    return SubgroupFI(S.group, images, "stabilizer")


def intersect(S1: SubgroupFI, S2: SubgroupFI) -> SubgroupFI:
    if S1.group is not S2.group:
        raise GroupError("intersection of subgroups of different groups")
    if S1.kind == "kernel" and S2.kind == "kernel":
        return SubgroupFI(S1.group, [P.direct_sum([a, b]) for a, b in zip(S1.images, S2.images)], "kernel")
    A, B = regular_form(S1), regular_form(S2)
    prod = [_product_action(a, b) for a, b in zip(A.images, B.images)]
    pts = P.orbit(prod, 0) if prod else [0]
    return SubgroupFI(S1.group, [P.restrict(p, pts) for p in prod] or [], "stabilizer")


def same_subgroup(S1: SubgroupFI, S2: SubgroupFI) -> bool:
    """Equal subgroups iff the intersection has the index of each."""
    if S1.kind == S2.kind == "kernel":
        i = intersect(S1, S2).index()
        return i == S1.index() == S2.index()
    i = intersect(S1, S2).index()
    return i == regular_form(S1).index() == regular_form(S2).index()


def is_subgroup_of(S1: SubgroupFI, S2: SubgroupFI) -> bool:
    """``S1 <= S2`` iff ``S1 cap S2 = S1``."""
    return intersect(S1, S2).index() == (S1.index() if S1.kind == "kernel" else regular_form(S1).index())


def kernel_contained(S1: SubgroupFI, S2: SubgroupFI) -> bool:
    """``ker S1 <= ker S2`` for kernel forms: the joint image is no larger than ``Im S1``."""
    return intersect(S1, S2).index() == S1.index()


# --- stabilization under an endomorphism ---------------------------------

def compose_endo(phi: Homomorphism, images: Sequence[tuple], degree: int) -> list[tuple]:
    """Images of ``q o phi`` given images of ``q``."""
    G = phi.source
    return [P.eval_word(G.elem_word(x), images, degree) for x in phi.images]


def image_order(images: Sequence[tuple], limit: int | None = None) -> int:
    if not images:
        return 1
    return len(P.closure(list(images), limit))


def phi_invariant(phi: Homomorphism, S: SubgroupFI) -> bool:
    """``phi(N) <= N`` for kernel-form ``N``."""
    S = normal_core(S)
    q = S.images
    qphi = compose_endo(phi, q, S.degree)
    joint = [P.direct_sum([a, b]) for a, b in zip(q, qphi)]
    return image_order(joint) == image_order(q)


def phi_stable_core(phi: Homomorphism, S: SubgroupFI) -> SubgroupFI:
    """``M = cap_i ker(q o phi^i)``: the largest ``phi``-invariant normal subgroup in ``N``."""
    if not phi.is_endomorphism() or phi.source is not S.group:
        raise GroupError("phi_stable_core needs an endomorphism of the subgroup's ambient group")
    N = normal_core(S)
    deg = N.degree
    layers = [N.images]
    seen = {N.images}
    current = N.images
    joint = list(N.images)
    order = image_order(joint)
    while True:
        current = tuple(compose_endo(phi, current, deg))
        if current in seen:
            break
        seen.add(current)
        cand = [P.direct_sum([a, b]) for a, b in zip(joint, current)]
        o = image_order(cand)
        if o == order:
            break
        layers.append(current)
        joint, order = cand, o
    return SubgroupFI(N.group, joint, "kernel")


def phi_stable_closure(phi: Homomorphism, S: SubgroupFI) -> tuple[SubgroupFI, int]:
    """``M = ker(q o phi^j)`` for the first ``j`` where the chain stops growing.

    Returns ``(M, j)``; the endomorphism induced on ``G/M`` is bijective.
    """
    N = normal_core(S)
    if not phi_invariant(phi, N):
        raise GroupError("phi_stable_closure requires phi(N) <= N")
    deg = N.degree
    cur = N.images
    o = image_order(cur)
    j = 0
    while True:
        nxt = tuple(compose_endo(phi, cur, deg))
        o2 = image_order(nxt)
        if o2 == o:
            return SubgroupFI(N.group, cur, "kernel"), j
        cur, o, j = nxt, o2, j + 1


# --- finite quotients ------------------------------------------------------

class FiniteQuotient:
    """``G/M`` for kernel-form ``M``: image elements in BFS order and their words."""

    def __init__(self, S: SubgroupFI):
        S = normal_core(S)
        self.subgroup = S
        self.group = S.group
        self.degree = S.degree
        gens = list(S.images)
        e = P.identity(self.degree)
        words = {e: W.EMPTY}
        elems = [e]
        i = 0
        while i < len(elems):
            x = elems[i]
            i += 1
            for k, g in enumerate(gens):
                y = P.mul(x, g)
                if y not in words:
                    words[y] = W.mul(words[x], W.gen(k))
                    elems.append(y)
        self.elements = elems
        self.words = words
        self.position = {x: i for i, x in enumerate(elems)}

    def __len__(self):
        return len(self.elements)

    def regular_images(self) -> list[tuple]:
        """Right-regular permutation of each generator on the element list."""
        return [tuple(self.position[P.mul(x, g)] for x in self.elements) for g in self.subgroup.images]

    def induced_map(self, phi: Homomorphism) -> tuple:
        """The endomorphism of ``G/M`` induced by ``phi`` as a map on element positions."""
        imgs = compose_endo(phi, self.subgroup.images, self.degree)
        out = []
        for x in self.elements:
            y = P.eval_word(self.words[x], imgs, self.degree)
            out.append(self.position[y])
        return tuple(out)
