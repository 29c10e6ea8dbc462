"""Right-angled Artin groups: normal forms, the one-vertex HNN decomposition
and the recursive embedding of special subgroups.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import words as W
from .findex import SubgroupFI, normal_core, regular_form, todd_coxeter
from .groups import Group, GroupError
from .splittings import EmbeddingCert, hnn_finite_realization, verify_embedding, _quotient_group, QA_elem_perm
from .words import Word


class RaagGraph:
    def __init__(self, vertices: Sequence[str], edges: Iterable[tuple]):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise GroupError("vertex names must be distinct")
        idx = {v: i for i, v in enumerate(self.vertices)}
        adj = [set() for _ in self.vertices]
        for e in edges:
            a, b = e
            a = idx[a] if isinstance(a, str) else a
            b = idx[b] if isinstance(b, str) else b
            if not (0 <= a < len(adj) and 0 <= b < len(adj)):
                raise GroupError(f"edge {e!r} references an unknown vertex")
            if a == b:
                raise GroupError("loops are not allowed")
            adj[a].add(b)
            adj[b].add(a)
        self.adj = [frozenset(s) for s in adj]

    def edges(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a in range(len(self.adj)) for b in self.adj[a] if a < b)

    def induced(self, keep: Sequence[int]) -> "RaagGraph":
        keep = sorted(keep)
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[a], pos[b]) for a, b in self.edges() if a in pos and b in pos]
        return RaagGraph([self.vertices[v] for v in keep], edges)


class Raag(Group):
    kind = "raag"

    def __init__(self, graph: RaagGraph):
        self.graph = graph
        self.names = graph.vertices

    def commute(self, a: int, b: int) -> bool:
        return b in self.graph.adj[a]

    # elements are canonical words
    def identity(self):
        return W.EMPTY

    def gen(self, i):
        return W.gen(i)

    def mul(self, a, b):
        return raag_normal_form(self, W.mul(a, b))

    def inv(self, a):
        return raag_normal_form(self, W.inverse(a))

    def normal_form(self, w: Word):
        return raag_normal_form(self, w)

    def elem_word(self, x) -> Word:
        return x

    def relators(self) -> list[Word]:
        return [W.commutator(W.gen(a), W.gen(b)) for a, b in self.graph.edges()]

    def induced(self, keep: Sequence[int]) -> "Raag":
        return Raag(self.graph.induced(keep))


def raag_normal_form(G: Raag, w: Word) -> Word:
    """Reduce by cancelling across commuting letters, then take the lex-least linearization."""
    G.check_word(w)
    syl: list[list[int]] = []
    for g, e in w:
        j = len(syl) - 1
        while j >= 0 and syl[j][0] != g and G.commute(syl[j][0], g):
            j -= 1
        if j >= 0 and syl[j][0] == g:
            syl[j][1] += e
            if syl[j][1] == 0:
                del syl[j]
        else:
            syl.append([g, e])
    # greedy: the smallest vertex whose syllable commutes past everything before it
    out = []
    rest = syl
    while rest:
        best = None
        for j, (g, e) in enumerate(rest):
            if all(G.commute(h, g) for h, _ in rest[:j]):
                if best is None or g < rest[best][0]:
                    best = j
        out.append(tuple(rest[best]))
        rest = rest[:best] + rest[best + 1:]
    return W.word(out)


def raag_decompose(G: Raag, y0: int) -> tuple[Raag, list[int], list[int]]:
    """``G = HNN(H, y0)`` over ``<Y>`` with identity association.

    Returns ``H``, the vertices of ``H`` as indices of ``G`` and ``Y`` as
    indices of ``H``.
    """
    if not 0 <= y0 < G.ngens:
        raise GroupError(f"vertex {y0} out of range")
    keep = [v for v in range(G.ngens) if v != y0]
    H = G.induced(keep)
    pos = {v: i for i, v in enumerate(keep)}
    Y = [pos[v] for v in sorted(G.graph.adj[y0])]
    return H, keep, Y


def special_subgroup_table(G: Raag, Xp: Sequence[int], gens: Sequence[Word], max_cosets: int = 100000):
    """Coset table of ``<gens>`` inside the RAAG on the induced subgraph ``Xp``."""
    sub = G.induced(Xp)
    return sub, todd_coxeter(sub.ngens, sub.relators(), gens, max_cosets)


def _special_normal(G: Raag, Xp: list[int], U: SubgroupFI) -> tuple[SubgroupFI, list]:
    """``N`` normal of finite index in ``G`` with ``N cap <Xp> <= U``, plus the recursion trace."""
    if len(Xp) == G.ngens:
        # an action whose point stabilizer is U and whose kernel is its core
        act = regular_form(U) if U.kind == "kernel" else normal_core(U)
        return SubgroupFI(G, act.images, "kernel"), ["base"]
    x = min(v for v in range(G.ngens) if v not in Xp)
    H, keep, Y = raag_decompose(G, x)
    pos = {v: i for i, v in enumerate(keep)}
    NH, trace = _special_normal(H, [pos[v] for v in Xp], U)
    Hf, Q = _quotient_group(NH)
    ybar = [QA_elem_perm(Hf, Q, Q.position[NH.image(W.gen(y))]) for y in Y]
    R = hnn_finite_realization(Hf, ybar, ybar)
    images = [None] * G.ngens
    for v, i in pos.items():
        images[v] = R.images[i]
    images[x] = R.sigma
    return SubgroupFI(G, images, "kernel"), trace + [G.names[x]]


def special_embed(G: Raag, Xp: Sequence[int], U: SubgroupFI) -> EmbeddingCert:
    """Certificate that ``<Xp>`` is topologically embedded: ``V cap <Xp> <= U``.

    ``U`` is a subgroup of the RAAG on the induced subgraph ``Xp`` (vertices
    in increasing order).
    """
    Xp = sorted(set(Xp))
    if any(not 0 <= v < G.ngens for v in Xp):
        raise GroupError("special subgroup vertex out of range")
    if U.group.ngens != len(Xp):
        raise GroupError("constraint must live on the special subgroup")
    N, trace = _special_normal(G, Xp, U)
    deg = N.degree
    cert = EmbeddingCert(deg, list(N.images),
                         [("X'", [W.gen(v) for v in Xp], list(U.images), U.kind)],
                         {"construction": "raag", "recursion": trace})
    if not verify_embedding(cert, G.relators(), G.ngens):
        raise GroupError("internal error: special embedding certificate failed verification")
    return cert
