"""Stallings foldings for finitely generated subgroups of free groups.

Each edge carries, besides its free-generator letter, a label word over the
subgroup generators.  The labels keep the invariant
``value(label) = tau(u) * x * tau(w)^-1`` for a potential ``tau`` on
vertices with ``tau(base) = 1``, so reading a closed path at the base
yields an expression of the path's word in the subgroup generators.
"""

from __future__ import annotations

from typing import Sequence

from . import words as W
from .words import Word


class StallingsGraph:
    BASE = 0

    def __init__(self, ngens: int, subgroup_gens: Sequence[Word]):
        self.ngens = ngens
        self.subgroup_gens = [W.word(h) for h in subgroup_gens]
        self._next = 1
        # edges: id -> [src, gen, dst, label]
        self.edges: dict[int, list] = {}
        self._eid = 0
        for i, h in enumerate(self.subgroup_gens):
            self._add_loop(h, i)
        self._fold()

    def _new_vertex(self) -> int:
        v = self._next
        self._next += 1
        return v

    def _add_edge(self, u, x, w, label):
        self.edges[self._eid] = [u, x, w, label]
        self._eid += 1

    def _add_loop(self, h: Word, index: int):
        lets = W.letters(h)
        if not lets:
            return
        verts = [self.BASE] + [self._new_vertex() for _ in range(len(lets) - 1)] + [self.BASE]
        for j, (x, s) in enumerate(lets):
            label = W.gen(index) if j == len(lets) - 1 else W.EMPTY
            a, b = verts[j], verts[j + 1]
            if s > 0:
                self._add_edge(a, x, b, label)
            else:
                self._add_edge(b, x, a, W.inverse(label))

    def _find_fold(self):
        out: dict = {}
        inc: dict = {}
        for eid, (u, x, w, _) in self.edges.items():
            k = (u, x)
            if k in out:
                return out[k], eid, "out"
            out[k] = eid
            k = (w, x)
            if k in inc:
                return inc[k], eid, "in"
            inc[k] = eid
        return None

    def _fold(self):
        while True:
            found = self._find_fold()
            if found is None:
                break
            e1, e2, mode = found
            u1, x, w1, l1 = self.edges[e1]
            u2, _, w2, l2 = self.edges[e2]
            if mode == "out":
                a, b = w1, w2
                # tau(a) tau(b)^-1 = l1^-1 l2
                if a == b:
                    del self.edges[e2]
                    continue
                keep, gone = min(a, b), max(a, b)
                ab = W.mul(W.inverse(l1), l2)
            else:
                a, b = u1, u2
                # tau(a) tau(b)^-1 = l1 l2^-1
                if a == b:
                    del self.edges[e2]
                    continue
                keep, gone = min(a, b), max(a, b)
                ab = W.mul(l1, W.inverse(l2))
            delta = ab if keep == a else W.inverse(ab)
            for e in self.edges.values():
                if e[0] == gone:
                    e[0] = keep
                    e[3] = W.mul(delta, e[3])
                if e[2] == gone:
                    e[2] = keep
                    e[3] = W.mul(e[3], W.inverse(delta))

    def vertices(self) -> set[int]:
        vs = {self.BASE}
        for u, _, w, _ in self.edges.values():
            vs.add(u)
            vs.add(w)
        return vs

    def rank(self) -> int:
        return len(self.edges) - len(self.vertices()) + 1

    def _adjacency(self):
        adj: dict = {}
        for u, x, w, lab in self.edges.values():
            adj[(u, x, 1)] = (w, lab)
            adj[(w, x, -1)] = (u, W.inverse(lab))
        return adj

    def read(self, w: Word):
        """Follow ``w`` from the base: ``(end vertex or None, label product)``."""
        adj = self._adjacency()
        v = self.BASE
        expr = []
        for x, s in W.letters(w):
            step = adj.get((v, x, s))
            if step is None:
                return None, None
            v, lab = step
            expr.append(lab)
        return v, W.mul(*expr)

    def contains(self, w: Word):
        v, expr = self.read(w)
        if v == self.BASE:
            return True, expr
        return False, None

    def basis(self) -> list[Word]:
        """Free basis from a breadth-first spanning tree, in edge order."""
        adj = self._adjacency()
        tree_word = {self.BASE: W.EMPTY}
        tree_edges = set()
        queue = [self.BASE]
        order = sorted(self.edges.items())
        i = 0
        while i < len(queue):
            v = queue[i]
            i += 1
            for eid, (u, x, w, _) in order:
                if u == v and w not in tree_word:
                    tree_word[w] = W.mul(tree_word[v], W.gen(x))
                    tree_edges.add(eid)
                    queue.append(w)
                elif w == v and u not in tree_word:
                    tree_word[u] = W.mul(tree_word[v], W.gen(x, -1))
                    tree_edges.add(eid)
                    queue.append(u)
        del adj
        out = []
        for eid, (u, x, w, _) in order:
            if eid not in tree_edges:
                out.append(W.mul(tree_word[u], W.gen(x), W.inverse(tree_word[w])))
        return out


def stallings_membership(ngens: int, subgroup_gens: Sequence[Word], w: Word):
    """``(member, expression)``; the expression is a word in the subgroup generators."""
    return StallingsGraph(ngens, subgroup_gens).contains(w)


def subgroup_rank(ngens: int, subgroup_gens: Sequence[Word]) -> int:
    return StallingsGraph(ngens, subgroup_gens).rank()
