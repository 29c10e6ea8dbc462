"""Lattice descriptions of finite-index subgroups of f.g. abelian groups."""

from __future__ import annotations

from math import gcd, prod
from typing import Sequence

from . import intlat
from . import perm as P
from .groups import FgAbelianGroup, GroupError, Homomorphism, abelian_matrix
from .findex import SubgroupFI, normal_core


def relation_lattice(A: FgAbelianGroup) -> list[list[int]]:
    """Generators of the relations ``d_i e_{r+i}`` inside ``Z^dim``."""
    out = []
    for k, d in enumerate(A.torsion):
        v = [0] * A.dim
        v[A.rank + k] = d
        out.append(v)
    return out


def lattice_subgroup(A: FgAbelianGroup, gens: Sequence[Sequence[int]], limit: int = 100000) -> SubgroupFI:
    """Kernel form of ``A -> A/L`` (``L`` spanned by ``gens``), via the regular action."""
    n = A.dim
    rank, torsion, Pm = intlat.quotient([list(g) for g in gens] + relation_lattice(A), n)
    if rank:
        raise GroupError("sublattice has infinite index")
    size = prod(torsion) if torsion else 1
    if size > limit:
        raise GroupError(f"quotient of order {size} exceeds {limit}")
    # mixed-radix point numbering
    radix = []
    acc = 1
    for t in reversed(torsion):
        radix.append(acc)
        acc *= t
    radix.reverse()

    def index(v):
        return sum((x % t) * r for x, t, r in zip(v, torsion, radix))

    points = []
    for i in range(size):
        v = []
        for t, r in zip(torsion, radix):
            v.append((i // r) % t)
        points.append(v)
    images = []
    for j in range(n):
        col = [row[j] for row in Pm]
        images.append(tuple(index([a + b for a, b in zip(v, col)]) for v in points))
    if not images:
        return SubgroupFI(A, [], "kernel")
    return SubgroupFI(A, images, "kernel")


def multiple_subgroup(A: FgAbelianGroup, m: int) -> SubgroupFI:
    """``mA``."""
    gens = []
    for i in range(A.dim):
        v = [0] * A.dim
        v[i] = m
        gens.append(v)
    return lattice_subgroup(A, gens)


def kernel_lattice(S: SubgroupFI) -> list[list[int]]:
    """Hermite basis (in ``Z^dim``, containing the relations) of a kernel-form subgroup."""
    A = S.group
    S = normal_core(S)
    n = A.ngens
    e = P.identity(S.degree)
    vec = {e: [0] * n}
    elems = [e]
    rels = list(relation_lattice(A)) if isinstance(A, FgAbelianGroup) else []
    i = 0
    while i < len(elems):
        x = elems[i]
        i += 1
        for k, g in enumerate(S.images):
            y = P.mul(x, g)
            v = list(vec[x])
            v[k] += 1
            if y not in vec:
                vec[y] = v
                elems.append(y)
            else:
                rels.append([a - b for a, b in zip(v, vec[y])])
    return intlat.hermite_basis(rels, n)


def preimage_lattice(matrix: Sequence[Sequence[int]], L: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """``{x in Z^n : M x in L}`` as a Hermite basis."""
    L = [list(v) for v in L if any(v)]
    m = len(matrix)
    k = len(L)
    a = [list(matrix[i]) + [-L[j][i] for j in range(k)] for i in range(m)]
    kern = intlat.nullspace(a, n + k)
    return intlat.hermite_basis([v[:n] for v in kern], n)


def lift_matrix(phi: Homomorphism) -> list[list[int]]:
    return abelian_matrix(phi)


def kernel_chain(phi: Homomorphism) -> tuple[list[list[int]], int]:
    """``C = union_i ker phi^i`` as a lattice in ``Z^dim`` plus the stabilization step."""
    A = phi.source
    n = A.dim
    M = lift_matrix(phi)
    R = intlat.hermite_basis(relation_lattice(A), n)
    cur = R
    s = 0
    while True:
        nxt = preimage_lattice(M, cur, n)
        nxt = intlat.hermite_basis(nxt + R, n)
        if intlat.same_lattice(nxt, cur, n):
            return cur, s
        cur = nxt
        s += 1


def is_injective_abelian(phi: Homomorphism) -> bool:
    """Kernel ``{x : M x in R_target}`` must lie in the source relations."""
    A, B = phi.source, phi.target
    n = A.dim
    R = intlat.hermite_basis(relation_lattice(A), n)
    K = preimage_lattice(lift_matrix(phi), relation_lattice(B), n)
    return all(intlat.in_lattice(v, R) for v in K)


def in_subgroup(A: FgAbelianGroup, v: Sequence[int], gens) -> bool:
    return intlat.in_lattice(list(v), [list(g) for g in gens] + relation_lattice(A))


def element_content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


class AbelianQuotient:
    """``pi: A ->> A/C`` with the induced endomorphism data."""

    def __init__(self, A: FgAbelianGroup, C: Sequence[Sequence[int]]):
        n = A.dim
        rank, torsion, Pm = intlat.quotient([list(v) for v in C] + relation_lattice(A), n)
        self.A = A
        self.Q = FgAbelianGroup(rank, torsion)
        self.P = Pm
        self.pi = Homomorphism(A, self.Q, [self.Q.reduce([row[j] for row in Pm]) for j in range(n)])
        dq = self.Q.dim
        aug = [list(Pm[i]) + [torsion[k] if i == rank + k else 0 for k in range(len(torsion))]
               for i in range(dq)]
        self.lifts = []
        for j in range(dq):
            x = intlat.solve(aug, [int(i == j) for i in range(dq)], n + len(torsion))
            self.lifts.append(A.reduce(x[:n]))

    def induced(self, phi: Homomorphism) -> Homomorphism:
        return Homomorphism(self.Q, self.Q, [self.pi.apply_elem(phi.apply_elem(v)) for v in self.lifts])
