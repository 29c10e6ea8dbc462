"""Permutation arithmetic on tuples.

A permutation of ``{0, ..., n-1}`` is a tuple ``p`` with ``p[i]`` the image of
``i``.  Products compose left to right: ``mul(p, q)`` applies ``p`` first,
then ``q`` (right actions, as in GAP).
"""

from __future__ import annotations

from typing import Iterable, Sequence

Perm = tuple


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_identity(p: Perm) -> bool:
    return all(i == x for i, x in enumerate(p))


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[i] for i in p)


def inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def power(p: Perm, e: int) -> Perm:
    n = len(p)
    if e < 0:
        p, e = inv(p), -e
    result = identity(n)
    base = p
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result


def is_perm(p: Sequence[int], n: int | None = None) -> bool:
    if n is not None and len(p) != n:
        return False
    return sorted(p) == list(range(len(p)))


def order(p: Perm) -> int:
    from math import lcm

    seen = [False] * len(p)
    result = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        result = lcm(result, length)
    return result


def cycle(n: int, points: Sequence[int]) -> Perm:
    """The cycle ``points[0] -> points[1] -> ...`` on ``n`` points."""
    out = list(range(n))
    for a, b in zip(points, list(points[1:]) + [points[0]]):
        out[a] = b
    return tuple(out)


def direct_sum(perms: Sequence[Perm]) -> Perm:
    """Act by each permutation on its own block of consecutive points."""
    out: list[int] = []
    offset = 0
    for p in perms:
        out.extend(x + offset for x in p)
        offset += len(p)
    return tuple(out)


def eval_word(word, images: Sequence[Perm], degree: int | None = None) -> Perm:
    if degree is None:
        degree = len(images[0]) if images else 0
    result = identity(degree)
    for g, e in word:
        result = mul(result, power(images[g], e))
    return result


def closure(gens: Sequence[Perm], limit: int | None = None) -> list[Perm]:
    """All elements of the group generated by ``gens`` in BFS order.

    The identity comes first; the order is deterministic given ``gens``.
    """
    if not gens:
        return []
    n = len(gens[0])
    e = identity(n)
    seen = {e: 0}
    elems = [e]
    i = 0
    while i < len(elems):
        x = elems[i]
        i += 1
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen[y] = len(elems)
                elems.append(y)
                if limit is not None and len(elems) > limit:
                    raise OverflowError(f"group order exceeds {limit}")
    return elems


def orbit(gens: Iterable[Perm], point: int) -> list[int]:
    gens = list(gens)
    seen = {point}
    out = [point]
    i = 0
    while i < len(out):
        x = out[i]
        i += 1
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                out.append(y)
    return out


def restrict(p: Perm, points: Sequence[int]) -> Perm:
    """Restriction to an invariant set, renumbered by position in ``points``."""
    index = {x: i for i, x in enumerate(points)}
    return tuple(index[p[x]] for x in points)
