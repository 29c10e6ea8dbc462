"""Independent certificate checks by permutation arithmetic.

Nothing here imports the construction engines; inputs are plain words
(sequences of ``(generator, exponent)``) and permutations (sequences of
ints).  Group-specific facts come in as relator lists and, for the two
claims that need it, a word-problem callback.
"""

from __future__ import annotations

from typing import Callable, Sequence


def _is_perm(p, n) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


def _mul(p, q):
    return tuple(q[i] for i in p)


def _inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _eval(word, images, n):
    x = tuple(range(n))
    for g, e in word:
        if not 0 <= g < len(images):
            raise ValueError("generator index out of range")
        p = images[g] if e > 0 else _inv(images[g])
        for _ in range(abs(e)):
            x = _mul(x, p)
    return x


def _identity(p) -> bool:
    return all(i == x for i, x in enumerate(p))


def _valid_images(images, ngens: int) -> int | None:
    if len(images) != ngens or not images:
        return None
    n = len(images[0])
    if n < 1 or not all(_is_perm(tuple(p), n) for p in images):
        return None
    return n


def relators_hold(relators, images) -> bool:
    images = [tuple(p) for p in images]
    n = len(images[0]) if images else 1
    return all(_identity(_eval(r, images, n)) for r in relators)


def _substitute(word, images):
    out = []
    for g, e in word:
        img = images[g]
        if e < 0:
            img = [(a, -b) for a, b in reversed(img)]
        for _ in range(abs(e)):
            for s in img:
                if out and out[-1][0] == s[0]:
                    v = out[-1][1] + s[1]
                    out.pop()
                    if v:
                        out.append((s[0], v))
                else:
                    out.append(tuple(s))
    return out


def hnn_relators(base_relators, phi_words):
    t = len(phi_words)
    rels = [list(r) for r in base_relators]
    for i, w in enumerate(phi_words):
        inv = [(a, -b) for a, b in reversed(w)]
        rels.append([(t, -1), (i, 1), (t, 1)] + inv)
    return rels


def check_separation(base_relators, phi_words, images, element) -> bool:
    """Images define a map of the ascending HNN group and the element survives."""
    try:
        n = _valid_images(images, len(phi_words) + 1)
        if n is None:
            return False
        images = [tuple(p) for p in images]
        if not relators_hold(hnn_relators(base_relators, phi_words), images):
            return False
        return not _identity(_eval(element, images, n))
    except (ValueError, IndexError, TypeError):
        return False


def _closure(gens, limit):
    n = len(gens[0])
    e = tuple(range(n))
    seen = {e}
    out = [e]
    i = 0
    while i < len(out):
        x = out[i]
        i += 1
        for g in gens:
            y = _mul(x, g)
            if y not in seen:
                seen.add(y)
                out.append(y)
                if len(out) > limit:
                    raise OverflowError("image too large to check")
    return out


def check_witness(relators, phi_words, element, N_images, trivial_from,
                  is_trivial: Callable[[Sequence], bool] | None = None, limit: int = 200000) -> bool:
    """Property P witness with kernel-form ``N``.

    Checks that the action is a homomorphism, ``phi(N) <= N``, that the
    orbit of ``g N`` under the induced map avoids the identity (for all
    ``i`` when ``trivial_from`` is ``None``, for ``i < trivial_from``
    otherwise) and that ``phi^trivial_from(g) = 1`` through ``is_trivial``.
    """
    try:
        ngens = len(phi_words)
        if ngens == 0:
            return trivial_from == 0 or trivial_from is None and not element
        n = _valid_images(N_images, ngens)
        if n is None:
            return False
        q = [tuple(p) for p in N_images]
        if not relators_hold(relators, q):
            return False
        qphi = [_eval(w, q, n) for w in phi_words]
        joint = [p + tuple(x + n for x in r) for p, r in zip(q, qphi)]
        if len(_closure(joint, limit)) != len(_closure(q, limit)):
            return False
        # orbit of phi^i(g) N: follow q o phi^i on generators until it repeats
        cur = q
        seen = set()
        i = 0
        while True:
            img = _eval(element, cur, n)
            if trivial_from is not None and i >= trivial_from:
                break
            if _identity(img):
                return False
            key = tuple(cur)
            if trivial_from is None and key in seen:
                break
            seen.add(key)
            cur = [_eval(w, cur, n) for w in phi_words]
            i += 1
        if trivial_from is None:
            return True
        if is_trivial is None:
            return False
        x = list(element)
        for _ in range(trivial_from):
            x = _substitute(x, phi_words)
        return bool(is_trivial(x))
    except (ValueError, IndexError, TypeError, OverflowError):
        return False


def check_embedding(relators, ngens: int, images, factors, limit: int = 200000) -> bool:
    """``theta^-1(Stab(0)) cap G_i <= N_i`` for each factor.

    ``factors`` lists ``(generator_words, constraint_images, constraint_kind)``:
    the factor's generators as words in the ambient generators and the
    action defining ``N_i`` (kernel or stabilizer of point 0).
    """
    try:
        n = _valid_images(images, ngens)
        if n is None:
            return False
        images = [tuple(p) for p in images]
        if not relators_hold(relators, images):
            return False
        for gen_words, c_images, kind in factors:
            if not gen_words:
                continue
            if len(c_images) != len(gen_words):
                return False
            m = len(c_images[0])
            if not all(_is_perm(tuple(p), m) for p in c_images):
                return False
            if kind not in ("kernel", "stabilizer"):
                return False
            diag = [_eval(w, images, n) + tuple(x + n for x in c) for w, c in zip(gen_words, c_images)]
            for x in _closure(diag, limit):
                if x[0] == 0:
                    c = tuple(v - n for v in x[n:])
                    ok = _identity(c) if kind == "kernel" else c[0] == 0
                    if not ok:
                        return False
        return True
    except (ValueError, IndexError, TypeError, OverflowError):
        return False


def check_constraint_hom(relators, images) -> bool:
    """A constraint action is a homomorphism of the factor."""
    try:
        if not images:
            return True
        n = len(images[0])
        if not all(_is_perm(tuple(p), n) for p in images):
            return False
        return relators_hold(relators, images)
    except (ValueError, IndexError, TypeError):
        return False


def check_quasipotency(relators, images, element, k: int, n: int) -> bool:
    """``<g> cap ker = <g^{nk}>``: the image of ``g`` has order exactly ``n k``."""
    try:
        if not relators_hold(relators, images):
            return False
        deg = len(images[0]) if images else 1
        p = _eval(element, [tuple(x) for x in images], deg)
        o = 1
        x = p
        while not _identity(x):
            x = _mul(x, p)
            o += 1
            if o > n * k:
                return False
        return o == n * k
    except (ValueError, IndexError, TypeError):
        return False
