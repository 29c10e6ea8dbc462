"""Group representations with canonical normal forms.

Every class here solves its word problem: ``normal_form`` maps a word to a
hashable canonical element, and two words are equal in the group exactly when
their canonical elements are equal.  All values are immutable after
construction apart from internal caches.
"""

from __future__ import annotations

import random
from functools import reduce
from typing import Sequence

from . import perm as P
from . import words as W
from .words import Word


class GroupError(ValueError):
    pass


class InconsistentPresentation(GroupError):
    pass


def default_names(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


class Group:
    """Common interface.  Subclasses define the element representation."""

    kind = "group"
    names: tuple[str, ...] = ()

    @property
    def ngens(self) -> int:
        return len(self.names)

    def check_word(self, w: Word) -> None:
        for g, _ in w:
            if not 0 <= g < self.ngens:
                raise GroupError(f"generator index {g} out of range for {self.ngens} generators")

    def normal_form(self, w: Word):
        self.check_word(w)
        x = self.identity()
        for g, e in w:
            x = self.mul(x, self.power(self.gen(g), e))
        return x

    def power(self, x, e: int):
        if e < 0:
            x, e = self.inv(x), -e
        result = self.identity()
        while e:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def is_identity(self, x) -> bool:
        return x == self.identity()

    def equal(self, u: Word, v: Word) -> bool:
        return self.normal_form(u) == self.normal_form(v)

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.ngens)]

    def name_map(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def parse(self, text: str) -> Word:
        return W.parse_word(text, self.name_map())

    def format(self, w: Word) -> str:
        return W.format_word(w, self.names)

    def random_word(self, rng: random.Random, length: int) -> Word:
        if self.ngens == 0:
            return W.EMPTY
        return W.word((rng.randrange(self.ngens), rng.choice((-1, 1))) for _ in range(length))

    # subclasses: identity, gen, mul, inv, elem_word, relators


class FreeGroup(Group):
    kind = "free"

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        if rank < 0:
            raise GroupError("rank must be nonnegative")
        self.rank = rank
        self.names = tuple(names) if names is not None else default_names("x", rank)
        if len(self.names) != rank or len(set(self.names)) != rank:
            raise GroupError("free group needs one distinct name per generator")

    def identity(self):
        return W.EMPTY

    def gen(self, i):
        return W.gen(i)

    def mul(self, a, b):
        return W.mul(a, b)

    def inv(self, a):
        return W.inverse(a)

    def power(self, x, e):
        return W.power(x, e)

    def normal_form(self, w):
        self.check_word(w)
        return W.word(w)

    def elem_word(self, x) -> Word:
        return x

    def relators(self) -> list[Word]:
        return []

    def __repr__(self):
        return f"FreeGroup({self.rank})"


class FgAbelianGroup(Group):
    """``Z^rank + Z/d_1 + ... + Z/d_s`` with ``d_1 | d_2 | ...``.

    Elements are integer tuples of length ``rank + s``; the torsion
    coordinates are reduced into ``[0, d_i)``.  Generator ``i`` is the
    ``i``-th unit vector.
    """

    kind = "abelian"

    def __init__(self, rank: int, torsion: Sequence[int] = (), names: Sequence[str] | None = None):
        torsion = tuple(int(d) for d in torsion)
        if rank < 0:
            raise GroupError("rank must be nonnegative")
        if any(d < 2 for d in torsion):
            raise GroupError("invariant factors must be at least 2")
        if any(torsion[i + 1] % torsion[i] for i in range(len(torsion) - 1)):
            raise GroupError("invariant factors must form a divisibility chain")
        self.rank = rank
        self.torsion = torsion
        n = rank + len(torsion)
        self.names = tuple(names) if names is not None else default_names("e", n)
        if len(self.names) != n or len(set(self.names)) != n:
            raise GroupError("abelian group needs one distinct name per coordinate")

    @property
    def dim(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Per-coordinate modulus, 0 for free coordinates."""
        return (0,) * self.rank + self.torsion

    def reduce(self, v: Sequence[int]) -> tuple:
        return tuple(x % m if m else x for x, m in zip(v, self.moduli))

    def identity(self):
        return (0,) * self.dim

    def gen(self, i):
        return self.reduce([int(i == j) for j in range(self.dim)])

    def mul(self, a, b):
        return self.reduce([x + y for x, y in zip(a, b)])

    def inv(self, a):
        return self.reduce([-x for x in a])

    def power(self, x, e):
        return self.reduce([e * v for v in x])

    def normal_form(self, w):
        self.check_word(w)
        v = [0] * self.dim
        for g, e in w:
            v[g] += e
        return self.reduce(v)

    def elem_word(self, x) -> Word:
        return W.word((i, c) for i, c in enumerate(x))

    def relators(self) -> list[Word]:
        rels = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                rels.append(W.commutator(W.gen(i), W.gen(j)))
        for k, d in enumerate(self.torsion):
            rels.append(W.gen(self.rank + k, d))
        return rels

    def element_order(self, x) -> int:
        """Order of ``x``; 0 means infinite."""
        from math import gcd, lcm

        if any(x[: self.rank]):
            return 0
        o = 1
        for c, d in zip(x[self.rank:], self.torsion):
            o = lcm(o, d // gcd(c, d))
        return o

    def exponent(self) -> int:
        return self.torsion[-1] if self.torsion else 1

    def __repr__(self):
        return f"FgAbelianGroup({self.rank}, {list(self.torsion)})"


class FinitePermGroup(Group):
    kind = "finite"

    def __init__(self, degree: int, generators: Sequence[Sequence[int]], names: Sequence[str] | None = None,
                 max_order: int = 100000):
        self.degree = degree
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if not P.is_perm(g, degree):
                raise GroupError(f"{list(g)} is not a permutation of {degree} points")
            gens.append(g)
        self.generators = tuple(gens)
        self.names = tuple(names) if names is not None else default_names("g", len(gens))
        if len(self.names) != len(gens) or len(set(self.names)) != len(gens):
            raise GroupError("finite group needs one distinct name per generator")
        self.max_order = max_order
        self._elements = None
        self._words = None

    def identity(self):
        return P.identity(self.degree)

    def gen(self, i):
        return self.generators[i]

    def mul(self, a, b):
        return P.mul(a, b)

    def inv(self, a):
        return P.inv(a)

    def power(self, x, e):
        return P.power(x, e)

    def is_identity(self, x):
        return P.is_identity(x)

    def _enumerate(self):
        if self._elements is not None:
            return
        e = self.identity()
        words = {e: W.EMPTY}
        elems = [e]
        edges = []
        i = 0
        while i < len(elems):
            x = elems[i]
            i += 1
            for k, g in enumerate(self.generators):
                y = P.mul(x, g)
                if y not in words:
                    words[y] = W.mul(words[x], W.gen(k))
                    elems.append(y)
                    if len(elems) > self.max_order:
                        raise GroupError(f"group order exceeds {self.max_order}")
                else:
                    edges.append((x, k, y))
        self._elements = elems
        self._words = words
        self._nontree = edges

    def elements(self) -> list:
        self._enumerate()
        return list(self._elements)

    def order(self) -> int:
        self._enumerate()
        return len(self._elements)

    def index_of(self, x) -> int:
        self._enumerate()
        if not hasattr(self, "_index"):
            self._index = {y: i for i, y in enumerate(self._elements)}
        return self._index[x]

    def elem_word(self, x) -> Word:
        self._enumerate()
        return self._words[x]

    def relators(self) -> list[Word]:
        """Cayley-graph presentation: ``w(x) s = w(xs)`` for every non-tree edge."""
        self._enumerate()
        rels = []
        for x, k, y in self._nontree:
            r = W.mul(self._words[x], W.gen(k), W.inverse(self._words[y]))
            if r:
                rels.append(r)
        return rels

    def element_order(self, x) -> int:
        return P.order(x)

    def random_element(self, rng: random.Random):
        return rng.choice(self.elements())

    def __repr__(self):
        return f"FinitePermGroup(degree={self.degree}, ngens={len(self.generators)})"


def cyclic_group(n: int, name: str = "c") -> FinitePermGroup:
    return FinitePermGroup(n, [P.cycle(n, list(range(n)))] if n > 1 else [(0,)], [name])


INF = 0  # relative order marker for infinite cyclic factors


class PcGroup(Group):
    """Polycyclic group given by a polycyclic presentation.

    ``orders[i]`` is the relative order of generator ``i`` (``0`` for
    infinite).  ``powers[i]`` is ``g_i^{orders[i]}`` as a word in later
    generators.  ``conj[(j, i)]`` (``i < j``) is ``g_i^-1 g_j g_i`` and
    ``conj_inv[(j, i)]`` is ``g_i g_j g_i^-1``, both words in generators
    ``> i``; ``conj_inv`` is only needed for infinite ``g_i``.  Missing
    conjugates default to ``g_j`` (commuting).  Elements are exponent tuples.
    """

    kind = "pc"

    def __init__(self, orders: Sequence[int], powers=None, conj=None, conj_inv=None,
                 names: Sequence[str] | None = None, check: bool = True, check_triples: int = 500,
                 seed: int = 0):
        self.orders = tuple(int(r) for r in orders)
        n = len(self.orders)
        if any(r < 0 or r == 1 for r in self.orders):
            raise GroupError("relative orders must be 0 (infinite) or at least 2")
        self.names = tuple(names) if names is not None else default_names("g", n)
        if len(self.names) != n or len(set(self.names)) != n:
            raise GroupError("pc group needs one distinct name per generator")
        powers = dict(powers or {})
        conj = dict(conj or {})
        conj_inv = dict(conj_inv or {})
        self._power_words = {}
        self._conj_words = {}
        self._conj_inv_words = {}
        for i, r in enumerate(self.orders):
            w = W.word(powers.get(i, ()))
            if r == INF and w:
                raise GroupError(f"infinite generator {self.names[i]} cannot have a power relation")
            if any(g <= i or g >= n for g, _ in w):
                raise GroupError(f"power relation of {self.names[i]} must use later generators")
            self._power_words[i] = w
        for key in list(conj) + list(conj_inv):
            j, i = key
            if not 0 <= i < j < n:
                raise GroupError(f"conjugation key {key} must satisfy i < j")
        for j in range(n):
            for i in range(j):
                w = W.word(conj.get((j, i), W.gen(j)))
                if any(g <= i or g >= n for g, _ in w):
                    raise GroupError(f"conjugate of {self.names[j]} by {self.names[i]} must use generators after {self.names[i]}")
                self._conj_words[(j, i)] = w
                if self.orders[i] == INF:
                    if (j, i) not in conj_inv and (j, i) in conj and conj[(j, i)] != W.gen(j):
                        raise GroupError(
                            f"infinite generator {self.names[i]} needs conj_inv for {self.names[j]}")
                    wi = W.word(conj_inv.get((j, i), W.gen(j)))
                    if any(g <= i or g >= n for g, _ in wi):
                        raise GroupError("inverse conjugates must use later generators")
                    self._conj_inv_words[(j, i)] = wi
        self._power = {}
        self._conj = {}
        self._conj_inv = {}
        self._ready = False
        self._build()
        if check:
            self.check_consistency(check_triples, seed)

    # element arithmetic -----------------------------------------------------

    def _vec_from_word_trusted(self, w: Word):
        x = self.identity()
        for g, e in w:
            x = self._mul_gen_pow(x, g, e)
        return x

    def _build(self):
        n = len(self.orders)
        # build from the bottom so words only use already-available arithmetic
        for i in reversed(range(n)):
            self._power[i] = self._vec_from_word_trusted(self._power_words[i])
            for j in range(i + 1, n):
                self._conj[(j, i)] = self._vec_from_word_trusted(self._conj_words[(j, i)])
                if self.orders[i] == INF:
                    self._conj_inv[(j, i)] = self._vec_from_word_trusted(self._conj_inv_words[(j, i)])
        self._ready = True

    def identity(self):
        return (0,) * len(self.orders)

    def gen(self, i):
        v = [0] * len(self.orders)
        v[i] = 1
        return tuple(v)

    def _conj_tail(self, u, i, inverse: bool):
        """``tail^{g_i^{+-1}}`` for the part of ``u`` beyond index ``i``."""
        n = len(self.orders)
        table = self._conj_inv if inverse else self._conj
        result = self.identity()
        for j in range(i + 1, n):
            a = u[j]
            if a:
                result = self.mul(result, self.power(table[(j, i)], a))
        return result

    def _mul_gen(self, u, i, s):
        """``u * g_i^s`` for ``s`` in ``{1, -1}``."""
        r = self.orders[i]
        if s == -1 and r != INF:
            x = u
            for _ in range(r - 1):
                x = self._mul_gen(x, i, 1)
            return self.mul(x, self.inv(self._power[i]))
        tail_support = any(u[i + 1:])
        t = self._conj_tail(u, i, inverse=(s == -1)) if tail_support else self.identity()
        head = list(u[: i + 1]) + [0] * (len(u) - i - 1)
        head[i] += s
        extra = None
        if r != INF and head[i] == r:
            head[i] = 0
            extra = self._power[i]
        if extra is not None:
            t = self.mul(extra, t)
        # head has support <= i and t has support > i: juxtaposition is collected
        return tuple(head[: i + 1]) + tuple(t[i + 1:])

    def _mul_gen_pow(self, u, i, e):
        s = 1 if e > 0 else -1
        for _ in range(abs(e)):
            u = self._mul_gen(u, i, s)
        return u

    def mul(self, a, b):
        x = a
        for i, e in enumerate(b):
            if e:
                x = self._mul_gen_pow(x, i, e)
        return x

    def inv(self, a):
        x = self.identity()
        for i in reversed(range(len(a))):
            if a[i]:
                x = self._mul_gen_pow(x, i, -a[i])
        return x

    def normal_form(self, w):
        self.check_word(w)
        return self._vec_from_word_trusted(w)

    def elem_word(self, x) -> Word:
        return W.word((i, e) for i, e in enumerate(x))

    def relators(self) -> list[Word]:
        rels = []
        n = len(self.orders)
        for i, r in enumerate(self.orders):
            if r != INF:
                rels.append(W.mul(W.gen(i, r), W.inverse(self._power_words[i])))
        for j in range(n):
            for i in range(j):
                c = W.mul(W.gen(i, -1), W.gen(j), W.gen(i))
                rels.append(W.mul(c, W.inverse(self._conj_words[(j, i)])))
                if self.orders[i] == INF:
                    c = W.mul(W.gen(i), W.gen(j), W.gen(i, -1))
                    rels.append(W.mul(c, W.inverse(self._conj_inv_words[(j, i)])))
        return [r for r in rels if r]

    def random_element(self, rng: random.Random, spread: int = 3):
        return tuple(rng.randrange(r) if r else rng.randint(-spread, spread) for r in self.orders)

    def depth(self, x) -> int:
        for i, e in enumerate(x):
            if e:
                return i
        return len(x)

    def check_consistency(self, triples: int = 500, seed: int = 0) -> None:
        """Compare both bracketings of products; raise on the first mismatch."""
        n = len(self.orders)
        cands = []
        for i in range(n):
            cands.append(self.gen(i))
            cands.append(self.inv(self.gen(i)))
            if self.orders[i] != INF:
                cands.append(self.power(self.gen(i), self.orders[i] - 1))
        checks = []
        for a in range(len(cands)):
            for b in range(len(cands)):
                for c in range(len(cands)):
                    idx = [self.depth(cands[k]) for k in (a, b, c)]
                    if max(idx) - min(idx) <= 2:
                        checks.append((cands[a], cands[b], cands[c]))
        rng = random.Random(seed)
        for _ in range(triples):
            checks.append(tuple(self.random_element(rng) for _ in range(3)))
        for i in range(n):
            if self.orders[i] != INF:
                g = self.gen(i)
                if self.power(g, self.orders[i]) != self._power[i]:
                    raise InconsistentPresentation(f"power relation of {self.names[i]} fails")
            for j in range(i + 1, n):
                lhs = self.mul(self.gen(j), self.gen(i))
                rhs = self.mul(self.gen(i), self._conj[(j, i)])
                if lhs != rhs:
                    raise InconsistentPresentation("conjugation relation fails")
                back = self.mul(self.mul(self.gen(i), self._conj[(j, i)]), self.inv(self.gen(i)))
                if back != self.gen(j):
                    raise InconsistentPresentation(
                        f"conjugation by {self.names[i]} is not invertible on {self.names[j]}")
        for x, y, z in checks:
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                raise InconsistentPresentation(f"associativity fails on {x}, {y}, {z}")

    def __repr__(self):
        return f"PcGroup(orders={list(self.orders)})"


class SplitExtensionGroup(Group):
    """``F x| B`` with finite fiber ``F`` and base ``B`` acting by automorphisms.

    ``action[k]`` lists the images of the fiber generators under the
    automorphism ``alpha_k`` attached to base generator ``k``; the base acts
    by ``b f b^-1 = alpha_b(f)``.  Generators are the fiber generators
    followed by the base generators; elements are pairs ``(f, b)``.
    """

    kind = "semidirect"

    def __init__(self, fiber: FinitePermGroup, base: Group, action: Sequence[Sequence[Sequence[int]]],
                 names: Sequence[str] | None = None, check: bool = True):
        self.fiber = fiber
        self.base = base
        if len(action) != base.ngens:
            raise GroupError("one automorphism per base generator is required")
        self.action = tuple(tuple(tuple(int(v) for v in img) for img in a) for a in action)
        names = tuple(names) if names is not None else tuple(fiber.names) + tuple(base.names)
        if len(names) != fiber.ngens + base.ngens or len(set(names)) != len(names):
            raise GroupError("split extension needs distinct names for fiber and base generators")
        self.names = names
        self.nf = fiber.ngens
        elems = fiber.elements()
        self._auto = []
        self._auto_inv = []
        for a in self.action:
            if len(a) != fiber.ngens:
                raise GroupError("each automorphism needs one image per fiber generator")
            m = {f: P.eval_word(fiber.elem_word(f), a, fiber.degree) for f in elems}
            self._auto.append(m)
            self._auto_inv.append({v: k for k, v in m.items()})
        self._alpha_cache = {}
        if check:
            self._check()

    def _check(self):
        F = self.fiber
        for k, a in enumerate(self.action):
            for g in a:
                if not P.is_perm(g, F.degree):
                    raise GroupError("automorphism images must be permutations")
            for r in F.relators():
                if not P.is_identity(P.eval_word(r, a, F.degree)):
                    raise GroupError(f"action of base generator {k} is not a homomorphism of the fiber")
            if len(set(self._auto[k].values())) != F.order():
                raise GroupError(f"action of base generator {k} is not bijective")
        for r in self.base.relators():
            alpha = self._alpha_word(r)
            for f in F.generators:
                if alpha[f] != f:
                    raise GroupError("action does not respect the base relators")

    def _alpha_word(self, w: Word) -> dict:
        F = self.fiber
        result = {f: f for f in F.elements()}
        # alpha_{x1^e1 x2^e2 ...} = alpha_x1^e1 o alpha_x2^e2 o ...; build right to left
        for g, e in reversed(w):
            m = self._auto[g] if e > 0 else self._auto_inv[g]
            for _ in range(abs(e)):
                result = {f: m[v] for f, v in result.items()}
        return result

    def alpha(self, b) -> dict:
        if b not in self._alpha_cache:
            self._alpha_cache[b] = self._alpha_word(self.base.elem_word(b))
        return self._alpha_cache[b]

    def identity(self):
        return (self.fiber.identity(), self.base.identity())

    def gen(self, i):
        if i < self.nf:
            return (self.fiber.gen(i), self.base.identity())
        return (self.fiber.identity(), self.base.gen(i - self.nf))

    def mul(self, a, b):
        f1, b1 = a
        f2, b2 = b
        return (P.mul(f1, self.alpha(b1)[f2]), self.base.mul(b1, b2))

    def inv(self, a):
        f, b = a
        binv = self.base.inv(b)
        return (self.alpha(binv)[P.inv(f)], binv)

    def normal_form(self, w):
        self.check_word(w)
        f = self.fiber.identity()
        b = self.base.identity()
        for g, e in w:
            if g < self.nf:
                f = P.mul(f, self.alpha(b)[P.power(self.fiber.gen(g), e)])
            else:
                b = self.base.mul(b, self.base.power(self.base.gen(g - self.nf), e))
        return (f, b)

    def fiber_word(self, w: Word) -> Word:
        return w

    def base_word(self, w: Word) -> Word:
        return tuple((g + self.nf, e) for g, e in w)

    def elem_word(self, x) -> Word:
        f, b = x
        return W.mul(self.fiber.elem_word(f), self.base_word(self.base.elem_word(b)))

    def relators(self) -> list[Word]:
        rels = list(self.fiber.relators())
        rels += [self.base_word(r) for r in self.base.relators()]
        for k in range(self.base.ngens):
            x = W.gen(self.nf + k)
            for j, f in enumerate(self.fiber.generators):
                img = self.fiber.elem_word(self._auto[k][f])
                r = W.mul(x, W.gen(j), W.inverse(x), W.inverse(img))
                if r:
                    rels.append(r)
        return rels

    def project(self, x):
        return x[1]

    def __repr__(self):
        return f"SplitExtensionGroup({self.fiber!r}, {self.base!r})"


# --- homomorphisms ---------------------------------------------------------

class Homomorphism:
    """Generator-image map ``source -> target`` (images are target elements)."""

    def __init__(self, source: Group, target: Group, images: Sequence, check: bool = False):
        if len(images) != source.ngens:
            raise GroupError("one image per source generator is required")
        self.source = source
        self.target = target
        self.images = tuple(images)
        self._powers: dict[int, Homomorphism] = {}
        if check and not self.is_valid():
            raise GroupError("generator images do not respect the source relators")

    @classmethod
    def from_words(cls, source: Group, target: Group, words: Sequence[Word], check: bool = True):
        return cls(source, target, [target.normal_form(w) for w in words], check=check)

    def apply(self, w: Word):
        self.source.check_word(w)
        T = self.target
        x = T.identity()
        for g, e in w:
            x = T.mul(x, T.power(self.images[g], e))
        return x

    def apply_elem(self, x):
        return self.apply(self.source.elem_word(x))

    def image_words(self) -> list[Word]:
        return [self.target.elem_word(x) for x in self.images]

    def is_valid(self) -> bool:
        return all(self.target.is_identity(self.apply(r)) for r in self.source.relators())

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """``self o other`` (apply ``other`` first)."""
        if other.target is not self.source:
            raise GroupError("composition of incompatible maps")
        return Homomorphism(other.source, self.target, [self.apply_elem(x) for x in other.images])

    def is_endomorphism(self) -> bool:
        return self.source is self.target

    def __repr__(self):
        return f"Homomorphism({self.source!r} -> {self.target!r})"


def identity_hom(G: Group) -> Homomorphism:
    return Homomorphism(G, G, G.gens())


def hom_apply(f: Homomorphism, w: Word):
    return f.apply(w)


def hom_power(f: Homomorphism, i: int) -> Homomorphism:
    """``f^i`` for an endomorphism, cached on ``f``."""
    if f.source is not f.target:
        raise GroupError("powers need an endomorphism")
    if i < 0:
        raise GroupError("negative power")
    if i == 0:
        return identity_hom(f.source)
    if i == 1:
        return f
    if i not in f._powers:
        prev = hom_power(f, i - 1)
        f._powers[i] = Homomorphism(f.source, f.target, [prev.apply_elem(x) for x in f.images])
    return f._powers[i]


def abelian_hom(source: FgAbelianGroup, target: FgAbelianGroup, matrix: Sequence[Sequence[int]],
                check: bool = True) -> Homomorphism:
    """Hom given by an integer matrix whose column ``j`` is the image of generator ``j``."""
    cols = [[matrix[i][j] for i in range(target.dim)] for j in range(source.dim)]
    return Homomorphism(source, target, [target.reduce(c) for c in cols], check=check)


def abelian_matrix(f: Homomorphism) -> list[list[int]]:
    T = f.target
    return [[f.images[j][i] for j in range(f.source.ngens)] for i in range(T.ngens)]


def normal_form(G: Group, w: Word):
    return G.normal_form(w)


def product(G: Group, elems):
    return reduce(G.mul, elems, G.identity())
