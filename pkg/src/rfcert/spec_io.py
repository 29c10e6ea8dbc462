"""JSON spec documents and certificate files.

Parsing produces core groups (free, abelian, finite, pc, semidirect) or
plain records for the composite types; nothing here runs an engine, so
``verify`` can rebuild relators from a certificate using this module, the
core groups and the checker alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from . import words as W
from .groups import (FgAbelianGroup, FinitePermGroup, FreeGroup, Group, GroupError, PcGroup,
                     SplitExtensionGroup)
from .words import Word, WordSyntaxError

FORMAT = "rfcert-certificate"
VERSION = 1
SEED = 20240601


class SpecError(ValueError):
    """Input error with a location: ``line:col`` for syntax, a JSON path for schema."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.detail = message


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None


def dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# --- small schema helpers ----------------------------------------------------

def _get(d: dict, key: str, path: str, types=None, default=...):
    if not isinstance(d, dict):
        raise SpecError("expected an object", path)
    if key not in d:
        if default is ...:
            raise SpecError(f"missing field {key!r}", path)
        return default
    v = d[key]
    if types is not None and (not isinstance(v, types) or isinstance(v, bool)):
        raise SpecError(f"field {key!r} has the wrong type", f"{path}.{key}")
    return v


def _int(v, path: str) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise SpecError("expected an integer", path)
    return v


def _names(rec: dict, path: str, n: int, prefix: str) -> tuple[str, ...]:
    names = _get(rec, "names", path, list, None)
    if names is None:
        return tuple(f"{prefix}{i}" for i in range(n))
    if len(names) != n or not all(isinstance(x, str) and x.isidentifier() for x in names):
        raise SpecError(f"expected {n} identifier names", f"{path}.names")
    if len(set(names)) != n:
        raise SpecError("generator names must be distinct", f"{path}.names")
    return tuple(names)


def parse_word_value(v, names, path: str) -> Word:
    """A word given as element-grammar text or as ``[[generator, exponent], ...]``."""
    names = list(names)
    if isinstance(v, str):
        try:
            return W.parse_word(v, {n: i for i, n in enumerate(names)})
        except WordSyntaxError as exc:
            raise SpecError(str(exc), path) from None
    if isinstance(v, list):
        try:
            w = W.from_json(v)
        except (ValueError, TypeError) as exc:
            raise SpecError(f"malformed word: {exc}", path) from None
        for g, _ in w:
            if not 0 <= g < len(names):
                raise SpecError(f"generator index {g} out of range", path)
        return w
    raise SpecError("a word must be a string or a list of [generator, exponent] pairs", path)


def _perm(v, n: int, path: str) -> tuple:
    if not isinstance(v, list) or len(v) != n or sorted(v) != list(range(n)):
        raise SpecError(f"expected a permutation of 0..{n - 1}", path)
    return tuple(v)


# --- records ----------------------------------------------------------------

@dataclass
class AscSpec:
    base: Group
    phi_words: list
    stable: str

    @property
    def names(self):
        return tuple(self.base.names) + (self.stable,)


@dataclass
class RaagSpec:
    vertices: tuple
    edges: list

    @property
    def names(self):
        return self.vertices


@dataclass
class AmalgamSpec:
    G1: Group
    G2: Group
    H: Group
    i1: list
    i2: list

    @property
    def names(self):
        return tuple(self.G1.names) + tuple(self.G2.names)


@dataclass
class HNNSpec:
    G: Group
    H: list
    K: list
    stable: str

    @property
    def names(self):
        return tuple(self.G.names) + (self.stable,)


CORE_TYPES = ("free", "abelian", "finite", "pc", "semidirect")


def parse_group(rec, path: str = "$.group"):
    t = _get(rec, "type", path, str)
    if t == "free":
        n = _int(_get(rec, "rank", path), f"{path}.rank")
        if n < 0:
            raise SpecError("rank must be non-negative", f"{path}.rank")
        return FreeGroup(n, _names(rec, path, n, "x"))
    if t == "abelian":
        r = _int(_get(rec, "rank", path, default=0), f"{path}.rank")
        if r < 0:
            raise SpecError("rank must be non-negative", f"{path}.rank")
        tors = _get(rec, "torsion", path, list, [])
        tors = [_int(x, f"{path}.torsion[{i}]") for i, x in enumerate(tors)]
        try:
            return FgAbelianGroup(r, tors, _names(rec, path, r + len(tors), "e"))
        except GroupError as exc:
            raise SpecError(str(exc), path) from None
    if t == "finite":
        d = _int(_get(rec, "degree", path), f"{path}.degree")
        gens = _get(rec, "generators", path, list)
        gens = [_perm(g, d, f"{path}.generators[{i}]") for i, g in enumerate(gens)]
        return FinitePermGroup(d, gens, _names(rec, path, len(gens), "g"))
    if t == "pc":
        return _parse_pc(rec, path)
    if t == "semidirect":
        F = parse_group(_get(rec, "fiber", path), f"{path}.fiber")
        if not isinstance(F, FinitePermGroup):
            raise SpecError("the fiber must be a finite group", f"{path}.fiber")
        B = parse_group(_get(rec, "base", path), f"{path}.base")
        if not isinstance(B, Group):
            raise SpecError("the base must be a core group", f"{path}.base")
        act = _get(rec, "action", path, list)
        if len(act) != B.ngens:
            raise SpecError("one automorphism per base generator is required", f"{path}.action")
        action = []
        for k, a in enumerate(act):
            p = f"{path}.action[{k}]"
            if not isinstance(a, list) or len(a) != F.ngens:
                raise SpecError("each automorphism lists one image per fiber generator", p)
            action.append([_perm(x, F.degree, f"{p}[{i}]") for i, x in enumerate(a)])
        names = tuple(F.names) + tuple(B.names)
        try:
            return SplitExtensionGroup(F, B, action, names)
        except GroupError as exc:
            raise SpecError(str(exc), path) from None
    if t == "asc_hnn":
        base = parse_group(_get(rec, "base", path), f"{path}.base")
        if not isinstance(base, Group):
            raise SpecError("the base must be a core group", f"{path}.base")
        stable = _get(rec, "stable", path, str, "t")
        phi = _get(rec, "phi", path, list)
        if len(phi) != base.ngens:
            raise SpecError("phi needs one image per base generator", f"{path}.phi")
        words = [parse_word_value(w, base.names, f"{path}.phi[{i}]") for i, w in enumerate(phi)]
        if stable in base.names:
            raise SpecError("stable letter name clashes with a base generator", f"{path}.stable")
        return AscSpec(base, words, stable)
    if t == "raag":
        verts = _get(rec, "vertices", path, list)
        if not all(isinstance(v, str) and v.isidentifier() for v in verts) or len(set(verts)) != len(verts):
            raise SpecError("vertices must be distinct identifiers", f"{path}.vertices")
        idx = {v: i for i, v in enumerate(verts)}
        edges = []
        for i, e in enumerate(_get(rec, "edges", path, list, [])):
            p = f"{path}.edges[{i}]"
            if not isinstance(e, list) or len(e) != 2 or e[0] not in idx or e[1] not in idx or e[0] == e[1]:
                raise SpecError("an edge is a pair of distinct vertex names", p)
            a, b = sorted((idx[e[0]], idx[e[1]]))
            if (a, b) not in edges:
                edges.append((a, b))
        return RaagSpec(tuple(verts), sorted(edges))
    if t == "amalgam":
        G1 = _core(rec, "G1", path)
        G2 = _core(rec, "G2", path)
        H = _core(rec, "H", path)
        if set(G1.names) & set(G2.names):
            raise SpecError("factor generator names must be distinct", path)
        i1 = _images(rec, "i1", H, G1, path)
        i2 = _images(rec, "i2", H, G2, path)
        return AmalgamSpec(G1, G2, H, i1, i2)
    if t == "hnn":
        G = _core(rec, "base", path)
        Hs = _get(rec, "H", path, list)
        Ks = _get(rec, "K", path, list)
        if len(Hs) != len(Ks):
            raise SpecError("H and K need the same number of generators", path)
        stable = _get(rec, "stable", path, str, "t")
        if stable in G.names:
            raise SpecError("stable letter name clashes with a base generator", f"{path}.stable")
        return HNNSpec(G, [parse_word_value(w, G.names, f"{path}.H[{i}]") for i, w in enumerate(Hs)],
                       [parse_word_value(w, G.names, f"{path}.K[{i}]") for i, w in enumerate(Ks)], stable)
    raise SpecError(f"unknown group type {t!r}", f"{path}.type")


def _core(rec, key, path):
    G = parse_group(_get(rec, key, path), f"{path}.{key}")
    if not isinstance(G, Group):
        raise SpecError("expected a core group", f"{path}.{key}")
    return G


def _images(rec, key, H, G, path):
    imgs = _get(rec, key, path, list)
    if len(imgs) != H.ngens:
        raise SpecError("one image per generator of H is required", f"{path}.{key}")
    return [parse_word_value(w, G.names, f"{path}.{key}[{i}]") for i, w in enumerate(imgs)]


def _parse_pc(rec, path):
    orders = [_int(x, f"{path}.orders[{i}]") for i, x in enumerate(_get(rec, "orders", path, list))]
    names = _names(rec, path, len(orders), "g")
    idx = {n: i for i, n in enumerate(names)}

    def rel_key(k, p):
        parts = k.split("^")
        if len(parts) != 2 or parts[0] not in idx or parts[1] not in idx:
            raise SpecError(f"conjugate key {k!r} must look like 'b^a'", p)
        return idx[parts[0]], idx[parts[1]]

    powers = {}
    for k, v in _get(rec, "powers", path, dict, {}).items():
        if k not in idx:
            raise SpecError(f"unknown generator {k!r}", f"{path}.powers")
        powers[idx[k]] = parse_word_value(v, names, f"{path}.powers.{k}")
    conj = {}
    for k, v in _get(rec, "conjugates", path, dict, {}).items():
        conj[rel_key(k, f"{path}.conjugates")] = parse_word_value(v, names, f"{path}.conjugates.{k}")
    conj_inv = {}
    for k, v in _get(rec, "inverse_conjugates", path, dict, {}).items():
        conj_inv[rel_key(k, f"{path}.inverse_conjugates")] = parse_word_value(
            v, names, f"{path}.inverse_conjugates.{k}")
    try:
        return PcGroup(orders, powers, conj, conj_inv, names)
    except GroupError as exc:
        raise SpecError(str(exc), path) from None


# --- relators from records ---------------------------------------------------------

def _shift(w: Word, k: int) -> list:
    return [(g + k, e) for g, e in w]


def _commutator(a: int, b: int) -> list:
    return [(a, -1), (b, -1), (a, 1), (b, 1)]


def spec_relators(spec) -> list:
    if isinstance(spec, Group):
        return [list(r) for r in spec.relators()]
    if isinstance(spec, AscSpec):
        t = spec.base.ngens
        rels = [list(r) for r in spec.base.relators()]
        for i, w in enumerate(spec.phi_words):
            rels.append([(t, -1), (i, 1), (t, 1)] + [(a, -b) for a, b in reversed(w)])
        return rels
    if isinstance(spec, RaagSpec):
        return [_commutator(a, b) for a, b in spec.edges]
    if isinstance(spec, AmalgamSpec):
        k = spec.G1.ngens
        rels = [list(r) for r in spec.G1.relators()] + [_shift(r, k) for r in spec.G2.relators()]
        for a, b in zip(spec.i1, spec.i2):
            rels.append(list(a) + [(g + k, -e) for g, e in reversed(b)])
        return rels
    if isinstance(spec, HNNSpec):
        t = spec.G.ngens
        rels = [list(r) for r in spec.G.relators()]
        for h, kk in zip(spec.H, spec.K):
            rels.append([(t, -1)] + list(h) + [(t, 1)] + [(a, -b) for a, b in reversed(kk)])
        return rels
    raise TypeError(f"no relators for {spec!r}")


def raag_induced_relators(spec: RaagSpec, keep: list[int]) -> list:
    pos = {v: i for i, v in enumerate(sorted(keep))}
    return [_commutator(pos[a], pos[b]) for a, b in spec.edges if a in pos and b in pos]


def factor_relators(spec, name: str) -> list | None:
    """Relators of a named factor of a splitting, for the constraint check."""
    if isinstance(spec, AmalgamSpec):
        if name == "G1":
            return spec_relators(spec.G1)
        if name == "G2":
            return spec_relators(spec.G2)
    if isinstance(spec, HNNSpec) and name == "G":
        return spec_relators(spec.G)
    return None


def spec_ngens(spec) -> int:
    return len(spec.names)


# --- documents ------------------------------------------------------------------

@dataclass
class SpecDocument:
    raw: dict
    group: Any

    def field(self, key: str, default=...):
        return _get(self.raw, key, "$", None, default)


def parse_spec(text: str) -> SpecDocument:
    raw = load_json(text)
    if not isinstance(raw, dict):
        raise SpecError("the document must be an object")
    g = parse_group(_get(raw, "group", "$"), "$.group")
    return SpecDocument(raw, g)


def parse_subgroup_images(rec, ngens: int, path: str):
    """A constraint given directly as an action: ``(kind, images)``."""
    kind = _get(rec, "kind", path, str)
    if kind not in ("kernel", "stabilizer"):
        raise SpecError("kind must be 'kernel' or 'stabilizer'", f"{path}.kind")
    imgs = _get(rec, "images", path, list)
    if len(imgs) != ngens:
        raise SpecError(f"expected {ngens} permutations", f"{path}.images")
    n = len(imgs[0]) if imgs else 1
    return kind, [_perm(p, n, f"{path}.images[{i}]") for i, p in enumerate(imgs)]
