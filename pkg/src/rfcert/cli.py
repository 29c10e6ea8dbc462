"""``rfcert``: run the engines on JSON specs and check certificates."""

from __future__ import annotations

import argparse
import os
import sys

from . import spec_io as S
from . import words as W
from .findex import BudgetExhausted, SubgroupFI, todd_coxeter
from .groups import FgAbelianGroup, FinitePermGroup, Group, GroupError, Homomorphism
from .words import WordSyntaxError

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3
DEFAULT_BUDGET = 10**6
DEFAULT_MAX_COSETS = 10**5


class InputError(Exception):
    pass


# --- building engine objects from records ----------------------------------------

def build(spec):
    """Engine object for a parsed group record."""
    if isinstance(spec, Group):
        return spec
    if isinstance(spec, S.AscSpec):
        from .ahnn import AscHNN
        B = spec.base
        phi = Homomorphism(B, B, [B.normal_form(w) for w in spec.phi_words])
        return AscHNN(B, phi, spec.stable)
    if isinstance(spec, S.RaagSpec):
        from .raag import Raag, RaagGraph
        return Raag(RaagGraph(spec.vertices, spec.edges))
    if isinstance(spec, S.AmalgamSpec):
        from .splittings import Amalgam
        i1 = Homomorphism(spec.H, spec.G1, [spec.G1.normal_form(w) for w in spec.i1])
        i2 = Homomorphism(spec.H, spec.G2, [spec.G2.normal_form(w) for w in spec.i2])
        return Amalgam(spec.G1, spec.G2, spec.H, i1, i2)
    if isinstance(spec, S.HNNSpec):
        from .splittings import HNNData
        G = spec.G
        return HNNData(G, [G.normal_form(w) for w in spec.H], [G.normal_form(w) for w in spec.K], spec.stable)
    raise InputError(f"unsupported group {spec!r}")


def build_subgroup(rec, G: Group, path: str, max_cosets: int) -> SubgroupFI:
    """Constraint subgroup: an action, generators (coset enumeration) or a lattice."""
    from . import abelian as AB

    if not isinstance(rec, dict):
        raise S.SpecError("a subgroup is an object", path)
    if "images" in rec:
        kind, imgs = S.parse_subgroup_images(rec, G.ngens, path)
        return SubgroupFI(G, imgs, kind)
    if "generators" in rec:
        gens = [S.parse_word_value(w, G.names, f"{path}.generators[{i}]")
                for i, w in enumerate(S._get(rec, "generators", path, list))]
        T = todd_coxeter(G.ngens, G.relators(), gens, max_cosets)
        return T.subgroup(G)
    if "multiple" in rec or "lattice" in rec:
        if not isinstance(G, FgAbelianGroup):
            raise S.SpecError("lattice subgroups need an abelian group", path)
        if "multiple" in rec:
            return AB.multiple_subgroup(G, S._int(rec["multiple"], f"{path}.multiple"))
        rows = S._get(rec, "lattice", path, list)
        vecs = []
        for i, v in enumerate(rows):
            if not isinstance(v, list) or len(v) != G.dim:
                raise S.SpecError(f"expected a vector of length {G.dim}", f"{path}.lattice[{i}]")
            vecs.append([S._int(x, f"{path}.lattice[{i}]") for x in v])
        return AB.lattice_subgroup(G, vecs)
    if rec.get("trivial") is True:
        if not isinstance(G, FinitePermGroup):
            raise S.SpecError("the trivial subgroup has finite index only in a finite group", path)
        return SubgroupFI(G, list(G.generators), "kernel")
    if rec.get("whole") is True:
        return SubgroupFI.whole(G)
    raise S.SpecError("subgroup needs 'images', 'generators', 'multiple', 'lattice', 'trivial' or 'whole'", path)


def _element(doc: S.SpecDocument, arg, names) -> W.Word:
    text = arg if arg is not None else doc.field("element", None)
    if text is None:
        raise InputError("no element given (use --element or an 'element' field)")
    return S.parse_word_value(text, names, "--element" if arg is not None else "$.element")


def _header(args, kind: str) -> dict:
    return {"format": S.FORMAT, "version": S.VERSION, "seed": S.SEED, "kind": kind,
            "budget": args.budget}


def _perms(images) -> list:
    return [list(p) for p in images]


def _need(spec, cls, what):
    if not isinstance(spec, cls):
        raise InputError(f"this command needs a {what} group")


# --- commands ----------------------------------------------------------------------

def cmd_separate(args, doc):
    from .ahnn import separate
    _need(doc.group, S.AscSpec, "asc_hnn")
    Gp = build(doc.group)
    x = _element(doc, args.element, Gp.names)
    cert = separate(Gp, x, args.budget)
    out = _header(args, "separation")
    out.update({"group": doc.raw["group"], "element": W.to_json(x), "degree": cert.degree,
                "images": _perms(cert.images), "data": cert.data, "verified": True})
    return out


def cmd_witness(args, doc):
    from .propp import witness
    _need(doc.group, S.AscSpec, "asc_hnn")
    Gp = build(doc.group)
    B = Gp.base
    w = _element(doc, args.element, B.names)
    g = B.normal_form(w)
    wit = witness(B, Gp.phi, g, args.budget)
    N = wit.N
    out = _header(args, "propp-witness")
    out.update({"group": doc.raw["group"], "element": W.to_json(w),
                "N": {"kind": N.kind, "images": _perms(N.images)}, "trivial_from": wit.trivial_from,
                "preperiod": wit.preperiod, "period": wit.period, "method": wit.method, "verified": True})
    return out


def _embedding(args, doc, cert):
    out = _header(args, "embedding")
    out.update({"group": doc.raw["group"], "degree": cert.degree, "images": _perms(cert.images),
                "factors": [{"name": n, "words": [W.to_json(x) for x in ws],
                             "constraint": {"kind": k, "images": _perms(c)}}
                            for n, ws, c, k in cert.factors],
                "data": cert.data, "verified": True})
    return out


def cmd_embed_amalgam(args, doc):
    from .splittings import embed_cert_amalgam
    _need(doc.group, S.AmalgamSpec, "amalgam")
    am = build(doc.group)
    cons = doc.field("constraints")
    if not isinstance(cons, list) or len(cons) != 2:
        raise S.SpecError("expected two constraint subgroups", "$.constraints")
    N1 = build_subgroup(cons[0], am.G1, "$.constraints[0]", args.max_cosets)
    N2 = build_subgroup(cons[1], am.G2, "$.constraints[1]", args.max_cosets)
    strategy = args.strategy or doc.field("strategy", "normal")
    return _embedding(args, doc, embed_cert_amalgam(am, N1, N2, strategy, budget=args.budget))


def cmd_embed_hnn(args, doc):
    from .splittings import embed_cert_hnn
    _need(doc.group, S.HNNSpec, "hnn")
    data = build(doc.group)
    N = build_subgroup(doc.field("constraint"), data.G, "$.constraint", args.max_cosets)
    strategy = args.strategy or doc.field("strategy", "auto")
    return _embedding(args, doc, embed_cert_hnn(data, N, strategy))


def cmd_special_embed(args, doc):
    from .raag import special_embed
    _need(doc.group, S.RaagSpec, "raag")
    G = build(doc.group)
    subset = doc.field("subset")
    idx = G.name_map()
    if not isinstance(subset, list) or not all(v in idx for v in subset):
        raise S.SpecError("subset must list vertex names", "$.subset")
    Xp = sorted({idx[v] for v in subset})
    sub = G.induced(Xp)
    U = build_subgroup(doc.field("constraint"), sub, "$.constraint", args.max_cosets)
    return _embedding(args, doc, special_embed(G, Xp, U))


def cmd_normal_form(args, doc):
    spec = doc.group
    G = build(spec)
    w = _element(doc, args.element, G.names)
    if isinstance(spec, S.AscSpec):
        return G.format(G.element_word(G.normal_form(w)))
    if isinstance(spec, S.AmalgamSpec):
        if G.is_trivial(w):
            return "1"
        k = G.G1.ngens
        parts = []
        for side, x in G.syllables(w):
            fac = G.G1 if side == 0 else G.G2
            parts.append([(g + k * side, e) for g, e in fac.elem_word(x)])
        return G.format(W.mul(*[tuple(p) for p in parts]))
    if isinstance(spec, S.HNNSpec):
        raise InputError("word problem for general HNN extensions is not supported")
    return G.format(G.elem_word(G.normal_form(w)))


def cmd_info(args, doc):
    spec = doc.group
    lines = [f"type: {doc.raw['group'].get('type')}", f"generators: {' '.join(spec.names)}",
             f"relators: {len(S.spec_relators(spec))}"]
    G = build(spec)
    if isinstance(spec, S.AscSpec):
        lines.append(f"phi injective: {G.injective}")
    if isinstance(G, FinitePermGroup):
        lines.append(f"order: {G.order()}")
    if isinstance(G, FgAbelianGroup):
        lines.append(f"rank: {G.rank} torsion: {list(G.torsion)}")
    return "\n".join(lines)


def verify_certificate(cert: dict) -> bool:
    """Offline check using only the checker and the core groups."""
    from . import checker

    if not isinstance(cert, dict) or cert.get("format") != S.FORMAT:
        raise S.SpecError("not an rfcert certificate")
    kind = cert.get("kind")
    spec = S.parse_group(S._get(cert, "group", "$"), "$.group")
    try:
        if "images" in cert and cert["images"] and cert.get("degree") != len(cert["images"][0]):
            return False
        if kind == "separation":
            if not isinstance(spec, S.AscSpec):
                return False
            return checker.check_separation(spec.base.relators(), spec.phi_words, cert["images"],
                                            W.from_json(cert["element"]))
        if kind == "propp-witness":
            if not isinstance(spec, S.AscSpec):
                return False
            B = spec.base
            N = cert["N"]
            if N.get("kind") != "kernel":
                return False
            return checker.check_witness(B.relators(), spec.phi_words, W.from_json(cert["element"]),
                                         N["images"], cert["trivial_from"],
                                         lambda w: B.is_identity(B.normal_form(W.word(w))))
        if kind == "embedding":
            factors = []
            for f in cert["factors"]:
                ws = [W.from_json(x) for x in f["words"]]
                c = f["constraint"]
                rels = S.factor_relators(spec, f["name"])
                if isinstance(spec, S.RaagSpec):
                    if not all(len(x) == 1 and x[0][1] == 1 for x in ws):
                        return False
                    rels = S.raag_induced_relators(spec, [x[0][0] for x in ws])
                if rels is None or not checker.check_constraint_hom(rels, c["images"]):
                    return False
                factors.append((ws, c["images"], c["kind"]))
            return checker.check_embedding(S.spec_relators(spec), S.spec_ngens(spec), cert["images"], factors)
    except (KeyError, TypeError, ValueError, GroupError):
        return False
    return False


# --- entry point -----------------------------------------------------------------------

COMMANDS = {
    "separate": cmd_separate,
    "witness-p": cmd_witness,
    "embed-amalgam": cmd_embed_amalgam,
    "embed-hnn": cmd_embed_hnn,
    "special-embed": cmd_special_embed,
    "normal-form": cmd_normal_form,
    "info": cmd_info,
}


def _parser() -> argparse.ArgumentParser:
    env = os.environ.get("RFCERT_BUDGET")
    budget = int(env) if env and env.isdigit() else DEFAULT_BUDGET
    p = argparse.ArgumentParser(prog="rfcert", description="Finite-quotient certificates for group constructions.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in list(COMMANDS) + ["verify"]:
        q = sub.add_parser(name)
        q.add_argument("file", help="spec document (certificate for verify)")
        if name in ("separate", "witness-p", "normal-form"):
            q.add_argument("--element", help="element in the word grammar, e.g. 't^-1*a*t'")
        if name in ("embed-amalgam", "embed-hnn"):
            q.add_argument("--strategy")
        q.add_argument("--budget", type=int, default=budget)
        q.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
        q.add_argument("-o", "--output", help="write the result here instead of stdout")
    return p


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "verify":
            ok = verify_certificate(S.load_json(text))
            _emit("ok\n" if ok else "rejected\n", args.output)
            return EXIT_OK if ok else EXIT_FAIL
        doc = S.parse_spec(text)
        result = COMMANDS[args.command](args, doc)
        _emit(result + "\n" if isinstance(result, str) else S.dump_json(result), args.output)
        return EXIT_OK
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc} (schedule position {exc.position})", file=sys.stderr)
        return EXIT_BUDGET
    except OverflowError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (S.SpecError, WordSyntaxError, InputError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GroupError as exc:
        msg = str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_FAIL if msg.startswith("internal error") else EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
