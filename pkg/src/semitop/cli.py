"""Command line interface.

Subcommands: ``catalog`` lists the bundled obstruction instances, ``obstruct``
runs the forcing argument and emits a certificate, ``check`` runs a named
predicate over a JSON input, ``embed`` builds and audits a representation.

Exit codes: 0 when the run produced a certificate or a true verdict, 2 for
NoObstruction or a false verdict, 1 for malformed input or a failed
verification.  JSON output is byte-deterministic (sorted keys, fixed
indentation); ANSI color on the human output is opt-in via SEMITOP_COLOR.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .core import (
    RIGHT,
    Congruence,
    NotInverse,
    canonical_classes,
    check_associativity,
    classify_vp_quotient,
    inverse_structure,
    is_clifford,
    is_commutative,
    is_vagner_preston,
    parse_semigroup,
)
from .embed import (
    adjoin_embed,
    cayley_right_regular,
    clifford_product_embed,
    embcl_rep,
    group_restriction,
    preserves_inversion,
    product_embed,
    representation_doc,
    shared_image_laws,
    verify_embedding,
    wagner_preston,
)
from .errors import DomainError, LoadError, SemitopError
from .obstruct import (
    NoObstruction,
    catalog,
    certificate_doc,
    certificate_from_doc,
    chain_finite_check,
    escape_certificate,
    get_instance,
    instance_doc,
    verify_certificate,
)
from .topo import (
    TopSemigroup,
    TruncatedPresentation,
    congruence_basis_check,
    ditopological_check,
    points_of,
    presentation_from_doc,
    top_spec_from_doc,
    u2_check,
    u_check,
    weakly_ditopological_check,
)
from .transforms import Transformation

GREEN, RED, CYAN = "32", "31", "36"

CHECK_KINDS = ("assoc", "inverse", "clifford", "vp", "ditop", "weak-ditop",
               "u", "u2", "chain-finite", "cong-basis")
EMBED_KINDS = ("cayley", "wp", "product", "adjoin", "embcl",
               "clifford-product", "group-restrict")


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by the catalog-driven commands; bundled instances pin the
    guard two below the window."""

    window: int = 6

    def __post_init__(self):
        if self.window < 4:
            raise DomainError(f"window {self.window} is too small; the families need at least 4")

    @property
    def guard(self) -> int:
        return self.window - 2


def _paint(text, code):
    if os.environ.get("SEMITOP_COLOR", "").lower() in {"1", "true", "yes", "on", "always"}:
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _emit_json(doc, out=None):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise LoadError(f"invalid JSON in {path}: {exc}") from exc


def _labels(sem, mask_or_points):
    pts = points_of(mask_or_points) if isinstance(mask_or_points, int) else mask_or_points
    return "{" + ", ".join(sem.label(x) for x in pts) + "}"


# -- catalog -------------------------------------------------------------------

def cmd_catalog(args) -> int:
    cfg = RunConfig(window=args.window)
    instances = catalog(cfg.window)
    if args.json:
        _emit_json([instance_doc(inst) for inst in instances], args.out)
        return 0
    print(f"bundled instances at window {cfg.window} (guard {cfg.guard}):")
    for inst in instances:
        pres = inst.presentation
        fam = inst.admissible()
        print(f"  {_paint(inst.instance_id, CYAN):<28} carrier {pres.base.n:>3}  "
              f"limit {pres.base.label(inst.limit):<4} "
              f"{len(fam)} admissible neighborhood{'s' if len(fam) != 1 else ''}")
        for tgt in inst.targets:
            print(f"      target: {tgt.description}")
    return 0


# -- obstruct ------------------------------------------------------------------

def _print_transcript(inst, cert):
    sem = inst.presentation.base
    print(f"instance {inst.instance_id} window {cert.window}: "
          f"obstruction certificate with {len(cert.branches)} branch(es)")
    for k, br in enumerate(cert.branches):
        print(f"  branch {k}: force {_labels(sem, br.neighborhood)} "
              f"into the class of {sem.label(inst.limit)}")
        shown = br.chain[:10]
        for (a, b), m, (da, db) in shown:
            print(f"    pair ({sem.label(a)}, {sem.label(b)}) forced by multiplier "
                  f"{sem.label(m)} -> ({sem.label(da)}, {sem.label(db)})")
        if len(br.chain) > len(shown):
            print(f"    ... {len(br.chain) - len(shown)} more forcing steps")
        tgt = inst.targets[br.target_index]
        print(f"    fired: {tgt.description}  [witness {sem.label(br.witness)}]")
    print(_paint("verified: chain replay reproduces every branch partition", GREEN))


def cmd_obstruct(args) -> int:
    cfg = RunConfig(window=args.window)
    inst = get_instance(args.instance, window=cfg.window)
    if args.replay:
        cert = certificate_from_doc(_load_json(args.replay))
        if isinstance(cert, NoObstruction):
            print("replay target is a NoObstruction report; nothing to verify")
            return 1
        ok, why = verify_certificate(inst, cert)
        if ok:
            print(_paint(f"certificate for {inst.instance_id} verified", GREEN))
            return 0
        print(_paint(f"certificate rejected: {why}", RED))
        return 1
    result = escape_certificate(inst)
    if isinstance(result, NoObstruction):
        doc = certificate_doc(result)
        if args.out:
            _emit_json(doc, args.out)
        if args.json and not args.out:
            _emit_json(doc)
        else:
            sem = inst.presentation.base
            print(f"instance {inst.instance_id} window {result.window}: no obstruction; "
                  f"neighborhood {_labels(sem, result.surviving)} survives forcing")
        return 2
    ok, why = verify_certificate(inst, result)
    if not ok:
        print(f"error: generated certificate failed replay: {why}", file=sys.stderr)
        return 1
    doc = certificate_doc(result)
    if args.out:
        _emit_json(doc, args.out)
    if args.json and not args.out:
        _emit_json(doc)
    else:
        _print_transcript(inst, result)
    return 0


# -- check ---------------------------------------------------------------------

def _bundle_parts(doc):
    """A check input is a semigroup document, or a bundle with 'semigroup'
    plus optional 'topology' and 'congruence', or a truncated presentation."""
    if not isinstance(doc, dict):
        raise LoadError("check input must be a JSON object")
    if doc.get("kind") == "truncated_presentation":
        return presentation_from_doc(doc), None, None
    if "semigroup" in doc:
        sem = parse_semigroup(doc["semigroup"])
        top = top_spec_from_doc(doc["topology"]) if doc.get("topology") else None
        cong = doc.get("congruence")
        return sem, top, cong
    return parse_semigroup(doc), None, None


def _need_topology(sem, top):
    if top is None:
        raise LoadError("this check needs a bundle with a 'topology' entry")
    return TopSemigroup(sem, top)


def cmd_check(args) -> int:
    doc = _load_json(args.file)
    kind = args.kind
    lines: list[str] = []
    report = {"schema": 1, "check": kind}

    if kind == "assoc":
        table = doc.get("table") if isinstance(doc, dict) else None
        if not isinstance(table, list):
            raise LoadError("associativity check needs a 'table'")
        ok, triple = check_associativity([tuple(r) for r in table])
        report["witness"] = list(triple) if triple else None
        if triple:
            lines.append(f"fails at ({triple[0]}, {triple[1]}, {triple[2]})")
    else:
        loaded = _bundle_parts(doc)
        if isinstance(loaded[0], TruncatedPresentation):
            pres, sem, top, cong = loaded[0], loaded[0].base, None, None
        else:
            pres, (sem, top, cong) = None, loaded

        if kind == "inverse":
            got = inverse_structure(sem)
            ok = not isinstance(got, NotInverse)
            if ok:
                report["inverse"] = list(got.inv)
            else:
                report["witness"] = got.witness
                lines.append(f"element {sem.label(got.witness)} has "
                             f"{got.inverse_count} generalized inverses")
        elif kind == "clifford":
            got = inverse_structure(sem)
            if isinstance(got, NotInverse):
                ok = False
                lines.append("not an inverse semigroup")
            else:
                ok = is_clifford(got)
                if not ok:
                    lines.append("some x*x^-1 differs from x^-1*x")
        elif kind == "vp":
            got = inverse_structure(sem)
            if isinstance(got, NotInverse):
                raise LoadError("the Vagner-Preston test needs an inverse monoid")
            if cong is None:
                raise LoadError("the Vagner-Preston test needs a 'congruence' entry")
            rho = Congruence(sem, RIGHT, canonical_classes(cong))
            ok = is_vagner_preston(got, rho)
            report["classes"] = list(rho.classes)
            if ok and is_commutative(sem) and sem.identity is not None:
                cls = classify_vp_quotient(got, rho)
                report["quotient"] = cls.kind
                lines.append(f"quotient is a {cls.kind} on {cls.quotient.n} element(s)")
        elif kind in ("ditop", "weak-ditop"):
            ts = _need_topology(sem, top)
            checker = ditopological_check if kind == "ditop" else weakly_ditopological_check
            rep = checker(ts)
            ok = rep.ok
            report["inversion_continuous"] = rep.inversion_ok
            report["failure"] = list(rep.failure) if rep.failure else None
            if not rep.inversion_ok:
                lines.append(f"inversion discontinuous at {rep.inversion_witness}")
            if rep.failure:
                x, s = rep.failure
                lines.append(f"factorized set at {sem.label(x)} catches {sem.label(s)} "
                             f"outside its minimal neighborhood")
        elif kind in ("u", "u2"):
            ts = _need_topology(sem, top)
            checker = u_check if kind == "u" else u2_check
            ok = True
            for x in range(sem.n):
                good, wit = checker(ts, x)
                if not good:
                    ok = False
                    report["failure"] = x
                    lines.append(f"fails at {sem.label(x)}")
                    break
            else:
                report["failure"] = None
        elif kind == "chain-finite":
            ok, chain = chain_finite_check(sem)
            report["longest_chain"] = list(chain)
            lines.append("longest chain: " + " > ".join(sem.label(x) for x in chain))
        elif kind == "cong-basis":
            target = pres if pres is not None else _need_topology(sem, top)
            rep = congruence_basis_check(target)
            ok = rep.ok
            if not ok:
                x, z, nbhd = rep.failures[0]
                report["failure"] = {"point": x, "neighborhood": list(points_of(nbhd)),
                                     "witness": z}
                lines.append(f"no all-open-class right congruence keeps "
                             f"{sem.label(x)} inside {_labels(sem, nbhd)}: "
                             f"{sem.label(z)} is forced in")
                if rep.candidates:
                    for classes, reason in rep.candidates[:16]:
                        lines.append(f"  candidate {list(classes)}: {reason}")
                    if len(rep.candidates) > 16:
                        lines.append(f"  ... {len(rep.candidates) - 16} more candidates")
                    report["candidates"] = [
                        {"classes": list(c), "reason": r} for c, r in rep.candidates]
        else:
            raise LoadError(f"unknown check kind {kind!r}")

    report["verdict"] = ok
    if args.json:
        _emit_json(report, args.out)
    else:
        print(f"{kind}: {_paint('PASS', GREEN) if ok else _paint('FAIL', RED)}")
        for line in lines:
            print("  " + line)
    return 0 if ok else 2


# -- embed ---------------------------------------------------------------------

def _audit(rep):
    return verify_embedding(rep)


def _rep_summary(rep, audit=None):
    doc = {"representation": representation_doc(rep),
           "homomorphism": rep.verification, "injective": True}
    if audit is not None:
        doc["preimages_open"] = not audit.preimage_failures
        doc["images_relatively_open"] = not audit.relative_failures
        doc["undecidable_opens"] = len(audit.undecidable)
    return doc


def cmd_embed(args) -> int:
    doc = _load_json(args.file)
    kind = args.kind
    out = {"schema": 1, "embed": kind}
    failed = False
    lines = []

    if kind == "cayley":
        rep = cayley_right_regular(parse_semigroup(doc))
        audit = _audit(rep)
        out.update(_rep_summary(rep, audit))
        failed = not audit.ok
        lines.append(f"acts on window {rep.window}; verification {rep.verification}")
    elif kind == "wp":
        sem = parse_semigroup(doc)
        got = inverse_structure(sem)
        if isinstance(got, NotInverse):
            raise LoadError(f"element {got.witness} has {got.inverse_count} inverses; "
                            "the partial-bijection action needs an inverse semigroup")
        rep = wagner_preston(got)
        audit = _audit(rep)
        keeps = preserves_inversion(rep, got)
        out.update(_rep_summary(rep, audit))
        out["preserves_inversion"] = keeps
        failed = not audit.ok or not keeps
        lines.append(f"inversion becomes the relational converse: {keeps}")
    elif kind == "product":
        if not isinstance(doc, dict) or doc.get("kind") != "product":
            raise LoadError("product input needs {'kind': 'product', 'factors': [...]}")
        factors = [cayley_right_regular(parse_semigroup(d)) for d in doc["factors"]]
        rep = product_embed(factors)
        audit = _audit(rep)
        out.update(_rep_summary(rep, audit))
        failed = not audit.ok
        lines.append(f"{len(factors)} factor blocks, evaluation window {rep.window}")
    elif kind == "adjoin":
        base = cayley_right_regular(parse_semigroup(doc))
        with_one, with_zero = adjoin_embed(base)
        audit1, audit0 = _audit(with_one), _audit(with_zero)
        out["with_identity"] = _rep_summary(with_one, audit1)
        out["with_zero"] = _rep_summary(with_zero, audit0)
        failed = not audit1.ok or not audit0.ok
        lines.append("external identity and external zero both represented")
    elif kind == "embcl":
        if not isinstance(doc, dict) or doc.get("kind") != "symmetric_inverse":
            raise LoadError("input needs {'kind': 'symmetric_inverse', 'window': n}")
        n = int(doc["window"])
        if not 1 <= n <= 4:
            raise LoadError("symmetric inverse monoids are materialized for windows 1..4")
        rep = embcl_rep(n)
        audit = _audit(rep)
        out.update(_rep_summary(rep, audit))
        failed = not audit.ok
        lines.append(f"all {rep.source.n} partial bijections pushed into the "
                     f"total function space; verification {rep.verification}")
    elif kind == "clifford-product":
        sem = parse_semigroup(doc)
        got = inverse_structure(sem)
        if isinstance(got, NotInverse):
            raise LoadError("the product packing needs a Clifford inverse semigroup")
        rep = clifford_product_embed(got)
        out.update(_rep_summary(rep))
        out["factor_sizes"] = [f.n for f in rep.target.factors]
        lines.append(f"target product of {len(rep.target.factors)} factors, "
                     f"size {rep.target.n}; verification {rep.verification}")
    elif kind == "group-restrict":
        if not isinstance(doc, dict) or doc.get("kind") != "transformation_group":
            raise LoadError("input needs {'kind': 'transformation_group', 'window': n, 'maps': [...]}")
        win = int(doc["window"])
        maps = tuple(Transformation(win, tuple(m)) for m in doc["maps"])
        laws = shared_image_laws(maps)
        gr = group_restriction(maps)
        audit = _audit(gr.rep)
        out.update(_rep_summary(gr.rep, audit))
        out["laws"] = {name: ok for name, ok, _ in laws}
        out["common_image"] = list(gr.image)
        failed = not audit.ok or not all(ok for _, ok, _ in laws)
        for name, ok, wit in laws:
            lines.append(f"{name}: {'ok' if ok else f'fails at {wit}'}")
    else:
        raise LoadError(f"unknown embed kind {kind!r}")

    if args.json or args.out:
        _emit_json(out, args.out)
    if not args.json or args.out:
        status = _paint("FAIL", RED) if failed else _paint("OK", GREEN)
        print(f"embed {kind}: {status}")
        for line in lines:
            print("  " + line)
    return 1 if failed else 0


# -- entry point ---------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="semitop",
        description="finite windows of topological-semigroup embedding arguments")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the bundled obstruction instances")
    p.add_argument("--window", "-w", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("obstruct", help="run the forcing argument on an instance")
    p.add_argument("instance", help="e.g. exB, odd_chain, right_simple_zero:S3, "
                                    "brandt, luke, or any with -discrete appended")
    p.add_argument("--window", "-w", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--replay", default=None, metavar="CERT",
                   help="verify a stored certificate instead of searching")
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("check", help="run a predicate over a JSON input")
    p.add_argument("kind", choices=CHECK_KINDS)
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("embed", help="build and audit a representation")
    p.add_argument("kind", choices=EMBED_KINDS)
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_embed)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except SemitopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
