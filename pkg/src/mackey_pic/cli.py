"""``mackey-pic`` command line.

Groups are given as invariant factors (``--group 9``, ``--group 2,2``).
Twists are comma-separated values in the canonical subgroup order printed by
``lattice``; every command that reads a twist echoes that order.  Subgroups
(``--n``) are a lattice index such as ``2`` or generators in parentheses such
as ``(0,1)`` or ``(3)``.

Exit status: 0 clean, 1 a verification found violations, 2 invalid input,
3 a resource cap was hit or a result is not free abelian.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any

from . import serialize as ser
from .agmod import check_counit, check_module_axioms, counit_morphism, eval_GG, twisted_module
from .boxhom import box_scalar, check_pairing, dress_pairing_box, verify_box_law
from .changegroups import geometric_fixed_points, phi_twisted_comparison, qind_twisted, truncated_twist
from .errors import ConsistencyError, InvalidInputError, ResourceLimitError, UnrepresentableError
from .groups import DEFAULT_ORDER_CAP, FiniteAbelianGroup, make_group, quotient, subgroup
from .mackey import burnside_mackey, check_axioms, is_isomorphism, render_lewis
from .picard import picard_group, picard_order, verify_classification, verify_splitting
from .report import ValidationReport
from .twists import Twist, equivalent, make_twist, normalize, twisted_burnside, witness_iso

DEFAULT_SEED = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInputError(message)


def parse_group(text: str, cap: int = DEFAULT_ORDER_CAP) -> FiniteAbelianGroup:
    text = text.strip()
    if text in ("", "1", "e"):
        return make_group(())
    try:
        factors = [int(x) for x in text.split(",")]
    except ValueError:
        raise InvalidInputError(f"cannot read group {text!r}; expected factors like 2,2") from None
    G = make_group(factors)
    if G.order > cap:
        raise ResourceLimitError(f"group order {G.order} exceeds the cap {cap}")
    return G


def parse_twist(G: FiniteAbelianGroup, text: str) -> Twist:
    try:
        return make_twist(G, text)
    except ValueError as exc:
        raise InvalidInputError(str(exc)) from None


def parse_subgroup(G: FiniteAbelianGroup, text: str) -> int:
    text = text.strip()
    lat = G.lattice
    if re.fullmatch(r"\d+", text):
        return lat.index_of(int(text))
    gens = re.findall(r"\(([^)]*)\)", text)
    if not gens:
        raise InvalidInputError(f"cannot read subgroup {text!r}; give an index or generators like (0,1)")
    try:
        tuples = [tuple(int(x) for x in g.split(",")) for g in gens]
    except ValueError:
        raise InvalidInputError(f"bad generator in {text!r}") from None
    if any(len(t) != G.rank for t in tuples):
        raise InvalidInputError(f"generators need {G.rank} coordinates")
    return lat.index_of(subgroup(G, tuples))


def ordering(G: FiniteAbelianGroup) -> list[str]:
    lat = G.lattice
    return [lat.label(h) for h in range(len(lat))]


# ---------------------------------------------------------------------------
# output


class Output:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream

    def emit(self, doc: dict[str, Any], text: str | None = None) -> None:
        if self.fmt == "json" or text is None:
            self.stream.write(json.dumps(doc, indent=2) + "\n")
        else:
            self.stream.write(text.rstrip("\n") + "\n")


def _report_status(*reports: ValidationReport) -> int:
    return 0 if all(r.ok for r in reports) else 1


def _order_line(G: FiniteAbelianGroup) -> str:
    return "subgroup order: " + " ".join(f"{i}:{s}" for i, s in enumerate(ordering(G)))


# ---------------------------------------------------------------------------
# commands


def cmd_lattice(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    if args.format == "dot":
        out.stream.write(ser.lattice_to_dot(G))
        return 0
    doc = ser.lattice_to_dict(G)
    lines = [f"{G.name()}: {len(G.lattice)} subgroups"]
    for s in doc["subgroups"]:
        gens = " ".join("(" + ",".join(map(str, g)) + ")" for g in s["generators"]) or "()"
        lines.append(f"  {s['index']}: order {s['order']} generated by {gens}")
    out.emit(doc, "\n".join(lines))
    return 0


def cmd_burnside(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    doc = ser.burnside_to_dict(G)
    lines = [f"Burnside ring of {G.name()}, basis " + " ".join(doc["basis"]), "products:"]
    for i, row in enumerate(doc["products"]):
        for j, coeffs in enumerate(row):
            if j >= i:
                terms = [f"{c}*{doc['basis'][k]}" for k, c in enumerate(coeffs) if c]
                lines.append(f"  {doc['basis'][i]} * {doc['basis'][j]} = {' + '.join(terms) or '0'}")
    lines.append("marks (row: subgroup fixed by, column: orbit):")
    for row in doc["marks"]["entries"]:
        lines.append("  " + " ".join(f"{x:3d}" for x in row))
    out.emit(doc, "\n".join(lines))
    return 0


def load_functor(path: str, G: FiniteAbelianGroup):
    try:
        with open(path) as fh:
            M = ser.functor_from_dict(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InvalidInputError(f"cannot read functor document {path}: {exc}") from None
    if M.group != G:
        raise InvalidInputError(f"functor document is over {M.group.name()}, not {G.name()}")
    return M


def cmd_mackey_check(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    if args.functor and args.twist:
        raise InvalidInputError("give either --twist or --functor, not both")
    if args.functor:
        M = load_functor(args.functor, G)
    else:
        M = twisted_burnside(parse_twist(G, args.twist)) if args.twist else burnside_mackey(G)
    rep = check_axioms(M)
    rep.data["subgroups"] = ordering(G)
    out.emit(ser.report_to_dict(rep), _order_line(G) + "\n" + rep.summary())
    return _report_status(rep)


def cmd_twist(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    a = parse_twist(G, args.a)
    echo = ordering(G)
    if args.action == "normalize":
        n = normalize(a)
        doc = {"type": "normalized", "subgroups": echo, "twist": list(a.values), "normal_form": list(n.values)}
        out.emit(doc, f"{_order_line(G)}\n{a} -> {n}")
        return 0
    if args.b is None:
        raise InvalidInputError(f"twist {args.action} needs --b")
    b = parse_twist(G, args.b)
    if args.action == "equiv":
        eq = equivalent(a, b)
        doc = {"type": "equivalence", "subgroups": echo, "a": list(a.values), "b": list(b.values), "equivalent": eq}
        out.emit(doc, f"{_order_line(G)}\n{'true' if eq else 'false'}")
        return 0
    phi = witness_iso(a, b)
    if phi is None:
        doc = {"type": "witness", "subgroups": echo, "found": False, "verified": False}
        out.emit(doc, f"{_order_line(G)}\nno witness: {a} and {b} are not equivalent")
        return 0
    ok = is_isomorphism(phi)
    doc = {"type": "witness", "subgroups": echo, "found": True, "verified": ok, "morphism": ser.morphism_to_dict(phi)}
    lines = [_order_line(G), f"isomorphism {a} -> {b} ({'verified' if ok else 'FAILED verification'})"]
    for c in doc["morphism"]["components"]:
        lines.append(f"  {c['label']}: {c['matrix']['entries']}")
    out.emit(doc, "\n".join(lines))
    return 0 if ok else 1


def cmd_box(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    a, b = parse_twist(G, args.a), parse_twist(G, args.b)
    lat = G.lattice
    theta = dress_pairing_box(a, b)
    levels = []
    for h in range(len(lat)):
        below = lat.below(h)
        levels.append(
            {
                "level": h,
                "label": lat.label(h),
                "scalars": [[box_scalar(a, b, h, j, k) for k in below] for j in below],
                "matrix": ser.matrix_to_dict(theta.theta[h]),
            }
        )
    rep = verify_box_law(a, b, seed=args.seed)
    if not check_pairing(theta):
        rep.fail("universal pairing is a Dress pairing")
    doc = {"type": "box", "subgroups": ordering(G), "a": list(a.values), "b": list(b.values),
           "seed": args.seed, "theta": levels, "report": ser.report_to_dict(rep)}
    lines = [_order_line(G)]
    for lv in levels:
        lines.append(f"theta at {lv['label']}: {lv['scalars']}")
    lines.append(rep.summary())
    out.emit(doc, "\n".join(lines))
    return _report_status(rep)


def cmd_phi(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    n = parse_subgroup(G, args.n)
    a = parse_twist(G, args.twist) if args.twist else Twist(G, (1,) * len(G.lattice))
    M = twisted_burnside(a)
    F = geometric_fixed_points(M, n)
    rep = ValidationReport(f"geometric fixed points of {M.name} at {G.lattice.label(n)}")
    rep.absorb(check_axioms(F))
    alpha = truncated_twist(a, n)
    if not is_isomorphism(phi_twisted_comparison(a, n)):
        rep.fail("result matches the truncated twist", detail=str(alpha))
    rep.data["truncated_twist"] = list(alpha.values)
    doc = {"type": "phi", "subgroups": ordering(G), "twist": list(a.values), "n": n,
           "functor": ser.functor_to_dict(F), "report": ser.report_to_dict(rep)}
    text = f"{_order_line(G)}\n{render_lewis(F)}\ntruncated twist {alpha}\n{rep.summary()}"
    out.emit(doc, text)
    return _report_status(rep)


def cmd_qind(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    n = parse_subgroup(G, args.n)
    Q, _, _ = quotient(G, G.lattice.subgroups[n])
    alpha = parse_twist(Q, args.alpha)
    ahat, _ = qind_twisted(alpha, G, n)
    doc = {"type": "qind", "subgroups": ordering(G), "quotient": ser.group_to_dict(Q),
           "quotient_subgroups": ordering(Q), "alpha": list(alpha.values), "extended": list(ahat.values)}
    qorder = " ".join(f"{i}:{x}" for i, x in enumerate(ordering(Q)))
    text = f"{_order_line(G)}\nquotient {Q.name()} order: {qorder}\n{alpha} -> {ahat}"
    out.emit(doc, text)
    return 0


def cmd_picard(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    pic = picard_group(G)
    doc = ser.picard_to_dict(pic)
    doc["closed_form_order"] = picard_order(G)
    status = 0 if pic.order == doc["closed_form_order"] else 1
    lines = [_order_line(G), f"Pic of {G.name()}: order {pic.order}"]
    lines += [f"  [{i}] {c.representative}" for i, c in enumerate(pic.classes)]
    if args.verify:
        rep = verify_classification(G, args.bound)
        doc["report"] = ser.report_to_dict(rep)
        lines.append(rep.summary())
        status = max(status, _report_status(rep))
    out.emit(doc, "\n".join(lines))
    return status


def cmd_split(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    n = parse_subgroup(G, args.n)
    rep = verify_splitting(G, n)
    rep.data["subgroups"] = ordering(G)
    out.emit(ser.report_to_dict(rep), _order_line(G) + "\n" + rep.summary())
    return _report_status(rep)


def cmd_module(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    a = parse_twist(G, args.twist) if args.twist else Twist(G, (1,) * len(G.lattice))
    M = twisted_module(a)
    if args.action == "table":
        rep = check_module_axioms(M)
        if not eval_GG(twisted_burnside(a)).same_as(M):
            rep.fail("evaluation of the twisted functor matches the module")
        doc = {"subgroups": ordering(G), **ser.module_to_dict(M), "report": ser.report_to_dict(rep)}
        lines = [_order_line(G), f"{M.name}, basis {' '.join(M.labels)}"]
        for act in doc["action"]:
            lines.append(f"  {act['label']} acts by {act['matrix']['entries']}")
        lines.append(rep.summary())
        out.emit(doc, "\n".join(lines))
        return _report_status(rep)
    rep = ValidationReport(f"counit checks for {M.name}")
    if not check_counit(M):
        rep.fail("unit map is an isomorphism onto the evaluated tensor product")
    if not is_isomorphism(counit_morphism(twisted_burnside(a))):
        rep.fail("counit on the twisted functor is an isomorphism")
    doc = {"subgroups": ordering(G), "twist": list(a.values), **ser.report_to_dict(rep)}
    out.emit(doc, _order_line(G) + "\n" + rep.summary())
    return _report_status(rep)


def cmd_render(args, out: Output) -> int:
    G = parse_group(args.group, args.cap)
    M = twisted_burnside(parse_twist(G, args.twist)) if args.twist else burnside_mackey(G)
    if args.format == "json":
        doc = {"subgroups": ordering(G), **ser.functor_to_dict(M)}
        out.emit(doc)
    else:
        out.stream.write(_order_line(G) + "\n" + render_lewis(M, transfers=not args.no_transfers) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def _common(formats=("text", "json"), default="json") -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--group", required=True, help="invariant factors, e.g. 9 or 2,2")
    common.add_argument("--format", choices=formats, default=default)
    common.add_argument("--cap", type=int, default=DEFAULT_ORDER_CAP, help="largest group order accepted")
    return common


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mackey-pic", description="Mackey functors and Picard groups for finite abelian groups")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("lattice", parents=[_common(("text", "json", "dot"))], help="subgroup lattice")
    s.set_defaults(func=cmd_lattice)

    s = sub.add_parser("burnside", parents=[_common()], help="Burnside ring products and marks")
    s.set_defaults(func=cmd_burnside)

    s = sub.add_parser("mackey", help="Mackey functor checks")
    ss = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = ss.add_parser("check", parents=[_common()], help="axiom report for A or A^a")
    c.add_argument("--twist")
    c.add_argument("--functor", metavar="FILE", help="JSON functor document to check instead")
    c.set_defaults(func=cmd_mackey_check)

    s = sub.add_parser("twist", help="normal forms, equivalence and witnesses")
    ss = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("normalize", "equiv", "witness"):
        c = ss.add_parser(name, parents=[_common()])
        c.add_argument("--a", required=True)
        if name != "normalize":
            c.add_argument("--b", required=True)
        c.set_defaults(func=cmd_twist, b=None)

    s = sub.add_parser("box", help="box products of twisted functors")
    ss = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = ss.add_parser("verify", parents=[_common()])
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.set_defaults(func=cmd_box)

    s = sub.add_parser("phi", parents=[_common()], help="geometric fixed points")
    s.add_argument("--n", required=True)
    s.add_argument("--twist")
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("qind", parents=[_common()], help="extend a quotient twist")
    s.add_argument("--n", required=True)
    s.add_argument("--alpha", required=True, help="twist over G/N in the quotient's subgroup order")
    s.set_defaults(func=cmd_qind)

    s = sub.add_parser("picard", parents=[_common()], help="Picard group")
    s.add_argument("--verify", action="store_true", help="also run the classification check")
    s.add_argument("--bound", type=int, help="coordinate bound for refutations (default |G|^2)")
    s.set_defaults(func=cmd_picard)

    s = sub.add_parser("split", parents=[_common()], help="splitting along a quotient")
    s.add_argument("--n", required=True)
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("module", help="twisted Burnside modules")
    ss = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("table", "counit"):
        c = ss.add_parser(name, parents=[_common()])
        c.add_argument("--twist")
        c.set_defaults(func=cmd_module)

    s = sub.add_parser("render", help="text renderings")
    ss = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = ss.add_parser("lewis", parents=[_common(default="text")])
    c.add_argument("--twist")
    c.add_argument("--no-transfers", action="store_true")
    c.set_defaults(func=cmd_render)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "bound", None) is not None and args.bound < 1:
            raise InvalidInputError("--bound must be positive")
        if args.cap < 1:
            raise InvalidInputError("--cap must be positive")
        return args.func(args, Output(args.format, stdout))
    except InvalidInputError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except (ResourceLimitError, UnrepresentableError) as exc:
        stderr.write(f"error: {exc}\n")
        return 3
    except ConsistencyError as exc:
        stderr.write(f"verification failed: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
