"""JSON documents and DOT export for the library's data types.

Every document is a plain dict with a ``"type"`` key.  Matrices are
``{"rows", "cols", "entries"}`` with row-major entries, rows indexing the
target basis and columns the source basis.  Subgroups are referred to by
their position in the canonical lattice order.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from . import burnside
from . import intlinalg as il
from .agmod import AGModule
from .errors import InvalidInputError
from .groups import FiniteAbelianGroup
from .mackey import MackeyFunctor, MackeyMorphism
from .picard import PicardGroup
from .report import ValidationReport
from .twists import Twist


def matrix_to_dict(M: np.ndarray) -> dict[str, Any]:
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "entries": [[int(x) for x in row] for row in M]}


def matrix_from_dict(d: dict[str, Any]) -> np.ndarray:
    return il.as_matrix(d["entries"], d["rows"], d["cols"])


def group_to_dict(G: FiniteAbelianGroup) -> dict[str, Any]:
    return {"type": "group", "invariant_factors": list(G.invariant_factors), "order": G.order}


def group_from_dict(d: dict[str, Any]) -> FiniteAbelianGroup:
    _expect(d, "group")
    G = FiniteAbelianGroup(tuple(d["invariant_factors"]))
    if G.order != d.get("order", G.order):
        raise InvalidInputError("group order does not match its invariant factors")
    return G


def _expect(d: dict[str, Any], kind: str) -> None:
    if d.get("type") != kind:
        raise InvalidInputError(f"expected a {kind} document, got {d.get('type')!r}")


def subgroup_table(G: FiniteAbelianGroup) -> list[dict[str, Any]]:
    lat = G.lattice
    return [
        {
            "index": h,
            "label": lat.label(h),
            "order": lat.orders[h],
            "generators": [list(G.element(g)) for g in lat.generators(h)],
        }
        for h in range(len(lat))
    ]


def lattice_to_dict(G: FiniteAbelianGroup) -> dict[str, Any]:
    lat = G.lattice
    n = len(lat)
    subs = subgroup_table(G)
    for s in subs:
        s["elements"] = [list(x) for x in lat.subgroups[s["index"]].element_tuples()]
    return {
        "type": "lattice",
        "group": group_to_dict(G),
        "subgroups": subs,
        "contains": [[bool(lat.le[i, j]) for j in range(n)] for i in range(n)],
        "meet": [[int(lat.meet_table[i, j]) for j in range(n)] for i in range(n)],
        "join": [[int(lat.join_table[i, j]) for j in range(n)] for i in range(n)],
    }


def lattice_from_dict(d: dict[str, Any]) -> FiniteAbelianGroup:
    """Rebuild the group and confirm the stored lattice matches a fresh enumeration."""
    _expect(d, "lattice")
    G = group_from_dict(d["group"])
    if lattice_to_dict(G) != d:
        raise InvalidInputError("lattice document does not match the enumerated lattice")
    return G


def covering_pairs(G: FiniteAbelianGroup) -> list[tuple[int, int]]:
    lat = G.lattice
    n = len(lat)
    out = []
    for h in range(n):
        for k in lat.below(h):
            if k != h and not any(lat.le[k, x] and lat.le[x, h] and x not in (h, k) for x in range(n)):
                out.append((k, h))
    return out


def lattice_to_dot(G: FiniteAbelianGroup) -> str:
    lat = G.lattice
    lines = [f'digraph "{G.name()}" {{', "  rankdir=BT;", "  node [shape=box];"]
    for h in range(len(lat)):
        gens = " ".join("(" + ",".join(map(str, G.element(g))) + ")" for g in lat.generators(h)) or "()"
        lines.append(f'  s{h} [label="#{h} order {lat.orders[h]}\\n{gens}"];')
    for k, h in covering_pairs(G):
        lines.append(f"  s{k} -> s{h};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def twist_to_dict(a: Twist) -> dict[str, Any]:
    lat = a.group.lattice
    return {
        "type": "twist",
        "group": group_to_dict(a.group),
        "subgroups": [lat.label(h) for h in range(len(lat))],
        "values": list(a.values),
    }


def twist_from_dict(d: dict[str, Any]) -> Twist:
    _expect(d, "twist")
    return Twist(group_from_dict(d["group"]), tuple(d["values"]))


def functor_to_dict(M: MackeyFunctor) -> dict[str, Any]:
    lat = M.lattice
    n = len(lat)
    return {
        "type": "functor",
        "name": M.name,
        "group": group_to_dict(M.group),
        "levels": [
            {"subgroup": h, "label": lat.label(h), "rank": M.ranks[h], "basis": list(M.labels[h])}
            for h in range(n)
        ],
        "restrictions": [
            {"from": h, "to": k, "matrix": matrix_to_dict(M.res[h, k])}
            for h in range(n)
            for k in lat.below(h)
            if k != h
        ],
        "transfers": [
            {"from": j, "to": h, "matrix": matrix_to_dict(M.tr[j, h])}
            for h in range(n)
            for j in lat.below(h)
            if j != h
        ],
        "weyl": [
            {"level": h, "generators": [matrix_to_dict(W) for W in M.weyl[h]]} for h in range(n)
        ],
    }


def functor_from_dict(d: dict[str, Any]) -> MackeyFunctor:
    _expect(d, "functor")
    G = group_from_dict(d["group"])
    ranks = [lvl["rank"] for lvl in d["levels"]]
    res = {(r["from"], r["to"]): matrix_from_dict(r["matrix"]) for r in d["restrictions"]}
    tr = {(t["from"], t["to"]): matrix_from_dict(t["matrix"]) for t in d["transfers"]}
    weyl = {w["level"]: [matrix_from_dict(m) for m in w["generators"]] for w in d["weyl"]}
    return MackeyFunctor.build(
        G,
        ranks,
        lambda h, k: res[h, k],
        lambda j, h: tr[j, h],
        lambda h, i: weyl[h][i],
        labels=[tuple(lvl["basis"]) for lvl in d["levels"]],
        name=d.get("name", ""),
    )


def morphism_to_dict(phi: MackeyMorphism) -> dict[str, Any]:
    lat = phi.source.lattice
    return {
        "type": "morphism",
        "source": phi.source.name,
        "target": phi.target.name,
        "components": [
            {"subgroup": h, "label": lat.label(h), "matrix": matrix_to_dict(c)}
            for h, c in enumerate(phi.components)
        ],
    }


def module_to_dict(M: AGModule) -> dict[str, Any]:
    lat = M.group.lattice
    return {
        "type": "module",
        "name": M.name,
        "group": group_to_dict(M.group),
        "rank": M.rank,
        "basis": list(M.labels),
        "action": [
            {"orbit": h, "label": f"G/{lat.label(h)}", "matrix": matrix_to_dict(A)} for h, A in enumerate(M.action)
        ],
    }


def module_from_dict(d: dict[str, Any]) -> AGModule:
    _expect(d, "module")
    G = group_from_dict(d["group"])
    acts = tuple(matrix_from_dict(a["matrix"]) for a in d["action"])
    return AGModule(G, d["rank"], acts, tuple(d["basis"]), d.get("name", ""))


def burnside_to_dict(G: FiniteAbelianGroup) -> dict[str, Any]:
    lat = G.lattice
    top = lat.top
    table = burnside.multiplication_table(G)
    return {
        "type": "burnside",
        "group": group_to_dict(G),
        "basis": [f"G/{lat.label(j)}" for j in lat.below(top)],
        "products": [[[int(c) for c in x.coefficients] for x in row] for row in table],
        "marks": matrix_to_dict(burnside.marks_matrix(G)),
    }


def picard_to_dict(P: PicardGroup) -> dict[str, Any]:
    lat = P.group.lattice
    return {
        "type": "picard",
        "group": group_to_dict(P.group),
        "order": P.order,
        "subgroups": [lat.label(h) for h in range(len(lat))],
        "representatives": [list(c.representative.values) for c in P.classes],
        "table": [list(row) for row in P.table],
    }


def report_to_dict(r: ValidationReport) -> dict[str, Any]:
    return {"type": "report", **r.to_dict()}


def report_from_dict(d: dict[str, Any]) -> ValidationReport:
    _expect(d, "report")
    rep = ValidationReport(d["title"], notes=list(d["notes"]), data=dict(d["data"]))
    for v in d["violations"]:
        rep.fail(v["check"], v["where"], v["detail"])
    return rep
