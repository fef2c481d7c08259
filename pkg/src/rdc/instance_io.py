"""JSON (de)serialisation of instances.

Rationals are written as ``"p/q"`` strings or integers.  Edge-users graphs
are embedded inline as an edge list, or referenced by a path resolved
relative to the instance file.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .core import HypothesisClass, Instance
from .cost import CostModel, fraction_str, to_fraction
from .graph import Graph, load_edge_list
from .objective import (
    Custom,
    EdgeUsersFamily,
    FBar,
    Indicator,
    ModularFamily,
    Objective,
    StructureDisqualification,
    VersionSpaceReduction,
)


class InstanceFormatError(ValueError):
    pass


def _rat(v) -> Fraction:
    try:
        return to_fraction(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceFormatError(f"not an exact rational: {v!r}") from exc


def _rat_out(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else fraction_str(v)


def _load_graph(spec: dict, base: Optional[Path]) -> Graph:
    if "edges" in spec:
        n = spec.get("num_nodes")
        edges = [tuple(e) for e in spec["edges"]]
        if n is None:
            n = 1 + max(max(e) for e in edges)
        return Graph.from_edges(int(n), edges)
    path = Path(spec["graph"])
    if not path.is_absolute() and base is not None:
        path = base / path
    return load_edge_list(path)


def objective_from_json(obj: dict, H: HypothesisClass, doc: dict, base: Optional[Path] = None) -> Objective:
    kind = obj.get("kind")
    top_Q = doc.get("Q")
    if kind == "vs_reduction":
        f = VersionSpaceReduction(H)
    elif kind == "structure":
        f = StructureDisqualification(H, obj["structures"], obj.get("weights"))
    elif kind == "fbar":
        Q = obj.get("Q", top_Q)
        if Q is None:
            raise InstanceFormatError("fbar objective needs Q")
        per_h = obj.get("per_h") or {}
        pk = per_h.get("kind")
        if pk == "modular":
            fam = ModularFamily(per_h["pair_weights"], len(H))
        elif pk == "edge_users":
            graph = _load_graph(per_h, base)
            labelings = per_h.get("labelings") or [list(h) for h in H.hypotheses]
            fam = EdgeUsersFamily(graph, labelings)
        else:
            raise InstanceFormatError(f"unknown per_h kind {pk!r}")
        f = FBar(H, fam, _rat(Q), obj.get("weights"), obj.get("eta"))
    elif kind == "indicator":
        f = Indicator([tuple(p) for p in obj["triggers"]], _rat(obj.get("Q", top_Q or 1)))
    elif kind == "custom":
        table = {tuple(tuple(p) for p in row["S"]): _rat(row["value"]) for row in obj["table"]}
        f = Custom([tuple(p) for p in obj["ground"]], table, _rat(obj.get("Q", top_Q)), _rat(obj.get("eta", doc.get("eta"))))
    else:
        raise InstanceFormatError(f"unknown objective kind {kind!r}")
    if kind in ("vs_reduction", "structure") and top_Q is not None and _rat(top_Q) != f.Q:
        raise InstanceFormatError(f"Q={top_Q} does not match the {kind} target {f.Q}")
    if doc.get("eta") is not None and kind != "custom":
        f.eta = _rat(doc["eta"])
    return f


def instance_from_dict(doc: dict, base: Optional[Path] = None) -> Instance:
    try:
        hyps = doc["hypotheses"]
        actions = doc.get("actions")
        responses = doc.get("responses")
        num_actions = len(actions) if actions else len(hyps[0])
        num_responses = len(responses) if responses else 1 + max(max(h) for h in hyps)
        H = HypothesisClass(tuple(tuple(h) for h in hyps), num_actions, num_responses)
        costs = CostModel.from_rows([[_rat(c) for c in row] for row in doc["costs"]])
        f = objective_from_json(doc["objective"], H, doc, base)
        available = doc.get("available")
        return Instance(
            H, costs, f,
            tuple(actions) if actions else None,
            tuple(responses) if responses else None,
            frozenset(available) if available is not None else None,
        )
    except KeyError as exc:
        raise InstanceFormatError(f"missing field {exc.args[0]!r}") from exc


def load_instance(path: Union[str, Path]) -> Instance:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc
    return instance_from_dict(doc, path.parent)


def objective_to_json(f: Objective) -> dict:
    if isinstance(f, VersionSpaceReduction):
        return {"kind": "vs_reduction"}
    if isinstance(f, StructureDisqualification):
        return {
            "kind": "structure",
            "structures": [sorted(s) for s in f.structures],
            "weights": [_rat_out(w) for w in f.weights],
        }
    if isinstance(f, FBar):
        fam = f.family
        out = {"kind": "fbar", "Q": _rat_out(f.Q), "eta": _rat_out(f.eta)}
        if not f.uniform:
            out["weights"] = [_rat_out(w) for w in f.weights]
        if isinstance(fam, ModularFamily):
            pw = [[[_rat_out(w) for w in row] for row in hx] for hx in fam.weights]
            out["per_h"] = {"kind": "modular", "pair_weights": pw}
        elif isinstance(fam, EdgeUsersFamily):
            out["per_h"] = {
                "kind": "edge_users",
                "num_nodes": fam.graph.num_nodes,
                "edges": [list(e) for e in sorted(fam.graph.edges)],
                "labelings": [list(l) for l in fam.labelings],
            }
        return out
    if isinstance(f, Indicator):
        return {"kind": "indicator", "Q": _rat_out(f.Q), "triggers": [list(p) for p in sorted(f.triggers)]}
    if isinstance(f, Custom):
        return {
            "kind": "custom",
            "Q": _rat_out(f.Q),
            "eta": _rat_out(f.eta),
            "ground": [list(p) for p in f.ground],
            "table": [{"S": [list(p) for p in S], "value": _rat_out(v)} for S, v in f.table_items()],
        }
    raise TypeError(f"cannot serialise objective of kind {f.kind!r}")


def instance_to_dict(inst: Instance) -> dict:
    f = inst.objective
    doc = {
        "actions": list(inst.action_names or (str(x) for x in range(inst.num_actions))),
        "responses": list(inst.response_names or (str(y) for y in range(inst.num_responses))),
        "hypotheses": [list(h) for h in inst.hypotheses.hypotheses],
        "costs": [[_rat_out(c) for c in row] for row in inst.costs.table],
        "objective": objective_to_json(f),
        "Q": _rat_out(f.Q),
        "eta": _rat_out(f.eta),
    }
    if inst.available is not None:
        doc["available"] = sorted(inst.available)
    return doc


def save_instance(inst: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=1) + "\n")
