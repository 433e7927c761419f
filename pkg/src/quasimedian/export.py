"""DOT and JSON renderings of balls and finite graphs."""

from __future__ import annotations

import json

from .cayley import Ball
from .words import GraphProduct

SCHEMA = 1


def spec_summary(spec: GraphProduct) -> dict:
    idx = spec.graph.index
    edges = sorted((spec.graph.sorted(e) for e in spec.graph.edges), key=lambda e: (idx[e[0]], idx[e[1]]))
    return {
        "vertices": [{"name": v, "group": spec.groups[v].descriptor()} for v in spec.vertices],
        "edges": [list(e) for e in edges],
    }


def ball_to_json(b: Ball) -> dict:
    return {
        "schema": SCHEMA,
        "spec": spec_summary(b.spec),
        "center": str(b.center),
        "radius": b.radius,
        "bound": b.bound,
        "vertices": [str(w) for w in b.words],
        "edges": [{"from": i, "to": j, "vertex": u, "elem": k} for i, j, u, k in b.edges],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def ball_to_dot(b: Ball) -> str:
    names = [_quote(str(w)) for w in b.words]
    lines = ["graph ball {"]
    lines += [f"  {n};" for n in names]
    lines += [f'  {names[i]} -- {names[j]} [label="{u}:{k}"];' for i, j, u, k in b.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"
