"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import classify, export
from .cayley import Ball, GeneratingSets, ball, distance, weighted_distance
from .errors import DomainError, InvariantError, SpecParseError
from .graph import chromatic_number
from .qmcheck import axiom_failures, cubical_dimension, is_median
from .specfile import SpecFile, load_spec
from .walls import ball_hyperplanes, ball_sector_walls, hyperplane_sectors, quasi_cubulate, tree_embedding

SCHEMA = export.SCHEMA


def _ball(sf: SpecFile, args) -> Ball:
    return ball(sf.spec, args.radius, args.bound)


def _write(text: str, target: str | None) -> None:
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def cmd_reduce(sf: SpecFile, args) -> str:
    return f"{sf.word(args.word)}\n"


def cmd_dist(sf: SpecFile, args) -> str:
    g, h = sf.word(args.w1), sf.word(args.w2)
    if args.weighted:
        return f"{weighted_distance(GeneratingSets(sf.spec, sf.gens), g, h)}\n"
    return f"{distance(g, h)}\n"


def cmd_ball(sf: SpecFile, args) -> str:
    b = _ball(sf, args)
    if args.dot:
        _write(export.ball_to_dot(b), args.dot)
        return ""
    if args.json:
        _write(export.dumps(export.ball_to_json(b)), args.json)
        return ""
    return f"vertices {len(b)} edges {len(b.edges)}\n"


def cmd_check(sf: SpecFile, args) -> str:
    b = _ball(sf, args)
    g = b.graph
    ax = b.check_axioms()
    inner = b.interior(1)
    classes = [c.index for c in g.hyperplanes.classes if any(x in inner and y in inner for x, y in c.edges)]
    doc = {
        "schema": SCHEMA,
        "radius": b.radius,
        "bound": b.bound,
        "vertices": len(b),
        "interior_vertices": len(inner),
        "axioms": ax.to_json(),
        "hyperplane_count": len(g.hyperplanes),
        "dimension": cubical_dimension(g, classes),
        "failures": axiom_failures(ax, lambda i: str(b.words[i])),
    }
    return export.dumps(doc)


def cmd_classify(sf: SpecFile, args) -> str:
    return export.dumps(classify.report(sf.spec, args.maximal_joins))


def _pair_arrays(b: Ball, other: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = b.graph.distances
    iu = np.triu_indices(len(b), 1)
    return d[iu], other[iu]


def cmd_cubulate(sf: SpecFile, args) -> str:
    b = _ball(sf, args)
    keys = ball_hyperplanes(b)
    two_sided = all(len(hyperplane_sectors(b, k)) == 2 for k in keys)
    space = ball_sector_walls(b, keys)
    cub = quasi_cubulate(space)
    emb = np.array([cub.embedding[i] for i in range(len(b))])
    dsw = cub.graph.distances_from(emb)[:, emb]
    d, s = _pair_arrays(b, dsw)
    doc = {
        "schema": SCHEMA,
        "radius": b.radius,
        "bound": b.bound,
        "ball_vertices": len(b),
        "hyperplanes": len(keys),
        "walls": len(space.walls),
        "cubulation_vertices": cub.graph.n,
        "cubulation_edges": len(cub.graph.edges),
        "median": is_median(cub.graph),
        "sandwich_ok": bool(np.all(d <= s) and np.all(s <= 2 * d)),
        "two_sector_hyperplanes_only": two_sided,
        "isometric": bool(np.all(d == s)),
    }
    return export.dumps(doc)


def cmd_trees(sf: SpecFile, args) -> str:
    b = _ball(sf, args)
    chi, coloring = chromatic_number(sf.spec.graph)
    te = tree_embedding(b, coloring)
    inner = sorted(b.interior(1))
    total = np.zeros((len(inner), len(inner)), dtype=np.int64)
    for f in te.factors:
        emb = np.array([f.embedding[i] for i in inner])
        total += f.graph.distances_from(emb)[:, emb]
    d = b.graph.distances[np.ix_(inner, inner)]
    doc = {
        "schema": SCHEMA,
        "radius": b.radius,
        "bound": b.bound,
        "chromatic_number": chi,
        "coloring": {v: coloring[v] for v in sf.spec.vertices},
        "factors": [
            {"color": c, "vertices": f.graph.n, "edges": len(f.graph.edges)}
            for c, f in zip(sorted(set(coloring.values())), te.factors)
        ],
        "interior_vertices": len(inner),
        "distance_sum_matches": bool(np.all(total == d)),
        "sandwich_ok": bool(np.all(d <= total) and np.all(total <= 2 * d)),
    }
    return export.dumps(doc)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasimedian", description="Graph products and their quasi-median geometry.")
    p.add_argument("--spec", required=True, help="spec file")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", help="print the normal form of a word")
    s.add_argument("word")
    s.set_defaults(run=cmd_reduce)

    s = sub.add_parser("dist", help="distance between two elements")
    s.add_argument("w1")
    s.add_argument("w2")
    s.add_argument("--weighted", action="store_true", help="use the word metric of the gens overrides")
    s.set_defaults(run=cmd_dist)

    def ball_args(s: argparse.ArgumentParser) -> None:
        s.add_argument("--radius", type=int, required=True)
        s.add_argument("--bound", type=int, default=1, help="syllable bound for Z vertices")

    s = sub.add_parser("ball", help="enumerate a ball")
    ball_args(s)
    out = s.add_mutually_exclusive_group()
    out.add_argument("--dot", metavar="OUT")
    out.add_argument("--json", metavar="OUT")
    s.set_defaults(run=cmd_ball)

    s = sub.add_parser("check", help="quasi-median axiom report on a ball")
    ball_args(s)
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("classify", help="hyperbolicity and relative hyperbolicity")
    s.add_argument("--maximal-joins", action="store_true")
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("cubulate", help="sector-wall cubulation report on a ball")
    ball_args(s)
    s.set_defaults(run=cmd_cubulate)

    s = sub.add_parser("trees", help="product-of-trees embedding report on a ball")
    ball_args(s)
    s.set_defaults(run=cmd_trees)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sf = load_spec(args.spec)
        sys.stdout.write(args.run(sf, args))
    except SpecParseError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return 2
    except (DomainError, InvariantError) as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
