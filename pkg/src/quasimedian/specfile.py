"""Line-oriented spec files describing a graph product.

::

    # comment
    vertex u C2
    vertex v Z
    vertex w table:s3.txt
    edge u v
    gens v 2,3
    word g u:1*v:-2
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError, SpecParseError
from .graph import SimplicialGraph
from .groups import VertexGroup, generates, parse_descriptor
from .words import GraphProduct, NormalWord, parse_syllables, reduce


@dataclass(frozen=True, eq=False)
class SpecFile:
    spec: GraphProduct
    words: dict[str, NormalWord] = field(default_factory=dict)
    gens: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def word(self, text: str) -> NormalWord:
        """A named word or a word expression."""
        if text in self.words:
            return self.words[text]
        return reduce(self.spec, parse_syllables(self.spec, text))


def _name_ok(name: str) -> bool:
    return bool(name) and not any(c in name for c in ":*#,|") and name != "e"


def parse_spec(text: str, base_dir: str | Path | None = None) -> SpecFile:
    """Parse a spec file; ``table:`` paths are relative to ``base_dir``."""
    base = Path(base_dir) if base_dir is not None else None
    vertices: list[str] = []
    groups: dict[str, VertexGroup] = {}
    edges: list[tuple[str, str]] = []
    seen_edges: set[frozenset[str]] = set()
    pending_words: list[tuple[int, list[int], str, str]] = []
    pending_gens: list[tuple[int, list[int], str, str]] = []
    for n, raw in enumerate(text.splitlines(), 1):
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", raw.split("#", 1)[0])]
        if not tokens:
            continue
        kind, args = tokens[0][0], [t for t, _ in tokens[1:]]
        col = [c for _, c in tokens[1:]]
        if kind == "vertex":
            if len(args) != 2:
                raise SpecParseError("expected: vertex <name> <group>", n)
            name, desc = args
            if not _name_ok(name):
                raise SpecParseError(f"bad vertex name {name!r}", n, col[0])
            if name in groups:
                raise SpecParseError(f"duplicate vertex {name}", n, col[0])
            try:
                groups[name] = parse_descriptor(desc, base)
            except (SpecParseError, DomainError) as exc:
                raise SpecParseError(str(exc), n, col[1]) from None
            except OSError as exc:
                raise SpecParseError(f"cannot read table {desc[6:]}: {exc.strerror}", n, col[1]) from None
            vertices.append(name)
        elif kind == "edge":
            if len(args) != 2:
                raise SpecParseError("expected: edge <a> <b>", n)
            a, b = args
            for v, c in zip(args, col):
                if v not in groups:
                    raise SpecParseError(f"unknown vertex {v}", n, c)
            if a == b:
                raise SpecParseError("loops are not allowed", n, col[1])
            if frozenset((a, b)) in seen_edges:
                raise SpecParseError(f"duplicate edge {a} {b}", n, col[0])
            seen_edges.add(frozenset((a, b)))
            edges.append((a, b))
        elif kind == "word":
            if len(args) != 2:
                raise SpecParseError("expected: word <name> <wordexpr>", n)
            pending_words.append((n, col, args[0], args[1]))
        elif kind == "gens":
            if len(args) != 2:
                raise SpecParseError("expected: gens <vertex> <k1,k2,...>", n)
            pending_gens.append((n, col, args[0], args[1]))
        else:
            raise SpecParseError(f"unknown directive {kind!r}", n, tokens[0][1])
    if not vertices:
        raise SpecParseError("no vertices declared")
    spec = GraphProduct(SimplicialGraph.from_edges(vertices, edges), groups)

    words: dict[str, NormalWord] = {}
    for n, col, name, expr in pending_words:
        if not _name_ok(name) or name in words:
            raise SpecParseError(f"bad or duplicate word name {name!r}", n, col[0])
        try:
            words[name] = reduce(spec, parse_syllables(spec, expr))
        except (SpecParseError, DomainError) as exc:
            raise SpecParseError(str(exc), n, col[1]) from None
    gens: dict[str, tuple[int, ...]] = {}
    for n, col, vertex, values in pending_gens:
        if vertex not in groups:
            raise SpecParseError(f"unknown vertex {vertex}", n, col[0])
        if vertex in gens:
            raise SpecParseError(f"duplicate gens for {vertex}", n, col[0])
        try:
            gens[vertex] = tuple(groups[vertex].normalize(int(k)) for k in values.split(","))
        except (ValueError, DomainError):
            raise SpecParseError(f"malformed generator list {values!r}", n, col[1]) from None
        if not generates(groups[vertex], gens[vertex]):
            raise SpecParseError(f"generators {values} do not generate the group at {vertex}", n, col[1])
    return SpecFile(spec, words, gens)


def load_spec(path: str | Path) -> SpecFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_spec(text, path.parent)


def format_spec(sf: SpecFile) -> str:
    """Canonical text: vertices, then edges, gens and words, in declaration order."""
    spec = sf.spec
    idx = spec.graph.index
    lines = [f"vertex {v} {spec.groups[v].descriptor()}" for v in spec.vertices]
    edges = sorted((spec.graph.sorted(e) for e in spec.graph.edges), key=lambda e: (idx[e[0]], idx[e[1]]))
    lines += [f"edge {a} {b}" for a, b in edges]
    lines += [f"gens {v} {','.join(map(str, sf.gens[v]))}" for v in spec.vertices if v in sf.gens]
    lines += [f"word {name} {w}" for name, w in sf.words.items()]
    return "\n".join(lines) + "\n"
