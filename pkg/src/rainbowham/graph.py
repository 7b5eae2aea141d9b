"""Edge-coloured simple graphs: data model, validation, colour transforms, I/O.

The file format used by every tool in the package is a JSON document

    {"n": <vertex count>, "edges": [[u, v, colour], ...]}

with u < v, triples sorted lexicographically, UTF-8, trailing newline.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import GraphFormatError


def edge_key(u: int, v: int) -> tuple[int, int]:
    """Normalized (min, max) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class ColouredGraph:
    """An immutable simple graph with one non-negative integer colour per edge.

    ``edges`` is sorted lexicographically with u < v; ``colours`` is parallel
    to ``edges``. Derived subgraphs share the parent's colour identifiers.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    colours: tuple[int, ...]

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[Sequence[int]]) -> "ColouredGraph":
        """Build a graph from (u, v, colour) triples, rejecting malformed input."""
        if n < 0:
            raise GraphFormatError(f"vertex count must be non-negative, got {n}")
        seen: dict[tuple[int, int], int] = {}
        for t in triples:
            if len(t) != 3:
                raise GraphFormatError(f"edge triple must have 3 entries, got {t!r}")
            u, v, c = (int(x) for x in t)
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u},{v}) has endpoint outside [0,{n})")
            if c < 0:
                raise GraphFormatError(f"edge ({u},{v}) has negative colour {c}")
            key = edge_key(u, v)
            if key in seen:
                raise GraphFormatError(f"duplicate edge ({key[0]},{key[1]})")
            seen[key] = c
        items = sorted(seen.items())
        return cls(
            n=n,
            edges=tuple(k for k, _ in items),
            colours=tuple(c for _, c in items),
        )

    @classmethod
    def from_colour_map(cls, n: int, colour_map: Mapping[tuple[int, int], int]) -> "ColouredGraph":
        return cls.from_triples(n, [(u, v, c) for (u, v), c in colour_map.items()])

    # -- derived views (cached, read-only) --------------------------------

    @cached_property
    def colour_of(self) -> dict[tuple[int, int], int]:
        return dict(zip(self.edges, self.colours))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(s) for s in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.adjacency)

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        mat = np.zeros((self.n, self.n), dtype=bool)
        if self.edges:
            arr = np.asarray(self.edges)
            mat[arr[:, 0], arr[:, 1]] = True
            mat[arr[:, 1], arr[:, 0]] = True
        return mat

    @cached_property
    def colour_classes(self) -> dict[int, tuple[tuple[int, int], ...]]:
        classes: dict[int, list[tuple[int, int]]] = {}
        for e, c in zip(self.edges, self.colours):
            classes.setdefault(c, []).append(e)
        return {c: tuple(es) for c, es in classes.items()}

    @property
    def min_degree(self) -> int:
        return min(self.degrees) if self.n else 0

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.colour_of

    def colour(self, u: int, v: int) -> int:
        return self.colour_of[edge_key(u, v)]

    def edge_subgraph(self, edge_subset: Iterable[tuple[int, int]]) -> "ColouredGraph":
        """Subgraph on the same vertex set keeping only the given edges."""
        keys = sorted({edge_key(u, v) for u, v in edge_subset})
        cmap = self.colour_of
        for k in keys:
            if k not in cmap:
                raise GraphFormatError(f"({k[0]},{k[1]}) is not an edge of the host")
        return ColouredGraph(
            n=self.n,
            edges=tuple(keys),
            colours=tuple(cmap[k] for k in keys),
        )

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["ColouredGraph", list[int]]:
        """Induced subgraph relabelled to [0, k); returns (graph, old labels).

        ``labels[i]`` is the host vertex that became vertex i. Colours are
        inherited unchanged.
        """
        labels = sorted(set(vertices))
        index = {v: i for i, v in enumerate(labels)}
        keep = set(labels)
        triples = [
            (index[u], index[v], c)
            for (u, v), c in zip(self.edges, self.colours)
            if u in keep and v in keep
        ]
        return ColouredGraph.from_triples(len(labels), triples), labels


@dataclass(frozen=True)
class ColouringReport:
    is_proper: bool
    max_colour_multiplicity: int
    distinct_colours: int
    min_degree: int


@dataclass(frozen=True)
class PathForest:
    """Vertex-disjoint paths; ``rainbow`` is true iff all edge colours differ."""

    paths: tuple[tuple[int, ...], ...]
    rainbow: bool

    @property
    def num_paths(self) -> int:
        return len(self.paths)

    @property
    def num_vertices(self) -> int:
        return sum(len(p) for p in self.paths)

    @property
    def num_edges(self) -> int:
        return sum(len(p) - 1 for p in self.paths)

    def edge_list(self) -> list[tuple[int, int]]:
        return [
            edge_key(p[i], p[i + 1]) for p in self.paths for i in range(len(p) - 1)
        ]


def validate(g: ColouredGraph) -> ColouringReport:
    """Properness, global boundedness, distinct-colour and degree report.

    Structural well-formedness is enforced at construction time; this function
    is pure and idempotent.
    """
    is_proper = True
    for v in range(g.n):
        seen: set[int] = set()
        for w in g.adjacency[v]:
            c = g.colour(v, w)
            if c in seen:
                is_proper = False
                break
            seen.add(c)
        if not is_proper:
            break
    mult = Counter(g.colours)
    return ColouringReport(
        is_proper=is_proper,
        max_colour_multiplicity=max(mult.values()) if mult else 0,
        distinct_colours=len(mult),
        min_degree=g.min_degree,
    )


def distinct_colours_of(g: ColouredGraph, edge_subset: Iterable[tuple[int, int]]) -> int:
    """Number of distinct colours among a subset of the host's edges."""
    cmap = g.colour_of
    colours = set()
    for u, v in edge_subset:
        key = edge_key(u, v)
        if key not in cmap:
            raise GraphFormatError(f"({u},{v}) is not an edge of the host")
        colours.add(cmap[key])
    return len(colours)


def split_colours(
    g: ColouredGraph, factor: int
) -> tuple[ColouredGraph, dict[int, int]]:
    """Refine each colour class into ``factor`` classes of near-equal size.

    Edges of a class are ordered lexicographically and dealt round-robin, so a
    class of size k splits into pieces of size ceil(k/factor) or floor.
    Requires a properly coloured input (the n/2-boundedness baseline that the
    split improves on only holds for proper colourings). Returns the new graph
    and a new-colour -> old-colour mapping.
    """
    if factor < 1:
        raise ValueError(f"split factor must be >= 1, got {factor}")
    report = validate(g)
    if not report.is_proper:
        raise ValueError("split_colours requires a proper colouring")
    new_colour: dict[tuple[int, int], int] = {}
    back: dict[int, int] = {}
    for c, es in g.colour_classes.items():
        for i, e in enumerate(sorted(es)):
            nc = c * factor + (i % factor)
            new_colour[e] = nc
            back[nc] = c
    out = ColouredGraph(
        n=g.n,
        edges=g.edges,
        colours=tuple(new_colour[e] for e in g.edges),
    )
    return out, back


def canonicalize_colours(
    g: ColouredGraph,
) -> tuple[ColouredGraph, dict[int, int]]:
    """Renumber colours densely by first appearance in lexicographic edge order.

    Returns the renumbered graph and a new -> old mapping.
    """
    remap: dict[int, int] = {}
    for c in g.colours:
        if c not in remap:
            remap[c] = len(remap)
    back = {v: k for k, v in remap.items()}
    return (
        ColouredGraph(n=g.n, edges=g.edges, colours=tuple(remap[c] for c in g.colours)),
        back,
    )


# -- file I/O -------------------------------------------------------------


def dumps(g: ColouredGraph) -> str:
    triples = [[u, v, c] for (u, v), c in zip(g.edges, g.colours)]
    return json.dumps({"n": g.n, "edges": triples}, separators=(",", ":")) + "\n"


def dump(g: ColouredGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(g))


def loads(text: str) -> ColouredGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise GraphFormatError("document must have fields 'n' and 'edges'")
    return ColouredGraph.from_triples(int(doc["n"]), doc["edges"])


def load(path) -> ColouredGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
