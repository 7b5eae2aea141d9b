"""Exact brute-force references for small instances.

These are the ground truth the randomized machinery is tested against:
Hamiltonicity verification, the maximum-distinct-colour Hamilton cycle by
enumeration, and the exact maximum rainbow matching by branch and bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetExceededError
from .graph import ColouredGraph, edge_key


@dataclass(frozen=True)
class OracleBudget:
    max_vertices_hamilton: int = 12
    max_vertices_matching: int = 16

    def __post_init__(self):
        if self.max_vertices_hamilton <= 0 or self.max_vertices_matching <= 0:
            raise ValueError("oracle budgets must be positive")


DEFAULT_BUDGET = OracleBudget()


def is_hamilton_cycle(g: ColouredGraph, cycle: Sequence[int]) -> bool:
    """True iff ``cycle`` visits every vertex exactly once and closes up."""
    if len(cycle) != g.n or g.n < 3:
        return False
    if len(set(cycle)) != g.n:
        return False
    adj = g.adjacency
    return all(cycle[(i + 1) % g.n] in adj[cycle[i]] for i in range(g.n))


_hamilton_cache: dict[ColouredGraph, tuple[Optional[int], Optional[tuple[int, ...]]]] = {}


def max_colour_hamilton_bruteforce(
    g: ColouredGraph, budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[Optional[int], Optional[tuple[int, ...]]]:
    """Exact maximum number of distinct colours over all Hamilton cycles.

    Enumerates cycles anchored at vertex 0 with second vertex < last vertex
    (halving the direction symmetry). Returns (None, None) when the graph has
    no Hamilton cycle. Prunes with the admissible bound "distinct so far +
    edges still to be added".
    """
    if g.n > budget.max_vertices_hamilton:
        raise BudgetExceededError(
            f"n={g.n} exceeds hamilton oracle budget {budget.max_vertices_hamilton}"
        )
    if g in _hamilton_cache:
        return _hamilton_cache[g]
    n = g.n
    if n < 3:
        _hamilton_cache[g] = (None, None)
        return None, None
    adj = [sorted(s) for s in g.adjacency]
    colour = g.colour_of

    best_count = -1
    best_cycle: Optional[tuple[int, ...]] = None
    path = [0]
    on_path = [False] * n
    on_path[0] = True
    colour_count: dict[int, int] = {}

    def recurse(distinct: int) -> None:
        nonlocal best_count, best_cycle
        # one edge per future vertex plus the closing edge
        if distinct + (n - len(path)) + 1 <= best_count:
            return
        last = path[-1]
        if len(path) == n:
            if 0 in g.adjacency[last] and path[1] < last:
                c = colour[edge_key(last, 0)]
                total = distinct + (c not in colour_count)
                if total > best_count:
                    best_count = total
                    best_cycle = tuple(path)
            return
        for w in adj[last]:
            if on_path[w] or w == 0:
                continue
            c = colour[edge_key(last, w)]
            fresh = c not in colour_count
            colour_count[c] = colour_count.get(c, 0) + 1
            on_path[w] = True
            path.append(w)
            recurse(distinct + fresh)
            path.pop()
            on_path[w] = False
            colour_count[c] -= 1
            if not colour_count[c]:
                del colour_count[c]

    recurse(0)
    result = (best_count, best_cycle) if best_count >= 0 else (None, None)
    _hamilton_cache[g] = result
    return result


def max_rainbow_matching_exact(
    b: ColouredGraph, budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[tuple[int, int], ...]:
    """A maximum-cardinality rainbow matching by branch and bound.

    Edges are scanned in lexicographic order with include-before-skip, so the
    first matching of maximum size (and hence the lexicographically least edge
    set among maxima found by this order) is returned.
    """
    if b.n > budget.max_vertices_matching:
        raise BudgetExceededError(
            f"n={b.n} exceeds matching oracle budget {budget.max_vertices_matching}"
        )
    edges = list(zip(b.edges, b.colours))
    m = len(edges)
    best: list[tuple[int, int]] = []
    chosen: list[tuple[int, int]] = []
    used_v: set[int] = set()
    used_c: set[int] = set()

    # upper bound helper: remaining edges can add at most one each, and at
    # most one per unused colour among them
    suffix_colours: list[set[int]] = [set() for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        suffix_colours[i] = suffix_colours[i + 1] | {edges[i][1]}

    def recurse(i: int) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if i == m:
            return
        remaining = len(suffix_colours[i] - used_c)
        if len(chosen) + min(remaining, m - i) <= len(best):
            return
        (u, v), c = edges[i]
        if u not in used_v and v not in used_v and c not in used_c:
            used_v.update((u, v))
            used_c.add(c)
            chosen.append((u, v))
            recurse(i + 1)
            chosen.pop()
            used_v.difference_update((u, v))
            used_c.discard(c)
        recurse(i + 1)

    recurse(0)
    return tuple(best)
