"""Extract an even r-regular spanning subgraph from a graph with min degree > n/2.

r is the even integer in [ceil(delta/2), ceil(delta/2)+1]. The factor is found
by taking an Eulerian orientation of the host (after pairing odd-degree
vertices through an auxiliary vertex) and solving an exact-degree bipartite
b-matching with max flow: picking r/2 out-arcs and r/2 in-arcs per vertex
yields degree exactly r, and each host edge is oriented once so no edge is
used twice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .errors import PreconditionError
from .graph import ColouredGraph
from .seeding import rng_for


@dataclass(frozen=True)
class RegularSubgraphResult:
    subgraph: ColouredGraph
    r: int


def target_r(min_degree: int) -> int:
    r = -(-min_degree // 2)  # ceil(delta/2)
    return r if r % 2 == 0 else r + 1


def _eulerian_orientation(g: ColouredGraph, rng) -> list[tuple[int, int]]:
    """Orient every edge so that |outdeg - indeg| <= 1 at every vertex.

    Odd-degree vertices are joined to an auxiliary vertex to make all degrees
    even, an Eulerian circuit is traced per component, and the auxiliary arcs
    are dropped.
    """
    n = g.n
    aux = n
    edges: list[tuple[int, int]] = list(g.edges)
    odd = [v for v in range(n) if g.degrees[v] % 2 == 1]
    edges.extend((v, aux) for v in odd)

    adj: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
    for eid, (u, v) in enumerate(edges):
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    for lst in adj:
        rng.shuffle(lst)

    used = [False] * len(edges)
    ptr = [0] * (n + 1)
    arcs: list[tuple[int, int]] = []
    for start in range(n + 1):
        if ptr[start] >= len(adj[start]):
            continue
        stack = [start]
        trail: list[int] = []
        while stack:
            v = stack[-1]
            advanced = False
            while ptr[v] < len(adj[v]):
                w, eid = adj[v][ptr[v]]
                ptr[v] += 1
                if not used[eid]:
                    used[eid] = True
                    stack.append(w)
                    advanced = True
                    break
            if not advanced:
                trail.append(stack.pop())
        trail.reverse()
        for a, b in zip(trail, trail[1:]):
            if a != aux and b != aux:
                arcs.append((a, b))
    return arcs


def _factor_from_orientation(
    g: ColouredGraph, arcs: list[tuple[int, int]], half_r: int
) -> list[tuple[int, int]] | None:
    """Pick half_r out-arcs and half_r in-arcs per vertex via max flow."""
    n = g.n
    s, t = 0, 2 * n + 1
    rows, cols, caps = [], [], []
    for v in range(n):
        rows.append(s)
        cols.append(1 + v)
        caps.append(half_r)
        rows.append(1 + n + v)
        cols.append(t)
        caps.append(half_r)
    for u, v in arcs:
        rows.append(1 + u)
        cols.append(1 + n + v)
        caps.append(1)
    mat = csr_matrix(
        (np.asarray(caps, dtype=np.int32), (rows, cols)), shape=(t + 1, t + 1)
    )
    res = maximum_flow(mat, s, t)
    if res.flow_value != n * half_r:
        return None
    flow = res.flow.tocoo()
    chosen = [
        (int(r0) - 1, int(c0) - 1 - n)
        for r0, c0, f in zip(flow.row, flow.col, flow.data)
        if f > 0 and 1 <= r0 <= n and n < c0 <= 2 * n
    ]
    return chosen


def regular_spanning_subgraph(
    g: ColouredGraph, seed: int = 0, max_retries: int = 5
) -> RegularSubgraphResult:
    """Even r-regular spanning subgraph with r in [ceil(d/2), ceil(d/2)+1].

    Requires min degree strictly above n/2 (which guarantees existence); a
    failure after retries with fresh orientations is a defect, not a
    recoverable condition. Colours are inherited from the host.
    """
    delta = g.min_degree
    if 2 * delta <= g.n:
        raise PreconditionError(
            f"min degree {delta} must exceed n/2 = {g.n / 2:g}"
        )
    r = target_r(delta)
    last_err = "no attempt"
    for attempt in range(max_retries):
        rng = rng_for(seed, "regularize", attempt)
        arcs = _eulerian_orientation(g, rng)
        chosen = _factor_from_orientation(g, arcs, r // 2)
        if chosen is None:
            last_err = f"flow infeasible on attempt {attempt}"
            continue
        sub = g.edge_subgraph(chosen)
        if all(d == r for d in sub.degrees):
            return RegularSubgraphResult(subgraph=sub, r=r)
        last_err = f"degree check failed on attempt {attempt}"
    raise RuntimeError(
        f"internal defect: could not realize a {r}-factor "
        f"(delta={delta}, n={g.n}): {last_err}"
    )
