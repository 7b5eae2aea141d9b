"""Absorbing path and reservoir construction.

The absorber is a path built around a matching M whose edges appear, for every
vertex v, many times inside G[N(v)]; any small leftover set U can then be
swallowed by replacing unused matching edges x_i y_i with x_i-u-y_i detours.
The reservoir is a small vertex set R in which every pair of host vertices
keeps a large common neighbourhood, certified exhaustively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import networkx as nx
import numpy as np

from .errors import AbsorptionError, PreconditionError
from .graph import ColouredGraph
from .seeding import rng_for


@dataclass(frozen=True)
class AbsorberCertificate:
    """Path A with its core matching, connectors, endpoints and budget.

    The path visits x_1 y_1 z_1 x_2 y_2 z_2 ... x_t y_t, so it has
    2t + (t-1) = 3t - 1 vertices; ``capacity`` is the absorption budget,
    the exhaustively verified minimum over vertices v of the number of core
    edges inside G[N(v)].
    """

    path: tuple[int, ...]
    core_matching: tuple[tuple[int, int], ...]
    connectors: tuple[int, ...]
    endpoints: tuple[int, int]
    capacity: int


@dataclass(frozen=True)
class ReservoirSet:
    vertices: frozenset[int]
    epsilon: float
    min_codegree: int  # exhaustive all-pairs minimum of |N(x) n N(y) n R|


def _per_vertex_core_counts(g: ColouredGraph, matching: Sequence[tuple[int, int]]) -> np.ndarray:
    """For each vertex v, the number of matching edges with both ends in N(v)."""
    adj = g.adjacency_matrix
    counts = np.zeros(g.n, dtype=np.int64)
    for x, y in matching:
        counts += adj[:, x] & adj[:, y]
    return counts


def neighbourhood_matching(
    g: ColouredGraph,
    c: float,
    m: int,
    seed: int = 0,
    max_retries: int = 20,
    epsilon: Optional[float] = None,
    allow_weak_params: bool = False,
    big_c: Optional[float] = None,
) -> list[tuple[int, int]]:
    """A matching M with e(M) <= Cm such that e(M n G[N(v)]) > cm for all v.

    Samples a sparse random graph G* ~ G(n, Cm/n^2) with C = 8c/eps and takes
    an exact maximum matching of G* n G, retrying with fresh samples where the
    existence proof argues positive probability. Accepts only when the
    per-vertex count check passes for literally every vertex.
    """
    n = g.n
    delta = g.min_degree
    eps = epsilon if epsilon is not None else delta / n - 0.5
    if eps <= 0:
        raise PreconditionError(
            f"min degree {delta} must exceed n/2 (vertex of degree < n/2 present)"
        )
    if delta < (0.5 + eps) * n - 1e-9:
        raise PreconditionError(f"min degree {delta} below (1/2+{eps})n")
    weak = []
    if not (math.log(max(n, 2)) ** 2 <= m <= eps * n):
        weak.append(f"m={m} outside [(log n)^2, eps*n] = "
                    f"[{math.log(max(n, 2)) ** 2:.1f}, {eps * n:.1f}]")
    if not c < 2**-10 * eps:
        weak.append(f"c={c} not below 2^-10 * eps = {2 ** -10 * eps:.3g}")
    if weak and not allow_weak_params:
        raise PreconditionError("; ".join(weak))

    if big_c is None:
        big_c = 8 * c / eps  # the worst-case constant; callers may oversample
    p = min(1.0, big_c * m / n**2)
    target = c * m
    cap = big_c * m
    worst_report = "no attempt"
    for attempt in range(max_retries):
        rng = rng_for(seed, "nbhd-matching", attempt)
        # sample G(n, p) by edge count: Binomial(C(n,2), p) uniform pairs
        n_pairs = n * (n - 1) // 2
        k = _binomial(n_pairs, p, rng)
        star_edges: set[tuple[int, int]] = set()
        while len(star_edges) < k:
            u = rng.randrange(n)
            v = rng.randrange(n)
            if u != v:
                star_edges.add((min(u, v), max(u, v)))
        common = [e for e in star_edges if g.has_edge(*e)]
        gx = nx.Graph()
        gx.add_edges_from(common)
        matching_set = nx.max_weight_matching(gx, maxcardinality=True)
        matching = sorted((min(u, v), max(u, v)) for u, v in matching_set)
        if len(matching) > cap:
            worst_report = f"matching size {len(matching)} exceeds Cm = {cap:.1f}"
            continue
        if not matching:
            worst_report = "empty matching"
            continue
        counts = _per_vertex_core_counts(g, matching)
        worst_v = int(counts.argmin())
        if counts[worst_v] > target:
            return matching
        worst_report = (
            f"vertex {worst_v} sees only {counts[worst_v]} core edges "
            f"(need > {target:.1f})"
        )
    raise AbsorptionError(
        f"neighbourhood matching failed after {max_retries} retries: {worst_report}"
    )


def _binomial(n: int, p: float, rng) -> int:
    """Binomial(n, p) draw: exact for small n, Poisson/normal beyond."""
    if n <= 10_000:
        return sum(rng.random() < p for _ in range(n))
    mu = n * p
    if mu <= 30:  # Knuth's Poisson method
        k, cum, term = 0, math.exp(-mu), math.exp(-mu)
        acc = rng.random()
        while acc > cum and k < 10 * (mu + 10):
            k += 1
            term *= mu / k
            cum += term
        return k
    return max(0, min(n, int(round(rng.gauss(mu, math.sqrt(mu * (1 - p)))))))


def build_absorber(
    g: ColouredGraph, matching: Sequence[tuple[int, int]]
) -> AbsorberCertificate:
    """Thread the matching edges into a path with t-1 connector vertices.

    Connectors z_k are chosen greedily from N(y_k) n N(x_{k+1}) avoiding V(M)
    and previously used vertices (lowest index first, for determinism). The
    certificate records the actual vertex count 2t + (t-1) and the exhaustive
    per-vertex minimum as capacity.
    """
    if not matching:
        raise PreconditionError("absorber undefined for an empty matching")
    core = [(min(x, y), max(x, y)) for x, y in matching]
    vm = {v for e in core for v in e}
    if len(vm) != 2 * len(core):
        raise PreconditionError("input is not a matching (shared endpoint)")
    for x, y in core:
        if not g.has_edge(x, y):
            raise PreconditionError(f"({x},{y}) is not a host edge")
    path: list[int] = [core[0][0], core[0][1]]
    connectors: list[int] = []
    used = set(vm)
    for k in range(len(core) - 1):
        y_k = path[-1]
        x_next, y_next = core[k + 1]
        cands = (g.adjacency[y_k] & g.adjacency[x_next]) - used
        if not cands:
            raise AbsorptionError(
                f"no connector available between ({y_k}) and ({x_next})",
                vertex=(y_k, x_next),
            )
        z = min(cands)
        connectors.append(z)
        used.add(z)
        path.extend([z, x_next, y_next])
    counts = _per_vertex_core_counts(g, core)
    capacity = int(counts.min())
    return AbsorberCertificate(
        path=tuple(path),
        core_matching=tuple(core),
        connectors=tuple(connectors),
        endpoints=(path[0], path[-1]),
        capacity=capacity,
    )


def absorb(
    cert: AbsorberCertificate, new_vertices: Iterable[int], g: ColouredGraph
) -> tuple[int, ...]:
    """Absorb U into the path: V(A_U) = V(A) u U, endpoints unchanged.

    Vertices are processed in input order; each replaces the lowest-index
    unused core edge x_i y_i whose endpoints are both its neighbours with the
    detour x_i-u-y_i.
    """
    u_list = list(new_vertices)
    va = set(cert.path)
    clash = va & set(u_list)
    if clash:
        raise PreconditionError(f"U intersects V(A): {sorted(clash)[:5]}")
    if len(u_list) != len(set(u_list)):
        raise PreconditionError("U contains repeated vertices")
    if len(u_list) > cert.capacity:
        raise PreconditionError(
            f"|U| = {len(u_list)} exceeds absorption capacity {cert.capacity}"
        )
    path = list(cert.path)
    unused = list(cert.core_matching)
    for u in u_list:
        adj = g.adjacency[u]
        pick = None
        for idx, (x, y) in enumerate(unused):
            if x in adj and y in adj:
                pick = idx
                break
        if pick is None:
            raise AbsorptionError(
                f"no eligible core edge for vertex {u}", vertex=u
            )
        x, y = unused.pop(pick)
        for i in range(len(path) - 1):
            a, b = path[i], path[i + 1]
            if (min(a, b), max(a, b)) == (x, y):
                path.insert(i + 1, u)
                break
        else:
            raise AbsorptionError(
                f"core edge ({x},{y}) no longer on the path", vertex=u
            )
    result = tuple(path)
    # exact post-conditions of the absorption lemma
    assert result[0] == cert.endpoints[0] and result[-1] == cert.endpoints[1]
    assert set(result) == va | set(u_list)
    assert all(g.has_edge(result[i], result[i + 1]) for i in range(len(result) - 1))
    return result


def build_reservoir(
    g: ColouredGraph,
    excluded: Iterable[int],
    size: int,
    epsilon: float,
    seed: int = 0,
    max_retries: int = 20,
) -> ReservoirSet:
    """Uniform random R in V \\ W, resampled until the exhaustive all-pairs
    codegree check |N(x) n N(y) n R| >= epsilon |R| passes."""
    w = set(excluded)
    pool = [v for v in range(g.n) if v not in w]
    if size > len(pool):
        raise PreconditionError(
            f"reservoir size {size} exceeds available pool {len(pool)}"
        )
    if size < 1:
        raise PreconditionError("reservoir size must be positive")
    adj = g.adjacency_matrix
    need = epsilon * size
    worst = "no attempt"
    for attempt in range(max_retries):
        rng = rng_for(seed, "reservoir", attempt)
        r = sorted(rng.sample(pool, size))
        sub = adj[:, r].astype(np.int32)
        codeg = sub @ sub.T  # codeg[x, y] = |N(x) n N(y) n R|
        np.fill_diagonal(codeg, np.iinfo(np.int32).max)
        min_codeg = int(codeg.min())
        if min_codeg >= need:
            return ReservoirSet(
                vertices=frozenset(r), epsilon=epsilon, min_codegree=min_codeg
            )
        x, y = np.unravel_index(int(codeg.argmin()), codeg.shape)
        worst = (
            f"pair ({x},{y}) has codegree {min_codeg} in R "
            f"(need >= {need:.2f})"
        )
    raise PreconditionError(
        f"reservoir certification failed after {max_retries} retries: {worst}"
    )


def verify_reservoir(g: ColouredGraph, res: ReservoirSet) -> bool:
    """Re-run the exhaustive all-pairs codegree check (O(n^2 |R|))."""
    r = sorted(res.vertices)
    sub = g.adjacency_matrix[:, r].astype(np.int32)
    codeg = sub @ sub.T
    np.fill_diagonal(codeg, np.iinfo(np.int32).max)
    return int(codeg.min()) >= res.epsilon * len(r)
