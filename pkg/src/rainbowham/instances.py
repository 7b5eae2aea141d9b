"""Instance generation: dense hosts with proper, globally bounded colourings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .adversary import random_matchings_graph
from .errors import PreconditionError
from .graph import ColouredGraph, validate
from .seeding import derive_seed, rng_for


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    epsilon: float
    colouring_mode: str = "round_robin"  # rainbow | round_robin | matchings | vizing_like
    num_colours: Optional[int] = None  # round_robin only; default derived
    matchings_k: Optional[int] = None
    matchings_ell: Optional[int] = None
    target_bound: Optional[int] = None  # default depends on the mode
    seed: int = 0


def random_dirac_host(n: int, epsilon: float, seed: int = 0) -> list[tuple[int, int]]:
    """Random graph with min degree >= (1/2 + epsilon) n.

    Samples G(n, p) slightly above the degree target and tops up deficient
    vertices with random extra edges.
    """
    need = math.ceil((0.5 + epsilon) * n)
    if need > n - 1:
        raise PreconditionError(f"degree target {need} impossible for n={n}")
    p = min(0.98, (need + 2 * math.sqrt(n) + 2) / max(n - 1, 1))
    rng = np.random.default_rng(derive_seed(seed, "host"))
    upper = np.triu(rng.random((n, n)) < p, k=1)
    adj = upper | upper.T
    deg = adj.sum(axis=1)
    py_rng = rng_for(seed, "host-fix")
    for v in range(n):
        while deg[v] < need:
            candidates = np.flatnonzero(~adj[v])
            candidates = candidates[candidates != v]
            w = int(py_rng.choice(list(candidates)))
            adj[v, w] = adj[w, v] = True
            deg[v] += 1
            deg[w] += 1
    iu, ju = np.nonzero(np.triu(adj, k=1))
    return list(zip(iu.tolist(), ju.tolist()))


def round_robin_colouring(
    edges: list[tuple[int, int]],
    n: int,
    num_colours: int,
    class_cap: int,
    seed: int = 0,
    max_retries: int = 5,
) -> dict[tuple[int, int], int]:
    """Proper colouring with every class capped at ``class_cap``.

    Edges are visited in a seeded random order; each takes the first colour in
    a rotating window of the palette that is unused at both endpoints and whose
    class is not full.
    """
    if num_colours * class_cap < len(edges):
        raise PreconditionError(
            f"{num_colours} colours with cap {class_cap} can hold at most "
            f"{num_colours * class_cap} < {len(edges)} edges"
        )
    for attempt in range(max_retries):
        rng = rng_for(seed, "rr", attempt)
        order = edges[:]
        rng.shuffle(order)
        used: list[set[int]] = [set() for _ in range(n)]
        count = [0] * num_colours
        colour_map: dict[tuple[int, int], int] = {}
        window = 0
        ok = True
        for u, v in order:
            for off in range(num_colours):
                c = (window + off) % num_colours
                if count[c] < class_cap and c not in used[u] and c not in used[v]:
                    colour_map[(u, v)] = c
                    used[u].add(c)
                    used[v].add(c)
                    count[c] += 1
                    window = (window + 1) % num_colours
                    break
            else:
                ok = False
                break
        if ok:
            return colour_map
    raise PreconditionError(
        f"round-robin colouring failed with {num_colours} colours, cap {class_cap}"
    )


def greedy_proper_colouring(
    edges: list[tuple[int, int]], n: int, seed: int = 0
) -> dict[tuple[int, int], int]:
    """First-fit proper colouring (at most 2*Delta - 1 colours, Vizing-like)."""
    rng = rng_for(seed, "vz")
    order = edges[:]
    rng.shuffle(order)
    used: list[set[int]] = [set() for _ in range(n)]
    colour_map: dict[tuple[int, int], int] = {}
    for u, v in order:
        c = 0
        while c in used[u] or c in used[v]:
            c += 1
        colour_map[(u, v)] = c
        used[u].add(c)
        used[v].add(c)
    return colour_map


def generate_instance(spec: InstanceSpec, max_retries: int = 5) -> ColouredGraph:
    """Generate a host and colouring per the spec, re-checking every claim."""
    last = "no attempt"
    for attempt in range(max_retries):
        seed = derive_seed(spec.seed, "gen", attempt)
        g = _generate_once(spec, seed)
        rep = validate(g)
        bound = _default_bound(spec, g)
        if (
            rep.is_proper
            and rep.max_colour_multiplicity <= bound
            and rep.min_degree >= (0.5 + spec.epsilon) * spec.n
        ):
            return g
        last = (
            f"proper={rep.is_proper}, mult={rep.max_colour_multiplicity} "
            f"(bound {bound}), delta={rep.min_degree}"
        )
    raise PreconditionError(f"instance generation failed: {last}")


def _default_bound(spec: InstanceSpec, g: ColouredGraph) -> int:
    if spec.target_bound is not None:
        return spec.target_bound
    if spec.colouring_mode == "rainbow":
        return 1
    if spec.colouring_mode == "round_robin":
        return g.n // 8
    if spec.colouring_mode == "matchings":
        return spec.matchings_ell or g.n // 8
    return g.n // 2  # any proper colouring is n/2-bounded


def _generate_once(spec: InstanceSpec, seed: int) -> ColouredGraph:
    mode = spec.colouring_mode
    if mode == "matchings":
        if spec.matchings_k is None or spec.matchings_ell is None:
            raise PreconditionError("matchings mode needs matchings_k and matchings_ell")
        need = math.ceil((0.5 + spec.epsilon) * spec.n)
        return random_matchings_graph(
            spec.n,
            need,
            spec.matchings_k,
            spec.matchings_ell,
            seed=seed,
            check_condition=False,
            max_retries=20,
        )
    edges = random_dirac_host(spec.n, spec.epsilon, seed=seed)
    if mode == "rainbow":
        cmap = {e: i for i, e in enumerate(edges)}
    elif mode == "round_robin":
        cap = spec.target_bound if spec.target_bound is not None else spec.n // 8
        if cap < 1:
            raise PreconditionError(f"class cap {cap} < 1")
        k = spec.num_colours
        if k is None:
            k = max(2 * spec.n, math.ceil(1.25 * len(edges) / cap))
        cmap = round_robin_colouring(edges, spec.n, k, cap, seed=seed)
    elif mode == "vizing_like":
        cmap = greedy_proper_colouring(edges, spec.n, seed=seed)
    else:
        raise PreconditionError(f"unknown colouring mode {mode!r}")
    return ColouredGraph.from_colour_map(spec.n, cmap)
