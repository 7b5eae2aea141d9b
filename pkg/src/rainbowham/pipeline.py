"""The end-to-end solver: absorber + reservoir + rainbow forest -> Hamilton cycle.

Stage budgets are computed symbolically from the parameters and logged, so
desk-scale overrides of the asymptotic values are visible rather than silent.
At desk scale the junctions between forest paths are mostly closed with direct
host edges (preferring colour-fresh ones); the reservoir serves the junctions
direct edges cannot close, and leftover vertices are threaded into cycle edges
before the absorber sweeps up whatever remains.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .absorber import (
    AbsorberCertificate,
    ReservoirSet,
    absorb,
    build_absorber,
    build_reservoir,
    neighbourhood_matching,
)
from .errors import (
    AbsorptionError,
    JunctionError,
    PreconditionError,
    StageFailure,
)
from .forest import rainbow_forest
from .graph import ColouredGraph, PathForest, distinct_colours_of, edge_key, validate
from .oracle import is_hamilton_cycle
from .regularize import target_r
from .seeding import derive_seed, rng_for


@dataclass(frozen=True)
class PipelineParams:
    epsilon: float
    beta: float = 0.1
    c: Optional[float] = None  # absorption constant; default 2^-11 epsilon
    seed: int = 0
    n_small: int = 30  # below this, fall back to direct randomized search
    n_floor: int = 10_000  # below this, asymptotic certification is best-effort
    m_slabs: Optional[int] = None
    reservoir_size: Optional[int] = None
    capacity_target: Optional[int] = None
    bounded_slack: Optional[int] = None  # o(n) slack on the n/8 bound check
    forest_rebuilds: int = 1
    small_n_restarts: int = 400
    matching_restarts: Optional[int] = None

    def __post_init__(self):
        if not (0 < self.epsilon <= 0.5):
            raise PreconditionError(f"epsilon must be in (0, 1/2], got {self.epsilon}")
        if self.beta <= 0:
            raise PreconditionError(f"beta must be positive, got {self.beta}")

    @property
    def alpha(self) -> float:
        return 2 * self.beta

    @property
    def c_value(self) -> float:
        return self.c if self.c is not None else 2**-11 * self.epsilon


@dataclass(frozen=True)
class HamiltonResult:
    cycle: tuple[int, ...]
    distinct_colours: int
    stage_log: dict


def _fresh(counts: Counter, c: int) -> bool:
    return counts.get(c, 0) == 0


def connect_through_reservoir(
    absorber_path: Sequence[int],
    forest: PathForest,
    reservoir: ReservoirSet,
    g: ColouredGraph,
) -> list[int]:
    """Close A and the forest paths into one cycle, one reservoir connector
    per junction (T+1 in total), chosen greedily from the certified common
    neighbourhoods."""
    segments = [list(absorber_path)] + [list(p) for p in forest.paths]
    if len(segments) > len(reservoir.vertices):
        raise JunctionError(
            f"{len(segments)} junctions exceed reservoir size "
            f"{len(reservoir.vertices)}"
        )
    pool = set(reservoir.vertices)
    cycle: list[int] = []
    for i, seg in enumerate(segments):
        cycle.extend(seg)
        y = seg[-1]
        x = segments[(i + 1) % len(segments)][0]
        cands = (g.adjacency[y] & g.adjacency[x]) & pool
        if not cands:
            raise JunctionError(
                f"no reservoir connector between {y} and {x}", junction=(y, x)
            )
        z = min(cands)
        pool.discard(z)
        cycle.append(z)
    return cycle


# -- small-n fallback ---------------------------------------------------------


def _random_hamilton_search(
    g: ColouredGraph, seed: int, restarts: int, node_cap: int = 60_000
) -> tuple[Optional[tuple[int, ...]], int]:
    """Randomized colour-greedy DFS for Hamilton cycles; best distinct count
    over all restarts. Independent of the exact oracle (sampling, not
    enumeration)."""
    n = g.n
    best_cycle: Optional[tuple[int, ...]] = None
    best_count = -1
    for attempt in range(restarts):
        rng = rng_for(seed, "small-n", attempt)
        path = [0]
        on_path = [False] * n
        on_path[0] = True
        used: Counter = Counter()
        nodes = 0

        def dfs() -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > node_cap:
                return False
            last = path[-1]
            if len(path) == n:
                return 0 in g.adjacency[last]
            nbrs = [w for w in g.adjacency[last] if not on_path[w] and w != 0]
            rng.shuffle(nbrs)
            # try colour-fresh extensions first
            nbrs.sort(key=lambda w: 0 if _fresh(used, g.colour(last, w)) else 1)
            for w in nbrs:
                c = g.colour(last, w)
                used[c] += 1
                on_path[w] = True
                path.append(w)
                if dfs():
                    return True
                path.pop()
                on_path[w] = False
                used[c] -= 1
            return False

        if dfs():
            cycle = tuple(path)
            count = distinct_colours_of(
                g, [edge_key(cycle[i], cycle[(i + 1) % n]) for i in range(n)]
            )
            if count > best_count:
                best_count = count
                best_cycle = cycle
            if best_count == n:
                break
    return best_cycle, best_count


def _small_n_result(g: ColouredGraph, params: PipelineParams) -> HamiltonResult:
    cycle, count = _random_hamilton_search(
        g, derive_seed(params.seed, "small"), params.small_n_restarts
    )
    if cycle is None:
        raise StageFailure("small-n", "no Hamilton cycle found by sampling")
    return HamiltonResult(
        cycle=cycle,
        distinct_colours=count,
        stage_log={"mode": "small-n", "restarts": params.small_n_restarts},
    )


# -- main pipeline ------------------------------------------------------------


def near_rainbow_hamilton(g: ColouredGraph, params: PipelineParams) -> HamiltonResult:
    """Hamilton cycle keeping (nearly) all colours of a rainbow path forest.

    Validates the hypotheses, builds absorber and reservoir, grows the forest
    on the remaining vertices, closes everything into a cycle, threads leftover
    vertices into it, and absorbs the stragglers. A forest under-delivery
    beyond absorber capacity triggers one rebuild with a fresh seed.
    """
    rep = validate(g)
    n = g.n
    if not rep.is_proper:
        raise StageFailure("validate", "colouring is not proper")
    slack = (
        params.bounded_slack
        if params.bounded_slack is not None
        else math.ceil(n ** (2 / 3))
    )
    if rep.max_colour_multiplicity > n / 8 + slack:
        raise StageFailure(
            "validate",
            f"colouring is {rep.max_colour_multiplicity}-bounded, above "
            f"n/8 + o(n) = {n / 8 + slack:.1f}",
        )
    if rep.min_degree < (0.5 + params.epsilon) * n:
        raise StageFailure(
            "validate",
            f"min degree {rep.min_degree} below (1/2+{params.epsilon})n",
        )
    if n < params.n_small:
        return _small_n_result(g, params)

    log: dict = {"n": n, "epsilon": params.epsilon, "beta": params.beta}
    eps = params.epsilon
    c = params.c_value
    m_abs = max(4, round(n ** (1 - params.beta)))
    big_c_paper = 8 * c / eps
    cap_target = params.capacity_target or max(4, math.ceil(c * m_abs))
    log["budgets"] = {
        "m_absorber": m_abs,
        "c": c,
        "C_paper": big_c_paper,
        "cm_paper": c * m_abs,
        "capacity_target": cap_target,
        "b_paper": big_c_paper + c,
        "colour_target_paper": n - (big_c_paper + c) * n ** (1 - params.beta),
    }

    cert = _build_absorber_stage(g, params, eps, c, m_abs, cap_target, log)
    reservoir = _build_reservoir_stage(g, params, cert, eps, c, log)

    last_failure: Optional[StageFailure] = None
    for rebuild in range(params.forest_rebuilds + 1):
        try:
            return _forest_and_close(
                g, params, cert, reservoir, dict(log), rebuild
            )
        except StageFailure as exc:
            last_failure = exc
    assert last_failure is not None
    raise last_failure


def _build_absorber_stage(g, params, eps, c, m_abs, cap_target, log):
    # oversample so the exact per-vertex check clears cap_target at desk scale
    big_c0 = 8 * c / eps
    big_c = max(big_c0, 8 * cap_target * g.n**2 / (m_abs * max(g.num_edges, 1) * 2))
    matching = None
    for boost in range(5):
        try:
            matching = neighbourhood_matching(
                g,
                c=cap_target / m_abs,
                m=m_abs,
                seed=derive_seed(params.seed, "absorber", boost),
                epsilon=eps,
                allow_weak_params=True,
                big_c=big_c,
                max_retries=6,
            )
            break
        except (AbsorptionError, PreconditionError) as exc:
            log["absorber_retry"] = f"boost {boost}: {exc}"
            big_c *= 1.7
    if matching is None:
        raise StageFailure("absorber", f"no neighbourhood matching: {log.get('absorber_retry')}")
    try:
        cert = build_absorber(g, matching)
    except AbsorptionError as exc:
        raise StageFailure("absorber", str(exc)) from exc
    log["absorber"] = {
        "t": len(cert.core_matching),
        "v_A": len(cert.path),
        "capacity": cert.capacity,
        "oversampled": big_c > big_c0,
    }
    return cert


def _build_reservoir_stage(g, params, cert, eps, c, log):
    n = g.n
    size_paper = max(1, round(c * n ** (1 - params.beta) / 2))
    r_size = params.reservoir_size or max(12, n // 40, size_paper)
    attempts = [eps, eps / 2, eps / 4, max(2 / r_size, eps / 8)]
    reservoir = None
    for eps_try in attempts:
        try:
            reservoir = build_reservoir(
                g,
                excluded=cert.path,
                size=r_size,
                epsilon=eps_try,
                seed=derive_seed(params.seed, "reservoir"),
                max_retries=6,
            )
            break
        except PreconditionError:
            continue
    if reservoir is None:
        raise StageFailure("reservoir", f"no certifiable reservoir of size {r_size}")
    log["reservoir"] = {
        "size": r_size,
        "size_paper": size_paper,
        "epsilon_certified": reservoir.epsilon,
        "epsilon_paper": eps,
        "min_codegree": reservoir.min_codegree,
    }
    return reservoir


def _choose_slab_count(g0: ColouredGraph, alpha: float, override: Optional[int]) -> int:
    if override is not None:
        return override
    paper_m = max(1, int(g0.n**alpha) - 1)
    r_est = target_r(g0.min_degree)
    desk_rule = 1
    while (desk_rule + 1) * (desk_rule + 2) <= r_est / 8 and desk_rule < 8:
        desk_rule += 1
    return max(paper_m, desk_rule)


def _forest_and_close(g, params, cert, reservoir, log, rebuild):
    n = g.n
    excluded = set(cert.path) | set(reservoir.vertices)
    g0, labels = g.induced_subgraph(set(range(n)) - excluded)
    eps0 = g0.min_degree / g0.n - 0.5
    if eps0 <= 0:
        raise StageFailure("forest", f"residual graph min degree {g0.min_degree} <= n0/2")
    m = _choose_slab_count(g0, params.alpha, params.m_slabs)
    try:
        forest0, frep = rainbow_forest(
            g0,
            alpha=params.alpha,
            seed=derive_seed(params.seed, "forest", rebuild),
            epsilon=min(eps0 * 0.95, 0.5),
            m_override=m,
            n_floor=params.n_floor,
            matching_restarts=params.matching_restarts,
        )
    except (PreconditionError, StageFailure) as exc:
        raise StageFailure("forest", str(exc)) from exc
    paths = [tuple(labels[v] for v in p) for p in forest0.paths]
    leftover = [labels[v] for v in frep.leftover]
    log["forest"] = {
        "rebuild": rebuild,
        "m": frep.m,
        "r": frep.r,
        "n_prime": frep.n_prime,
        "num_paths": frep.num_paths,
        "v_F": frep.v_f,
        "e_F": frep.e_f,
        "slab_sizes": list(frep.slab_sizes),
        "leftover": len(leftover),
        "warnings": list(frep.warnings),
    }

    cycle, counts, stats, pool = _close_cycle(
        g, cert, paths, reservoir, leftover, params, rebuild
    )
    log["connect"] = stats

    # thread remaining pool vertices into non-absorber cycle edges
    forest_edges = {edge_key(p[i], p[i + 1]) for p in paths for i in range(len(p) - 1)}
    protected = {
        edge_key(cert.path[i], cert.path[i + 1]) for i in range(len(cert.path) - 1)
    }
    inserted, u_final = _thread_pool(g, cycle, counts, pool, protected, forest_edges)
    log["threaded"] = inserted

    if u_final:
        if len(u_final) > cert.capacity:
            raise StageFailure(
                "absorb",
                f"{len(u_final)} leftover vertices exceed absorber capacity "
                f"{cert.capacity}",
            )
        a_len = len(cert.path)
        assert tuple(cycle[:a_len]) == cert.path
        try:
            new_a = absorb(cert, u_final, g)
        except (AbsorptionError, PreconditionError) as exc:
            raise StageFailure("absorb", str(exc)) from exc
        cycle = list(new_a) + cycle[a_len:]
    log["absorbed"] = len(u_final)

    edge_keys = [edge_key(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]
    retained = sum(1 for e in edge_keys if e in forest_edges)
    distinct = distinct_colours_of(g, edge_keys)
    log["forest_edges_retained"] = retained
    log["distinct_colours"] = distinct
    result = HamiltonResult(cycle=tuple(cycle), distinct_colours=distinct, stage_log=log)
    assert is_hamilton_cycle(g, result.cycle), "pipeline produced a non-Hamilton cycle"
    assert distinct >= retained
    assert distinct == distinct_colours_of(g, edge_keys)
    return result


def _close_cycle(g, cert, paths, reservoir, leftover, params, rebuild):
    """Chain A and the forest paths into one cycle.

    Junctions prefer direct colour-fresh host edges; vertices from the
    leftover/reservoir pool may be interposed when they bridge a junction; a
    reservoir common neighbour is the fallback."""
    rng = rng_for(params.seed, "connect", rebuild)
    counts: Counter = Counter()
    segments = [list(cert.path)] + [list(p) for p in paths]
    for seg in segments:
        for i in range(len(seg) - 1):
            counts[g.colour(seg[i], seg[i + 1])] += 1
    pool = set(leftover) | set(reservoir.vertices)
    remaining = list(range(1, len(segments)))
    cycle = list(segments[0])
    stats = {"direct": 0, "direct_fresh": 0, "bridged": 0, "junctions": len(segments)}

    def edge_score(a, b):
        return 2 if _fresh(counts, g.colour(a, b)) else 1

    while remaining:
        e = cycle[-1]
        best = None  # (score, pos, reversed, bridge vertex or None)
        for pos, idx in enumerate(remaining):
            seg = segments[idx]
            for rev in (False, True):
                s = seg[-1] if rev else seg[0]
                if s in g.adjacency[e]:
                    score = 10 + edge_score(e, s)
                    if best is None or score > best[0]:
                        best = (score, pos, rev, None)
        if best is None:
            # bridge through a pool vertex (leftover or reservoir)
            for pos, idx in enumerate(remaining):
                seg = segments[idx]
                for rev in (False, True):
                    s = seg[-1] if rev else seg[0]
                    cands = (g.adjacency[e] & g.adjacency[s]) & pool
                    if cands:
                        z = min(cands)
                        best = (1, pos, rev, z)
                        break
                if best:
                    break
        if best is None:
            raise StageFailure(
                "connect", f"no continuation from endpoint {e} "
                f"({len(remaining)} segments left)"
            )
        _, pos, rev, z = best
        idx = remaining.pop(pos)
        seg = segments[idx][::-1] if rev else segments[idx]
        if z is not None:
            counts[g.colour(e, z)] += 1
            counts[g.colour(z, seg[0])] += 1
            cycle.append(z)
            pool.discard(z)
            stats["bridged"] += 1
        else:
            c_used = g.colour(e, seg[0])
            stats["direct"] += 1
            stats["direct_fresh"] += int(_fresh(counts, c_used))
            counts[c_used] += 1
        cycle.extend(seg)

    # close the cycle back to A's first endpoint
    e, s = cycle[-1], cycle[0]
    if s in g.adjacency[e]:
        counts[g.colour(e, s)] += 1
        stats["direct"] += 1
    else:
        cands = (g.adjacency[e] & g.adjacency[s]) & pool
        if not cands:
            raise StageFailure("connect", f"cannot close the cycle at ({e},{s})")
        z = min(cands)
        counts[g.colour(e, z)] += 1
        counts[g.colour(z, s)] += 1
        cycle.append(z)
        pool.discard(z)
        stats["bridged"] += 1
    stats["pool_remaining"] = len(pool)
    return cycle, counts, stats, pool


def _thread_pool(g, cycle, counts, pool, protected, forest_edges):
    """Insert pool vertices into cycle edges (a,b) -> (a,w,b), preferring
    colour-fresh detours and sparing rainbow forest edges."""
    inserted = 0
    for w in sorted(pool):
        adj = g.adjacency[w]
        best = None
        m_len = len(cycle)
        for i in range(m_len):
            a, b = cycle[i], cycle[(i + 1) % m_len]
            key = edge_key(a, b)
            if key in protected or a not in adj or b not in adj:
                continue
            broken_c = g.colour(a, b)
            score = (
                2 * _fresh(counts, g.colour(a, w))
                + 2 * _fresh(counts, g.colour(w, b))
                + (1 if counts[broken_c] > 1 else 0)
                - (2 if key in forest_edges and counts[broken_c] == 1 else 0)
            )
            if best is None or score > best[0]:
                best = (score, i)
        if best is None:
            continue
        _, i = best
        a, b = cycle[i], cycle[(i + 1) % m_len]
        counts[g.colour(a, b)] -= 1
        counts[g.colour(a, w)] += 1
        counts[g.colour(w, b)] += 1
        cycle.insert(i + 1, w)
        inserted += 1
    leftover = [w for w in sorted(pool) if w not in set(cycle)]
    return inserted, leftover


def proper_colouring_hamilton(
    g: ColouredGraph, params: Optional[PipelineParams] = None
) -> HamiltonResult:
    """Hamilton cycle with many distinct colours under any proper colouring.

    Any proper colouring is n/2-bounded (colour classes are matchings), so
    splitting every colour in four yields an n/8-bounded proper colouring; the
    main pipeline runs on the split colouring and the count is mapped back to
    the original colours.
    """
    rep = validate(g)
    if not rep.is_proper:
        raise StageFailure("validate", "colouring is not proper")
    if params is None:
        eps = max(0.01, rep.min_degree / max(g.n, 1) - 0.5 - 0.005)
        params = PipelineParams(epsilon=min(eps, 0.5))
    split, back = _split4(g)
    result = near_rainbow_hamilton(split, params)
    n = len(result.cycle)
    edge_keys = [
        edge_key(result.cycle[i], result.cycle[(i + 1) % n]) for i in range(n)
    ]
    for e in edge_keys:  # back-mapping must reproduce the host colour exactly
        assert back[split.colour_of[e]] == g.colour_of[e]
    original_distinct = len({g.colour_of[e] for e in edge_keys})
    assert original_distinct >= math.ceil(result.distinct_colours / 4)
    log = dict(result.stage_log)
    log["split_distinct"] = result.distinct_colours
    log["original_distinct"] = original_distinct
    return HamiltonResult(
        cycle=result.cycle, distinct_colours=original_distinct, stage_log=log
    )


def _split4(g: ColouredGraph):
    from .graph import split_colours

    return split_colours(g, 4)
