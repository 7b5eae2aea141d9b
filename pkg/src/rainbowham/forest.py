"""Near-spanning rainbow path forests.

The main route: extract a regular spanning subgraph, randomly partition
vertices into slabs V_0..V_m and colours into C_1..C_m, certify near-regularity
of every slab, find a rainbow matching per slab (colour parts force
cross-slab colour disjointness), and assemble the matchings into paths that
all start in V_0. A greedy dense-case builder is provided as an alternative
for hosts with very high minimum degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import CertificationError, PreconditionError, StageFailure
from .graph import ColouredGraph, PathForest, distinct_colours_of, validate
from .regularize import regular_spanning_subgraph
from .seeding import derive_seed, rng_for


@dataclass(frozen=True)
class NearRegularityParams:
    gamma: float
    delta: float
    n_ref: int

    def __post_init__(self):
        if not (0 < self.gamma <= 1):
            raise ValueError(f"gamma must be in (0,1], got {self.gamma}")
        if not (0 < self.delta <= 1):
            raise ValueError(f"delta must be in (0,1], got {self.delta}")
        if self.n_ref < 1:
            raise ValueError(f"n_ref must be >= 1, got {self.n_ref}")

    @property
    def lo(self) -> float:
        return (1 - self.gamma) * self.delta * self.n_ref

    @property
    def hi(self) -> float:
        return (1 + self.gamma) * self.delta * self.n_ref


@dataclass(frozen=True)
class NearRegularityReport:
    ok: bool
    lo: float
    hi: float
    worst_vertex: Optional[int]
    worst_degree: Optional[int]


@dataclass(frozen=True)
class PartitionPlan:
    """Vertex parts V_0..V_m plus leftover U, and colour parts C_1..C_m."""

    vertex_parts: tuple[tuple[int, ...], ...]
    leftover: tuple[int, ...]
    colour_parts: tuple[frozenset[int], ...]
    m: int
    n_prime: int

    @staticmethod
    def merge(vertex_side: "PartitionPlan", colour_side: "PartitionPlan") -> "PartitionPlan":
        if vertex_side.m != colour_side.m:
            raise ValueError("vertex and colour plans disagree on m")
        return PartitionPlan(
            vertex_parts=vertex_side.vertex_parts,
            leftover=vertex_side.leftover,
            colour_parts=colour_side.colour_parts,
            m=vertex_side.m,
            n_prime=vertex_side.n_prime,
        )


@dataclass(frozen=True)
class SlabGraph:
    """Bipartite slab B_i: edges of G'[V_{i-1}, V_i] coloured from C_i."""

    index: int
    left: tuple[int, ...]
    right: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (left vertex, right vertex, colour)
    certificate: Optional[NearRegularityParams] = None


@dataclass(frozen=True)
class MatchingResult:
    edges: tuple[tuple[int, int], ...]  # (left, right) pairs
    colours: frozenset[int]
    target: float
    shortfall: bool

    @property
    def size(self) -> int:
        return len(self.edges)


def check_near_regular(
    degrees: Sequence[int] | ColouredGraph, params: NearRegularityParams
) -> NearRegularityReport:
    """Every degree must lie in [(1-gamma) delta n_ref, (1+gamma) delta n_ref]."""
    if isinstance(degrees, ColouredGraph):
        degrees = degrees.degrees
    lo, hi = params.lo, params.hi
    worst_v, worst_d, worst_gap = None, None, 0.0
    for v, d in enumerate(degrees):
        gap = max(lo - d, d - hi)
        if gap > worst_gap:
            worst_gap, worst_v, worst_d = gap, v, d
    return NearRegularityReport(
        ok=worst_gap <= 0, lo=lo, hi=hi, worst_vertex=worst_v, worst_degree=worst_d
    )


def partition_vertices(g: ColouredGraph, m: int, seed: int = 0) -> PartitionPlan:
    """Uniform random partition V = U u V_0 u ... u V_m with equal V_i."""
    if m < 1:
        raise PreconditionError(f"m must be >= 1, got {m}")
    if m + 1 > g.n:
        raise PreconditionError(f"m+1 = {m + 1} parts exceed n = {g.n}")
    rng = rng_for(seed, "vparts")
    order = list(range(g.n))
    rng.shuffle(order)
    n_prime = g.n // (m + 1)
    parts = tuple(
        tuple(sorted(order[i * n_prime : (i + 1) * n_prime])) for i in range(m + 1)
    )
    leftover = tuple(sorted(order[(m + 1) * n_prime :]))
    return PartitionPlan(
        vertex_parts=parts, leftover=leftover, colour_parts=(), m=m, n_prime=n_prime
    )


def partition_colours(colours, m: int, seed: int = 0) -> PartitionPlan:
    """Place each colour independently and uniformly into one of m parts."""
    if m < 1:
        raise PreconditionError(f"m must be >= 1, got {m}")
    rng = rng_for(seed, "cparts")
    parts: list[set[int]] = [set() for _ in range(m)]
    for c in sorted(set(colours)):
        parts[rng.randrange(m)].add(c)
    return PartitionPlan(
        vertex_parts=(),
        leftover=(),
        colour_parts=tuple(frozenset(p) for p in parts),
        m=m,
        n_prime=0,
    )


def build_slabs(gprime: ColouredGraph, plan: PartitionPlan) -> list[SlabGraph]:
    part_of = {}
    for i, part in enumerate(plan.vertex_parts):
        for v in part:
            part_of[v] = i
    colour_part = {}
    for i, cs in enumerate(plan.colour_parts):
        for c in cs:
            colour_part[c] = i + 1  # colour parts are indexed 1..m
    slab_edges: list[list[tuple[int, int, int]]] = [[] for _ in range(plan.m + 1)]
    for (u, v), c in zip(gprime.edges, gprime.colours):
        pu, pv = part_of.get(u), part_of.get(v)
        if pu is None or pv is None or abs(pu - pv) != 1:
            continue
        i = max(pu, pv)  # slab i sits between V_{i-1} and V_i
        if colour_part.get(c) != i:
            continue
        if pu < pv:
            slab_edges[i].append((u, v, c))
        else:
            slab_edges[i].append((v, u, c))
    return [
        SlabGraph(
            index=i,
            left=plan.vertex_parts[i - 1],
            right=plan.vertex_parts[i],
            edges=tuple(sorted(slab_edges[i])),
        )
        for i in range(1, plan.m + 1)
    ]


def _slab_degree_seq(slab: SlabGraph) -> list[int]:
    deg = {v: 0 for v in slab.left}
    deg.update({v: 0 for v in slab.right})
    for u, v, _ in slab.edges:
        deg[u] += 1
        deg[v] += 1
    return [deg[v] for v in slab.left + slab.right]


@dataclass(frozen=True)
class CertifiedPartition:
    plan: PartitionPlan
    slabs: tuple[SlabGraph, ...]
    resamples_used: int
    violations: tuple[str, ...]  # non-empty only when returned best-effort


def _check_plan(
    gprime: ColouredGraph, plan: PartitionPlan, gamma: float, delta: float, q: float
) -> tuple[list[SlabGraph], list[str]]:
    """All certification checks for one sampled plan; returns (slabs, violations)."""
    violations: list[str] = []
    n2 = 2 * plan.n_prime
    part_sets = [set(p) for p in plan.vertex_parts]
    # pair graphs G'[V_{i-1}, V_i]
    for i in range(1, plan.m + 1):
        left, right = part_sets[i - 1], part_sets[i]
        deg = {v: 0 for v in plan.vertex_parts[i - 1] + plan.vertex_parts[i]}
        for u, v in gprime.edges:
            if (u in left and v in right) or (v in left and u in right):
                deg[u] += 1
                deg[v] += 1
        rep = check_near_regular(
            list(deg.values()),
            NearRegularityParams(gamma=min(1.0, 2 * gamma), delta=delta, n_ref=n2),
        )
        if not rep.ok:
            violations.append(
                f"pair graph {i}: degree {rep.worst_degree} of vertex "
                f"{rep.worst_vertex} outside [{rep.lo:.2f}, {rep.hi:.2f}]"
            )
    slabs = build_slabs(gprime, plan)
    bound = (1 - q) * (delta / plan.m) * n2 / 2
    for slab in slabs:
        rep = check_near_regular(
            _slab_degree_seq(slab),
            NearRegularityParams(
                gamma=min(1.0, 4 * gamma), delta=delta / plan.m, n_ref=n2
            ),
        )
        if not rep.ok:
            violations.append(
                f"slab {slab.index}: degree {rep.worst_degree} of vertex "
                f"{rep.worst_vertex} outside [{rep.lo:.2f}, {rep.hi:.2f}]"
            )
        counts: dict[int, int] = {}
        for _, _, c in slab.edges:
            counts[c] = counts.get(c, 0) + 1
        if counts and max(counts.values()) > bound:
            worst = max(counts, key=counts.get)
            violations.append(
                f"slab {slab.index}: colour {worst} has {counts[worst]} edges "
                f"> bound {bound:.2f}"
            )
    return slabs, violations


def certify_partition(
    gprime: ColouredGraph,
    plan: PartitionPlan,
    gamma: float,
    delta: float,
    max_resamples: int = 10,
    q: float = 0.0,
    seed: int = 0,
    best_effort: bool = False,
) -> CertifiedPartition:
    """Resample vertex/colour partitions until every slab certifies.

    With ``best_effort`` (the small-n regime) the least-violating plan seen is
    returned with its violations recorded instead of raising.
    """
    best: Optional[tuple[int, PartitionPlan, list[SlabGraph], list[str]]] = None
    current = plan
    for attempt in range(max_resamples + 1):
        slabs, violations = _check_plan(gprime, current, gamma, delta, q)
        if not violations:
            return CertifiedPartition(
                plan=current, slabs=tuple(slabs), resamples_used=attempt, violations=()
            )
        if best is None or len(violations) < best[0]:
            best = (len(violations), current, slabs, violations)
        if attempt < max_resamples:
            s = derive_seed(seed, "resample", attempt)
            current = PartitionPlan.merge(
                partition_vertices(gprime, plan.m, s),
                partition_colours(set(gprime.colours), plan.m, s),
            )
    assert best is not None
    if best_effort:
        return CertifiedPartition(
            plan=best[1],
            slabs=tuple(best[2]),
            resamples_used=max_resamples,
            violations=tuple(best[3]),
        )
    raise CertificationError(
        f"certification failed after {max_resamples} resamples", report=best[3]
    )


# -- rainbow matching engine ------------------------------------------------


def rainbow_matching(
    slab: SlabGraph,
    q: float = 0.0,
    seed: int = 0,
    restarts: Optional[int] = None,
    improvement_passes: int = 12,
) -> MatchingResult:
    """Randomized greedy rainbow matching with local colour-switching.

    Each restart greedily matches uncovered left vertices with colour-fresh
    edges, then repeatedly attempts length-3 switches (remove one matched edge,
    add two) to cover stuck vertices. The best matching over all restarts is
    returned; missing the (1-q)|side| target is reported, not raised.
    """
    side = min(len(slab.left), len(slab.right))
    target = (1 - q) * side
    if not slab.edges:
        return MatchingResult(
            edges=(), colours=frozenset(), target=target, shortfall=target > 0
        )
    if restarts is None:
        nv = len(slab.left) + len(slab.right)
        restarts = 400 if nv <= 24 else (60 if nv <= 200 else 24)

    by_left: dict[int, list[tuple[int, int, int]]] = {}
    for e in slab.edges:
        by_left.setdefault(e[0], []).append(e)
    lefts = list(slab.left)

    best_edges: list[tuple[int, int, int]] = []

    for attempt in range(restarts):
        rng = rng_for(seed, "rm", attempt)
        match_of_left: dict[int, tuple[int, int, int]] = {}
        right_used: set[int] = set()
        colour_used: dict[int, tuple[int, int, int]] = {}

        def try_add(u: int) -> bool:
            cands = by_left.get(u)
            if not cands:
                return False
            start = rng.randrange(len(cands))
            for k in range(len(cands)):
                _, v, c = cands[(start + k) % len(cands)]
                if v not in right_used and c not in colour_used:
                    e = (u, v, c)
                    match_of_left[u] = e
                    right_used.add(v)
                    colour_used[c] = e
                    return True
            return False

        order = lefts[:]
        rng.shuffle(order)
        for u in order:
            try_add(u)

        def rematch(e_old: tuple[int, int, int], freed_colour: int, taken_right: int) -> bool:
            """Move e_old's left endpoint to a different free edge, assuming
            e_old is removed, ``freed_colour`` stays unavailable and
            ``taken_right`` is about to be occupied."""
            x, y_old, c_old = e_old
            for _, y2, c2 in by_left.get(x, ()):
                if y2 == y_old or y2 == taken_right or y2 in right_used:
                    continue
                if c2 == freed_colour or (c2 in colour_used and c2 != c_old):
                    continue
                del match_of_left[x]
                right_used.discard(y_old)
                del colour_used[c_old]
                match_of_left[x] = (x, y2, c2)
                right_used.add(y2)
                colour_used[c2] = (x, y2, c2)
                return True
            return False

        for _ in range(improvement_passes):
            uncovered = [u for u in lefts if u not in match_of_left and u in by_left]
            if not uncovered:
                break
            rng.shuffle(uncovered)
            progress = False
            for u in uncovered:
                if try_add(u):
                    progress = True
                    continue
                done = False
                cands = by_left[u][:]
                rng.shuffle(cands)
                for _, v, c in cands:
                    v_free = v not in right_used
                    c_free = c not in colour_used
                    if v_free and not c_free:
                        # colour conflict: rematch the edge holding colour c
                        if rematch(colour_used[c], c, v):
                            match_of_left[u] = (u, v, c)
                            right_used.add(v)
                            colour_used[c] = (u, v, c)
                            done = True
                    elif c_free and not v_free:
                        # vertex conflict: rematch the edge covering v
                        blocker = next(
                            e for e in match_of_left.values() if e[1] == v
                        )
                        if rematch(blocker, c, v):
                            match_of_left[u] = (u, v, c)
                            right_used.add(v)
                            colour_used[c] = (u, v, c)
                            done = True
                    if done:
                        break
                progress = progress or done
            if not progress:
                break

        if len(match_of_left) > len(best_edges):
            best_edges = sorted(match_of_left.values())
        if len(best_edges) >= side:
            break

    return MatchingResult(
        edges=tuple((u, v) for u, v, _ in best_edges),
        colours=frozenset(c for _, _, c in best_edges),
        target=target,
        shortfall=len(best_edges) < target,
    )


# -- forest assembly ---------------------------------------------------------


def build_path_forest(
    matchings: Sequence[MatchingResult],
    plan: PartitionPlan,
    host: ColouredGraph,
) -> PathForest:
    """Greedy assembly of per-slab matchings into paths starting in V_0.

    A path ending in V_{i-1} is extended by its matching edge in slab i when
    one exists; unmatched paths simply stop growing (their prefixes are kept).
    The resulting path count never exceeds n' and is at least
    n' - sum of slab deficiencies.
    """
    if len(matchings) != plan.m:
        raise PreconditionError(
            f"expected {plan.m} matchings, got {len(matchings)}"
        )
    part_sets = [set(p) for p in plan.vertex_parts]
    for i, mres in enumerate(matchings, start=1):
        for u, v in mres.edges:
            if u not in part_sets[i - 1] or v not in part_sets[i]:
                raise PreconditionError(
                    f"matching {i} edge ({u},{v}) does not join V_{i-1} to V_{i}"
                )
            if not host.has_edge(u, v):
                raise PreconditionError(
                    f"matching {i} edge ({u},{v}) is not a host edge"
                )
    paths = [[v] for v in plan.vertex_parts[0]]
    for i, mres in enumerate(matchings, start=1):
        nxt = dict(mres.edges)
        taken: set[int] = set()
        for p in paths:
            w = nxt.get(p[-1])
            if w is not None and w not in taken:
                p.append(w)
                taken.add(w)
    colours = [host.colour(p[j], p[j + 1]) for p in paths for j in range(len(p) - 1)]
    rainbow = len(colours) == len(set(colours))
    return PathForest(paths=tuple(tuple(p) for p in paths), rainbow=rainbow)


@dataclass(frozen=True)
class ForestReport:
    n: int
    r: int
    m: int
    n_prime: int
    gamma: float
    q: float
    slab_sizes: tuple[int, ...]
    slab_targets: tuple[float, ...]
    num_paths: int
    v_f: int
    e_f: int
    leftover: tuple[int, ...]
    target_paths: float  # n^(1-alpha)
    target_coverage: float  # n - 2 n^(1-alpha)
    warnings: tuple[str, ...]


def rainbow_forest(
    g: ColouredGraph,
    alpha: float = 0.25,
    seed: int = 0,
    epsilon: float = 0.05,
    m_override: Optional[int] = None,
    q: Optional[float] = None,
    gamma: Optional[float] = None,
    max_resamples: int = 10,
    n_floor: int = 10_000,
    matching_restarts: Optional[int] = None,
) -> tuple[PathForest, ForestReport]:
    """Full composition: regularize, partition, certify, match, assemble.

    Below ``n_floor`` the asymptotic tolerances are vacuous, so certification
    runs best-effort and a small-n warning is recorded instead of failing.
    """
    report = validate(g)
    if not report.is_proper:
        raise PreconditionError("rainbow_forest requires a proper colouring")
    n = g.n
    if report.min_degree < (0.5 + epsilon) * n:
        raise PreconditionError(
            f"min degree {report.min_degree} below (1/2+{epsilon})n = "
            f"{(0.5 + epsilon) * n:.1f}"
        )
    warnings: list[str] = []
    small_n = n < n_floor
    if small_n:
        warnings.append(
            f"small-n regime (n={n} < {n_floor}): best-effort run, "
            "asymptotic tolerances clamped"
        )
    try:
        reg = regular_spanning_subgraph(g, seed=derive_seed(seed, "reg"))
    except Exception as exc:
        raise StageFailure("regularize", str(exc)) from exc
    gprime, r = reg.subgraph, reg.r

    m = m_override if m_override is not None else max(1, int(n**alpha) - 1)
    if m + 1 > n:
        raise PreconditionError(f"m={m} too large for n={n}")
    gamma_eff = gamma if gamma is not None else max(n ** (-math.sqrt(alpha)), 0.05)
    q_eff = q if q is not None else n ** (-2 * alpha)
    delta_param = r / n

    s0 = derive_seed(seed, "plan")
    plan = PartitionPlan.merge(
        partition_vertices(gprime, m, s0),
        partition_colours(set(gprime.colours), m, s0),
    )
    try:
        cert = certify_partition(
            gprime,
            plan,
            gamma=gamma_eff,
            delta=delta_param,
            q=q_eff,
            max_resamples=max_resamples,
            seed=derive_seed(seed, "certify"),
            best_effort=small_n,
        )
    except CertificationError as exc:
        raise StageFailure("certification", f"{exc}; report={exc.report}") from exc
    if cert.violations:
        warnings.append(
            f"certification best-effort with {len(cert.violations)} violations"
        )

    matchings = [
        rainbow_matching(
            slab,
            q=q_eff,
            seed=derive_seed(seed, "match", slab.index),
            restarts=matching_restarts,
        )
        for slab in cert.slabs
    ]
    # cross-slab colour disjointness is forced by the colour partition
    seen_colours: set[int] = set()
    for mres in matchings:
        overlap = seen_colours & mres.colours
        assert not overlap, f"colour partition violated: {sorted(overlap)[:5]}"
        seen_colours |= mres.colours

    try:
        forest = build_path_forest(matchings, cert.plan, gprime)
    except PreconditionError as exc:
        raise StageFailure("forest-assembly", str(exc)) from exc
    assert forest.rainbow, "forest failed the independent rainbow re-check"
    n_paths_min = cert.plan.n_prime - sum(
        max(0, cert.plan.n_prime - mres.size) for mres in matchings
    )
    assert forest.num_paths >= n_paths_min

    covered = {v for p in forest.paths for v in p}
    leftover = tuple(sorted(set(range(n)) - covered))
    rep = ForestReport(
        n=n,
        r=r,
        m=m,
        n_prime=cert.plan.n_prime,
        gamma=gamma_eff,
        q=q_eff,
        slab_sizes=tuple(mres.size for mres in matchings),
        slab_targets=tuple(mres.target for mres in matchings),
        num_paths=forest.num_paths,
        v_f=forest.num_vertices,
        e_f=forest.num_edges,
        leftover=leftover,
        target_paths=n ** (1 - alpha),
        target_coverage=n - 2 * n ** (1 - alpha),
        warnings=tuple(warnings),
    )
    return forest, rep


def rainbow_forest_dense(
    g: ColouredGraph, delta_param: float, gamma_param: float
) -> tuple[PathForest, dict]:
    """Greedy rainbow path forest for very dense hosts.

    Requires min degree >= (1 - delta_param) n and the parameter inequality
    3*gamma*delta - gamma^2/2 > 1/n. Grows each path at both ends with
    colour-fresh edges to unvisited vertices; the path budget is gamma_param*n.
    Target e(F) >= (1 - 4 delta_param) n; a shortfall is reported, not raised.
    """
    n = g.n
    if n == 0:
        raise PreconditionError("empty graph")
    if 3 * gamma_param * delta_param - gamma_param**2 / 2 <= 1 / n:
        raise PreconditionError(
            "need 3*gamma*delta - gamma^2/2 > 1/n "
            f"(got {3 * gamma_param * delta_param - gamma_param ** 2 / 2:.3g} "
            f"<= {1 / n:.3g})"
        )
    if g.min_degree < (1 - delta_param) * n:
        raise PreconditionError(
            f"min degree {g.min_degree} below (1-{delta_param})n = "
            f"{(1 - delta_param) * n:.1f}"
        )
    max_paths = max(1, math.floor(gamma_param * n))
    unvisited = set(range(n))
    used_colours: set[int] = set()
    paths: list[list[int]] = []

    def extend(path: list[int], at_end: bool) -> bool:
        v = path[-1] if at_end else path[0]
        for w in sorted(g.adjacency[v]):
            if w in unvisited and g.colour(v, w) not in used_colours:
                used_colours.add(g.colour(v, w))
                unvisited.discard(w)
                (path.append if at_end else lambda x: path.insert(0, x))(w)
                return True
        return False

    while unvisited and len(paths) < max_paths:
        start = min(unvisited)
        unvisited.discard(start)
        path = [start]
        while extend(path, True):
            pass
        while extend(path, False):
            pass
        paths.append(path)

    forest = PathForest(paths=tuple(tuple(p) for p in paths), rainbow=True)
    assert distinct_colours_of(g, forest.edge_list()) == forest.num_edges
    target = (1 - 4 * delta_param) * n
    report = {
        "e_f": forest.num_edges,
        "v_f": forest.num_vertices,
        "num_paths": forest.num_paths,
        "target_e_f": target,
        "shortfall": forest.num_edges < target,
        "leftover": tuple(sorted(unvisited)),
    }
    return forest, report
