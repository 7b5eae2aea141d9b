"""Properly coloured graphs whose every Hamilton cycle misses many colours.

The construction glues a core H (a union of k random matchings of size ell,
one colour per matching, with min degree >= d) to an independent set of apex
vertices joined completely to the core, each apex edge getting a fresh unique
colour. Any Hamilton cycle must cross the apex set 2|apex| times, so it uses
at least n - 2|apex| core edges while the core only carries k colours; the
missed-colour bound follows by arithmetic over the certificate, not search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import BudgetExceededError, PreconditionError
from .graph import ColouredGraph, validate
from .seeding import rng_for

# materialization refusal threshold: beyond this many edges the strictly
# valid parameter regime is out of desk-scale reach
MAX_MATERIALIZED_EDGES = 50_000_000


@dataclass(frozen=True)
class CounterexampleParams:
    """Master parameters (n, m, s, t) and the derived construction constants."""

    n: int
    m: int
    s: int
    t: int
    q: int = field(init=False)
    k: int = field(init=False)
    ell: int = field(init=False)
    d: int = field(init=False)
    h: float = field(init=False)

    def __post_init__(self):
        q = self.s // 2**10
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "k", 2 * q - self.t)
        object.__setattr__(self, "ell", self.n // 8 + self.s)
        object.__setattr__(self, "d", q + self.m)
        n = max(self.n, 3)
        object.__setattr__(
            self, "h", 2**4 * self.d**2 / n + 2 * math.sqrt(max(self.d, 0)) * math.log(n)
        )

    def violations(self) -> list[str]:
        """Check the master inequality set; empty list means strictly valid."""
        out = []
        if self.m > 2**-20 * self.n:
            out.append(f"m={self.m} > 2^-20 n = {2 ** -20 * self.n:.3g}")
        if self.t > 2**-20 * self.n:
            out.append(f"t={self.t} > 2^-20 n = {2 ** -20 * self.n:.3g}")
        if self.s > self.n / 8:
            out.append(f"s={self.s} > n/8 = {self.n / 8:.3g}")
        floor_terms = {
            "sqrt(mn)": math.sqrt(self.m * self.n),
            "sqrt(tn)": math.sqrt(self.t * self.n),
            "(n log n)^(2/3)": (self.n * math.log(max(self.n, 3))) ** (2 / 3),
        }
        need = max(floor_terms.values())
        if 2**-10 * self.s < need:
            worst = max(floor_terms, key=floor_terms.get)
            out.append(
                f"2^-10 s = {2 ** -10 * self.s:.4g} < {worst} = {need:.4g}"
            )
        if self.t < 1 or self.m < 0 or self.k < 1:
            out.append(f"degenerate derived values (k={self.k}, t={self.t})")
        return out

    @property
    def is_valid(self) -> bool:
        return not self.violations()


def proposition_parameters(c: float, n: int) -> CounterexampleParams:
    """The optimality-of-1/8 instantiation for a global bound of c*n."""
    c_prime = min(c, 0.25)
    if c_prime <= 0.125:
        raise PreconditionError(f"c={c} must exceed 1/8")
    eps = (c_prime - 0.125) ** 2 * 2**-20
    return CounterexampleParams(
        n=n,
        m=int(eps * n),
        s=int((c_prime - 0.125) * n),
        t=int(eps * n),
    )


def corollary_parameters(n: int) -> CounterexampleParams:
    """The no-rainbow-Hamilton-cycle instantiation at min degree n/2 + 1."""
    s = math.ceil(2**10 * (n * math.log(n)) ** (2 / 3))
    return CounterexampleParams(n=n, m=1, s=s, t=1)


def random_matchings_graph(
    n_h: int,
    d: int,
    k: int,
    ell: int,
    seed: int = 0,
    max_retries: int = 10,
    check_condition: bool = True,
) -> ColouredGraph:
    """Union of k uniform random ell-matchings, colour i on matching i.

    Multiple edges keep their first occurrence (and its colour). The sample is
    redrawn until the minimum degree reaches d. The sufficient condition is
    enforced in its stronger 2^6 d^2/n form so both readings in the source
    material are satisfied; ``check_condition=False`` is for deliberately
    scaled-down instances.
    """
    if 2 * ell > n_h:
        raise PreconditionError(f"matching size {ell} exceeds n/2 = {n_h / 2:g}")
    if k < 1 or ell < 1:
        raise PreconditionError(f"need k >= 1 and ell >= 1 (got k={k}, ell={ell})")
    if check_condition:
        if d > 2**-5 * n_h:
            raise PreconditionError(f"d={d} > 2^-5 n = {2 ** -5 * n_h:.3g}")
        lhs = 2 * k * ell / n_h
        rhs = d + 2**6 * d**2 / n_h + 4 * math.sqrt(d) * math.log(max(n_h, 3))
        if lhs <= rhs:
            raise PreconditionError(
                f"2k*ell/n = {lhs:.3f} must exceed d + 2^6 d^2/n + 4 sqrt(d) log n"
                f" = {rhs:.3f}"
            )
    best_delta = -1
    for attempt in range(max_retries):
        rng = rng_for(seed, "gb", attempt)
        colour_map: dict[tuple[int, int], int] = {}
        order = list(range(n_h))
        for i in range(k):
            rng.shuffle(order)
            for j in range(ell):
                u, v = order[2 * j], order[2 * j + 1]
                e = (u, v) if u < v else (v, u)
                if e not in colour_map:  # first matching wins a multi-edge
                    colour_map[e] = i
        g = ColouredGraph.from_colour_map(n_h, colour_map)
        if g.min_degree >= d:
            return g
        best_delta = max(best_delta, g.min_degree)
    raise PreconditionError(
        f"min degree {best_delta} < d = {d} after {max_retries} samples"
    )


@dataclass(frozen=True)
class CounterexampleCertificate:
    core_vertices: tuple[int, ...]
    apex_vertices: tuple[int, ...]
    core_colour_count: int
    per_colour_max: int
    min_degree_required: int
    q: int
    t: int

    @property
    def derived_bound(self) -> int:
        """Max distinct colours any Hamilton cycle can carry: the cycle uses
        n - 2|apex| core edges, and the core has only core_colour_count
        colours."""
        return self.core_colour_count + 2 * len(self.apex_vertices)

    def to_dict(self) -> dict:
        return {
            "core_vertices": list(self.core_vertices),
            "apex_vertices": list(self.apex_vertices),
            "core_colour_count": self.core_colour_count,
            "per_colour_max": self.per_colour_max,
            "min_degree_required": self.min_degree_required,
            "q": self.q,
            "t": self.t,
            "derived_bound": self.derived_bound,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CounterexampleCertificate":
        return cls(
            core_vertices=tuple(doc["core_vertices"]),
            apex_vertices=tuple(doc["apex_vertices"]),
            core_colour_count=int(doc["core_colour_count"]),
            per_colour_max=int(doc["per_colour_max"]),
            min_degree_required=int(doc["min_degree_required"]),
            q=int(doc["q"]),
            t=int(doc["t"]),
        )


def _assemble(
    core: ColouredGraph,
    n: int,
    q: int,
    t: int,
    ell: int,
    min_degree_required: int,
) -> tuple[ColouredGraph, CounterexampleCertificate]:
    n_core = core.n
    apex = list(range(n_core, n))
    next_colour = max(core.colours, default=-1) + 1
    triples = [(u, v, c) for (u, v), c in zip(core.edges, core.colours)]
    for a in apex:
        for v in range(n_core):
            triples.append((v, a, next_colour))
            next_colour += 1
    g = ColouredGraph.from_triples(n, triples)
    cert = CounterexampleCertificate(
        core_vertices=tuple(range(n_core)),
        apex_vertices=tuple(apex),
        core_colour_count=len(set(core.colours)),
        per_colour_max=ell,
        min_degree_required=min_degree_required,
        q=q,
        t=t,
    )
    return g, cert


def build_counterexample(
    params: CounterexampleParams, seed: int = 0
) -> tuple[ColouredGraph, CounterexampleCertificate]:
    """Materialize the counterexample for strictly valid parameters.

    Rejects invalid parameters naming the violated inequality, and refuses
    instances whose edge count exceeds the materialization budget (the
    strictly valid regime starts around n ~ 10^14, far beyond desk scale).
    """
    bad = params.violations()
    if bad:
        raise PreconditionError("; ".join(bad))
    n_core = params.n // 2 + params.q
    approx_edges = params.k * params.ell + (params.n - n_core) * n_core
    if approx_edges > MAX_MATERIALIZED_EDGES:
        raise BudgetExceededError(
            f"~{approx_edges:.3g} edges exceed the materialization budget "
            f"{MAX_MATERIALIZED_EDGES:.3g}"
        )
    core = random_matchings_graph(
        n_core, params.d, params.k, params.ell, seed=seed
    )
    return _assemble(
        core, params.n, params.q, params.t, params.ell, params.n // 2 + params.m
    )


def build_counterexample_scaled(
    n: int,
    m: int,
    t: int,
    q: int,
    ell: int,
    seed: int = 0,
    max_retries: int = 50,
) -> tuple[ColouredGraph, CounterexampleCertificate]:
    """Structurally identical construction with directly chosen small
    parameters, for desk-scale and enumeration-scale instances.

    Enforces only what the construction itself needs: k = 2q - t >= 1,
    q >= m >= 0, and 2*ell <= n/2 + q.
    """
    k = 2 * q - t
    n_core = n // 2 + q
    if k < 1:
        raise PreconditionError(f"k = 2q - t = {k} must be >= 1")
    if not 0 <= m <= q:
        raise PreconditionError(f"need 0 <= m <= q (got m={m}, q={q})")
    if 2 * ell > n_core:
        raise PreconditionError(f"2*ell = {2 * ell} exceeds core size {n_core}")
    if n_core >= n:
        raise PreconditionError("no apex vertices left (q too large)")
    core = random_matchings_graph(
        n_core, q + m, k, ell, seed=seed, max_retries=max_retries,
        check_condition=False,
    )
    return _assemble(core, n, q, t, ell, n // 2 + m)


@dataclass(frozen=True)
class VerificationReport:
    apex_ok: bool
    colours_ok: bool
    proper_bounded_ok: bool
    degree_ok: bool
    derived_bound: Optional[int]
    details: tuple[str, ...]

    @property
    def all_ok(self) -> bool:
        return self.apex_ok and self.colours_ok and self.proper_bounded_ok and self.degree_ok


def verify_counterexample(
    g: ColouredGraph, cert: CounterexampleCertificate
) -> VerificationReport:
    """Check the certificate against the graph and derive the colour bound.

    (a) apex set independent and complete to the core; (b) core colour count
    within budget and apex colours unique and disjoint from the core's;
    (c) colouring proper and per_colour_max-bounded; (d) min degree. The
    bound is arithmetic over the certified structure: any Hamilton cycle has
    exactly 2|apex| apex edges, hence >= n - 2|apex| core edges.
    """
    details: list[str] = []
    core = set(cert.core_vertices)
    apex = set(cert.apex_vertices)
    apex_ok = core.isdisjoint(apex) and core | apex == set(range(g.n))
    if not apex_ok:
        details.append("core/apex sets do not partition the vertices")
    if apex_ok:
        for a in apex:
            nbrs = g.adjacency[a]
            if nbrs & apex:
                apex_ok = False
                details.append(f"apex vertex {a} has an apex neighbour")
                break
            if nbrs != core:
                apex_ok = False
                details.append(f"apex vertex {a} is not complete to the core")
                break

    core_colours = set()
    apex_colour_counts: dict[int, int] = {}
    for (u, v), c in zip(g.edges, g.colours):
        if u in apex or v in apex:
            apex_colour_counts[c] = apex_colour_counts.get(c, 0) + 1
        else:
            core_colours.add(c)
    colours_ok = len(core_colours) <= cert.core_colour_count
    if not colours_ok:
        details.append(
            f"core uses {len(core_colours)} colours > certified "
            f"{cert.core_colour_count}"
        )
    if any(cnt != 1 for cnt in apex_colour_counts.values()):
        colours_ok = False
        details.append("an apex colour is used more than once")
    if core_colours & set(apex_colour_counts):
        colours_ok = False
        details.append("apex and core colour sets overlap")

    rep = validate(g)
    proper_bounded_ok = rep.is_proper and rep.max_colour_multiplicity <= cert.per_colour_max
    if not rep.is_proper:
        details.append("colouring is not proper")
    if rep.max_colour_multiplicity > cert.per_colour_max:
        details.append(
            f"a colour has {rep.max_colour_multiplicity} edges > bound "
            f"{cert.per_colour_max}"
        )
    degree_ok = rep.min_degree >= cert.min_degree_required
    if not degree_ok:
        details.append(
            f"min degree {rep.min_degree} < required {cert.min_degree_required}"
        )

    bound = None
    if apex_ok and colours_ok:
        bound = len(core_colours) + 2 * len(apex)
        details.append(
            f"every Hamilton cycle has >= {g.n - 2 * len(apex)} core edges, "
            f"hence <= {bound} distinct colours"
        )
    return VerificationReport(
        apex_ok=apex_ok,
        colours_ok=colours_ok,
        proper_bounded_ok=proper_bounded_ok,
        degree_ok=degree_ok,
        derived_bound=bound,
        details=tuple(details),
    )
