import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbowham.absorber import (
    absorb,
    build_absorber,
    build_reservoir,
    neighbourhood_matching,
    verify_reservoir,
)
from rainbowham.errors import AbsorptionError, PreconditionError
from rainbowham.graph import ColouredGraph
from rainbowham.instances import InstanceSpec, generate_instance


def dense_host(n=40, epsilon=0.2, seed=0):
    return generate_instance(InstanceSpec(n=n, epsilon=epsilon, seed=seed))


def small_matching_on(g, size=3):
    """A deterministic matching of host edges for absorber tests."""
    used, matching = set(), []
    for u, v in g.edges:
        if u not in used and v not in used:
            matching.append((u, v))
            used.update((u, v))
            if len(matching) == size:
                break
    return matching


class TestNeighbourhoodMatching:
    def test_produces_certifiable_matching(self):
        g = dense_host(seed=1)
        m = neighbourhood_matching(
            g, c=0.05, m=20, seed=1, allow_weak_params=True, big_c=40.0
        )
        verts = [v for e in m for v in e]
        assert len(verts) == len(set(verts))
        for u, v in m:
            assert g.has_edge(u, v)
        # the advertised guarantee: every vertex sees > c*m core edges
        for v in range(g.n):
            count = sum(
                1 for x, y in m if x in g.adjacency[v] and y in g.adjacency[v]
            )
            assert count > 0.05 * 20

    def test_degree_precondition(self):
        g = ColouredGraph.from_triples(4, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (0, 3, 3)])
        with pytest.raises(PreconditionError, match="min degree"):
            neighbourhood_matching(g, c=0.01, m=4)

    def test_weak_params_rejected_by_default(self):
        g = dense_host(seed=2)
        with pytest.raises(PreconditionError, match="c="):
            neighbourhood_matching(g, c=0.05, m=20, seed=2)

    def test_failure_names_worst_vertex(self):
        g = dense_host(n=30, seed=3)
        with pytest.raises(AbsorptionError, match="vertex"):
            # absurdly high target cannot be met
            neighbourhood_matching(
                g, c=10.0, m=30, seed=3, allow_weak_params=True, max_retries=2
            )


class TestBuildAbsorber:
    def test_path_shape(self):
        g = dense_host(seed=4)
        core = small_matching_on(g, size=4)
        cert = build_absorber(g, core)
        t = len(core)
        assert len(cert.path) == 3 * t - 1
        assert len(cert.connectors) == t - 1
        assert cert.endpoints == (cert.path[0], cert.path[-1])
        assert len(set(cert.path)) == len(cert.path)
        for a, b in zip(cert.path, cert.path[1:]):
            assert g.has_edge(a, b)

    def test_capacity_is_exhaustive_minimum(self):
        g = dense_host(seed=5)
        core = small_matching_on(g, size=3)
        cert = build_absorber(g, core)
        expected = min(
            sum(1 for x, y in core if x in g.adjacency[v] and y in g.adjacency[v])
            for v in range(g.n)
        )
        assert cert.capacity == expected

    def test_rejects_empty(self):
        with pytest.raises(PreconditionError):
            build_absorber(dense_host(seed=6), [])

    def test_rejects_non_matching(self):
        g = dense_host(seed=6)
        (u, v), (x, _) = g.edges[0], g.edges[0]
        with pytest.raises(PreconditionError, match="matching"):
            build_absorber(g, [(u, v), (u, v)])

    def test_rejects_non_edges(self):
        g = ColouredGraph.from_triples(
            6, [(u, v, u * 6 + v) for u in range(6) for v in range(u + 1, 6)
                if (u, v) != (0, 1)]
        )
        with pytest.raises(PreconditionError, match="host edge"):
            build_absorber(g, [(0, 1)])


class TestAbsorb:
    def test_absorbs_and_preserves_contract(self):
        g = dense_host(seed=7)
        cert = build_absorber(g, small_matching_on(g, size=5))
        free = [v for v in range(g.n) if v not in set(cert.path)]
        u = free[: min(3, cert.capacity)]
        new_path = absorb(cert, u, g)
        assert new_path[0] == cert.endpoints[0]
        assert new_path[-1] == cert.endpoints[1]
        assert set(new_path) == set(cert.path) | set(u)
        for a, b in zip(new_path, new_path[1:]):
            assert g.has_edge(a, b)

    def test_empty_absorption_is_identity(self):
        g = dense_host(seed=8)
        cert = build_absorber(g, small_matching_on(g))
        assert absorb(cert, [], g) == cert.path

    def test_rejects_overflow(self):
        g = dense_host(seed=9)
        cert = build_absorber(g, small_matching_on(g, size=2))
        free = [v for v in range(g.n) if v not in set(cert.path)]
        with pytest.raises(PreconditionError, match="capacity"):
            absorb(cert, free[: cert.capacity + 1], g)

    def test_rejects_overlap_with_path(self):
        g = dense_host(seed=10)
        cert = build_absorber(g, small_matching_on(g))
        with pytest.raises(PreconditionError, match="intersects"):
            absorb(cert, [cert.path[0]], g)

    def test_rejects_repeats(self):
        g = dense_host(seed=10)
        cert = build_absorber(g, small_matching_on(g))
        free = [v for v in range(g.n) if v not in set(cert.path)]
        with pytest.raises(PreconditionError, match="repeated"):
            absorb(cert, [free[0], free[0]], g)


class TestReservoir:
    def test_build_and_verify(self):
        g = dense_host(seed=11)
        res = build_reservoir(g, excluded=[0, 1, 2], size=10, epsilon=0.2, seed=11)
        assert len(res.vertices) == 10
        assert not (res.vertices & {0, 1, 2})
        assert res.min_codegree >= 0.2 * 10
        assert verify_reservoir(g, res)

    def test_min_codegree_exact(self):
        g = dense_host(seed=12)
        res = build_reservoir(g, excluded=[], size=8, epsilon=0.1, seed=12)
        r = sorted(res.vertices)
        expected = min(
            len(g.adjacency[x] & g.adjacency[y] & res.vertices)
            for x in range(g.n)
            for y in range(g.n)
            if x != y
        )
        assert res.min_codegree == expected

    def test_size_validation(self):
        g = dense_host(seed=13)
        with pytest.raises(PreconditionError, match="exceeds"):
            build_reservoir(g, excluded=range(35), size=10, epsilon=0.1)
        with pytest.raises(PreconditionError, match="positive"):
            build_reservoir(g, excluded=[], size=0, epsilon=0.1)

    def test_unattainable_epsilon_fails_with_report(self):
        g = dense_host(n=30, seed=14)
        with pytest.raises(PreconditionError, match="codegree"):
            build_reservoir(g, excluded=[], size=4, epsilon=1.0, seed=14,
                            max_retries=3)


@given(st.integers(min_value=0, max_value=2**30), st.integers(min_value=0, max_value=6))
@settings(max_examples=30, deadline=None)
def test_absorb_contract_property(seed, k):
    g = dense_host(seed=15)
    rng = random.Random(seed)
    cert = build_absorber(g, small_matching_on(g, size=6))
    free = [v for v in range(g.n) if v not in set(cert.path)]
    u = rng.sample(free, min(k, cert.capacity, len(free)))
    new_path = absorb(cert, u, g)
    assert new_path[0] == cert.endpoints[0] and new_path[-1] == cert.endpoints[1]
    assert set(new_path) == set(cert.path) | set(u)
    assert len(new_path) == len(set(new_path))
    assert all(g.has_edge(a, b) for a, b in zip(new_path, new_path[1:]))
