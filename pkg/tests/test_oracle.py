import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbowham.errors import BudgetExceededError
from rainbowham.graph import ColouredGraph, distinct_colours_of
from rainbowham.oracle import (
    DEFAULT_BUDGET,
    OracleBudget,
    is_hamilton_cycle,
    max_colour_hamilton_bruteforce,
    max_rainbow_matching_exact,
)


def k4_matching_coloured():
    return ColouredGraph.from_triples(
        4, [(0, 1, 0), (2, 3, 0), (0, 2, 1), (1, 3, 1), (0, 3, 2), (1, 2, 2)]
    )


class TestIsHamiltonCycle:
    def test_valid_cycle(self):
        g = k4_matching_coloured()
        assert is_hamilton_cycle(g, (0, 1, 3, 2))

    def test_rotations_and_reversals(self):
        g = k4_matching_coloured()
        assert is_hamilton_cycle(g, (3, 2, 0, 1))
        assert is_hamilton_cycle(g, (2, 3, 1, 0))

    def test_rejects_wrong_length(self):
        g = k4_matching_coloured()
        assert not is_hamilton_cycle(g, (0, 1, 2))

    def test_rejects_repeats(self):
        g = k4_matching_coloured()
        assert not is_hamilton_cycle(g, (0, 1, 2, 2))

    def test_rejects_missing_edge(self):
        g = ColouredGraph.from_triples(4, [(0, 1, 0), (1, 2, 1), (2, 3, 2)])
        assert not is_hamilton_cycle(g, (0, 1, 2, 3))

    def test_rejects_tiny(self):
        g = ColouredGraph.from_triples(2, [(0, 1, 0)])
        assert not is_hamilton_cycle(g, (0, 1))


class TestHamiltonOracle:
    def test_k4_matching_colouring(self):
        # every 4-cycle in K4 consists of two full perfect matchings: 2 colours
        count, cycle = max_colour_hamilton_bruteforce(k4_matching_coloured())
        assert count == 2
        assert cycle == (0, 1, 2, 3)

    def test_rainbow_c5(self):
        g = ColouredGraph.from_triples(
            5, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 4, 3), (0, 4, 4)]
        )
        assert max_colour_hamilton_bruteforce(g) == (5, (0, 1, 2, 3, 4))

    def test_k5_sum_mod_colouring(self):
        edges = [(u, v, (u + v) % 5) for u in range(5) for v in range(u + 1, 5)]
        count, cycle = max_colour_hamilton_bruteforce(
            ColouredGraph.from_triples(5, edges)
        )
        assert count == 5
        assert cycle == (0, 1, 2, 3, 4)

    def test_non_hamiltonian(self):
        g = ColouredGraph.from_triples(4, [(0, 1, 0), (1, 2, 1), (2, 3, 2)])
        assert max_colour_hamilton_bruteforce(g) == (None, None)

    def test_budget_enforced(self):
        g = ColouredGraph.from_triples(13, [(0, 1, 0)])
        with pytest.raises(BudgetExceededError):
            max_colour_hamilton_bruteforce(g, OracleBudget(max_vertices_hamilton=12))

    def test_budget_validation(self):
        with pytest.raises(ValueError):
            OracleBudget(max_vertices_hamilton=0)

    def test_returned_cycle_attains_count(self):
        edges = [(u, v, (2 * u + v) % 4) for u in range(6) for v in range(u + 1, 6)]
        g = ColouredGraph.from_triples(6, edges)
        count, cycle = max_colour_hamilton_bruteforce(g)
        assert is_hamilton_cycle(g, cycle)
        keys = [tuple(sorted((cycle[i], cycle[(i + 1) % 6]))) for i in range(6)]
        assert distinct_colours_of(g, keys) == count


class TestMatchingOracle:
    def test_colour_limited_fixture(self):
        b = ColouredGraph.from_triples(
            6, [(0, 3, 0), (0, 4, 1), (1, 3, 1), (1, 5, 0), (2, 4, 0), (2, 5, 2)]
        )
        assert max_rainbow_matching_exact(b) == ((0, 3), (2, 5))

    def test_monochromatic_matching_is_size_one(self):
        b = ColouredGraph.from_triples(6, [(0, 3, 7), (1, 4, 7), (2, 5, 7)])
        assert max_rainbow_matching_exact(b) == ((0, 3),)

    def test_empty_graph(self):
        assert max_rainbow_matching_exact(ColouredGraph.from_triples(4, [])) == ()

    def test_budget_enforced(self):
        g = ColouredGraph.from_triples(17, [(0, 1, 0)])
        with pytest.raises(BudgetExceededError):
            max_rainbow_matching_exact(g, DEFAULT_BUDGET)


@st.composite
def small_coloured_graphs(draw, max_n=8):
    n = draw(st.integers(min_value=3, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    cols = draw(
        st.lists(st.integers(0, 8), min_size=len(chosen), max_size=len(chosen))
    )
    return ColouredGraph.from_triples(n, [(u, v, c) for (u, v), c in zip(chosen, cols)])


@given(small_coloured_graphs())
@settings(max_examples=100, deadline=None)
def test_matching_output_is_valid_rainbow_matching(g):
    matching = max_rainbow_matching_exact(g)
    verts = [v for e in matching for v in e]
    assert len(verts) == len(set(verts))
    cols = [g.colour(u, v) for u, v in matching]
    assert len(cols) == len(set(cols))
    for u, v in matching:
        assert g.has_edge(u, v)


@given(small_coloured_graphs())
@settings(max_examples=100, deadline=None)
def test_matching_dominates_greedy(g):
    exact = len(max_rainbow_matching_exact(g))
    used_v, used_c, greedy = set(), set(), 0
    for (u, v), c in zip(g.edges, g.colours):
        if u not in used_v and v not in used_v and c not in used_c:
            used_v.update((u, v))
            used_c.add(c)
            greedy += 1
    assert exact >= greedy


@given(small_coloured_graphs(max_n=7))
@settings(max_examples=60, deadline=None)
def test_hamilton_count_bounded_by_palette(g):
    count, cycle = max_colour_hamilton_bruteforce(g)
    if count is None:
        return
    assert is_hamilton_cycle(g, cycle)
    assert 1 <= count <= min(g.n, len(set(g.colours)))
