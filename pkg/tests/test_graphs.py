import pytest

from gramcode.grams import build_weight_set, explicit_gram_set, full_gram_set, profile, word
from gramcode.graphs import (
    NotHamiltonianError,
    SearchBudgetExceeded,
    auxiliary_dag,
    build_graph,
    cycle_length_lcm,
    degrees,
    eulerian_circuit,
    eulerian_walk,
    growth_exponent,
    hamiltonian_cycle,
    incidence,
    integer_rank,
    is_eulerian,
    simple_cycle_lengths,
    strongly_connected_components,
)

TWO_COMPONENT_SET = explicit_gram_set(
    4, 2, [(0, 0), (0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (3, 3)]
)


def test_build_graph_full_cube():
    g = build_graph(full_gram_set(2, 3))
    assert g.n_nodes == 4 and g.n_arcs == 8
    assert [g.node_label(v) for v in range(4)] == ["00", "01", "10", "11"]


def test_build_graph_weight_window():
    g = build_graph(build_weight_set(2, 4, 1, 2, 3))
    assert g.n_nodes == 7 and g.n_arcs == 10
    assert [g.node_label(v) for v in range(7)] == [
        "001", "010", "011", "100", "101", "110", "111"
    ]


def test_build_graph_single_loop():
    g = build_graph(explicit_gram_set(2, 2, [(0, 0)]))
    assert g.n_nodes == 1 and g.n_arcs == 1 and g.is_loop(0)


def test_incidence_structure():
    g = build_graph(full_gram_set(2, 2))
    m = incidence(g)
    # arc 00 is a loop: zero column; arc 01 runs node 0 -> node 1
    assert [row[0] for row in m] == [0, 0]
    assert [row[1] for row in m] == [-1, 1]
    for a in range(g.n_arcs):
        assert sum(row[a] for row in m) == 0


def test_incidence_rank():
    g = build_graph(full_gram_set(2, 3))
    assert integer_rank(incidence(g)) == g.n_nodes - 1


def test_integer_rank_plain():
    assert integer_rank([[2, 4], [1, 2]]) == 1
    assert integer_rank([[1, 0], [0, 1]]) == 2
    assert integer_rank([[0, 0]]) == 0


def test_scc_two_components():
    g = build_graph(TWO_COMPONENT_SET)
    comps = strongly_connected_components(g)
    names = [[g.node_label(v) for v in comp] for comp in comps]
    assert names == [["0", "1"], ["2", "3"]]


def test_scc_connected_cases():
    assert len(strongly_connected_components(build_graph(full_gram_set(2, 3)))) == 1
    loop = build_graph(explicit_gram_set(2, 2, [(0, 0)]))
    assert strongly_connected_components(loop) == [[0]]


def test_eulerian_checks():
    assert is_eulerian(build_graph(build_weight_set(2, 4, 1, 2, 3)))
    assert not is_eulerian(build_graph(TWO_COMPONENT_SET))
    for q in (2, 3):
        for ell in (2, 3, 4):
            assert is_eulerian(build_graph(full_gram_set(q, ell)))


def test_balanced_degrees_on_weight_windows():
    # Weight-window graphs balance in and out degree at every node, for
    # every valid window on the whole small grid.
    for q in (2, 3):
        for ell in (3, 4, 5):
            for q_star in range(1, q):
                for w1 in range(1, ell):
                    for w2 in range(w1 + 1, ell + 1):
                        g = build_graph(build_weight_set(q, ell, q_star, w1, w2))
                        indeg, outdeg = degrees(g)
                        assert indeg == outdeg


def test_eulerian_circuit_covers_multiplicities():
    g = build_graph(full_gram_set(2, 3))
    mult = (14, 1, 0, 1, 1, 0, 1, 0)
    walk = eulerian_circuit(g, mult)
    assert walk[0] == walk[-1]
    assert len(walk) == sum(mult) + 1
    traversed = [0] * g.n_arcs
    for u, v in zip(walk, walk[1:]):
        traversed[g.arc_between(u, v)] += 1
    assert tuple(traversed) == mult


def test_eulerian_circuit_single_loop():
    g = build_graph(explicit_gram_set(2, 2, [(0, 0)]))
    assert eulerian_circuit(g, [5]) == [0] * 6


def test_eulerian_walk_open():
    g = build_graph(full_gram_set(2, 2))
    # one copy of arc 01: open walk from node 0 to node 1
    walk = eulerian_walk(g, [0, 1, 0, 0])
    assert walk == [0, 1]


def test_eulerian_walk_rejects_bad_multisets():
    g = build_graph(full_gram_set(2, 2))
    with pytest.raises(ValueError):
        eulerian_walk(g, [0, 2, 0, 0])  # imbalance 2 at one pair
    with pytest.raises(ValueError):
        eulerian_walk(g, [1, 0, 0, 1])  # two loops, disconnected support
    with pytest.raises(ValueError):
        eulerian_walk(g, [0, 0, 0, 0])


def test_hamiltonian_full_cube():
    g = build_graph(full_gram_set(2, 3))
    cycle = hamiltonian_cycle(g)
    assert [g.node_label(v) for v in cycle] == ["00", "01", "11", "10"]
    g2 = build_graph(full_gram_set(2, 2))
    assert hamiltonian_cycle(g2) == [0, 1]
    # consecutive cycle nodes are joined by arcs
    for graph in (g, build_graph(full_gram_set(3, 2)), build_graph(full_gram_set(2, 4))):
        cyc = hamiltonian_cycle(graph)
        assert sorted(cyc) == list(range(graph.n_nodes))
        for u, v in zip(cyc, cyc[1:] + cyc[:1]):
            assert graph.arc_between(u, v) is not None


def test_hamiltonian_absent():
    with pytest.raises(NotHamiltonianError):
        hamiltonian_cycle(build_graph(TWO_COMPONENT_SET))


def test_hamiltonian_budget():
    g = build_graph(full_gram_set(3, 3))
    # general-position search on a reduced set with a tiny budget
    reduced = explicit_gram_set(3, 3, [gr for gr in full_gram_set(3, 3).grams][:20])
    with pytest.raises((SearchBudgetExceeded, NotHamiltonianError, ValueError)):
        hamiltonian_cycle(build_graph(reduced), budget=3)


def test_cycle_incidence_annihilation():
    # B(D) applied to the indicator of any cycle's arcs gives zero.
    for s in (full_gram_set(2, 3), build_weight_set(2, 4, 1, 2, 3)):
        g = build_graph(s)
        cycle = hamiltonian_cycle(g) if s.is_full() else None
        walks = []
        if cycle:
            walks.append(cycle + cycle[:1])
        walks.append(eulerian_walk(g, [1] * g.n_arcs) if is_eulerian(g) else None)
        m = incidence(g)
        for walk in walks:
            if walk is None:
                continue
            chi = [0] * g.n_arcs
            for u, v in zip(walk, walk[1:]):
                chi[g.arc_between(u, v)] += 1
            for row in m:
                assert sum(r * c for r, c in zip(row, chi)) == 0


def test_cycle_length_lcm_values():
    lam, lengths = cycle_length_lcm(build_graph(full_gram_set(2, 3)))
    assert (lam, lengths) == (12, [1, 2, 3, 4])
    lam, _ = cycle_length_lcm(build_graph(build_weight_set(2, 4, 1, 2, 3)))
    assert lam == 60
    lam, _ = cycle_length_lcm(build_graph(build_weight_set(2, 5, 1, 2, 3)))
    assert lam == 120


def test_cycle_lengths_by_brute_force():
    # all simple cycles of the 2-cube graph, checked against a direct walk scan
    g = build_graph(full_gram_set(2, 2))
    assert simple_cycle_lengths(g) == {1, 2}


def test_growth_exponent_two_components():
    g = build_graph(TWO_COMPONENT_SET)
    delta, delta_bar = growth_exponent(g)
    assert (delta, delta_bar) == (3, 1)
    dag = auxiliary_dag(g)
    assert dag.deltas == (1, 1)
    assert dag.cross_arcs == ((0, 1),)


def test_growth_exponent_strongly_connected():
    for s in (full_gram_set(2, 3), build_weight_set(2, 4, 1, 2, 3)):
        g = build_graph(s)
        delta, delta_bar = growth_exponent(g)
        assert delta == g.n_arcs - g.n_nodes
        assert delta_bar == delta
