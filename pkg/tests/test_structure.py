import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from anforge import constructions as cons
from anforge.core import (AutomataNetwork, GlobalMap, LocalRule, global_map, identity, power)
from anforge.errors import ResourceLimitError, UnsupportedDomainError
from anforge.structure import (InteractionGraph, degree, hamiltonian_cycle, interaction_graph,
                               is_affine, is_balanced, is_centralized, minimize)
from test_core import random_network


def test_identity_graph():
    G = interaction_graph(identity(3, 2))
    assert G.arcs == {(0, 0), (1, 1), (2, 2)}
    assert G.max_in_degree == 1


def test_near_hamiltonian_local_maps():
    F = cons.near_hamiltonian(2, 3)
    G = interaction_graph(F)
    assert G.max_in_degree == 2
    assert G.in_neighbors(0) == [2]
    assert G.in_neighbors(1) == [0, 2]
    assert G.in_neighbors(2) == [1]


def test_base_network_third_node_reads_second_and_third():
    G = interaction_graph(cons.rank_deficient_base(3))
    assert G.max_in_degree == 2
    assert G.in_neighbors(2) == [1, 2]


def test_degree_examples():
    assert degree(cons.constant_network(3, 2)) == 0
    for q, n in [(2, 3), (3, 3), (4, 2), (5, 2)]:
        assert degree(cons.near_hamiltonian(q, n)) <= 2
    assert degree(cons.reflected_gray_successor(8)) >= 3


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_interaction_graph_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n, q = int(rng.integers(1, 5)), int(rng.integers(2, 4))
    F = random_network(rng, n, q)
    G = interaction_graph(F)
    images = global_map(F).images.tolist()
    assert set(G.arcs) == oracles.essential_arcs(images, n, q)
    # every stored witness differs only at i and changes f_j
    M = global_map(F)
    for (i, j), (x, y) in G.witnesses.items():
        dx = [(x // q ** t) % q for t in range(n)]
        dy = [(y // q ** t) % q for t in range(n)]
        assert [t for t in range(n) if dx[t] != dy[t]] == [i]
        assert (M(x) // q ** j) % q != (M(y) // q ** j) % q
    # the minimal rewrite has the same map and reads exactly the arcs
    small = minimize(F)
    assert global_map(small) == M
    assert small.declared_arcs() == set(G.arcs)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 3))
def test_power_degree_bounded_by_power_of_degree(seed, k):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    F = random_network(rng, n, 2, max_inputs=2)
    assert degree(power(F, k)) <= degree(F) ** k


def test_centralized_examples():
    assert is_centralized(interaction_graph(cons.circular_shift(3, 2))) == 0
    fsr = cons.fsr_from_feedback(LocalRule((0, 3), [0, 1, 1, 0]), 4, 2)
    assert is_centralized(interaction_graph(fsr)) == 3
    loops = InteractionGraph.from_arcs(2, {(0, 0), (1, 1)})
    assert is_centralized(loops) is None
    assert is_centralized(InteractionGraph.from_arcs(3, {(0, 1), (1, 2)})) == 0


def test_every_fsr_is_centralized_at_some_node():
    rng = np.random.default_rng(5)
    for _ in range(30):
        n = int(rng.integers(2, 7))
        G = interaction_graph(cons.random_bijective_fsr(n, rng))
        v = is_centralized(G)
        assert v is not None
        # the feedback node always works
        rest = [(i, j) for i, j in G.arcs if n - 1 not in (i, j)]
        assert all(i > j for i, j in rest)


def test_hamiltonian_cycle_examples():
    assert hamiltonian_cycle(interaction_graph(cons.circular_shift(4, 2))) == [0, 1, 2, 3]
    assert hamiltonian_cycle(InteractionGraph.from_arcs(2, {(0, 0), (1, 1)})) is None
    rng = np.random.default_rng(9)
    for _ in range(20):
        n = int(rng.integers(2, 8))
        G = interaction_graph(cons.random_bijective_fsr(n, rng))
        c = hamiltonian_cycle(G)
        assert sorted(c) == list(range(n)) and c[0] == 0
        assert all((c[k - 1], c[k]) in G.arcs for k in range(n))


def test_hamiltonian_cycle_is_lexicographically_smallest():
    arcs = {(i, j) for i in range(4) for j in range(4) if i != j}
    assert hamiltonian_cycle(InteractionGraph.from_arcs(4, arcs)) == [0, 1, 2, 3]
    with pytest.raises(ResourceLimitError):
        hamiltonian_cycle(InteractionGraph.from_arcs(8, {(i, j) for i in range(8)
                                                         for j in range(8) if i != j} - {(7, 0)}),
                          budget=10)


def test_affine_examples():
    form = is_affine(cons.near_hamiltonian(2, 3))
    assert form is not None and not form.offset.any()
    # column j is the image of e_j: multiplication by xi modulo xi^3 + xi + 1
    assert form.matrix.tolist() == [[0, 0, 1], [1, 0, 1], [0, 1, 0]]
    ident = is_affine(identity(3, 2))
    assert np.array_equal(ident.matrix, np.eye(3, dtype=int)) and not ident.offset.any()
    assert is_affine(cons.rank_deficient_base(3)) is None
    with pytest.raises(UnsupportedDomainError):
        is_affine(identity(2, 4))


def test_balanced_functions():
    assert is_balanced(LocalRule((0,), [0, 1]))
    assert not is_balanced(LocalRule((0, 1), [0, 0, 0, 1]))
    tables = [t for t in itertools.product((0, 1), repeat=4) if sum(t) == 2]
    assert len(tables) == 6
    for t in tables:
        rule = LocalRule((0, 1), t)
        assert is_balanced(rule)
        assert is_affine(AutomataNetwork(2, 2, (rule, LocalRule((1,), [0, 1])))) is not None
    with pytest.raises(UnsupportedDomainError):
        is_balanced(LocalRule((0,), [0, 1, 2]), q=3)


def test_degree_two_permutations_on_three_nodes_are_affine():
    x = np.arange(8)
    cols = set()
    for k in range(3):
        for inputs in itertools.combinations(range(3), k):
            for table in itertools.product((0, 1), repeat=2 ** k):
                pattern = sum(((x >> i) & 1) << t for t, i in enumerate(inputs)) if inputs else 0 * x
                cols.add(tuple(np.asarray(table)[pattern].tolist()))
    cols = [np.array(c) for c in cols if sum(c) == 4]
    count = 0
    for a, b, c in itertools.product(cols, repeat=3):
        images = a + 2 * b + 4 * c
        if len(set(images.tolist())) == 8:
            count += 1
            assert is_affine(GlobalMap(3, 2, images)) is not None

    # oracle: invertible 3x3 matrices over GF(2) with row weight <= 2, times 8 offsets
    def invertible(rows):
        spans = {tuple(sum(c * r[t] for c, r in zip(coef, rows)) % 2 for t in range(3))
                 for coef in itertools.product((0, 1), repeat=3)}
        return len(spans) == 8

    light_rows = [r for r in itertools.product((0, 1), repeat=3) if sum(r) <= 2]
    expected = 8 * sum(1 for rows in itertools.product(light_rows, repeat=3) if invertible(rows))
    assert count == expected


def test_graph_exports():
    G = interaction_graph(cons.near_hamiltonian(2, 3))
    dot = G.to_dot()
    assert dot.startswith("digraph {") and "  0 -> 1;" in dot and "  2 -> 0;" in dot
    assert InteractionGraph.from_arcs(3, G.to_dict()["arcs"]).arcs == G.arcs
    assert G.out_degree == [1, 1, 2]
    assert G.is_almost_degree_one()
