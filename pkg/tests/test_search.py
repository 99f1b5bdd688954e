import itertools

import numpy as np
import pytest

import oracles
from anforge import constructions as cons
from anforge import search
from anforge.core import GlobalMap, global_map, identity
from anforge.dynamics import isomorphic
from anforge.errors import DomainError, ResourceLimitError
from anforge.structure import degree


def test_bdig_examples():
    assert search.bdig(identity(3, 2), 1)
    assert search.bdig(cons.near_hamiltonian(2, 4), 2)
    assert not search.bdig(cons.near_hamiltonian(2, 4), 1)
    assert not search.bdig(cons.rank_q_n_minus_2(3, 3), 1)
    assert search.bdig(cons.constant_network(2, 2), 0)


def test_network_counts_match_enumeration():
    assert search.network_count(1, 2, 1) == 6
    nets = list(search.enumerate_networks(1, 2, 1))
    assert len(nets) == 6
    assert len({tuple(global_map(F).images.tolist()) for F in nets}) == 4
    assert len(list(search.enumerate_networks(2, 2, 0))) == search.network_count(2, 2, 0) == 4
    assert sum(1 for _ in search.enumerate_networks(2, 2, 2)) == search.network_count(2, 2, 2) == 676


def test_enumeration_respects_degree():
    for F in search.enumerate_networks(2, 3, 1, limit=10_000):
        assert all(len(rule.inputs) <= 1 for rule in F.rules)
    with pytest.raises(ResourceLimitError):
        next(search.enumerate_networks(3, 2, 2, limit=1000))


def test_neighborhood_order():
    assert search.neighborhoods(3, 2) == [(), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]


def test_bdd_found_witness_is_sound():
    target = GlobalMap(2, 2, [0, 2, 3, 1])  # fixed point plus a 3-cycle
    r = search.bdd(target, 2)
    assert r.status == search.FOUND and r.exhausted
    assert degree(r.witness) <= 2 and isomorphic(r.witness, target)
    assert search.bdd(identity(2, 2), 1).status == search.FOUND


def test_bdd_agrees_with_brute_force_on_every_two_node_map():
    # oracle: collect every realizable map with degree <= 1 and compare cycle data up to relabelling
    realizable = {tuple(global_map(F).images.tolist()) for F in search.enumerate_networks(2, 2, 1)}

    def shape(imgs):
        # brute-force isomorphism over the 24 relabellings
        return min(tuple(p[imgs[p.index(x)]] for x in range(4))
                   for p in itertools.permutations(range(4)))

    shapes = {shape(list(m)) for m in realizable}
    for imgs in oracles.all_maps(4):
        r = search.bdd(GlobalMap(2, 2, list(imgs)), 1)
        assert r.exhausted
        assert (r.status == search.FOUND) == (shape(list(imgs)) in shapes), imgs


def test_bdd_truncation_is_reported():
    r = search.bdd(GlobalMap(2, 2, [1, 1, 2, 3]), 1, search.SearchBudget(max_candidates=10))
    assert r.status == search.TRUNCATED and not r.exhausted and r.candidates == 10
    # every bijection passes the cheap filter for a 3-cycle target, so evaluations run out
    three_cycle = GlobalMap(2, 2, [0, 2, 3, 1])
    r = search.bdd(three_cycle, 1, search.SearchBudget(max_evaluations=1))
    assert r.status == search.TRUNCATED and r.stats["evaluations"] == 1
    assert search.bdd(three_cycle, 1).status == search.ABSENT
    r = search.bdd(GlobalMap(2, 2, [1, 1, 2, 3]), 1)
    assert r.status == search.ABSENT and r.candidates == r.total == 100


def test_bdd_parallel_matches_serial():
    for target in (GlobalMap(2, 2, [0, 2, 3, 1]), GlobalMap(2, 2, [1, 1, 2, 3]),
                   GlobalMap(2, 2, [1, 0, 3, 2])):
        a = search.bdd(target, 2, jobs=1)
        b = search.bdd(target, 2, jobs=2)
        assert a.status == b.status
        if a.witness is not None:
            assert a.witness.to_dict() == b.witness.to_dict()


def test_budget_validation():
    with pytest.raises(DomainError):
        search.SearchBudget(max_candidates=0)
    with pytest.raises(DomainError):
        search.SearchBudget(max_evaluations=-1)


def test_partition_count():
    assert [search.partition_count(k) for k in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


def test_realizable_bijection_classes():
    r = search.realizable_bijection_classes(2, 2, 1)
    assert r["bijective_classes"] == 5
    assert 1 <= r["realizable_classes"] <= 5
    # brute force: isomorphism classes of bijections are cycle-type partitions
    types = set()
    for F in search.enumerate_networks(2, 2, 1):
        imgs = global_map(F).images.tolist()
        if len(set(imgs)) == 4:
            types.add(tuple(oracles.cycle_lengths(imgs)))
    assert r["realizable_classes"] == len(types)


def test_result_serializes():
    r = search.bdd(identity(2, 2), 1)
    d = r.to_dict()
    assert d["status"] == "found" and d["exhausted"] and "witness" in d
    assert np.array_equal(global_map(r.witness).images, np.arange(4))
