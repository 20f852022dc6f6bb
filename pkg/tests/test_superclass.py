import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from livingsom.errors import DataValidationError
from livingsom.som import MapTopology, SomConfig, SomModel
from livingsom.superclass import (agglomerate, audit_contiguity, cluster_units, cut,
                                  is_connected, regroup)

from oracles import brute_ward, partition_of


def model_with(cv, topo):
    return SomModel(topo, np.asarray(cv, float), SomConfig(), True)


def partition_contiguous(topo, part):
    return all(is_connected(topo, c) for c in part)


def monotone_instance(rng, n=10, d=2):
    return np.sort(rng.normal(size=(n, d)), axis=0)


def replay_costs(x, topo, history, weights=None):
    """Check each recorded merge is the cheapest contiguous one at its step."""
    w = np.ones(len(x)) if weights is None else np.asarray(weights, float)
    members = {i: [i] for i in range(len(x))}
    adj = topo.distance_matrix() == 1
    for m in history:
        cand = []
        ids = sorted(members)
        for ia, a in enumerate(ids):
            for b in ids[ia + 1:]:
                if adj[np.ix_(members[a], members[b])].any():
                    wa, wb = w[members[a]].sum(), w[members[b]].sum()
                    ca = (w[members[a]] @ x[members[a]]) / wa
                    cb = (w[members[b]] @ x[members[b]]) / wb
                    cand.append((wa * wb / (wa + wb) * np.sum((ca - cb) ** 2), a, b))
        best = min(c[0] for c in cand)
        assert m.cost == pytest.approx(best, rel=1e-9, abs=1e-12)
        ties = [(a, b) for c, a, b in cand if c <= best * (1 + 1e-9) + 1e-12]
        assert (m.a, m.b) == min(ties)
        members[m.new] = members.pop(m.a) + members.pop(m.b)


def test_identity_and_single(rng):
    topo = MapTopology.grid(4, 4)
    m = model_with(rng.normal(size=(16, 3)), topo)
    assert cluster_units(m, 16).unit_to_super.tolist() == list(range(16))
    assert set(cluster_units(m, 1).unit_to_super.tolist()) == {0}
    with pytest.raises(DataValidationError):
        cluster_units(m, 0)
    with pytest.raises(DataValidationError):
        cluster_units(m, 17)


def test_matches_unconstrained_ward_when_constraint_does_not_bind():
    rng = np.random.default_rng(3)
    topo = MapTopology.string(10)
    compared = 0
    for _ in range(60):
        x = monotone_instance(rng)
        parts = brute_ward(x)
        if not all(partition_contiguous(topo, p) for p in parts):
            continue
        compared += 1
        hist = agglomerate(x, topo)
        for k in range(1, 11):
            assert partition_of(cut(hist, 10, k)) == parts[10 - k]
    assert compared >= 30


def test_unconstrained_agglomerate_matches_oracle(rng):
    topo = MapTopology.string(8)
    for _ in range(20):
        x = rng.normal(size=(8, 2))
        hist = agglomerate(x, topo, constrained=False)
        parts = brute_ward(x)
        for k in range(1, 9):
            assert partition_of(cut(hist, 8, k)) == parts[8 - k]
        costs = [m.cost for m in hist]
        assert all(b >= a - 1e-12 for a, b in zip(costs, costs[1:]))


def test_merges_are_minimal_contiguous(rng):
    topo = MapTopology.grid(4, 5)
    x = rng.normal(size=(20, 3))
    replay_costs(x, topo, agglomerate(x, topo))
    w = rng.integers(1, 50, 20)
    replay_costs(x, topo, agglomerate(x, topo, weights=w), weights=w)


def test_ties_break_lexicographically():
    topo = MapTopology.string(5)
    hist = agglomerate(np.zeros((5, 2)), topo)
    assert (hist[0].a, hist[0].b) == (0, 1)
    assert (hist[1].a, hist[1].b) == (2, 3)
    a = agglomerate(np.zeros((5, 2)), topo)
    assert a == hist


def test_zero_weights_do_not_break_merging(rng):
    topo = MapTopology.grid(3, 3)
    w = np.array([0, 5, 0, 0, 3, 0, 2, 0, 0])
    m = cluster_units(model_with(rng.normal(size=(9, 2)), topo), 2, weights=w)
    assert audit_contiguity(m)["ok"]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.integers(1, 6),
       st.sampled_from(["ward", "single", "complete", "average"]))
def test_contiguity_after_every_merge(seed, r, c, linkage):
    rng = np.random.default_rng(seed)
    topo = MapTopology.grid(r, c)
    m = model_with(rng.normal(size=(r * c, 2)), topo)
    k = int(rng.integers(1, r * c + 1))
    sc = cluster_units(m, k, linkage=linkage)
    audit = audit_contiguity(sc)
    assert audit["ok"] and audit["merges_checked"] == r * c - 1
    assert len(set(sc.unit_to_super.tolist())) == k
    # canonical ids: first appearance order
    first = [sc.unit_to_super.tolist().index(s) for s in range(k)]
    assert first == sorted(first)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 30))
def test_nested_cuts(seed, n):
    rng = np.random.default_rng(seed)
    topo = MapTopology.string(n)
    hist = agglomerate(rng.normal(size=(n, 2)), topo)
    for k in range(2, n + 1):
        fine, coarse = cut(hist, n, k), cut(hist, n, k - 1)
        for s in set(fine.tolist()):
            assert len(set(coarse[fine == s].tolist())) == 1


def five_string():
    topo = MapTopology.string(5)
    return cluster_units(model_with(np.arange(5.0)[:, None] * 10, topo), 5)


def test_regroup_identity_and_abc():
    sc = five_string()
    same = regroup(sc, [[0], [1], [2], [3], [4]])
    assert np.array_equal(same.unit_to_super, sc.unit_to_super)
    abc = regroup(sc, [[0], [1, 2], [3, 4]], labels=["A", "B", "C"])
    assert abc.unit_to_super.tolist() == [0, 1, 1, 2, 2]
    assert abc.group_labels == ("A", "B", "C") and abc.k == 3


def test_regroup_errors():
    sc = five_string()
    with pytest.raises(DataValidationError, match="contiguous"):
        regroup(sc, [[0, 4], [1, 2, 3]])
    with pytest.raises(DataValidationError, match="partition"):
        regroup(sc, [[0, 1], [1, 2, 3, 4]])
    with pytest.raises(DataValidationError):
        regroup(sc, [[0, 1, 2, 3]])
