import itertools
import random

import pytest

from phylogf import gf, oracle
from phylogf.oracle import NetworkGraph


def compact(edges):
    labels = sorted({v for e in edges for v in e})
    idx = {v: i + 1 for i, v in enumerate(labels)}
    return NetworkGraph.from_edges(len(labels), [(idx[u], idx[v]) for u, v in edges])


FIG_TC = [
    (1, 2), (1, 5), (2, 3), (3, 5), (5, 13), (2, 4),
    (3, 6), (6, 10), (4, 7), (6, 7), (7, 9), (4, 8),
]
FIG_NOT_TC = [
    (1, 11), (1, 12), (12, 4), (12, 3), (11, 2), (11, 3), (4, 16), (16, 10),
    (16, 17), (4, 6), (3, 6), (6, 9), (2, 14), (14, 7), (14, 15), (2, 5), (5, 8), (5, 13),
]


def test_figure_tree_child_not_normal():
    g = compact(FIG_TC)
    assert g.is_valid()
    assert oracle.is_tree_child(g)
    assert not oracle.is_normal(g)


def test_figure_not_tree_child():
    g = compact(FIG_NOT_TC)
    assert g.is_valid()
    assert not oracle.is_tree_child(g)


def test_binary_tree_is_normal():
    g = NetworkGraph.from_edges(5, [(1, 2), (1, 3), (2, 4), (2, 5)])
    assert oracle.is_tree_child(g) and oracle.is_normal(g)


def test_five_vertex_shortcut():
    # root 1, tree vertex 2, reticulation 3, leaves 4 and 5
    g = NetworkGraph.from_edges(5, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 5)])
    assert g.is_valid()
    assert oracle.is_tree_child(g)
    assert not oracle.is_normal(g)
    assert oracle.enumerate_count(5, 1, "normal") == 0


def test_small_counts():
    assert oracle.enumerate_count(3, 0, "treechild") == 3
    assert oracle.enumerate_count(1, 0, "normal") == 1
    for k in range(4):
        for klass in oracle.ORACLE_CLASSES:
            assert oracle.enumerate_count(4, k, klass) == 0


def test_matches_series_n7():
    for k in range(4):
        if oracle.role_counts(7, k) is None:
            continue
        found = oracle.enumerate_counts(7, k)
        for klass in gf.CLASSES:
            assert found[klass] == gf.count(klass, k, 7)


def test_symmetric_shortcut_agrees_with_full_enumeration():
    for k in (0, 1, 2):
        assert oracle.enumerate_counts(7, k, symmetric=True) == oracle.enumerate_counts(7, k, symmetric=False)


def test_inclusion_chain():
    for n in (3, 5, 7):
        for k in range(3):
            c = oracle.enumerate_counts(n, k)
            assert c["normal"] <= c["treechild"] <= c["all"]


def test_k1_all_equals_treechild():
    for n in (3, 5, 7):
        assert oracle.enumerate_count(n, 1, "all") == oracle.enumerate_count(n, 1, "treechild")


def test_double_edges_only_on_request():
    assert oracle.enumerate_count(5, 1, "all", allow_double=True) == 300
    assert oracle.enumerate_count(5, 1, "all") == 120


def test_relabel_closure():
    rng = random.Random(7)
    nets = list(oracle.enumerate_networks(7, 1, "normal"))
    seen = {g.children for g in nets}
    for g in rng.sample(nets, 20):
        perm = list(range(1, 8))
        rng.shuffle(perm)
        h = g.relabel(perm)
        assert h.children in seen
        assert oracle.classify(h) == oracle.classify(g)


def test_enumerated_networks_satisfy_invariants():
    for g in oracle.enumerate_networks(7, 2, "all"):
        assert g.is_valid()
        roles = g.roles()
        assert roles.count("leaf") + roles.count("reticulation") == 4


def test_cap():
    with pytest.raises(oracle.OracleLimitExceeded):
        oracle.enumerate_count(11, 1, "normal")
