from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
import pytest

from conftest import make_net, nx_paths, random_net
from survivor.errors import InputError, ResourceGuardError
from survivor.failure import PathPair, single_connection_failure
from survivor.graph import bridges_separating, connectivity, is_path
from survivor.paths import (disjoint_pair, k_disjoint_paths, path_weight, shortest_path,
                            simple_paths, tunable_pair, two_path_problem)


def trap():
    # s=0, a=1, b=2, t=3 ; s-a:1, a-b:1, b-t:1, s-b:4, a-t:4
    edges = [(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)]
    return make_net(4, edges), [1.0, 1.0, 1.0, 4.0, 4.0]


def k4():
    return make_net(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def cycle4():
    return make_net(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


# --- shortest path ----------------------------------------------------------

def test_shortest_path_examples(diamond, path3):
    assert shortest_path(diamond, None, 0, 3) == (0, 1)  # lexicographic tie-break
    assert shortest_path(path3, path3.pf, 0, 2) == (0, 1)
    net, w = trap()
    p = shortest_path(net, w, 0, 3)
    assert p == (0, 1, 2) and path_weight(w, p) == 3


def test_shortest_path_disconnected():
    assert shortest_path(make_net(3, [(0, 1)]), None, 0, 2) is None


def test_shortest_path_rejects_negative(diamond):
    with pytest.raises(InputError):
        shortest_path(diamond, [-1.0, 1.0, 1.0, 1.0], 0, 3)


def test_shortest_path_matches_networkx():
    rng = np.random.default_rng(31)
    for _ in range(200):
        net = random_net(rng, 8, 0.35, multi=0.1)
        g = nx.MultiGraph()
        g.add_nodes_from(range(net.n))
        for e, ln in enumerate(net.links):
            g.add_edge(ln.u, ln.v, key=e, weight=ln.pf)
        p = shortest_path(net, net.pf, 0, 7)
        if not nx.has_path(g, 0, 7):
            assert p is None
            continue
        assert is_path(net, p, 0, 7)
        want = nx.shortest_path_length(g, 0, 7, weight="weight")
        assert path_weight(net.pf, p) == pytest.approx(want, abs=1e-12)


# --- disjoint pair -------------------------------------------------------------

def brute_pair(net, weights, s, t):
    paths = nx_paths(net, s, t)
    best = None
    for a, b in itertools.combinations(paths, 2):
        if set(a) & set(b):
            continue
        w = path_weight(weights, a) + path_weight(weights, b)
        best = w if best is None else min(best, w)
    return best


def test_disjoint_pair_examples(diamond, path3):
    assert disjoint_pair(diamond, None, 0, 3) == ((0, 1), (2, 3))
    net, w = trap()
    a, b = disjoint_pair(net, w, 0, 3)
    assert path_weight(w, a) + path_weight(w, b) == 10
    assert {a, b} == {(0, 4), (3, 2)}
    assert disjoint_pair(path3, None, 0, 2) is None


def test_disjoint_pair_matches_brute():
    rng = np.random.default_rng(32)
    done = 0
    while done < 250:
        net = random_net(rng, int(rng.integers(3, 9)), float(rng.uniform(0.25, 0.6)), multi=0.1)
        if net.m > 16:
            continue
        done += 1
        s, t = 0, net.n - 1
        got = disjoint_pair(net, net.pf, s, t)
        want = brute_pair(net, net.pf, s, t)
        if want is None:
            assert got is None
            continue
        a, b = got
        assert is_path(net, a, s, t) and is_path(net, b, s, t)
        assert not set(a) & set(b)
        assert path_weight(net.pf, a) + path_weight(net.pf, b) == pytest.approx(want, abs=1e-12)


# --- tunable pair ------------------------------------------------------------

def test_tunable_pair_examples(diamond, two_diamonds):
    pair, pf = tunable_pair(diamond, 0, 3)
    assert pf == 0.0 and not set(pair.primary) & set(pair.backup)
    line = make_net(3, [(0, 1), (1, 2)], [0.5, 0.5])
    pair, pf = tunable_pair(line, 0, 2)
    assert pf == 1.0 and pair.primary == pair.backup == (0, 1)
    pf_links = [0.1125] * 9
    pf_links[4] = 0.1
    net = make_net(8, [(ln.u, ln.v) for ln in two_diamonds.links], pf_links)
    pair, pf = tunable_pair(net, 0, 7)
    assert pf == pytest.approx(0.1)
    assert set(pair.primary) & set(pair.backup) == {4}


def test_tunable_pair_disconnected():
    assert tunable_pair(make_net(3, [(0, 1)]), 0, 2) is None


def test_tunable_pair_is_single_connection_optimum():
    rng = np.random.default_rng(33)
    done = 0
    while done < 200:
        net = random_net(rng, int(rng.integers(3, 8)), 0.35, multi=0.1)
        s, t = 0, net.n - 1
        if net.m > 14 or not connectivity(net, None, s, t):
            continue
        done += 1
        pair, pf = tunable_pair(net, s, t)
        assert is_path(net, pair.primary, s, t) and is_path(net, pair.backup, s, t)
        assert pf == pytest.approx(sum(net.pf[e] for e in bridges_separating(net, s, t)), abs=0)
        assert single_connection_failure(net, pair) == pytest.approx(pf, abs=1e-12)
        paths = nx_paths(net, s, t)
        best = min(single_connection_failure(net, PathPair(a, b)) for a in paths for b in paths)
        assert pf == pytest.approx(best, abs=1e-12)


# --- k disjoint paths -------------------------------------------------------

def test_k_disjoint_examples(diamond):
    assert k_disjoint_paths(diamond, [(0, 3), (0, 3)]) == [(0, 1), (2, 3)]
    got = k_disjoint_paths(k4(), [(0, 2), (1, 3)])
    assert got == [(1,), (4,)]
    assert k_disjoint_paths(cycle4(), [(0, 2), (1, 3)]) is None
    assert two_path_problem(cycle4(), 0, 2, 1, 3) is None
    assert two_path_problem(k4(), 0, 2, 1, 3) == ((1,), (4,))


def test_k_disjoint_guards(diamond):
    with pytest.raises(ResourceGuardError):
        k_disjoint_paths(diamond, [(0, 3)] * 8)
    big = make_net(30, [(i, (i + 1) % 30) for i in range(30)] * 3)
    with pytest.raises(ResourceGuardError):
        k_disjoint_paths(big, [(0, 5), (1, 6)])


def brute_system(net, pairs, node_disjoint):
    options = [nx_paths(net, s, t) for s, t in pairs]
    for combo in itertools.product(*options):
        used = set()
        ok = True
        for p in combo:
            if used & set(p):
                ok = False
                break
            used |= set(p)
        if ok and node_disjoint:
            from survivor.graph import walk_nodes
            inner = [set(walk_nodes(net, p, s)[1:-1]) for p, (s, _) in zip(combo, pairs)]
            ends = [set(walk_nodes(net, p, s)) for p, (s, _) in zip(combo, pairs)]
            for i, j in itertools.permutations(range(len(combo)), 2):
                if inner[i] & ends[j]:
                    ok = False
        if ok:
            return True
    return False


@pytest.mark.parametrize("node_disjoint", [False, True])
def test_k_disjoint_matches_brute(node_disjoint):
    rng = np.random.default_rng(34 + node_disjoint)
    done = 0
    while done < 150:
        n = int(rng.integers(4, 9))
        net = random_net(rng, n, float(rng.uniform(0.3, 0.6)))
        if net.m > 14:
            continue
        done += 1
        k = int(rng.integers(1, 4))
        pairs = [tuple(int(x) for x in rng.choice(n, 2, replace=False)) for _ in range(k)]
        got = k_disjoint_paths(net, pairs, node_disjoint=node_disjoint)
        want = brute_system(net, pairs, node_disjoint)
        assert (got is not None) == want
        if got is not None:
            used = set()
            for p, (s, t) in zip(got, pairs):
                assert is_path(net, p, s, t)
                assert not used & set(p)
                used |= set(p)


def test_simple_paths_match_networkx():
    rng = np.random.default_rng(36)
    for _ in range(80):
        net = random_net(rng, 7, 0.45, multi=0.1)
        assert sorted(simple_paths(net, 0, 6)) == sorted(nx_paths(net, 0, 6))


def test_simple_paths_limit(diamond):
    with pytest.raises(ResourceGuardError):
        simple_paths(diamond, 0, 3, limit=1)
