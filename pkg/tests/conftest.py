from __future__ import annotations

import os
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from survivor.graph import Network  # noqa: E402


def make_net(n, edges, pf=None, normalized=None):
    """Network on dense nodes; pf defaults to uniform and normalised."""
    if pf is None:
        pf = [1.0 / len(edges)] * len(edges) if edges else []
    norm = bool(edges) and abs(sum(pf) - 1.0) < 1e-9 if normalized is None else normalized
    return Network.from_edges(n, edges, pf, normalized=norm)


def random_net(rng: np.random.Generator, n: int, p: float, multi: float = 0.0,
               cap: float = 1.0) -> Network:
    """G(n, p) with optional parallel links and normalised exponential pf."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    edges += [e for e in edges if rng.random() < multi]
    if not edges:
        return Network(n, ())
    raw = rng.exponential(1.0, len(edges))
    pf = raw / raw.sum()
    caps = [bool(rng.random() < cap) for _ in edges]
    return Network.from_edges(n, edges, pf, caps, normalized=True)


@st.composite
def networks(draw, min_n=2, max_n=7, max_m=12):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=max_m))
    weights = draw(st.lists(st.floats(0.01, 1.0), min_size=len(edges), max_size=len(edges)))
    if not edges:
        return Network(n, ())
    total = sum(weights)
    return Network.from_edges(n, edges, [w / total for w in weights])


@pytest.fixture
def diamond():
    # labels 1..4 -> ids 0..3; links (1,2),(2,4),(1,3),(3,4)
    return make_net(4, [(0, 1), (1, 3), (0, 2), (2, 3)])


@pytest.fixture
def path3():
    return make_net(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    return make_net(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def two_diamonds():
    # diamond 0..3 (s=0), bridge 3-4 (link 4), diamond 4..7 (t=7)
    edges = [(0, 1), (1, 3), (0, 2), (2, 3), (3, 4), (4, 5), (5, 7), (4, 6), (6, 7)]
    return make_net(8, edges)


def nx_paths(net, s, t, links=None):
    """Simple s-t paths as link-index tuples, enumerated by networkx."""
    import networkx as nx

    g = nx.MultiGraph()
    g.add_nodes_from(range(net.n))
    for e, ln in enumerate(net.links):
        if links is None or e in links:
            g.add_edge(ln.u, ln.v, key=e)
    if s == t:
        return [()]
    return [tuple(k for _, _, k in p) for p in nx.all_simple_edge_paths(g, s, t)]


def scenarios(net, s1, t1, s2, t2, reliable_first=True):
    """Every (p1, b1, p2, b2) of simple paths with disjoint primaries."""
    paths1 = nx_paths(net, s1, t1)
    paths2 = nx_paths(net, s2, t2)
    for p1 in paths1:
        f1 = set(p1)
        for b1 in paths1:
            if reliable_first and f1 & set(b1):
                continue
            for p2 in paths2:
                if f1 & set(p2):
                    continue
                for b2 in paths2:
                    yield p1, b1, p2, b2


def random_instance(rng: np.random.Generator, n_lo=4, n_hi=9, p_lo=0.25, p_hi=0.6,
                    fix="p1b1", max_m=None, tries=1000):
    """Connected normalised network with four distinct terminals.

    ``fix`` is "p1b1" (random disjoint p1, b1), "p1" (random p1 admitting a
    disjoint b1) or "" (nothing fixed).  Returns a TwoCPInstance.
    """
    from survivor.graph import is_connected
    from survivor.twocp import TwoCPInstance

    for _ in range(tries):
        n = int(rng.integers(n_lo, n_hi + 1))
        net = random_net(rng, n, float(rng.uniform(p_lo, p_hi)), multi=0.05)
        if net.m == 0 or not is_connected(net) or (max_m and net.m > max_m):
            continue
        s1, t1, s2, t2 = (int(x) for x in rng.choice(n, 4, replace=False))
        if not fix:
            return TwoCPInstance(net, s1, t1, s2, t2)
        paths = nx_paths(net, s1, t1)
        rng.shuffle(paths)
        for p1 in paths:
            backups = [b for b in paths if not set(b) & set(p1)]
            if backups:
                if fix == "p1":
                    return TwoCPInstance(net, s1, t1, s2, t2, p1)
                b1 = backups[int(rng.integers(len(backups)))]
                return TwoCPInstance(net, s1, t1, s2, t2, p1, b1)
    raise RuntimeError("no instance drawn")


def nx_connected(net, s, t, links):
    """s-t connectivity over a link subset, decided by networkx."""
    import networkx as nx

    g = nx.MultiGraph()
    g.add_nodes_from(range(net.n))
    g.add_edges_from((net.links[e].u, net.links[e].v) for e in links)
    return nx.has_path(g, s, t)


def random_okcp(rng: np.random.Generator, n_lo=4, n_hi=10, p_lo=0.25, p_hi=0.55, k_max=4):
    """Random (net, partition, s, t, K) with at most K-1 backup components.

    Half the instances label links at random; the other half admit up to
    K-1 earlier requests, routed by exhaustive search, on an all-free network.
    """
    from survivor.failure import PathPair
    from survivor.graph import bfs_path
    from survivor.online import LinkPartition, admit, backup_sets

    while True:
        n = int(rng.integers(n_lo, n_hi + 1))
        net = random_net(rng, n, float(rng.uniform(p_lo, p_hi)), multi=0.05)
        if net.m < 2 or net.m > 22:
            continue
        k = int(rng.integers(1, k_max + 1))
        if rng.random() < 0.5:
            labels = rng.choice(3, net.m, p=[0.6, 0.25, 0.15])
            free = {e for e in range(net.m) if labels[e] == 0}
            backup = {e for e in range(net.m) if labels[e] == 1}
            for comp in backup_sets(net, backup)[k - 1:]:
                backup -= comp
            part = LinkPartition(free, backup, set(range(net.m)) - free - backup)
        else:
            part = LinkPartition.all_free(net)
            for _ in range(k - 1):
                a, b = (int(x) for x in rng.choice(n, 2, replace=False))
                for p in nx_paths(net, a, b, part.free):
                    back = bfs_path(net, a, b, part.usable - set(p))
                    if back is not None:
                        part = admit(part, PathPair(p, back))
                        break
        s, t = (int(x) for x in rng.choice(n, 2, replace=False))
        return net, part, s, t, k


def chain_okcp(rng: np.random.Generator, n_max=10, max_sets=3):
    """Free rings with chords joined by free bridges, plus random backup links.

    s lies in the first ring and t in the last, so admission has to route
    the backup through backup links between rings.  Returns
    (net, partition, s, t, K) with K one more than the backup component count.
    """
    from survivor.online import LinkPartition, backup_sets

    while True:
        q = int(rng.integers(1, 4))
        edges, rings, nxt = [], [], 0
        for _ in range(q):
            size = int(rng.integers(3, 6))
            nodes = list(range(nxt, nxt + size))
            nxt += size
            edges += [(nodes[i], nodes[(i + 1) % size]) for i in range(size)]
            for _ in range(int(rng.integers(0, 2))):
                a, b = rng.choice(nodes, 2, replace=False)
                edges.append((int(a), int(b)))
            rings.append(nodes)
        edges += [(int(rng.choice(rings[c])), int(rng.choice(rings[c + 1]))) for c in range(q - 1)]
        n_free = len(edges)
        for _ in range(int(rng.integers(1, 5))):
            a, b = (int(x) for x in rng.choice(nxt, 2, replace=False))
            edges.append((a, b))
        s, t = int(rng.choice(rings[0])), int(rng.choice(rings[-1]))
        if nxt > n_max or s == t:
            continue
        net = make_net(nxt, edges)
        part = LinkPartition(range(n_free), range(n_free, len(edges)), ())
        k = len(backup_sets(net, part.backup)) + 1
        if k <= max_sets + 1:
            return net, part, s, t, k


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
