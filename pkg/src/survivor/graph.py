"""Undirected multigraph with per-link failure probabilities.

Links are identified by their index in ``Network.links``; parallel links are
allowed, self-loops are not.  A path is a tuple of link indices walked from a
named source node (node repetition allowed, link repetition not).

Most operations take an optional ``links`` argument restricting the graph to
a subset of link indices (``None`` means every link).
"""

from __future__ import annotations

import math
from array import array
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import kernels
from .errors import InputError

PROB_TOL = 1e-9
MAX_CUT_LEVEL = 6


@dataclass(frozen=True)
class Link:
    u: int
    v: int
    pf: float = 0.0
    capacity: bool = True


@dataclass(frozen=True)
class Network:
    n: int
    links: tuple[Link, ...]
    normalized: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise InputError("negative node count")
        for i, ln in enumerate(self.links):
            if not (0 <= ln.u < self.n and 0 <= ln.v < self.n):
                raise InputError(f"link {i} has an endpoint outside 0..{self.n - 1}")
            if ln.u == ln.v:
                raise InputError(f"link {i} is a self-loop")
            if not (0.0 <= ln.pf <= 1.0) or math.isnan(ln.pf):
                raise InputError(f"link {i} failure probability {ln.pf} not in [0, 1]")
        if self.normalized and abs(sum(ln.pf for ln in self.links) - 1.0) > PROB_TOL:
            raise InputError("network flagged normalized but probabilities do not sum to 1")

    @classmethod
    def from_edges(cls, n, edges, pf=None, capacity=None, normalized=False):
        """Build from ``(u, v)`` pairs with optional parallel pf / capacity lists."""
        edges = list(edges)
        pf = [0.0] * len(edges) if pf is None else list(pf)
        capacity = [True] * len(edges) if capacity is None else list(capacity)
        if not (len(pf) == len(capacity) == len(edges)):
            raise InputError("edge, pf and capacity lists differ in length")
        links = tuple(Link(int(u), int(v), float(p), bool(c))
                      for (u, v), p, c in zip(edges, pf, capacity))
        return cls(n, links, normalized)

    @property
    def m(self) -> int:
        return len(self.links)

    @cached_property
    def pf(self) -> tuple[float, ...]:
        return tuple(ln.pf for ln in self.links)

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node, ``(link, neighbour)`` pairs sorted by link index."""
        inc = [[] for _ in range(self.n)]
        for i, ln in enumerate(self.links):
            inc[ln.u].append((i, ln.v))
            inc[ln.v].append((i, ln.u))
        return tuple(tuple(x) for x in inc)

    @cached_property
    def csr(self):
        indptr = array("l", [0])
        adj_node = array("l")
        adj_link = array("l")
        for row in self.incidence:
            for e, v in row:
                adj_link.append(e)
                adj_node.append(v)
            indptr.append(len(adj_node))
        return indptr, adj_node, adj_link

    def degree(self, v: int, links=None) -> int:
        if links is None:
            return len(self.incidence[v])
        links = as_link_set(links)
        return sum(1 for e, _ in self.incidence[v] if e in links)

    def other(self, e: int, u: int) -> int:
        ln = self.links[e]
        if ln.u == u:
            return ln.v
        if ln.v == u:
            return ln.u
        raise InputError(f"node {u} is not an endpoint of link {e}")

    def mask(self, links=None) -> bytearray:
        if links is None:
            return bytearray(b"\x01") * self.m
        out = bytearray(self.m)
        for e in links:
            out[e] = 1
        return out

    def all_links(self) -> frozenset[int]:
        return frozenset(range(self.m))

    def with_links(self, extra: Iterable[Link]) -> "Network":
        """Copy with links appended (new ones take indices m, m + 1, ...)."""
        return Network(self.n, self.links + tuple(extra))

    def restricted(self, keep: Iterable[int]) -> tuple["Network", list[int]]:
        """Sub-network on a link subset; returns it with new-index -> old-index map."""
        keep = sorted(set(keep))
        return Network(self.n, tuple(self.links[e] for e in keep)), keep

    def check_node(self, v) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise InputError(f"unknown node {v!r}")


def as_link_set(links) -> frozenset[int]:
    return links if isinstance(links, frozenset) else frozenset(links)


def _mask(net: Network, links) -> bytearray:
    return net.mask(None if links is None else as_link_set(links))


# --------------------------------------------------------------------------
# paths

def walk_nodes(net: Network, path: Sequence[int], s: int) -> list[int]:
    """Node sequence visited by ``path`` starting at ``s``."""
    nodes = [s]
    u = s
    for e in path:
        if not 0 <= e < net.m:
            raise InputError(f"link index {e} out of range")
        u = net.other(e, u)
        nodes.append(u)
    return nodes


def check_path(net: Network, path: Sequence[int], s: int, t: int, links=None) -> None:
    """Raise InputError unless ``path`` is an s-t walk without repeated links."""
    net.check_node(s)
    net.check_node(t)
    if len(set(path)) != len(path):
        raise InputError("path repeats a link")
    try:
        nodes = walk_nodes(net, path, s)
    except InputError as exc:
        raise InputError(f"not a walk from {s}: {exc}") from None
    if nodes[-1] != t:
        raise InputError(f"path from {s} ends at {nodes[-1]}, expected {t}")
    if links is not None:
        allowed = as_link_set(links)
        if any(e not in allowed for e in path):
            raise InputError("path uses a link outside the allowed set")


def is_path(net: Network, path: Sequence[int], s: int, t: int) -> bool:
    try:
        check_path(net, path, s, t)
    except InputError:
        return False
    return True


def strip_loops(net: Network, path: Sequence[int], s: int) -> tuple[int, ...]:
    """Shortcut every closed sub-walk, leaving a node-simple path."""
    out: list[int] = []
    nodes = [s]
    where = {s: 0}
    u = s
    for e in path:
        u = net.other(e, u)
        if u in where:
            k = where[u]
            for w in nodes[k + 1:]:
                del where[w]
            del nodes[k + 1:]
            del out[k:]
        else:
            out.append(e)
            nodes.append(u)
            where[u] = len(nodes) - 1
    return tuple(out)


def path_nodes_set(net: Network, path: Sequence[int]) -> set[int]:
    out = set()
    for e in path:
        out.add(net.links[e].u)
        out.add(net.links[e].v)
    return out


# --------------------------------------------------------------------------
# connectivity

def reachable(net: Network, s: int, links=None) -> set[int]:
    net.check_node(s)
    indptr, adj_node, adj_link = net.csr
    seen = kernels.reach(indptr, adj_node, adj_link, s, _mask(net, links))
    return {v for v in range(net.n) if seen[v]}


def connectivity(net: Network, links, s: int, t: int) -> bool:
    """True iff ``t`` is reachable from ``s`` over ``links`` (None = all links)."""
    net.check_node(s)
    net.check_node(t)
    if s == t:
        return True
    indptr, adj_node, adj_link = net.csr
    return bool(kernels.reach(indptr, adj_node, adj_link, s, _mask(net, links))[t])


def component_links(net: Network, s: int, links=None) -> frozenset[int]:
    """Links of the connected component of ``s`` within ``links``."""
    nodes = reachable(net, s, links)
    pool = range(net.m) if links is None else links
    return frozenset(e for e in pool if net.links[e].u in nodes)


def bfs_path(net: Network, s: int, t: int, links=None) -> tuple[int, ...] | None:
    """Fewest-hop s-t path, exploring links in index order."""
    allowed = None if links is None else as_link_set(links)
    prev = {s: None}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        if u == t:
            break
        for e, v in net.incidence[u]:
            if v not in prev and (allowed is None or e in allowed):
                prev[v] = (e, u)
                queue.append(v)
    if t not in prev:
        return None
    out = []
    v = t
    while prev[v] is not None:
        e, v = prev[v]
        out.append(e)
    return tuple(reversed(out))


def bridges(net: Network, links=None) -> set[int]:
    """All bridge links of the subgraph (iterative low-link DFS, multigraph-safe)."""
    allowed = None if links is None else as_link_set(links)
    disc = [-1] * net.n
    low = [0] * net.n
    found = set()
    clock = 0
    for root in range(net.n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = clock
        clock += 1
        # frames: (node, link used to enter, iterator position)
        stack = [(root, -1, 0)]
        while stack:
            u, via, pos = stack[-1]
            inc = net.incidence[u]
            if pos < len(inc):
                stack[-1] = (u, via, pos + 1)
                e, v = inc[pos]
                if e == via or (allowed is not None and e not in allowed):
                    continue
                if disc[v] < 0:
                    disc[v] = low[v] = clock
                    clock += 1
                    stack.append((v, e, 0))
                else:
                    low[u] = min(low[u], disc[v])
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[u])
                    if low[u] > disc[p]:
                        found.add(via)
    return found


def bridges_separating(net: Network, s: int, t: int, links=None) -> list[int]:
    """Links whose single removal disconnects ``s`` from ``t``, ordered from s to t."""
    net.check_node(s)
    net.check_node(t)
    path = bfs_path(net, s, t, links)
    if path is None:
        raise InputError(f"nodes {s} and {t} are not connected")
    scope = component_links(net, s, links)
    cut = bridges(net, scope)
    return [e for e in path if e in cut]


@dataclass(frozen=True)
class D1Decomposition:
    """Chain of components C_1..C_{r+1} joined by the s-t separating bridges.

    ``bridge_ends[l]`` is ``(v, u)`` with ``v`` in ``components[l]`` and ``u`` in
    ``components[l + 1]``.
    """

    s: int
    t: int
    components: tuple[frozenset[int], ...]
    bridges: tuple[int, ...]
    bridge_ends: tuple[tuple[int, int], ...]
    component_links: tuple[frozenset[int], ...] = field(default=())

    @property
    def r(self) -> int:
        return len(self.bridges)

    def entry(self, k: int) -> int:
        """Node where an s-t path enters component k (0-based)."""
        return self.s if k == 0 else self.bridge_ends[k - 1][1]

    def exit(self, k: int) -> int:
        """Node where an s-t path leaves component k (0-based)."""
        return self.t if k == self.r else self.bridge_ends[k][0]

    def index_of(self, v: int) -> int | None:
        for k, comp in enumerate(self.components):
            if v in comp:
                return k
        return None


def decompose_d1(net: Network, s: int, t: int, links=None) -> D1Decomposition:
    seps = bridges_separating(net, s, t, links)
    scope = component_links(net, s, links)
    inner = scope - set(seps)
    comps = []
    comp_links = []
    ends = []
    start = s
    for k in range(len(seps) + 1):
        nodes = frozenset(reachable(net, start, inner))
        comps.append(nodes)
        comp_links.append(frozenset(e for e in inner if net.links[e].u in nodes))
        if k < len(seps):
            e = seps[k]
            ln = net.links[e]
            v, u = (ln.u, ln.v) if ln.u in nodes else (ln.v, ln.u)
            ends.append((v, u))
            start = u
    return D1Decomposition(s, t, tuple(comps), tuple(seps), tuple(ends), tuple(comp_links))


def two_edge_connected(net: Network, s: int, t: int, links=None) -> bool:
    """True iff s and t are connected and no single link separates them."""
    if not connectivity(net, links, s, t):
        return False
    return not bridges_separating(net, s, t, links)


# --------------------------------------------------------------------------
# clique transformation

@dataclass(frozen=True)
class CliqueMap:
    """Correspondence between a network and its clique transform.

    ``port[(e, v)]`` is the transformed node carrying original link ``e`` at its
    endpoint ``v``; ``images[v]`` lists every transformed node standing for
    ``v``.  Original link ``e`` keeps index ``e``; clique links follow.
    """

    port: dict
    images: tuple[tuple[int, ...], ...]
    internal: frozenset[int]


def clique_transform(net: Network) -> tuple[Network, CliqueMap]:
    """Replace each node of degree d > 2 by a d-clique of zero-probability links."""
    port = {}
    images = []
    next_id = net.n
    for v in range(net.n):
        inc = net.incidence[v]
        if len(inc) <= 2:
            for e, _ in inc:
                port[(e, v)] = v
            images.append((v,))
            continue
        ids = [v]
        for _ in inc[1:]:
            ids.append(next_id)
            next_id += 1
        for (e, _), node in zip(inc, ids):
            port[(e, v)] = node
        images.append(tuple(ids))
    links = [Link(port[(e, ln.u)], port[(e, ln.v)], ln.pf, ln.capacity)
             for e, ln in enumerate(net.links)]
    internal = []
    for ids in images:
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                internal.append(len(links))
                links.append(Link(ids[i], ids[j], 0.0, True))
    return Network(next_id, tuple(links)), CliqueMap(port, tuple(images), frozenset(internal))


# --------------------------------------------------------------------------
# small cuts

def is_connected(net: Network, links=None) -> bool:
    if net.n <= 1:
        return True
    return len(reachable(net, 0, links)) == net.n


def enumerate_small_cuts(net: Network, level: int) -> list[frozenset[int]]:
    """All bonds (minimal disconnecting link sets) of size at most ``level``."""
    if not isinstance(level, int) or not 1 <= level <= MAX_CUT_LEVEL:
        raise InputError(f"cut level must be an integer in 1..{MAX_CUT_LEVEL}")
    if not is_connected(net):
        raise InputError("small-cut enumeration needs a connected network")
    if net.n < 2:
        return []
    order = []
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        order.append(u)
        for _, v in net.incidence[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    us = [ln.u for ln in net.links]
    vs = [ln.v for ln in net.links]
    cuts = kernels.bonds(net.n, us, vs, order, level)
    return sorted((frozenset(c) for c in cuts), key=lambda c: (len(c), sorted(c)))


def small_cut_weights(net: Network, level: int) -> list[float]:
    """Per-link weight sum(n_i / i) over bond sizes i <= level containing the link."""
    counts = [[0] * (level + 1) for _ in range(net.m)]
    for cut in enumerate_small_cuts(net, level):
        for e in cut:
            counts[e][len(cut)] += 1
    return [sum(c[i] / i for i in range(1, level + 1)) for c in counts]
