"""Shortest paths, disjoint path pairs and exact multi-pair disjoint path search."""

from __future__ import annotations

import heapq
from typing import Sequence

from . import kernels
from .errors import InputError, ResourceGuardError
from .failure import PathPair
from .graph import (Link, Network, as_link_set, bridges_separating, connectivity,
                    strip_loops)

PATH_LIMIT = 2_000_000
MAX_PAIRS = 7
DEFAULT_LINK_GUARD = 64
TWO_PATH_LINK_GUARD = 1024


def weight_list(net: Network, weights) -> list[float]:
    """Normalise ``weights`` (None = unit, sequence or mapping) to a list."""
    if weights is None:
        return [1.0] * net.m
    if isinstance(weights, dict):
        out = [0.0] * net.m
        for e, w in weights.items():
            out[e] = float(w)
    else:
        out = [float(w) for w in weights]
        if len(out) != net.m:
            raise InputError("weight list length differs from link count")
    if any(w < 0 for w in out):
        raise InputError("weights must be nonnegative")
    return out


def path_weight(weights: Sequence[float], path: Sequence[int]) -> float:
    return sum(weights[e] for e in path)


def path_key(weights: Sequence[float], path: Sequence[int]):
    """Global tie-break order: weight, then hop count, then link sequence."""
    return (path_weight(weights, path), len(path), tuple(path))


def simple_paths(net: Network, s: int, t: int, links=None, blocked=(),
                 limit: int = PATH_LIMIT) -> list[tuple[int, ...]]:
    """Every node-simple s-t path over ``links`` whose interior avoids ``blocked``."""
    net.check_node(s)
    net.check_node(t)
    indptr, adj_node, adj_link = net.csr
    mask = net.mask(None if links is None else as_link_set(links))
    bl = bytearray(net.n)
    for v in blocked:
        bl[v] = 1
    found = kernels.simple_paths(indptr, adj_node, adj_link, s, t, mask, bl, limit)
    if len(found) > limit:
        raise ResourceGuardError(f"more than {limit} simple paths between {s} and {t}")
    return found


def shortest_path(net: Network, weights, s: int, t: int, links=None) -> tuple[int, ...] | None:
    """Minimum-weight s-t path; ties go to fewer links, then smaller link sequence."""
    net.check_node(s)
    net.check_node(t)
    w = weight_list(net, weights)
    allowed = None if links is None else as_link_set(links)
    best = {s: (0.0, 0, ())}
    heap = [(0.0, 0, (), s)]
    done = set()
    while heap:
        d, h, seq, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == t:
            return seq
        for e, v in net.incidence[u]:
            if v in done or (allowed is not None and e not in allowed):
                continue
            label = (d + w[e], h + 1, seq + (e,))
            old = best.get(v)
            if old is None or label < old:
                best[v] = label
                heapq.heappush(heap, label + (v,))
    return None


def disjoint_pair(net: Network, weights, s: int, t: int,
                  links=None) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Two link-disjoint s-t paths of minimum total weight (lighter path first)."""
    net.check_node(s)
    net.check_node(t)
    if s == t:
        return (), ()
    w = weight_list(net, weights)
    allowed = range(net.m) if links is None else sorted(as_link_set(links))
    first = shortest_path(net, w, s, t, links)
    if first is None:
        return None
    # direction of flow on each link used by the first path: +1 means u -> v
    flow = {}
    u = s
    for e in first:
        ln = net.links[e]
        flow[e] = 1 if ln.u == u else -1
        u = net.other(e, u)
    # residual arcs: unused links both ways, used links only backwards at -w
    arcs = []
    for e in allowed:
        ln = net.links[e]
        if e in flow:
            a, b = (ln.v, ln.u) if flow[e] == 1 else (ln.u, ln.v)
            arcs.append((a, b, -w[e], e))
        else:
            arcs.append((ln.u, ln.v, w[e], e))
            arcs.append((ln.v, ln.u, w[e], e))
    inf = float("inf")
    dist = [inf] * net.n
    pred = [None] * net.n
    dist[s] = 0.0
    for _ in range(net.n):
        changed = False
        for a, b, c, e in arcs:
            if dist[a] + c < dist[b] - 1e-12:
                dist[b] = dist[a] + c
                pred[b] = (a, e)
                changed = True
        if not changed:
            break
    if dist[t] == inf:
        return None
    v = t
    second = []
    guard = 0
    while v != s:
        a, e = pred[v]
        second.append((a, v, e))
        v = a
        guard += 1
        if guard > net.m + 1:
            raise RuntimeError("residual path reconstruction looped")
    for a, b, e in second:
        if e in flow:
            del flow[e]  # opposite directions cancel
        else:
            ln = net.links[e]
            flow[e] = 1 if ln.u == a else -1
    out_arcs = {}
    for e in sorted(flow):
        ln = net.links[e]
        a = ln.u if flow[e] == 1 else ln.v
        out_arcs.setdefault(a, []).append(e)
    paths = []
    for _ in range(2):
        walk = []
        u = s
        while u != t:
            e = out_arcs[u].pop(0)
            walk.append(e)
            u = net.other(e, u)
        paths.append(strip_loops(net, walk, s))
    paths.sort(key=lambda p: path_key(w, p))
    return paths[0], paths[1]


def tunable_pair(net: Network, s: int, t: int, links=None) -> tuple[PathPair, float] | None:
    """Minimum-failure primary/backup pair allowing the pair to share links.

    Every link separating s from t gets a parallel twin; a minimum-probability
    disjoint pair is then routed and twins are mapped back, so the two paths
    share exactly the separating links.
    """
    if not connectivity(net, links, s, t):
        return None
    if s == t:
        return PathPair((), ()), 0.0
    seps = bridges_separating(net, s, t, links)
    twins = [Link(net.links[e].u, net.links[e].v, net.links[e].pf, net.links[e].capacity)
             for e in seps]
    grown = net.with_links(twins)
    twin_of = {net.m + i: e for i, e in enumerate(seps)}
    pool = set(range(net.m) if links is None else links) | set(twin_of)
    found = disjoint_pair(grown, grown.pf, s, t, pool)
    if found is None:  # cannot happen once s, t are connected
        raise RuntimeError("no disjoint pair after duplicating separating links")
    p, b = (tuple(twin_of.get(e, e) for e in path) for path in found)
    return PathPair(p, b), sum((net.pf[e] for e in sorted(seps)), 0.0)


def k_disjoint_paths(net: Network, pairs: Sequence[tuple[int, int]], node_disjoint: bool = False,
                     links=None, terminal_only=(), weights=None,
                     link_guard: int = DEFAULT_LINK_GUARD,
                     limit: int = PATH_LIMIT) -> list[tuple[int, ...]] | None:
    """Mutually disjoint paths, one per terminal pair, by exhaustive backtracking.

    Link-disjoint by default.  With ``node_disjoint`` the paths are also
    internally node-disjoint: no interior node of one path lies on another
    path.  Nodes in ``terminal_only`` may only be used as path endpoints.
    Candidates are tried in ``path_key`` order under ``weights`` (unit when
    None), so the first system found is deterministic.  Returns None when no
    such system exists.
    """
    pairs = [(int(a), int(b)) for a, b in pairs]
    if len(pairs) > MAX_PAIRS:
        raise ResourceGuardError(f"at most {MAX_PAIRS} terminal pairs supported")
    pool = frozenset(range(net.m)) if links is None else as_link_set(links)
    if len(pool) > link_guard:
        raise ResourceGuardError(f"{len(pool)} links exceed the search guard of {link_guard}")
    for a, b in pairs:
        net.check_node(a)
        net.check_node(b)
    if not pairs:
        return []
    terminals = [set() for _ in pairs]
    for i in range(len(pairs)):
        for j, (a, b) in enumerate(pairs):
            if j != i:
                terminals[i].update((a, b))
    w = weight_list(net, weights)
    fixed_block = set(terminal_only)
    indptr, adj_node, adj_link = net.csr
    failed = set()

    def endpoint_nodes(path, a):
        nodes = {a}
        u = a
        for e in path:
            u = net.other(e, u)
            nodes.add(u)
        return nodes

    def solve(i, free, used_nodes):
        if i == len(pairs):
            return []
        key = (i, free, used_nodes)
        if key in failed:
            return None
        a, b = pairs[i]
        blocked = set(fixed_block)
        if node_disjoint:
            # earlier interiors already avoid every terminal, so only interiors clash
            blocked |= used_nodes | terminals[i]
        bl = bytearray(net.n)
        for v in blocked:
            if v != a and v != b:
                bl[v] = 1
        mask = net.mask(free)
        cands = kernels.simple_paths(indptr, adj_node, adj_link, a, b, mask, bl, limit)
        if len(cands) > limit:
            raise ResourceGuardError("candidate path enumeration exceeded its limit")
        cands.sort(key=lambda p: path_key(w, p))
        for path in cands:
            rest = free - frozenset(path)
            nodes = used_nodes
            if node_disjoint:
                nodes = used_nodes | frozenset(endpoint_nodes(path, a))
            if not all(connectivity(net, rest, c, d) for c, d in pairs[i + 1:]):
                continue
            tail = solve(i + 1, rest, nodes)
            if tail is not None:
                return [tuple(path)] + tail
        failed.add(key)
        return None

    return solve(0, pool, frozenset())


def two_path_problem(net: Network, s1: int, t1: int, s2: int, t2: int,
                     links=None, weights=None, link_guard: int = TWO_PATH_LINK_GUARD
                     ) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Link-disjoint s1-t1 and s2-t2 paths, or None.

    Two pairs keep the search shallow, so the link guard is looser than for
    general systems; the candidate-path limit still applies.
    """
    found = k_disjoint_paths(net, [(s1, t1), (s2, t2)], links=links, weights=weights,
                             link_guard=link_guard)
    return None if found is None else (found[0], found[1])
