"""Admitting fully reliable connections one at a time.

State is a ``LinkPartition``: free links (usable by anything), backup links
(already carrying backup paths, shareable by further backups) and primary
links (taken).  A new connection needs link-disjoint primary and backup s-t
paths with the primary on free links only and the backup on free or backup
links.

``solve_okcp`` decides this exactly.  After the reductions the free links
around s and t form a chain of two-link-connected components joined by
bridges the primary must take, so the backup can only move between
components through connected pieces of backup links ("backup sets").  The
search tries ever larger numbers of pieces per component ("leaps") and, for
each ordering of backup sets and assignment of pieces to components, checks
the per-component disjoint-path systems.

``solve_2cesb`` handles the offline two-connection case where only the two
backup paths may share links.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .errors import InputError, ResourceGuardError
from .failure import PathPair
from .graph import (Link, Network, bfs_path, bridges, bridges_separating, component_links,
                    connectivity, reachable, strip_loops, two_edge_connected)
from .paths import DEFAULT_LINK_GUARD, disjoint_pair, k_disjoint_paths, simple_paths

MAX_K = 5
BRUTE_NODE_GUARD = 12


@dataclass(frozen=True)
class LinkPartition:
    free: frozenset[int]
    backup: frozenset[int]
    primary: frozenset[int]

    def __post_init__(self):
        for name in ("free", "backup", "primary"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.free & self.backup or self.free & self.primary or self.backup & self.primary:
            raise InputError("partition sets overlap")

    @classmethod
    def all_free(cls, net: Network) -> "LinkPartition":
        return cls(frozenset(range(net.m)), frozenset(), frozenset())

    def check(self, net: Network) -> None:
        if self.free | self.backup | self.primary != frozenset(range(net.m)):
            raise InputError("partition does not cover exactly the network's links")

    @property
    def usable(self) -> frozenset[int]:
        return self.free | self.backup


def admit(part: LinkPartition, pair: PathPair) -> LinkPartition:
    """Partition after establishing ``pair``: primary links taken, backup links shared."""
    p, b = set(pair.primary), set(pair.backup)
    if not p <= part.free or not b <= part.usable or p & b:
        raise InputError("pair does not respect the partition")
    return LinkPartition(part.free - p - b, part.backup | b, part.primary | p)


def backup_sets(net: Network, links) -> list[frozenset[int]]:
    """Connected components of a link set, ordered by smallest link index."""
    left = set(links)
    out = []
    while left:
        e = min(left)
        comp = component_links(net, net.links[e].u, left)
        out.append(comp)
        left -= comp
    return out


def link_nodes(net: Network, links) -> set[int]:
    out = set()
    for e in links:
        out.add(net.links[e].u)
        out.add(net.links[e].v)
    return out


# --------------------------------------------------------------------------
# reductions

def reduce_r1(net: Network, part: LinkPartition, s: int, t: int) -> LinkPartition | None:
    """None when a single link separates s from t over free plus backup links."""
    usable = part.usable
    if not connectivity(net, usable, s, t):
        return None
    if bridges_separating(net, s, t, usable):
        return None
    return part


def reduce_r2(net: Network, part: LinkPartition, s: int, t: int) -> LinkPartition:
    """Strip free links no primary path can use.

    Free links outside the free component of s, and the far side of every
    free bridge that does not separate s from t, become backup links when
    they touch backup links and primary (unusable) links otherwise.  Backup
    components left without a free node are dropped to primary as well.
    """
    free = set(part.free)
    backup = set(part.backup)
    primary = set(part.primary)
    home = component_links(net, s, free)
    if t not in reachable(net, s, free):
        home = frozenset()
    # free links the primary cannot reach join the backup links
    backup |= free - home
    free = set(home)
    if free:
        spine = set(bridges_separating(net, s, t, free))
        for e in sorted(bridges(net, free)):
            if e in spine or e not in free:
                continue
            rest = free - {e}
            near = reachable(net, s, rest)
            ln = net.links[e]
            far_root = ln.v if ln.u in near else ln.u
            far = component_links(net, far_root, rest) | {e}
            far_nodes = link_nodes(net, far) - near
            far_nodes.add(far_root)
            free -= far
            if far_nodes & link_nodes(net, backup):
                backup |= far
            else:
                primary |= far
    anchor = link_nodes(net, free) | {s, t}
    for comp in backup_sets(net, backup):
        if not link_nodes(net, comp) & anchor:
            backup -= comp
            primary |= comp
    return LinkPartition(frozenset(free), frozenset(backup), frozenset(primary))


# --------------------------------------------------------------------------
# transitions

@dataclass(frozen=True)
class Transition:
    """A disjoint two-path system with its second path broken at leaps.

    ``leaps`` lists ordered node pairs (u, v): the second path runs
    s2 -> u1, v1 -> u2, ..., vk -> t2 as separate pieces, each link-disjoint
    from the others and from the s1 -> t1 path.
    """

    component: int | None
    terminals: tuple[int, int, int, int]
    leaps: tuple[tuple[int, int], ...]
    paths: tuple[tuple[int, ...], ...]


def enumerate_transitions(net: Network, s1: int, t1: int, s2: int, t2: int, attach,
                          max_leaps: int, links=None, component: int | None = None,
                          link_guard: int = DEFAULT_LINK_GUARD) -> list[Transition]:
    """All feasible transitions with at most ``max_leaps`` leaps over nodes in ``attach``.

    Leap nodes are taken from ``attach`` and are pairwise distinct.
    """
    attach = sorted(set(attach))
    out = []
    for k in range(max_leaps + 1):
        for nodes in permutations(attach, 2 * k):
            leaps = tuple((nodes[2 * i], nodes[2 * i + 1]) for i in range(k))
            ends = [s2] + list(nodes) + [t2]
            pairs = [(s1, t1)] + [(ends[2 * i], ends[2 * i + 1]) for i in range(k + 1)]
            found = k_disjoint_paths(net, pairs, links=links, link_guard=link_guard)
            if found is not None:
                out.append(Transition(component, (s1, t1, s2, t2), leaps, tuple(found)))
    return out


# --------------------------------------------------------------------------
# exact online admission

@dataclass(frozen=True)
class _Chain:
    """Free components in s-to-t order with their entry and exit nodes."""

    comps: tuple[frozenset[int], ...]
    comp_links: tuple[frozenset[int], ...]
    entry: tuple[int, ...]
    exit: tuple[int, ...]
    bridges: tuple[int, ...]


def _chain(net: Network, free, s: int, t: int) -> _Chain:
    seps = bridges_separating(net, s, t, free)
    inner = set(free) - set(seps)
    comps, comp_links, entry, exit_ = [], [], [], []
    start = s
    for k in range(len(seps) + 1):
        nodes = frozenset(reachable(net, start, inner))
        comps.append(nodes)
        comp_links.append(frozenset(e for e in inner if net.links[e].u in nodes))
        entry.append(start)
        if k < len(seps):
            ln = net.links[seps[k]]
            near, far = (ln.u, ln.v) if ln.u in nodes else (ln.v, ln.u)
            exit_.append(near)
            start = far
        else:
            exit_.append(t)
    return _Chain(tuple(comps), tuple(comp_links), tuple(entry), tuple(exit_), tuple(seps))


class _Search:
    """Combination search over ordered backup sets and piece placements."""

    def __init__(self, net, chain, sets, s, t, link_guard):
        self.net = net
        self.chain = chain
        self.sets = sets
        self.s = s
        self.t = t
        self.link_guard = link_guard
        self.q = len(chain.comps)
        self.set_nodes = [link_nodes(net, S) for S in sets]
        self.touch = [[bool(self.set_nodes[i] & chain.comps[c]) for c in range(self.q)]
                      for i in range(len(sets))]
        self.memo = {}

    def _local(self, c: int, pieces: tuple):
        """Disjoint system in component c for the primary and the backup pieces.

        Piece endpoints are node ids or ("x", i) for backup set i; each
        backup set becomes a virtual node joined to its attachment nodes.
        """
        key = (c, pieces)
        if key in self.memo:
            return self.memo[key]
        net, ch = self.net, self.chain
        used = sorted({x[1] for piece in pieces for x in piece if isinstance(x, tuple)})
        virtual = {i: net.n + k for k, i in enumerate(used)}
        extra = []
        origin = {}
        for i in used:
            for v in sorted(self.set_nodes[i] & ch.comps[c]):
                origin[net.m + len(extra)] = (i, v)
                extra.append(Link(virtual[i], v))
        grown = Network(net.n + len(used), net.links + tuple(extra))
        pool = set(ch.comp_links[c]) | set(origin)

        def node(x):
            return virtual[x[1]] if isinstance(x, tuple) else x

        pairs = [(ch.entry[c], ch.exit[c])] + [(node(a), node(b)) for a, b in pieces]
        found = k_disjoint_paths(grown, pairs, links=pool,
                                 terminal_only=list(virtual.values()),
                                 link_guard=self.link_guard + len(extra))
        result = None
        if found is not None:
            primary = found[0]
            parts = []
            for (a, b), path in zip(pieces, found[1:]):
                start = origin[path[0]][1] if path and path[0] in origin else node(a)
                end = origin[path[-1]][1] if path and path[-1] in origin else node(b)
                core = tuple(e for e in path if e not in origin)
                parts.append((start, end, core))
            result = (primary, parts)
        self.memo[key] = result
        return result

    def placements(self, order):
        """Component sequences c_0..c_k for a backup-set order (c_0 = 0, c_k = q-1)."""
        k = len(order)
        if k == 0:
            return [(0,)] if self.q == 1 else []
        options = []
        for i in range(1, k):
            a, b = order[i - 1], order[i]
            options.append([c for c in range(self.q) if self.touch[a][c] and self.touch[b][c]])
        if not self.touch[order[0]][0] or not self.touch[order[-1]][self.q - 1]:
            return []
        return [(0,) + mid + (self.q - 1,) for mid in product(*options)]

    def pieces_of(self, order, place):
        ends = [self.s] + [("x", i) for i in order]
        tails = [("x", i) for i in order] + [self.t]
        per = [[] for _ in range(self.q)]
        for i, c in enumerate(place):
            per[c].append((ends[i], tails[i]))
        return [tuple(p) for p in per]

    def run(self, limit):
        h = len(self.sets)
        for n1 in range(limit):
            for k in range(1, h + 1):
                for order in permutations(range(h), k):
                    for place in self.placements(order):
                        per = self.pieces_of(order, place)
                        most = max(len(p) for p in per) - 1
                        if most != n1:
                            continue  # larger counts later, smaller ones already tried
                        locals_ = []
                        for c in range(self.q):
                            got = self._local(c, per[c])
                            if got is None:
                                break
                            locals_.append(got)
                        else:
                            return n1, order, place, locals_
        return None


@dataclass(frozen=True)
class OKCPResult:
    pair: PathPair | None
    max_leaps: int | None = None
    verdict: str = "feasible"

    @property
    def feasible(self) -> bool:
        return self.pair is not None

    def to_json(self) -> dict:
        out = {"feasible": self.feasible, "verdict": self.verdict, "max_leaps": self.max_leaps}
        if self.pair is not None:
            out["connection"] = self.pair.to_json()
        return out


def solve_okcp(net: Network, part: LinkPartition, s: int, t: int, K: int | None = None,
               link_guard: int = DEFAULT_LINK_GUARD) -> OKCPResult:
    """Primary on free links, backup on free or backup links, link-disjoint."""
    net.check_node(s)
    net.check_node(t)
    part.check(net)
    if s == t:
        raise InputError("source equals destination")
    if K is not None and K > MAX_K:
        raise ResourceGuardError(f"K limited to {MAX_K}")
    # step 1: the primary needs s and t in one free component
    if not connectivity(net, part.free, s, t):
        return OKCPResult(None, verdict="disconnected")
    free_home = component_links(net, s, part.free)
    # step 2: two free disjoint paths, or a separating link over all usable links
    if two_edge_connected(net, s, t, free_home):
        p, b = disjoint_pair(net, None, s, t, free_home)
        return OKCPResult(PathPair(p, b), 0, "free-pair")
    if reduce_r1(net, part, s, t) is None:
        return OKCPResult(None, verdict="separating-link")
    red = reduce_r2(net, part, s, t)
    sets = backup_sets(net, red.backup)
    chain = _chain(net, red.free, s, t)
    limit = len(sets) + 1 if K is None else max(K, len(sets) + 1)
    found = _Search(net, chain, sets, s, t, link_guard).run(limit)
    if found is None:
        return OKCPResult(None, verdict="no-combination")
    n1, order, place, locals_ = found
    # step 4: stitch the pieces together
    primary = []
    for c, (prim, _) in enumerate(locals_):
        primary.extend(prim)
        if c < len(chain.bridges):
            primary.append(chain.bridges[c])
    cursor = [0] * len(chain.comps)
    backup = []
    prev_end = None
    for i, c in enumerate(place):
        start, end, core = locals_[c][1][cursor[c]]
        cursor[c] += 1
        if i > 0:
            link = bfs_path(net, prev_end, start, sets[order[i - 1]])
            backup.extend(link)
        backup.extend(core)
        prev_end = end
    pair = PathPair(strip_loops(net, primary, s), strip_loops(net, backup, s))
    return OKCPResult(pair, n1, "combination")


def brute_okcp(net: Network, part: LinkPartition, s: int, t: int) -> OKCPResult:
    """Try every simple free primary; accept it if a backup survives its removal."""
    if net.n > BRUTE_NODE_GUARD:
        raise ResourceGuardError(f"brute force limited to {BRUTE_NODE_GUARD} nodes")
    part.check(net)
    usable = part.usable
    for p in simple_paths(net, s, t, part.free):
        b = bfs_path(net, s, t, usable - set(p))
        if b is not None:
            return OKCPResult(PathPair(p, b), None, "brute")
    return OKCPResult(None, verdict="brute")


# --------------------------------------------------------------------------
# offline: two connections, only backups may share

def solve_2cesb(net: Network, s1: int, t1: int, s2: int, t2: int, links=None,
                link_guard: int = DEFAULT_LINK_GUARD) -> tuple[PathPair, PathPair] | None:
    """Four paths, pairwise link-disjoint except that the two backups may share.

    Either all four paths are disjoint, or the backups share one segment
    x - y: seven disjoint paths p1, p2, s1-x, s2-x, x-y, y-t1, y-t2 (or the
    same with s2 and t2 interchanged) are then stitched into the backups.
    """
    for v in (s1, t1, s2, t2):
        net.check_node(v)
    kw = dict(links=links, link_guard=link_guard)
    four = k_disjoint_paths(net, [(s1, t1), (s1, t1), (s2, t2), (s2, t2)], **kw)
    if four is not None:
        return PathPair(four[0], four[1]), PathPair(four[2], four[3])
    for x in range(net.n):
        for y in range(net.n):
            if x == y:
                continue
            for flip in (False, True):
                a2, z2 = (t2, s2) if flip else (s2, t2)
                pairs = [(s1, t1), (s2, t2), (s1, x), (a2, x), (x, y), (y, t1), (y, z2)]
                got = k_disjoint_paths(net, pairs, **kw)
                if got is None:
                    continue
                p1, p2, s1x, a2x, xy, yt1, yz2 = got
                b1 = s1x + xy + yt1
                b2 = a2x + xy + yz2
                if flip:  # the stitched path runs t2 -> s2
                    b2 = tuple(reversed(b2))
                return (PathPair(p1, strip_loops(net, b1, s1)),
                        PathPair(p2, strip_loops(net, b2, s2)))
    return None


def brute_2cesb(net: Network, s1: int, t1: int, s2: int, t2: int) -> tuple[PathPair, PathPair] | None:
    """Disjoint primaries whose removal leaves both terminal pairs connected."""
    if net.n > BRUTE_NODE_GUARD:
        raise ResourceGuardError(f"brute force limited to {BRUTE_NODE_GUARD} nodes")
    everything = frozenset(range(net.m))
    for p1 in simple_paths(net, s1, t1):
        rest = everything - set(p1)
        for p2 in simple_paths(net, s2, t2, rest):
            left = rest - set(p2)
            b1 = bfs_path(net, s1, t1, left)
            b2 = bfs_path(net, s2, t2, left)
            if b1 is not None and b2 is not None:
                return PathPair(p1, b1), PathPair(p2, b2)
    return None
