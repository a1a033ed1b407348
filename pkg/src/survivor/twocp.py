"""Routing two prioritised connections where the first must be fully reliable.

The first connection (s1, t1) gets a link-disjoint primary/backup pair; the
second (s2, t2) is routed to minimise its failure probability, accounting for
preemption by the first.  Three problem variants fix different amounts of the
first connection in advance:

* ``2cp1``: both p1 and b1 are given; ``solve_2cp1_sca`` is exact.
* ``2cp2``: only p1 is given; ``solve_2cp2a`` / ``solve_2cp2n`` are heuristics.
* ``2cp3``: nothing is given; ``solve_2cp3a`` / ``3b`` / ``3n`` are heuristics.

Each variant has a ``brute_*`` solver that enumerates paths exhaustively.
Every reported objective is the preemption oracle's value for the returned
paths.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .errors import InputError, ResourceGuardError
from .failure import (INFEASIBLE, OVERLAPPED, SHARED, UNAVOIDABLE, PathPair, case_of,
                      preemption_oracle, to_mask)
from .graph import (Link, Network, check_path, component_links, connectivity,
                    decompose_d1, reachable, small_cut_weights, strip_loops,
                    walk_nodes)
from .paths import (disjoint_pair, shortest_path, simple_paths, tunable_pair,
                    two_path_problem)

BRUTE_NODE_GUARD = 12
BRUTE_PAIR_CAP = 2_000_000
DEFAULT_CUT_LEVEL = 4
TIE_TOL = 1e-12


@dataclass(frozen=True)
class TwoCPInstance:
    net: Network
    s1: int
    t1: int
    s2: int
    t2: int
    p1: tuple[int, ...] | None = None
    b1: tuple[int, ...] | None = None

    def __post_init__(self):
        for v in (self.s1, self.t1, self.s2, self.t2):
            self.net.check_node(v)
        if self.s1 == self.t1 or self.s2 == self.t2:
            raise InputError("a connection's source equals its destination")
        if self.p1 is not None:
            object.__setattr__(self, "p1", tuple(self.p1))
            check_path(self.net, self.p1, self.s1, self.t1)
        if self.b1 is not None:
            if self.p1 is None:
                raise InputError("b1 given without p1")
            object.__setattr__(self, "b1", tuple(self.b1))
            check_path(self.net, self.b1, self.s1, self.t1)
            if set(self.p1) & set(self.b1):
                raise InputError("fully reliable first connection needs disjoint p1 and b1")


@dataclass(frozen=True)
class TwoCPSolution:
    c1: PathPair | None
    c2: PathPair | None
    objective: float | None
    case: str

    @property
    def feasible(self) -> bool:
        return self.case != INFEASIBLE

    def to_json(self) -> dict:
        conns = [c.to_json() for c in (self.c1, self.c2) if c is not None]
        return {"case": self.case, "feasible": self.feasible,
                "objective": self.objective, "connections": conns}


def infeasible(c1: PathPair | None = None) -> TwoCPSolution:
    return TwoCPSolution(c1, None, None, INFEASIBLE)


def _solution(net: Network, c1: PathPair, c2: PathPair, case: str) -> TwoCPSolution:
    _, obj = preemption_oracle(net, (c1, c2))
    return TwoCPSolution(c1, c2, obj, case)


def _segment(net: Network, path, start: int, a: int, b: int):
    """Links of ``path`` (walked from ``start``) between its visits of a and b."""
    nodes = walk_nodes(net, path, start)
    i, j = nodes.index(a), nodes.index(b)
    if i <= j:
        return tuple(path[i:j])
    return tuple(reversed(path[j:i]))


def _split(net: Network, path, start: int, a: int, b: int):
    """Prefix of ``path`` up to node a and suffix from node b onward."""
    nodes = walk_nodes(net, path, start)
    i, j = nodes.index(a), nodes.index(b)
    return tuple(path[:i]), tuple(path[j:])


def _better(sol: TwoCPSolution, best: TwoCPSolution | None) -> bool:
    if not sol.feasible:
        return False
    return best is None or not best.feasible or sol.objective < best.objective - TIE_TOL


# --------------------------------------------------------------------------
# exact solver with both first-connection paths fixed

def sca(net: Network, s1: int, s2: int, t2: int, p1, b1) -> TwoCPSolution:
    """Route (s2, t2) optimally given the first connection's disjoint p1 and b1."""
    c1 = PathPair(p1, b1)
    everything = frozenset(range(net.m))
    g1 = everything - set(p1)
    g2 = g1 - set(b1)
    if connectivity(net, g2, s2, t2):
        # steps 1-3: the shared-backup case is reachable and is optimal
        pair, _ = tunable_pair(net, s2, t2, g2)
        d1 = decompose_d1(net, s2, t2, g2)
        on_b1 = set(walk_nodes(net, b1, s1))
        touching = [k for k, comp in enumerate(d1.components) if comp & on_b1]
        if not touching or touching[0] == touching[-1]:
            return _solution(net, c1, pair, SHARED)
        i, j = touching[0], touching[-1]
        xi = min(d1.components[i] & on_b1)
        xj = min(d1.components[j] & on_b1)
        ui, vj = d1.entry(i), d1.exit(j)
        region = set(d1.bridges[i:j])
        for k in range(i, j + 1):
            region |= d1.component_links[k]
        fict = net.m
        grown = net.with_links([Link(xi, xj, 0.0)])
        pa, pb = disjoint_pair(grown, grown.pf, ui, vj, region | {fict})
        if fict in pa:
            pa, pb = pb, pa
        k = pb.index(fict)
        nodes_b = walk_nodes(grown, pb, ui)
        enter, leave = nodes_b[k], nodes_b[k + 1]
        mid = pb[:k] + _segment(net, b1, s1, enter, leave) + pb[k + 1:]
        pre_p, suf_p = _split(net, pair.primary, s2, ui, vj)
        pre_b, suf_b = _split(net, pair.backup, s2, ui, vj)
        p2 = strip_loops(net, pre_p + tuple(pa) + suf_p, s2)
        b2 = strip_loops(net, pre_b + mid + suf_b, s2)
        return _solution(net, c1, PathPair(p2, b2), SHARED)
    # step 4: p2 must meet b1
    if not connectivity(net, g1, s2, t2):
        return infeasible(c1)
    pair, _ = tunable_pair(net, s2, t2, g1)
    unavoidable = _solution(net, c1, pair, UNAVOIDABLE)
    # step 5: p2 and b2 chosen independently
    p2 = shortest_path(net, net.pf, s2, t2, g1)
    on_p1 = set(p1)
    w = [net.pf[e] if e in on_p1 else 0.0 for e in range(net.m)]
    b2 = shortest_path(net, w, s2, t2, everything - set(b1))
    if b2 is not None:
        overlapped = _solution(net, c1, PathPair(p2, b2), OVERLAPPED)
        # step 6
        if overlapped.objective < unavoidable.objective - TIE_TOL:
            return overlapped
    return unavoidable


def solve_2cp1_sca(inst: TwoCPInstance) -> TwoCPSolution:
    if inst.p1 is None or inst.b1 is None:
        raise InputError("problem 2cp1 needs both p1 and b1")
    return sca(inst.net, inst.s1, inst.s2, inst.t2, inst.p1, inst.b1)


# --------------------------------------------------------------------------
# brute force

def _guard(net: Network) -> None:
    if net.n > BRUTE_NODE_GUARD:
        raise ResourceGuardError(f"brute force limited to {BRUTE_NODE_GUARD} nodes")


def brute_2cp1(inst: TwoCPInstance, cap: int = BRUTE_PAIR_CAP) -> TwoCPSolution:
    """Minimum over every (p2, b2) pair of simple paths, p2 avoiding p1."""
    if inst.p1 is None or inst.b1 is None:
        raise InputError("problem 2cp1 needs both p1 and b1")
    net = inst.net
    _guard(net)
    c1 = PathPair(inst.p1, inst.b1)
    rest = frozenset(range(net.m)) - set(inst.p1)
    p2s = simple_paths(net, inst.s2, inst.t2, rest, limit=cap)
    b2s = simple_paths(net, inst.s2, inst.t2, limit=cap)
    if not p2s:
        return infeasible(c1)
    if len(p2s) * len(b2s) > cap:
        raise ResourceGuardError(f"{len(p2s) * len(b2s)} path pairs exceed the cap of {cap}")
    val, i, j = kernels.best_pair(to_mask(inst.p1), to_mask(inst.b1),
                                  [to_mask(p) for p in p2s], [to_mask(b) for b in b2s],
                                  list(net.pf), TIE_TOL)
    c2 = PathPair(p2s[i], b2s[j])
    case = case_of(inst.p1, inst.b1, c2.primary, c2.backup) or "unclassified"
    return TwoCPSolution(c1, c2, val, case)


def brute_2cp2(inst: TwoCPInstance, cap: int = BRUTE_PAIR_CAP) -> TwoCPSolution:
    """Exact 2cp2 optimum: every b1 disjoint from p1, each finished by SCA."""
    if inst.p1 is None:
        raise InputError("problem 2cp2 needs p1")
    net = inst.net
    _guard(net)
    rest = frozenset(range(net.m)) - set(inst.p1)
    best = None
    for b1 in simple_paths(net, inst.s1, inst.t1, rest, limit=cap):
        sol = sca(net, inst.s1, inst.s2, inst.t2, inst.p1, b1)
        if _better(sol, best):
            best = sol
    return best if best is not None else infeasible()


def brute_2cp3(inst: TwoCPInstance, cap: int = BRUTE_PAIR_CAP) -> TwoCPSolution:
    """Exact 2cp3 optimum: every disjoint (p1, b1), each finished by SCA."""
    net = inst.net
    _guard(net)
    firsts = simple_paths(net, inst.s1, inst.t1, limit=cap)
    everything = frozenset(range(net.m))
    best = None
    for p1 in firsts:
        for b1 in simple_paths(net, inst.s1, inst.t1, everything - set(p1), limit=cap):
            sol = sca(net, inst.s1, inst.s2, inst.t2, p1, b1)
            if _better(sol, best):
                best = sol
    return best if best is not None else infeasible()


# --------------------------------------------------------------------------
# heuristics with p1 fixed

def complete_2cp2a(net: Network, s1: int, t1: int, s2: int, t2: int, p1) -> TwoCPSolution:
    g1 = frozenset(range(net.m)) - set(p1)
    found = two_path_problem(net, s1, t1, s2, t2, g1, weights=net.pf)
    if found is not None:
        return sca(net, s1, s2, t2, p1, found[0])
    b1 = shortest_path(net, net.pf, s1, t1, g1)
    if b1 is None:
        return infeasible()
    c1 = PathPair(p1, b1)
    got = tunable_pair(net, s2, t2, g1)
    if got is None:
        return infeasible(c1)
    return _solution(net, c1, got[0], UNAVOIDABLE)


def solve_2cp2a(inst: TwoCPInstance) -> TwoCPSolution:
    if inst.p1 is None:
        raise InputError("problem 2cp2 needs p1")
    return complete_2cp2a(inst.net, inst.s1, inst.t1, inst.s2, inst.t2, inst.p1)


def best_b2(net: Network, s2: int, t2: int, p1, b1, p2) -> tuple[int, ...] | None:
    """Backup for the second connection minimising its failure, other paths fixed.

    Splitting on whether b2 meets b1 and whether it meets p1, each class has
    a shortest-path optimum under simple weights; the best of the three
    candidates below is a global minimum.
    """
    everything = frozenset(range(net.m))
    c1 = PathPair(p1, b1)
    on_p2 = set(p2)
    only_p1 = set(p1) - set(b1)
    w_p2 = [net.pf[e] if e in on_p2 else 0.0 for e in range(net.m)]
    w_p1 = [net.pf[e] if e in only_p1 else 0.0 for e in range(net.m)]
    cands = [
        shortest_path(net, w_p2, s2, t2, everything - set(p1) - set(b1)),
        shortest_path(net, w_p2, s2, t2, everything - set(p1)),
        shortest_path(net, w_p1, s2, t2, everything - set(b1)),
    ]
    best, best_val = None, None
    for b2 in cands:
        if b2 is None:
            continue
        _, val = preemption_oracle(net, (c1, PathPair(p2, b2)))
        if best is None or val < best_val - TIE_TOL:
            best, best_val = b2, val
    return best


def solve_2cp2n(inst: TwoCPInstance) -> TwoCPSolution:
    """Greedy baseline: shortest p2 first, then b1, then the best b2."""
    if inst.p1 is None:
        raise InputError("problem 2cp2 needs p1")
    net = inst.net
    g1 = frozenset(range(net.m)) - set(inst.p1)
    p2 = shortest_path(net, net.pf, inst.s2, inst.t2, g1)
    if p2 is None:
        b1 = shortest_path(net, net.pf, inst.s1, inst.t1, g1)
        return infeasible(None if b1 is None else PathPair(inst.p1, b1))
    b1 = shortest_path(net, net.pf, inst.s1, inst.t1, g1 - set(p2))
    if b1 is None:
        b1 = shortest_path(net, net.pf, inst.s1, inst.t1, g1)
    if b1 is None:
        return infeasible()
    b2 = best_b2(net, inst.s2, inst.t2, inst.p1, b1, p2)
    c1, c2 = PathPair(inst.p1, b1), PathPair(p2, b2)
    return _solution(net, c1, c2, case_of(inst.p1, b1, p2, b2) or "unclassified")


# --------------------------------------------------------------------------
# heuristics choosing the whole first connection

def cut_weights_around(net: Network, s: int, level: int = DEFAULT_CUT_LEVEL) -> list[float]:
    """Small-cut weights of the component holding ``s``; other links weigh 0."""
    nodes = sorted(reachable(net, s))
    if len(nodes) == net.n:
        return small_cut_weights(net, level)
    comp = component_links(net, s)
    sub, old = net.restricted(comp)
    relabel = {v: i for i, v in enumerate(nodes)}
    compact = Network(len(nodes), tuple(Link(relabel[ln.u], relabel[ln.v], ln.pf, ln.capacity)
                                        for ln in sub.links))
    out = [0.0] * net.m
    for i, w in enumerate(small_cut_weights(compact, level)):
        out[old[i]] = w
    return out


def _solve_pair_first(inst: TwoCPInstance, weights) -> TwoCPSolution:
    net = inst.net
    found = disjoint_pair(net, weights, inst.s1, inst.t1)
    if found is None:
        return infeasible()
    p1, b1 = found
    return sca(net, inst.s1, inst.s2, inst.t2, p1, b1)


def solve_2cp3a(inst: TwoCPInstance, cut_level: int = DEFAULT_CUT_LEVEL) -> TwoCPSolution:
    """First connection: min small-cut-weight disjoint pair; second: SCA."""
    return _solve_pair_first(inst, cut_weights_around(inst.net, inst.s1, cut_level))


def solve_2cp3n(inst: TwoCPInstance) -> TwoCPSolution:
    """As ``solve_2cp3a`` but weighting links by failure probability."""
    return _solve_pair_first(inst, inst.net.pf)


def solve_2cp3b(inst: TwoCPInstance, cut_level: int = DEFAULT_CUT_LEVEL,
                use_pf: bool = False) -> TwoCPSolution:
    """p1 as a shortest path, then the rest by ``complete_2cp2a``.

    Links weigh their small-cut weight, or their failure probability when
    ``use_pf`` is set.
    """
    net = inst.net
    w = net.pf if use_pf else cut_weights_around(net, inst.s1, cut_level)
    p1 = shortest_path(net, w, inst.s1, inst.t1)
    if p1 is None:
        return infeasible()
    return complete_2cp2a(net, inst.s1, inst.t1, inst.s2, inst.t2, p1)


SOLVERS_2CP2 = {"2a": solve_2cp2a, "2n": solve_2cp2n, "bf": brute_2cp2}
SOLVERS_2CP3 = {"3a": solve_2cp3a, "3b": solve_2cp3b, "3n": solve_2cp3n,
                "3n2": lambda inst: solve_2cp3b(inst, use_pf=True), "bf": brute_2cp3}
