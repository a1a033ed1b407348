from __future__ import annotations

import itertools

import numpy as np
import pytest

from conftest import chain_okcp, make_net, nx_connected, nx_paths, random_okcp
from survivor.errors import InputError, ResourceGuardError
from survivor.failure import PathPair
from survivor.graph import is_path, two_edge_connected
from survivor.online import (LinkPartition, admit, backup_sets, brute_2cesb, brute_okcp,
                             enumerate_transitions, reduce_r1, reduce_r2, solve_2cesb,
                             solve_okcp)
from survivor.paths import two_path_problem


def okcp_oracle(net, part, s, t):
    """Some free primary leaves s and t connected over the remaining usable links."""
    usable = part.usable
    return any(nx_connected(net, s, t, usable - set(p)) for p in nx_paths(net, s, t, part.free))


def check_pair(net, part, s, t, pair):
    assert is_path(net, pair.primary, s, t)
    assert is_path(net, pair.backup, s, t)
    assert set(pair.primary) <= part.free
    assert set(pair.backup) <= part.usable
    assert not set(pair.primary) & set(pair.backup)


def crossing_witness():
    """Free links s-a1, the 4-cycle a1 a2 a3 a4, a3-t; backup s-u-a2 and a4-w-t.

    Free plus backup links are two-link-connected, yet the primary a1 -> a3
    and the backup a2 -> a4 cross on the cycle.
    """
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 1), (3, 5), (0, 6), (6, 2), (4, 7), (7, 5)]
    net = make_net(8, edges)
    return net, LinkPartition(range(6), range(6, 10), ())


# --- partition bookkeeping ---------------------------------------------------

def test_partition_validation(diamond):
    with pytest.raises(InputError):
        LinkPartition({0, 1}, {1}, set())
    with pytest.raises(InputError):
        LinkPartition({0}, {1}, set()).check(diamond)
    LinkPartition.all_free(diamond).check(diamond)


def test_admit_moves_links(diamond):
    part = admit(LinkPartition.all_free(diamond), PathPair((0, 1), (2, 3)))
    assert part.primary == {0, 1} and part.backup == {2, 3} and not part.free
    with pytest.raises(InputError):
        admit(part, PathPair((0, 1), (2, 3)))


def test_admit_shares_backup_links(diamond):
    part = LinkPartition({0, 1}, {2, 3}, ())
    after = admit(part, PathPair((0, 1), (2, 3)))
    assert after.backup == {2, 3} and after.primary == {0, 1}


def test_backup_sets_components():
    net = make_net(6, [(0, 1), (1, 2), (3, 4), (4, 5), (2, 3)])
    assert backup_sets(net, {0, 1, 2, 3}) == [frozenset({0, 1}), frozenset({2, 3})]
    assert backup_sets(net, set()) == []


# --- R1 ------------------------------------------------------------------------

def test_r1_bridge_is_infeasible():
    net = make_net(3, [(0, 1), (1, 2)])
    part = LinkPartition({0}, {1}, ())
    assert reduce_r1(net, part, 0, 2) is None
    assert not brute_okcp(net, part, 0, 2).feasible


def test_r1_passes_free_diamond(diamond):
    part = LinkPartition.all_free(diamond)
    assert reduce_r1(diamond, part, 0, 3) == part


def test_r1_is_not_sufficient():
    net, part = crossing_witness()
    assert reduce_r1(net, part, 0, 5) == part
    assert two_edge_connected(net, 0, 5, part.usable)
    assert not solve_okcp(net, part, 0, 5).feasible
    assert not brute_okcp(net, part, 0, 5).feasible
    assert not okcp_oracle(net, part, 0, 5)


def test_r1_never_rejects_feasible():
    rng = np.random.default_rng(61)
    for _ in range(200):
        net, part, s, t, _ = random_okcp(rng, 4, 8)
        if reduce_r1(net, part, s, t) is None:
            assert not okcp_oracle(net, part, s, t)


# --- R2 ------------------------------------------------------------------------

def test_r2_moves_isolated_free_component():
    # s-t ring plus a detached free triangle touching backup link 4
    net = make_net(6, [(0, 1), (1, 2), (2, 0), (3, 4), (2, 3), (4, 5), (5, 3)])
    part = LinkPartition({0, 1, 2, 5, 6}, {4}, {3})
    red = reduce_r2(net, part, 0, 1)
    assert red.free == {0, 1, 2}
    assert {5, 6} <= red.backup | red.primary
    red.check(net)


def test_r2_detached_component_without_backup_goes_primary():
    net = make_net(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    red = reduce_r2(net, LinkPartition.all_free(net), 0, 1)
    assert red.free == {0, 1, 2}
    assert red.primary == {3, 4, 5} and not red.backup


def test_r2_is_idempotent_and_preserves_feasibility():
    rng = np.random.default_rng(62)
    for _ in range(250):
        net, part, s, t, k = random_okcp(rng, 4, 8)
        if reduce_r1(net, part, s, t) is None:
            continue
        red = reduce_r2(net, part, s, t)
        red.check(net)
        assert reduce_r2(net, red, s, t) == red
        assert red.free <= part.free and red.primary >= part.primary
        assert okcp_oracle(net, red, s, t) == okcp_oracle(net, part, s, t)
        assert brute_okcp(net, red, s, t).feasible == brute_okcp(net, part, s, t).feasible
        assert len(backup_sets(net, red.backup)) <= max(k - 1, len(backup_sets(net, part.backup)))


# --- transitions ---------------------------------------------------------------

def brute_transition(net, pairs):
    """A link-disjoint path system for the terminal pairs, by enumeration."""
    options = [nx_paths(net, a, b) for a, b in pairs]
    for combo in itertools.product(*options):
        links = [e for p in combo for e in p]
        if len(links) == len(set(links)):
            return True
    return False


def test_transitions_diamond_without_attachments(diamond):
    got = enumerate_transitions(diamond, 0, 3, 1, 2, set(), 2)
    want = two_path_problem(diamond, 0, 3, 1, 2) is not None
    assert want == brute_transition(diamond, [(0, 3), (1, 2)])
    assert len(got) == int(want)
    assert all(t.leaps == () for t in got)


def test_transitions_crossing_cycle():
    cycle = make_net(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert enumerate_transitions(cycle, 0, 2, 1, 3, {1, 3}, 0) == []
    got = enumerate_transitions(cycle, 0, 2, 1, 3, {1, 3}, 1)
    assert [t.leaps for t in got] == [((1, 3),)]
    assert not brute_transition(cycle, [(0, 2), (1, 3)])
    assert brute_transition(cycle, [(0, 2), (1, 1), (3, 3)])


def test_transitions_match_enumeration():
    rng = np.random.default_rng(63)
    done = 0
    while done < 80:
        net, _, _, _, _ = random_okcp(rng, 4, 7)
        if net.m > 12:
            continue
        done += 1
        s1, t1, s2, t2 = (int(x) for x in rng.choice(net.n, 4, replace=False))
        attach = {int(x) for x in rng.choice(net.n, 2, replace=False)}
        got = enumerate_transitions(net, s1, t1, s2, t2, attach, 1)
        assert all(set(v for leap in t.leaps for v in leap) <= attach for t in got)
        want = []
        for k in range(2):
            for nodes in itertools.permutations(sorted(attach), 2 * k):
                ends = [s2, *nodes, t2]
                pairs = [(s1, t1)] + [(ends[2 * i], ends[2 * i + 1]) for i in range(k + 1)]
                if brute_transition(net, pairs):
                    want.append(tuple(zip(nodes[::2], nodes[1::2])))
        assert [t.leaps for t in got] == want
        for t in got:
            ends = [s2, *(v for leap in t.leaps for v in leap), t2]
            assert is_path(net, t.paths[0], s1, t1)
            for i, p in enumerate(t.paths[1:]):
                assert is_path(net, p, ends[2 * i], ends[2 * i + 1])


def test_zero_leaps_agree_with_two_path_problem():
    rng = np.random.default_rng(64)
    for _ in range(150):
        net, _, _, _, _ = random_okcp(rng, 4, 8)
        s1, t1, s2, t2 = (int(x) for x in rng.choice(net.n, 4, replace=False))
        got = enumerate_transitions(net, s1, t1, s2, t2, set(range(net.n)), 0)
        assert bool(got) == (two_path_problem(net, s1, t1, s2, t2) is not None)


# --- RCA -----------------------------------------------------------------------

def test_okcp_backup_over_backup_links():
    # s=0, a=1, b=2, t=3
    net = make_net(4, [(0, 1), (1, 3), (0, 2), (2, 3)])
    part = LinkPartition({0, 1}, {2, 3}, ())
    res = solve_okcp(net, part, 0, 3)
    assert res.pair == PathPair((0, 1), (2, 3))
    assert brute_okcp(net, part, 0, 3).pair == PathPair((0, 1), (2, 3))


def test_okcp_free_pair(diamond):
    part = LinkPartition.all_free(diamond)
    res = solve_okcp(diamond, part, 0, 3)
    assert res.verdict == "free-pair" and res.max_leaps == 0
    check_pair(diamond, part, 0, 3, res.pair)
    assert brute_okcp(diamond, part, 0, 3).feasible


def test_okcp_disconnected_primary():
    net = make_net(3, [(0, 1), (1, 2)])
    res = solve_okcp(net, LinkPartition({0}, (), {1}), 0, 2)
    assert res.verdict == "disconnected" and not res.feasible


def test_okcp_guards(diamond):
    part = LinkPartition.all_free(diamond)
    with pytest.raises(ResourceGuardError):
        solve_okcp(diamond, part, 0, 3, K=9)
    with pytest.raises(InputError):
        solve_okcp(diamond, part, 0, 0)
    big = make_net(13, [(i, i + 1) for i in range(12)])
    with pytest.raises(ResourceGuardError):
        brute_okcp(big, LinkPartition.all_free(big), 0, 12)


def test_okcp_matches_brute():
    rng = np.random.default_rng(65)
    for _ in range(300):
        net, part, s, t, k = random_okcp(rng)
        got = solve_okcp(net, part, s, t, K=k)
        want = brute_okcp(net, part, s, t)
        assert got.feasible == want.feasible
        if got.feasible:
            check_pair(net, part, s, t, got.pair)
            check_pair(net, part, s, t, want.pair)


def test_okcp_extra_backup_route_resolves_crossing():
    # a backup route from a3 to t lets the backup leave the cycle at a3
    net, part = crossing_witness()
    extra = make_net(9, [(ln.u, ln.v) for ln in net.links] + [(3, 8), (8, 5)])
    part = LinkPartition(part.free, part.backup | {10, 11}, ())
    res = solve_okcp(extra, part, 0, 5)
    assert res.feasible and brute_okcp(extra, part, 0, 5).feasible
    check_pair(extra, part, 0, 5, res.pair)


def test_okcp_matches_brute_on_chains():
    rng = np.random.default_rng(68)
    verdicts = set()
    for _ in range(300):
        net, part, s, t, k = chain_okcp(rng)
        got = solve_okcp(net, part, s, t, K=k)
        verdicts.add(got.verdict)
        assert got.feasible == brute_okcp(net, part, s, t).feasible
        assert got.feasible == okcp_oracle(net, part, s, t)
        if got.feasible:
            check_pair(net, part, s, t, got.pair)
    assert {"combination", "free-pair", "separating-link"} <= verdicts


def test_okcp_backup_needs_a_leap():
    # rings {0..3} (s=3), {4..9}, {10,11,12} (t=10); the backup crosses the
    # middle ring as two free pieces joined by backup link 6-7
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 4),
             (5, 6), (10, 11), (11, 12), (12, 10), (3, 4), (7, 12), (10, 8), (1, 3), (7, 6),
             (5, 2), (5, 3)]
    net = make_net(13, edges)
    part = LinkPartition(range(16), range(16, 21), ())
    res = solve_okcp(net, part, 3, 10)
    assert res.verdict == "combination" and res.max_leaps == 1
    check_pair(net, part, 3, 10, res.pair)
    assert okcp_oracle(net, part, 3, 10)


def test_sequential_admission_keeps_partition_valid():
    rng = np.random.default_rng(66)
    for _ in range(40):
        net, _, _, _, _ = random_okcp(rng, 6, 10)
        part = LinkPartition.all_free(net)
        for _ in range(4):
            s, t = (int(x) for x in rng.choice(net.n, 2, replace=False))
            res = solve_okcp(net, part, s, t)
            assert res.feasible == brute_okcp(net, part, s, t).feasible
            if res.feasible:
                check_pair(net, part, s, t, res.pair)
                part = admit(part, res.pair)
                part.check(net)


# --- 2-CESB ----------------------------------------------------------------------

def cesb_oracle(net, s1, t1, s2, t2):
    everything = set(range(net.m))
    for p1 in nx_paths(net, s1, t1):
        for p2 in nx_paths(net, s2, t2, everything - set(p1)):
            rest = everything - set(p1) - set(p2)
            if nx_connected(net, s1, t1, rest) and nx_connected(net, s2, t2, rest):
                return True
    return False


def check_cesb(net, s1, t1, s2, t2, got):
    c1, c2 = got
    for path, a, b in ((c1.primary, s1, t1), (c1.backup, s1, t1),
                       (c2.primary, s2, t2), (c2.backup, s2, t2)):
        assert is_path(net, path, a, b)
    sets = [set(c1.primary), set(c1.backup), set(c2.primary), set(c2.backup)]
    for i, j in itertools.combinations(range(4), 2):
        if (i, j) != (1, 3):
            assert not sets[i] & sets[j]


def test_2cesb_k4_needs_shared_backups():
    # four disjoint paths need 1 + 2 + 1 + 2 links but K4 has only 6 and
    # the two-link routes collide, so the backups must share a link
    k4 = make_net(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    assert not brute_transition(k4, [(0, 1), (0, 1), (2, 3), (2, 3)])
    got = solve_2cesb(k4, 0, 1, 2, 3)
    assert got is not None and cesb_oracle(k4, 0, 1, 2, 3)
    check_cesb(k4, 0, 1, 2, 3, got)
    assert set(got[0].backup) & set(got[1].backup)


def test_2cesb_four_disjoint_paths():
    # two parallel pairs: no sharing needed
    net = make_net(4, [(0, 1), (0, 1), (2, 3), (2, 3), (1, 2)])
    got = solve_2cesb(net, 0, 1, 2, 3)
    check_cesb(net, 0, 1, 2, 3, got)
    assert not set(got[0].backup) & set(got[1].backup)


def test_2cesb_shared_waist():
    # s1=0 and s2=1 feed x=2; a double waist 2=3 leads to y=3 feeding t1=4 and t2=5
    edges = [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (0, 4), (1, 5)]
    net = make_net(6, edges)
    got = solve_2cesb(net, 0, 4, 1, 5)
    assert got is not None and cesb_oracle(net, 0, 4, 1, 5)
    check_cesb(net, 0, 4, 1, 5, got)
    assert set(got[0].backup) & set(got[1].backup) == {2}


def test_2cesb_separated_pairs():
    net = make_net(4, [(0, 1), (2, 3)])
    assert solve_2cesb(net, 0, 1, 2, 3) is None
    assert brute_2cesb(net, 0, 1, 2, 3) is None


def test_2cesb_matches_enumeration():
    rng = np.random.default_rng(67)
    done = 0
    while done < 80:
        net, _, _, _, _ = random_okcp(rng, 4, 8, 0.3, 0.65)
        if net.m > 16:
            continue
        done += 1
        s1, t1, s2, t2 = (int(x) for x in rng.choice(net.n, 4, replace=False))
        got = solve_2cesb(net, s1, t1, s2, t2)
        assert (got is not None) == cesb_oracle(net, s1, t1, s2, t2)
        assert (got is not None) == (brute_2cesb(net, s1, t1, s2, t2) is not None)
        if got is not None:
            check_cesb(net, s1, t1, s2, t2, got)
