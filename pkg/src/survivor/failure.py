"""Failure probabilities under the single-link failure model.

Exactly one link fails; ``pf`` of a link is the probability that it is the
one.  A connection has a primary and a backup path.  When two connections
share the network the higher-priority one may preempt links of the other
while it runs on its backup; ``preemption_oracle`` evaluates that behaviour
link by link and is the reference every closed form is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, InputError
from .graph import PROB_TOL, Network, check_path

SHARED = "shared-backup"
UNAVOIDABLE = "unavoidable-first-backup"
OVERLAPPED = "overlapped"
INFEASIBLE = "infeasible"
CASES = (SHARED, UNAVOIDABLE, OVERLAPPED)


@dataclass(frozen=True)
class Request:
    source: int
    destination: int
    mcfp: float = 0.0
    priority: int = 1

    def __post_init__(self):
        if self.source == self.destination:
            raise InputError("request source equals destination")
        if not 0.0 <= self.mcfp <= 1.0:
            raise InputError(f"mcfp {self.mcfp} not in [0, 1]")


@dataclass(frozen=True)
class PathPair:
    primary: tuple[int, ...]
    backup: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "primary", tuple(self.primary))
        object.__setattr__(self, "backup", tuple(self.backup))

    def to_json(self) -> dict:
        return {"primary": list(self.primary), "backup": list(self.backup)}


Scenario = tuple  # tuple[PathPair, ...] ordered by priority


def validate_normalization(net: Network) -> bool:
    return abs(sum(net.pf) - 1.0) <= PROB_TOL


def probability(net: Network, links) -> float:
    """Total failure probability of a set of links."""
    pf = net.pf
    try:
        return sum(pf[e] for e in sorted(set(links)))
    except IndexError:
        raise InputError("link index out of range") from None


def path_failure_probability(net: Network, path: Sequence[int]) -> float:
    for e in path:
        if not 0 <= e < net.m:
            raise InputError(f"link index {e} out of range")
    return probability(net, path)


def single_connection_failure(net: Network, pair: PathPair, s: int | None = None,
                              t: int | None = None) -> float:
    """Probability that the failed link lies on both paths of the pair."""
    if s is not None and t is not None:
        check_path(net, pair.primary, s, t)
        check_path(net, pair.backup, s, t)
    return probability(net, set(pair.primary) & set(pair.backup))


def _c1_state(e: int, p1: frozenset, b1: frozenset) -> str:
    if e not in p1:
        return "primary"
    if e not in b1:
        return "backup"
    return "down"


def preemption_oracle(net: Network, scen: Sequence[PathPair]) -> tuple[float, float]:
    """Failure probabilities of both connections, failing each link in turn."""
    if len(scen) != 2:
        raise InputError("preemption oracle takes exactly two connections")
    c1, c2 = scen
    p1, b1 = frozenset(c1.primary), frozenset(c1.backup)
    p2, b2 = frozenset(c2.primary), frozenset(c2.backup)
    for e in p1 | b1 | p2 | b2:
        if not 0 <= e < net.m:
            raise InputError(f"link index {e} out of range")
    if p1 & p2:
        raise InputError("primary paths share a link")
    p2_meets_b1 = bool(p2 & b1)
    b2_meets_b1 = bool(b2 & b1)
    b2_meets_p1 = bool(b2 & p1)
    fail1 = 0.0
    fail2 = 0.0
    for e, ln in enumerate(net.links):
        state = _c1_state(e, p1, b1)
        if state == "down":
            fail1 += ln.pf
        p2_ok = e not in p2 and not (state == "backup" and p2_meets_b1)
        b2_ok = (e not in b2
                 and not (state == "backup" and b2_meets_b1)
                 and not (state == "primary" and b2_meets_p1))
        if not (p2_ok or b2_ok):
            fail2 += ln.pf
    return fail1, fail2


def case_of(p1, b1, p2, b2) -> str | None:
    """Which of the three retained overlap patterns a scenario falls in, if any."""
    p1, b1, p2, b2 = map(frozenset, (p1, b1, p2, b2))
    p1b2 = bool(p1 & b2)
    b1p2 = bool(b1 & p2)
    b1b2 = bool(b1 & b2)
    if not p1b2 and not b1p2:
        return SHARED
    if not p1b2 and b1p2 and b1b2:
        return UNAVOIDABLE
    if p1b2 and b1p2 and not b1b2:
        return OVERLAPPED
    return None


def closed_form_c2(net: Network, scen: Sequence[PathPair]) -> float:
    """Second-connection failure probability from the per-case formulas."""
    if len(scen) != 2:
        raise InputError("closed form takes exactly two connections")
    c1, c2 = scen
    p1, b1 = set(c1.primary), set(c1.backup)
    p2, b2 = set(c2.primary), set(c2.backup)
    if p1 & p2:
        raise InputError("primary paths share a link")
    case = case_of(p1, b1, p2, b2)
    if case == SHARED:
        return probability(net, p2 & b2)
    # the terms cover disjoint link sets; one ordered sum keeps results exact
    if case == UNAVOIDABLE:
        return probability(net, (p2 & b2) | (p1 - b1))
    if case == OVERLAPPED:
        return probability(net, p2 | (p1 & b2))
    raise DomainError("scenario is outside the three retained overlap cases")


class MaskEvaluator:
    """Bitmask form of ``preemption_oracle`` for tight enumeration loops.

    Paths are given as integer bitmasks over link indices.  The second
    connection fails on link e exactly when neither of its paths is usable,
    which reduces to a handful of mask operations per scenario.
    """

    def __init__(self, net: Network):
        self.pf = net.pf
        self.full = (1 << net.m) - 1
        self._cache: dict[int, float] = {}

    def prob(self, mask: int) -> float:
        got = self._cache.get(mask)
        if got is None:
            got = 0.0
            pf = self.pf
            x = mask
            while x:
                low = x & -x
                got += pf[low.bit_length() - 1]
                x ^= low
            if len(self._cache) < 1 << 16:
                self._cache[mask] = got
        return got

    def fail_mask(self, p1: int, b1: int, p2: int, b2: int) -> int:
        full = self.full
        on_backup = p1 & ~b1
        p2_ok = ~p2 & (~on_backup if p2 & b1 else full)
        b2_ok = ~b2 & (~on_backup if b2 & b1 else full) & (p1 if b2 & p1 else full)
        return full & ~(p2_ok | b2_ok)

    def c2(self, p1: int, b1: int, p2: int, b2: int) -> float:
        return self.prob(self.fail_mask(p1, b1, p2, b2))


def to_mask(links) -> int:
    out = 0
    for e in links:
        out |= 1 << e
    return out
