"""Random power-law networks.

Node degrees are drawn independently from P(x) proportional to x^-alpha on
1..n-1 and realised with a configuration-model matching.  Link failure
probabilities are exponential draws normalised to sum to one; each link then
independently lacks capacity with probability ``p_nocap``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import GenerationError, InputError
from .graph import Link, Network

MAX_ATTEMPTS = 100
MATCHINGS_PER_SEQUENCE = 20


@dataclass(frozen=True)
class GenConfig:
    n: int = 12
    alpha: float = 2.1
    beta: float = 100.0  # scale of the unnormalised law; cancels after normalisation
    lam: float = 5.0
    p_nocap: float = 0.15
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise InputError("need at least two nodes")
        if self.alpha <= 1:
            raise InputError("alpha must exceed 1")
        if not 0.0 <= self.p_nocap <= 1.0:
            raise InputError("p_nocap must lie in [0, 1]")
        if self.lam <= 0:
            raise InputError("lambda must be positive")

    def to_json(self) -> dict:
        return asdict(self)


def degree_law(n: int, alpha: float, beta: float = 1.0) -> np.ndarray:
    """Probabilities of degrees 1..n-1.

    ``beta`` cancels in the normalisation and is left out of the arithmetic
    so that it cannot perturb the sampled degrees.
    """
    x = np.arange(1, n, dtype=float)
    w = x ** (-alpha)
    return w / w.sum()


def sample_degrees(rng: np.random.Generator, n: int, alpha: float, beta: float = 1.0) -> np.ndarray:
    return rng.choice(np.arange(1, n), size=n, p=degree_law(n, alpha, beta))


def is_graphical(degrees) -> bool:
    """Erdős–Gallai test for a simple-graph degree sequence."""
    d = sorted((int(x) for x in degrees), reverse=True)
    if sum(d) % 2:
        return False
    n = len(d)
    prefix = 0
    for k in range(1, n + 1):
        prefix += d[k - 1]
        tail = sum(min(x, k) for x in d[k:])
        if prefix > k * (k - 1) + tail:
            return False
    return True


def _match(rng: np.random.Generator, degrees) -> list[tuple[int, int]] | None:
    """Random pairing of stubs in which a pair that would form a loop or a
    parallel link is rejected and redrawn; None on a dead end."""
    left = [int(d) for d in degrees]
    adj = [set() for _ in left]
    edges = []
    while any(left):
        u = max(range(len(left)), key=lambda x: left[x])
        stubs = [v for v in range(len(left)) if v != u and v not in adj[u] for _ in range(left[v])]
        if not stubs:
            return None
        v = stubs[int(rng.integers(len(stubs)))]
        left[u] -= 1
        left[v] -= 1
        adj[u].add(v)
        adj[v].add(u)
        edges.append((min(u, v), max(u, v)))
    return sorted(edges)


def generate(cfg: GenConfig) -> Network:
    """Deterministic power-law network for ``cfg`` (same seed, same network)."""
    rng = np.random.default_rng(cfg.seed)
    edges = None
    for _ in range(MAX_ATTEMPTS):
        degrees = sample_degrees(rng, cfg.n, cfg.alpha, cfg.beta)
        if not is_graphical(degrees):
            continue
        for _ in range(MATCHINGS_PER_SEQUENCE):
            edges = _match(rng, degrees)
            if edges is not None:
                break
        if edges is not None:
            break
    if edges is None:
        raise GenerationError(f"no simple graph realised after {MAX_ATTEMPTS} degree draws")
    raw = rng.exponential(1.0 / cfg.lam, size=len(edges))
    pf = raw / raw.sum()
    nocap = rng.random(len(edges)) < cfg.p_nocap
    links = tuple(Link(u, v, float(p), not bool(c)) for (u, v), p, c in zip(edges, pf, nocap))
    return Network(cfg.n, links, normalized=True)
