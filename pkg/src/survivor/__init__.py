"""Survivability-aware routing of dependent connections."""

from .errors import DomainError, GenerationError, InputError, ResourceGuardError
from .failure import PathPair, Request, closed_form_c2, preemption_oracle
from .graph import Link, Network
from .kernels import BACKEND
from .online import LinkPartition, solve_2cesb, solve_okcp
from .paths import disjoint_pair, k_disjoint_paths, shortest_path, tunable_pair
from .twocp import TwoCPInstance, TwoCPSolution

__all__ = [
    "BACKEND", "DomainError", "GenerationError", "InputError", "Link", "LinkPartition",
    "Network", "PathPair", "Request", "ResourceGuardError", "TwoCPInstance", "TwoCPSolution",
    "closed_form_c2", "disjoint_pair", "k_disjoint_paths", "preemption_oracle",
    "shortest_path", "solve_2cesb", "solve_okcp", "tunable_pair",
]
