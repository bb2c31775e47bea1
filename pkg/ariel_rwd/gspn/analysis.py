"""
The full analytic pipeline: reachability, elimination, steady state, throughputs.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ariel_rwd.config import Config
from ariel_rwd.gspn.chain import TangibleChain, eliminate_vanishing
from ariel_rwd.gspn.net import PetriNet
from ariel_rwd.gspn.reachability import ReachabilityGraph, reachability
from ariel_rwd.gspn.solver import steady_state
from ariel_rwd.gspn.throughput import throughputs


@dataclass(frozen=True)
class SolverSettings:
    tolerance: float = 1e-10
    state_cap: int = 100000
    direct_limit: int = 2000
    max_iterations: int = 200000

    @classmethod
    def from_config(cls, config: Config) -> "SolverSettings":
        return cls(
            tolerance=float(config.get("gspn.tolerance", cls.tolerance)),
            state_cap=int(config.get("gspn.state_cap", cls.state_cap)),
            direct_limit=int(config.get("gspn.direct_solver_limit", cls.direct_limit)),
            max_iterations=int(config.get("gspn.max_iterations", cls.max_iterations)),
        )


@dataclass
class Solution:
    graph: ReachabilityGraph
    chain: TangibleChain
    pi: np.ndarray
    throughputs: dict[str, float]

    def state_probabilities(self) -> list[tuple[int, float]]:
        """(graph state index, probability) for every tangible state."""
        return [(s, float(p)) for s, p in zip(self.chain.states, self.pi)]


def solve(net: PetriNet, settings: SolverSettings | None = None) -> Solution:
    """
    Analyze `net` end to end.

    Raises:
        AnalysisError: From any stage (state cap, vanishing loop, ergodicity, residual)
    """
    settings = settings or SolverSettings()
    graph = reachability(net, settings.state_cap)
    chain = eliminate_vanishing(graph)
    pi = steady_state(chain, settings.tolerance, settings.direct_limit, settings.max_iterations)
    flows = throughputs(chain, pi)
    logging.info(f"Solved net: {len(graph)} states, {len(chain)} tangible")
    return Solution(graph, chain, pi, flows)
