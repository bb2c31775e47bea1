"""
Generalized stochastic Petri net engine: nets, reachability, vanishing
elimination, steady state, throughputs, P-invariants and queries.
"""

from ariel_rwd.gspn.analysis import SolverSettings, Solution, solve
from ariel_rwd.gspn.chain import TangibleChain, eliminate_vanishing
from ariel_rwd.gspn.errors import AnalysisError, NetError, NotErgodic, SolverFailure, StateSpaceExceeded, VanishingLoop
from ariel_rwd.gspn.invariants import PInvariant, p_invariants
from ariel_rwd.gspn.net import NetBuilder, PetriNet, enabled
from ariel_rwd.gspn.query import always_zero, exists_enabled, query
from ariel_rwd.gspn.reachability import ReachabilityGraph, StateClass, reachability
from ariel_rwd.gspn.solver import steady_state
from ariel_rwd.gspn.throughput import throughputs

__all__ = [
    "AnalysisError",
    "NetBuilder",
    "NetError",
    "NotErgodic",
    "PInvariant",
    "PetriNet",
    "ReachabilityGraph",
    "SolverFailure",
    "SolverSettings",
    "Solution",
    "StateClass",
    "StateSpaceExceeded",
    "TangibleChain",
    "VanishingLoop",
    "always_zero",
    "eliminate_vanishing",
    "enabled",
    "exists_enabled",
    "p_invariants",
    "query",
    "reachability",
    "solve",
    "steady_state",
    "throughputs",
]
