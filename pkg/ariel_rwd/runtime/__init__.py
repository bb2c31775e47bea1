"""
Discrete-event runtime: watchdogs, Backbone database, recovery interpreter,
fault injection and dependability metrics.
"""

from ariel_rwd.runtime.errors import ScenarioError
from ariel_rwd.runtime.measure import measure_policy
from ariel_rwd.runtime.scenario import DelayModel, FaultInjection, FaultKind, SimScenario, load_scenario
from ariel_rwd.runtime.simulator import SimMetrics, SimResult, run

__all__ = [
    "DelayModel",
    "FaultInjection",
    "FaultKind",
    "ScenarioError",
    "SimMetrics",
    "SimResult",
    "SimScenario",
    "load_scenario",
    "measure_policy",
    "run",
]
