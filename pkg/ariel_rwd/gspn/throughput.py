"""
Steady-state transition throughputs.
"""

import numpy as np

from ariel_rwd.gspn.chain import TangibleChain


def throughputs(chain: TangibleChain, pi: np.ndarray) -> dict[str, float]:
    """
    Expected firings per time unit of every transition, in net order.

    Timed transitions: sum over tangible states of pi(s) times the
    effective rate. Immediate transitions: the firing frequencies collected
    during vanishing elimination, weighted by pi. Transitions that never
    fire report 0.0.
    """
    net = chain.graph.net
    result: dict[str, float] = {}
    for t, transition in enumerate(net.transitions):
        source = chain.immediate_rate if transition.is_immediate else chain.timed_rate
        vector = source.get(t)
        result[transition.name] = float(pi @ vector) if vector is not None else 0.0
    return result


def place_flow_balance(chain: TangibleChain, flows: dict[str, float]) -> dict[str, float]:
    """Token inflow minus outflow per place; zero at steady state."""
    net = chain.graph.net
    incidence = net.incidence()
    vector = np.array([flows[t.name] for t in net.transitions])
    balance = incidence @ vector
    return {p.name: float(balance[i]) for i, p in enumerate(net.places)}
