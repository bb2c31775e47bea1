"""
Vanishing-marking elimination: from the reachability graph to a CTMC over
tangible markings.

A timed firing that lands in a vanishing marking is followed through the
vanishing markings (branching by immediate weights) until tangible markings
are reached. The rate is split over those targets by path probability, and
the expected number of firings of each immediate transition along the way
is kept so that immediate throughputs can be reported.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from ariel_rwd.gspn.errors import AnalysisError, VanishingLoop
from ariel_rwd.gspn.net import Marking
from ariel_rwd.gspn.reachability import ReachabilityGraph, StateClass


@dataclass
class TangibleChain:
    """
    CTMC over the tangible markings of a graph.

    `generator` rows sum to zero. `out_mass[i]` is the total timed rate
    leaving tangible state i before elimination and `self_loop[i]` the part
    of it that returns to i through vanishing markings. `timed_rate[t]` and
    `immediate_rate[t]` give, per tangible state, the firing frequency of
    transition t while the chain sits in that state.
    """

    graph: ReachabilityGraph
    states: list[int]
    generator: sparse.csr_matrix
    initial: np.ndarray
    out_mass: np.ndarray
    self_loop: np.ndarray
    timed_rate: dict[int, np.ndarray] = field(default_factory=dict)
    immediate_rate: dict[int, np.ndarray] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def markings(self) -> list[Marking]:
        return [self.graph.markings[s] for s in self.states]

    def dense(self) -> np.ndarray:
        return self.generator.toarray()


def _vanishing_outcomes(graph: ReachabilityGraph, tangible_pos: dict[int, int]):
    """
    For every vanishing state: tangible absorption probabilities and
    expected immediate firings, both as sparse dicts.
    """
    net = graph.net
    absorb: dict[int, dict[int, float]] = {}
    fires: dict[int, dict[int, float]] = {}
    ON_STACK, DONE = 1, 2
    status: dict[int, int] = {}

    def resolve(root: int) -> None:
        # iterative post-order DFS
        stack = [(root, False)]
        while stack:
            state, expanded = stack.pop()
            if expanded:
                edges = graph.out_edges(state)
                total = sum(net.transitions[e.transition].kind.weight for e in edges)
                probs: dict[int, float] = {}
                counts: dict[int, float] = {}
                for e in edges:
                    p = net.transitions[e.transition].kind.weight / total
                    counts[e.transition] = counts.get(e.transition, 0.0) + p
                    if e.target in tangible_pos:
                        j = tangible_pos[e.target]
                        probs[j] = probs.get(j, 0.0) + p
                    else:
                        for j, q in absorb[e.target].items():
                            probs[j] = probs.get(j, 0.0) + p * q
                        for t, c in fires[e.target].items():
                            counts[t] = counts.get(t, 0.0) + p * c
                absorb[state], fires[state] = probs, counts
                status[state] = DONE
                continue

            if status.get(state) == DONE:
                continue
            status[state] = ON_STACK
            stack.append((state, True))
            for e in graph.out_edges(state):
                if e.target in tangible_pos:
                    continue
                mark = status.get(e.target)
                if mark == ON_STACK:
                    raise VanishingLoop(
                        f"vanishing markings form a cycle through "
                        f"{net.format_marking(graph.markings[e.target])}"
                    )
                if mark is None:
                    stack.append((e.target, False))

    for state in graph.states_of(StateClass.VANISHING):
        if status.get(state) != DONE:
            resolve(state)
    return absorb, fires


def eliminate_vanishing(graph: ReachabilityGraph) -> TangibleChain:
    """
    Reduce a reachability graph to its tangible CTMC.

    Args:
        graph: A finite reachability graph

    Returns:
        The tangible chain, ordered like the graph's tangible states

    Raises:
        VanishingLoop: If vanishing markings form a cycle
        AnalysisError: If the graph has no tangible marking
    """
    net = graph.net
    states = graph.states_of(StateClass.TANGIBLE)
    if not states:
        raise AnalysisError("the net has no tangible marking")
    tangible_pos = {s: i for i, s in enumerate(states)}
    n = len(states)

    absorb, fires = _vanishing_outcomes(graph, tangible_pos)

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    out_mass = np.zeros(n)
    self_loop = np.zeros(n)
    timed_rate: dict[int, np.ndarray] = {}
    immediate_rate: dict[int, np.ndarray] = {}

    for i, state in enumerate(states):
        marking = graph.markings[state]
        for e in graph.out_edges(state):
            rate = net.effective_rate(e.transition, marking)
            timed_rate.setdefault(e.transition, np.zeros(n))[i] += rate
            out_mass[i] += rate

            if e.target in tangible_pos:
                targets = {tangible_pos[e.target]: 1.0}
            else:
                targets = absorb[e.target]
                for t, count in fires[e.target].items():
                    immediate_rate.setdefault(t, np.zeros(n))[i] += rate * count

            for j, p in targets.items():
                if j == i:
                    self_loop[i] += rate * p
                else:
                    rows.append(i)
                    cols.append(j)
                    vals.append(rate * p)

    diagonal = self_loop - out_mass
    rows.extend(range(n))
    cols.extend(range(n))
    vals.extend(diagonal.tolist())
    generator = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))

    initial = np.zeros(n)
    if graph.initial in tangible_pos:
        initial[tangible_pos[graph.initial]] = 1.0
    else:
        for j, p in absorb[graph.initial].items():
            initial[j] += p

    logging.debug(f"Eliminated {len(graph) - n} vanishing markings, {n} tangible states remain")
    return TangibleChain(graph, states, generator, initial, out_mass, self_loop, timed_rate, immediate_rate)
