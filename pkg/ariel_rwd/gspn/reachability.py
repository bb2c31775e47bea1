"""
Reachability graph construction with tangible / vanishing classification.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from ariel_rwd.gspn.errors import StateSpaceExceeded
from ariel_rwd.gspn.net import Marking, PetriNet


class StateClass(str, Enum):
    TANGIBLE = "tangible"
    VANISHING = "vanishing"


@dataclass(frozen=True)
class Edge:
    source: int
    transition: int
    target: int


@dataclass
class ReachabilityGraph:
    net: PetriNet
    markings: list[Marking] = field(default_factory=list)
    classes: list[StateClass] = field(default_factory=list)
    enabled: list[tuple[int, ...]] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    initial: int = 0

    def __post_init__(self) -> None:
        self._out: dict[int, list[Edge]] = {}
        for edge in self.edges:
            self._out.setdefault(edge.source, []).append(edge)

    def __len__(self) -> int:
        return len(self.markings)

    def out_edges(self, state: int) -> list[Edge]:
        return self._out.get(state, [])

    def states_of(self, state_class: StateClass | None) -> list[int]:
        if state_class is None:
            return list(range(len(self.markings)))
        return [i for i, c in enumerate(self.classes) if c is state_class]

    def enabled_names(self, state: int) -> frozenset[str]:
        return frozenset(self.net.transitions[t].name for t in self.enabled[state])


def reachability(net: PetriNet, cap: int = 100000) -> ReachabilityGraph:
    """
    Breadth-first exploration from the initial marking.

    States are numbered in discovery order; there is one edge per
    (state, enabled transition).

    Args:
        net: The net
        cap: Maximum number of states

    Returns:
        The reachability graph

    Raises:
        StateSpaceExceeded: When more than `cap` states are found
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")

    index: dict[Marking, int] = {}
    markings: list[Marking] = []
    classes: list[StateClass] = []
    enabled_sets: list[tuple[int, ...]] = []
    edges: list[Edge] = []

    def add(marking: Marking) -> int:
        if marking in index:
            return index[marking]
        if len(markings) >= cap:
            raise StateSpaceExceeded(f"more than {cap} reachable markings")
        state = len(markings)
        index[marking] = state
        markings.append(marking)
        enabled = net.enabled(marking)
        enabled_sets.append(enabled)
        vanishing = any(net.transitions[t].is_immediate for t in enabled)
        classes.append(StateClass.VANISHING if vanishing else StateClass.TANGIBLE)
        queue.append(state)
        return state

    queue: deque[int] = deque()
    add(net.initial_marking)
    while queue:
        state = queue.popleft()
        marking = markings[state]
        for t in enabled_sets[state]:
            edges.append(Edge(state, t, add(net.fire(t, marking))))

    graph = ReachabilityGraph(net, markings, classes, enabled_sets, edges, 0)
    logging.debug(
        f"Reachability: {len(markings)} states "
        f"({classes.count(StateClass.TANGIBLE)} tangible), {len(edges)} edges"
    )
    return graph
