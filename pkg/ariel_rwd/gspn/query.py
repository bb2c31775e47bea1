"""
Reachability queries over a graph's markings and enabled sets.
"""

from collections import deque
from collections.abc import Callable, Iterable
from dataclasses import dataclass

from ariel_rwd.gspn.errors import NetError
from ariel_rwd.gspn.reachability import ReachabilityGraph, StateClass

# predicate(marking as {place: tokens}, names of enabled transitions)
Predicate = Callable[[dict[str, int], frozenset[str]], bool]


@dataclass(frozen=True)
class QueryResult:
    """
    Outcome of a query.

    For `exists`, `holds` means a witness was found and `state` is it.
    For `always`, `holds` means no counterexample exists; otherwise
    `state` is the first counterexample in discovery order.
    """

    holds: bool
    state: int | None = None
    marking: dict[str, int] | None = None


def _class_filter(state_class: str | StateClass | None) -> StateClass | None:
    if state_class in (None, "all"):
        return None
    return StateClass(state_class)


def exists(graph: ReachabilityGraph, predicate: Predicate, state_class: str | None = None) -> QueryResult:
    net = graph.net
    for state in graph.states_of(_class_filter(state_class)):
        marking = net.marking_dict(graph.markings[state])
        if predicate(marking, graph.enabled_names(state)):
            return QueryResult(True, state, marking)
    return QueryResult(False)


def always(graph: ReachabilityGraph, predicate: Predicate, state_class: str | None = None) -> QueryResult:
    counter = exists(graph, lambda m, e: not predicate(m, e), state_class)
    return QueryResult(not counter.holds, counter.state, counter.marking)


def query(
    graph: ReachabilityGraph,
    predicate: Predicate,
    mode: str = "exists",
    state_class: str | None = None,
) -> QueryResult:
    """Evaluate `predicate` in "exists" or "always" mode over one state class (or all states)."""
    if mode == "exists":
        return exists(graph, predicate, state_class)
    if mode == "always":
        return always(graph, predicate, state_class)
    raise ValueError(f"unknown query mode '{mode}'")


def _check_names(graph: ReachabilityGraph, places: Iterable[str] = (), transitions: Iterable[str] = ()) -> None:
    net = graph.net
    for place in places:
        if place not in net.place_index:
            raise NetError(f"unknown place '{place}'")
    for transition in transitions:
        if transition not in net.transition_index:
            raise NetError(f"unknown transition '{transition}'")


def always_zero(graph: ReachabilityGraph, place: str, state_class: str | None = "tangible") -> QueryResult:
    """always(place = 0) over the given state class."""
    _check_names(graph, places=[place])
    return always(graph, lambda m, _: m[place] == 0, state_class)


def exists_enabled(graph: ReachabilityGraph, transitions: Iterable[str], place: str, at_least: int) -> QueryResult:
    """exists(state where one of `transitions` can fire and place >= at_least)."""
    wanted = frozenset(transitions)
    _check_names(graph, places=[place], transitions=wanted)
    return exists(graph, lambda m, enabled: bool(enabled & wanted) and m[place] >= at_least)


def never_enabled_from(
    graph: ReachabilityGraph,
    transitions: Iterable[str],
    place: str,
    at_least: int,
) -> QueryResult:
    """
    From every state with place >= at_least, following only states that keep
    place >= at_least, none of `transitions` can fire.

    Returns a counterexample state when one is reached.
    """
    wanted = frozenset(transitions)
    _check_names(graph, places=[place], transitions=wanted)
    net = graph.net
    p = net.place_index[place]

    starts = [s for s, m in enumerate(graph.markings) if m[p] >= at_least]
    seen = set(starts)
    queue = deque(starts)
    while queue:
        state = queue.popleft()
        if graph.enabled_names(state) & wanted:
            return QueryResult(False, state, net.marking_dict(graph.markings[state]))
        for edge in graph.out_edges(state):
            if edge.target not in seen and graph.markings[edge.target][p] >= at_least:
                seen.add(edge.target)
                queue.append(edge.target)
    return QueryResult(True)
