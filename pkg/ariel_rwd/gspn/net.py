"""
Generalized stochastic Petri nets: structure, markings, enabling and firing.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ariel_rwd.gspn.errors import NetError

Marking = tuple[int, ...]


class Server(str, Enum):
    SINGLE = "single"
    INFINITE = "infinite"


class ArcKind(str, Enum):
    INPUT = "input"          # place -> transition
    OUTPUT = "output"        # transition -> place
    INHIBITOR = "inhibitor"  # place -o transition


@dataclass(frozen=True)
class Place:
    name: str
    initial: int = 0


@dataclass(frozen=True)
class Timed:
    rate: float
    server: Server = Server.INFINITE


@dataclass(frozen=True)
class Immediate:
    weight: float = 1.0
    priority: int = 1


@dataclass(frozen=True)
class Transition:
    name: str
    kind: Timed | Immediate

    @property
    def is_immediate(self) -> bool:
        return isinstance(self.kind, Immediate)


@dataclass(frozen=True)
class Arc:
    place: str
    transition: str
    multiplicity: int = 1
    kind: ArcKind = ArcKind.INPUT

    @property
    def source(self) -> str:
        return self.transition if self.kind is ArcKind.OUTPUT else self.place

    @property
    def target(self) -> str:
        return self.place if self.kind is ArcKind.OUTPUT else self.transition


class PetriNet:
    """
    An immutable GSPN.

    Arc multiplicities are kept as dense transition x place matrices:
    `pre` (input), `post` (output) and `inhibitor` (0 means no arc).
    """

    def __init__(self, places: list[Place], transitions: list[Transition], arcs: list[Arc]):
        self.places = tuple(places)
        self.transitions = tuple(transitions)
        self.arcs = tuple(arcs)
        self._validate()

        self.place_index = {p.name: i for i, p in enumerate(self.places)}
        self.transition_index = {t.name: i for i, t in enumerate(self.transitions)}

        shape = (len(self.transitions), len(self.places))
        self.pre = np.zeros(shape, dtype=np.int64)
        self.post = np.zeros(shape, dtype=np.int64)
        self.inhibitor = np.zeros(shape, dtype=np.int64)
        for arc in self.arcs:
            t, p = self.transition_index[arc.transition], self.place_index[arc.place]
            matrix = {ArcKind.INPUT: self.pre, ArcKind.OUTPUT: self.post, ArcKind.INHIBITOR: self.inhibitor}[arc.kind]
            matrix[t, p] = arc.multiplicity

        self._inputs = [tuple((int(p), int(self.pre[t, p])) for p in np.flatnonzero(self.pre[t])) for t in range(shape[0])]
        self._inhibitors = [
            tuple((int(p), int(self.inhibitor[t, p])) for p in np.flatnonzero(self.inhibitor[t])) for t in range(shape[0])
        ]
        self._delta = [tuple(int(x) for x in self.post[t] - self.pre[t]) for t in range(shape[0])]

    def _validate(self) -> None:
        place_names = [p.name for p in self.places]
        transition_names = [t.name for t in self.transitions]
        for kind, names in (("place", place_names), ("transition", transition_names)):
            seen: set[str] = set()
            for name in names:
                if name in seen:
                    raise NetError(f"duplicate {kind} name '{name}'")
                seen.add(name)
        if set(place_names) & set(transition_names):
            raise NetError(f"names shared by places and transitions: {sorted(set(place_names) & set(transition_names))}")

        for p in self.places:
            if p.initial < 0:
                raise NetError(f"place '{p.name}' has a negative initial marking")
        for t in self.transitions:
            if isinstance(t.kind, Timed) and not t.kind.rate > 0:
                raise NetError(f"timed transition '{t.name}' needs a positive rate")
            if isinstance(t.kind, Immediate):
                if not t.kind.weight > 0:
                    raise NetError(f"immediate transition '{t.name}' needs a positive weight")
                if t.kind.priority < 1:
                    raise NetError(f"immediate transition '{t.name}' needs a priority of at least 1")

        places, transitions = set(place_names), set(transition_names)
        seen_arcs: set[tuple[str, str, ArcKind]] = set()
        for arc in self.arcs:
            if arc.place not in places or arc.transition not in transitions:
                raise NetError(f"arc {arc.source} -> {arc.target} must connect a place and a transition")
            if arc.multiplicity < 1:
                raise NetError(f"arc {arc.source} -> {arc.target} needs a multiplicity of at least 1")
            key = (arc.place, arc.transition, arc.kind)
            if key in seen_arcs:
                raise NetError(f"duplicate {arc.kind.value} arc {arc.source} -> {arc.target}")
            seen_arcs.add(key)

    # ------------------------------------------------------------ markings

    @property
    def initial_marking(self) -> Marking:
        return tuple(p.initial for p in self.places)

    def marking_dict(self, marking: Marking) -> dict[str, int]:
        return {p.name: int(marking[i]) for i, p in enumerate(self.places)}

    def format_marking(self, marking: Marking) -> str:
        """Non-empty places only, e.g. "Ap1=1 Wd1=3"."""
        parts = [f"{p.name}={marking[i]}" for i, p in enumerate(self.places) if marking[i]]
        return " ".join(parts) or "(empty)"

    def tokens(self, marking: Marking, place: str) -> int:
        try:
            return int(marking[self.place_index[place]])
        except KeyError:
            raise NetError(f"unknown place '{place}'") from None

    def transition(self, name: str) -> Transition:
        try:
            return self.transitions[self.transition_index[name]]
        except KeyError:
            raise NetError(f"unknown transition '{name}'") from None

    # ------------------------------------------------------------ enabling

    def has_concession(self, t: int, marking: Marking) -> bool:
        """Enabled by its arcs alone, ignoring immediate-transition priority."""
        for p, mult in self._inputs[t]:
            if marking[p] < mult:
                return False
        for p, mult in self._inhibitors[t]:
            if marking[p] >= mult:
                return False
        return True

    def enabling_degree(self, t: int, marking: Marking) -> int:
        if not self.has_concession(t, marking):
            return 0
        if not self._inputs[t]:
            return 1
        return min(marking[p] // mult for p, mult in self._inputs[t])

    def enabled(self, marking: Marking) -> tuple[int, ...]:
        """
        Indices of the transitions that may fire in `marking`.

        When an immediate transition has concession only the enabled
        immediates of the highest priority are returned.
        """
        candidates = [t for t in range(len(self.transitions)) if self.has_concession(t, marking)]
        immediates = [t for t in candidates if self.transitions[t].is_immediate]
        if not immediates:
            return tuple(candidates)
        top = max(self.transitions[t].kind.priority for t in immediates)
        return tuple(t for t in immediates if self.transitions[t].kind.priority == top)

    def is_vanishing(self, marking: Marking) -> bool:
        return any(self.transitions[t].is_immediate for t in self.enabled(marking))

    def effective_rate(self, t: int, marking: Marking) -> float:
        """Rate of a timed transition in `marking`; infinite-server rates scale with the enabling degree."""
        kind = self.transitions[t].kind
        if not isinstance(kind, Timed):
            raise NetError(f"'{self.transitions[t].name}' is not timed")
        degree = self.enabling_degree(t, marking)
        if degree == 0:
            return 0.0
        return kind.rate * (degree if kind.server is Server.INFINITE else 1)

    def fire(self, t: int, marking: Marking) -> Marking:
        return tuple(m + d for m, d in zip(marking, self._delta[t]))

    # ------------------------------------------------------------ structure

    def incidence(self) -> np.ndarray:
        """Place x transition incidence matrix (outputs minus inputs, inhibitors excluded)."""
        return (self.post - self.pre).T.copy()


def enabled(net: PetriNet, marking: Marking) -> frozenset[str]:
    """Names of the transitions that may fire in `marking` (priority rule applied)."""
    return frozenset(net.transitions[t].name for t in net.enabled(marking))


class NetBuilder:
    """Incremental construction of a PetriNet."""

    def __init__(self) -> None:
        self.places: list[Place] = []
        self.transitions: list[Transition] = []
        self.arcs: list[Arc] = []

    def place(self, name: str, initial: int = 0) -> NetBuilder:
        self.places.append(Place(name, initial))
        return self

    def timed(self, name: str, rate: float, server: Server = Server.INFINITE) -> NetBuilder:
        self.transitions.append(Transition(name, Timed(rate, server)))
        return self

    def immediate(self, name: str, weight: float = 1.0, priority: int = 1) -> NetBuilder:
        self.transitions.append(Transition(name, Immediate(weight, priority)))
        return self

    def input(self, place: str, transition: str, multiplicity: int = 1) -> NetBuilder:
        self.arcs.append(Arc(place, transition, multiplicity, ArcKind.INPUT))
        return self

    def output(self, transition: str, place: str, multiplicity: int = 1) -> NetBuilder:
        self.arcs.append(Arc(place, transition, multiplicity, ArcKind.OUTPUT))
        return self

    def inhibitor(self, place: str, transition: str, multiplicity: int = 1) -> NetBuilder:
        self.arcs.append(Arc(place, transition, multiplicity, ArcKind.INHIBITOR))
        return self

    def build(self) -> PetriNet:
        return PetriNet(self.places, self.transitions, self.arcs)
