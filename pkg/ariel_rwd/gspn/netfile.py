"""
Net files: TOML documents with `places`, `transitions` and `arcs` sections.

    [places]
    P1 = 1
    P2 = 0

    [transitions.t1]
    kind = "timed"
    rate = 2.0
    server = "infinite"

    [transitions.t2]
    kind = "immediate"
    weight = 1.0
    priority = 1

    [[arcs]]
    from = "P1"
    to = "t1"
    multiplicity = 1
    kind = "normal"

An arc from a place to a transition is an input (or an inhibitor with
`kind = "inhibitor"`); an arc from a transition to a place is an output.
"""

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

import tomli_w

from ariel_rwd.gspn.errors import NetError
from ariel_rwd.gspn.net import Arc, ArcKind, Immediate, PetriNet, Place, Server, Timed, Transition
from ariel_rwd.utils.file_utils import read_text, write_text


def net_to_dict(net: PetriNet) -> dict:
    transitions: dict[str, dict] = {}
    for t in net.transitions:
        if isinstance(t.kind, Timed):
            transitions[t.name] = {"kind": "timed", "rate": float(t.kind.rate), "server": t.kind.server.value}
        else:
            transitions[t.name] = {"kind": "immediate", "weight": float(t.kind.weight), "priority": t.kind.priority}

    arcs = [
        {
            "from": arc.source,
            "to": arc.target,
            "multiplicity": arc.multiplicity,
            "kind": "inhibitor" if arc.kind is ArcKind.INHIBITOR else "normal",
        }
        for arc in net.arcs
    ]
    return {"places": {p.name: p.initial for p in net.places}, "transitions": transitions, "arcs": arcs}


def dumps_net(net: PetriNet) -> str:
    """Serialize a net; identical nets give identical bytes."""
    return tomli_w.dumps(net_to_dict(net))


def net_from_dict(doc: dict) -> PetriNet:
    """
    Build a net from a parsed document.

    Raises:
        NetError: On missing sections, unknown kinds or bad arcs
    """
    try:
        places = [Place(str(name), int(initial)) for name, initial in doc.get("places", {}).items()]
        place_names = {p.name for p in places}

        transitions = []
        for name, entry in doc.get("transitions", {}).items():
            kind = entry.get("kind", "timed")
            if kind == "timed":
                transitions.append(
                    Transition(str(name), Timed(float(entry["rate"]), Server(entry.get("server", "infinite"))))
                )
            elif kind == "immediate":
                transitions.append(
                    Transition(str(name), Immediate(float(entry.get("weight", 1.0)), int(entry.get("priority", 1))))
                )
            else:
                raise NetError(f"transition '{name}': unknown kind '{kind}'")

        arcs = []
        for entry in doc.get("arcs", []):
            source, target = str(entry["from"]), str(entry["to"])
            multiplicity = int(entry.get("multiplicity", 1))
            arc_kind = entry.get("kind", "normal")
            if arc_kind not in ("normal", "inhibitor"):
                raise NetError(f"arc {source} -> {target}: unknown kind '{arc_kind}'")
            if source in place_names:
                kind = ArcKind.INHIBITOR if arc_kind == "inhibitor" else ArcKind.INPUT
                arcs.append(Arc(source, target, multiplicity, kind))
            else:
                if arc_kind == "inhibitor":
                    raise NetError(f"inhibitor arc {source} -> {target} must start at a place")
                arcs.append(Arc(target, source, multiplicity, ArcKind.OUTPUT))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, NetError):
            raise
        raise NetError(f"malformed net document: {e}") from e

    return PetriNet(places, transitions, arcs)


def loads_net(text: str, source_name: str = "<net>") -> PetriNet:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise NetError(f"{source_name}: not valid TOML: {e}") from e
    return net_from_dict(doc)


def load_net(path: str | Path) -> PetriNet:
    logging.info(f"Loading net {path}")
    net = loads_net(read_text(path), source_name=str(path))
    logging.debug(f"Net {path}: {len(net.places)} places, {len(net.transitions)} transitions, {len(net.arcs)} arcs")
    return net


def save_net(net: PetriNet, path: str | Path) -> Path:
    return write_text(path, dumps_net(net))
