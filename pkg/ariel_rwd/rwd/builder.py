"""
Builders for the redundant-watchdog GSPN models.

The application skeleton cycles Ap1 -activity-> ApK -ok-> Ap1 and may halt
(ap_fault, Ap1 -> Ap2). Each of the n watchdog tokens is armed (Wd1),
expired (Wd2) or faulty (Wd3). When `threshold` tokens sit in Wd2 the
alarm fires: `delayed` if the application is still running, `faulty` if it
is halted. Both move the application token to Rst, where the drains return
every watchdog token to Wd1 before `cycle` restarts the application.

`ok_{i}_{j}` fires when exactly i watchdogs are armed and j have expired
(j below the threshold); it re-arms the expired ones.
"""

import logging
from dataclasses import dataclass, field

from ariel_rwd.gspn.net import NetBuilder, PetriNet
from ariel_rwd.rwd.params import RwdParams

PLACE_ROLES = {
    "Ap1": "application working",
    "ApK": "application kick pending",
    "Ap2": "application halted",
    "Rst": "alarm raised, system recycling",
    "Wd1": "watchdog armed",
    "Wd2": "watchdog expired",
    "Wd3": "watchdog faulty",
}

FAMILIES = (
    "activity",
    "ok",
    "timeout",
    "delayed",
    "faulty",
    "ap_fault",
    "w_fault",
    "w_repair",
    "drain",
    "cycle",
)

ASSUMPTIONS = (
    "delayed and faulty are immediate transitions (priority 2) fired as soon as enough watchdogs have expired",
    "ok is a family ok_i_j matching exactly i armed and j expired watchdogs, with j below the alarm threshold",
    "with faulty watchdogs the ok family re-arms only the surviving ones",
    "timeout and w_fault are disabled while the system recycles",
    "drains return expired and faulty watchdog tokens to Wd1 before cycle restarts the application",
    "faulty watchdogs are also repaired by the timed w_repair transition",
)


@dataclass
class RwdModel:
    net: PetriNet
    params: RwdParams
    places: dict[str, str] = field(default_factory=dict)
    families: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def role_map(self) -> dict[str, object]:
        return {"places": dict(self.places), "transitions": dict(self.families)}

    def family_of(self, transition: str) -> str:
        for family, members in self.families.items():
            if transition in members:
                return family
        raise KeyError(transition)

    def family_throughputs(self, flows: dict[str, float]) -> dict[str, float]:
        """Sum per-transition throughputs over each family, in family order."""
        return {family: float(sum(flows.get(t, 0.0) for t in members)) for family, members in self.families.items()}


def ok_transitions(n: int, threshold: int) -> list[tuple[str, int, int]]:
    """(name, armed, expired) for every member of the ok family."""
    return [(f"ok_{i}_{j}", i, j) for j in range(threshold) for i in range(n - j + 1)]


def build(params: RwdParams) -> RwdModel:
    """
    Build the net for `params`.

    Identical params give identical nets, element order included. With one
    replica every policy yields the same net.
    """
    n, thr = params.n_replicas, params.threshold
    b = NetBuilder()
    b.place("Ap1", 1).place("ApK").place("Ap2").place("Rst")
    b.place("Wd1", n).place("Wd2").place("Wd3")

    b.timed("activity", params.rate_activity)
    b.input("Ap1", "activity").output("activity", "ApK")

    oks = ok_transitions(n, thr)
    for name, armed, expired in oks:
        b.immediate(name)
        b.input("ApK", name).output(name, "Ap1")
        if armed:
            b.input("Wd1", name, armed)
        if expired:
            b.input("Wd2", name, expired)
        if armed + expired:
            b.output(name, "Wd1", armed + expired)
        b.inhibitor("Wd1", name, armed + 1)
        b.inhibitor("Wd2", name, expired + 1)

    b.timed("timeout", params.rate_timeout, params.timeout_server)
    b.input("Wd1", "timeout").output("timeout", "Wd2").inhibitor("Rst", "timeout")

    b.timed("w_fault", params.rate_fault)
    b.input("Wd1", "w_fault").output("w_fault", "Wd3").inhibitor("Rst", "w_fault")

    b.timed("w_repair", params.rate_repair)
    b.input("Wd3", "w_repair").output("w_repair", "Wd1")

    b.timed("ap_fault", params.rate_fault)
    b.input("Ap1", "ap_fault").output("ap_fault", "Ap2")

    for name, app in (("delayed", "Ap1"), ("faulty", "Ap2")):
        b.immediate(name, priority=2)
        b.input(app, name).input("Wd2", name, thr)
        b.output(name, "Rst").output(name, "Wd1", thr)

    for name, source in (("drain_expired", "Wd2"), ("drain_faulty", "Wd3")):
        b.immediate(name)
        b.input("Rst", name).input(source, name)
        b.output(name, "Rst").output(name, "Wd1")

    b.timed("cycle", params.rate_cycle)
    b.input("Rst", "cycle").output("cycle", "Ap1")

    families = {
        "activity": ("activity",),
        "ok": tuple(name for name, _, _ in oks),
        "timeout": ("timeout",),
        "delayed": ("delayed",),
        "faulty": ("faulty",),
        "ap_fault": ("ap_fault",),
        "w_fault": ("w_fault",),
        "w_repair": ("w_repair",),
        "drain": ("drain_expired", "drain_faulty"),
        "cycle": ("cycle",),
    }
    net = b.build()
    logging.debug(
        f"Built RWD net policy={params.policy} n={n}: {len(net.places)} places, {len(net.transitions)} transitions"
    )
    return RwdModel(net, params, dict(PLACE_ROLES), families)
