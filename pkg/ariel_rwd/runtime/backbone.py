"""
Backbone entity-state database and notification handling.
"""

import logging
from collections.abc import Callable, Sequence

from ariel_rwd.ariel.ast import Scope
from ariel_rwd.ariel.compiler import RCode
from ariel_rwd.runtime.interpreter import OnSend, run_rcode

EntityKey = tuple[Scope, int]


class BackboneDB:
    """
    Phases of entities plus the error list.

    Phases are only ever set by error notifications, so an entity is in
    the error list exactly while it has a phase.
    """

    def __init__(self, members_of: Callable[[int], Sequence[int]]):
        self.members_of = members_of
        self.phase: dict[EntityKey, int] = {}
        self.errorlist: set[EntityKey] = set()

    def phase_of(self, scope: Scope, entity: int) -> int | None:
        return self.phase.get((Scope(scope), entity))

    def store(self, scope: Scope, entity: int, phase: int) -> None:
        key = (Scope(scope), entity)
        self.phase[key] = phase
        self.errorlist.add(key)

    def remove(self, scope: Scope, entity: int) -> None:
        """Clear an entity; for a logical, also every member task."""
        keys = [(Scope(scope), entity)]
        if Scope(scope) is Scope.LOGICAL:
            keys.extend((Scope.TASK, m) for m in self.members_of(entity))
        for key in keys:
            self.phase.pop(key, None)
            self.errorlist.discard(key)

    def snapshot(self) -> dict[EntityKey, int]:
        return dict(sorted(self.phase.items()))


def backbone_on_notification(
    db: BackboneDB,
    rcode: RCode,
    scope: Scope,
    entity: int,
    phase: int,
    on_send: OnSend | None = None,
) -> list[int]:
    """
    Store a notification, then run the whole recovery r-code atomically.

    Returns:
        Indices of the clauses that fired
    """
    db.store(scope, entity, phase)
    fired = run_rcode(rcode, db.phase_of, db.members_of, on_send=on_send, on_remove=db.remove)
    if fired:
        logging.debug(f"Notification {scope.name.lower()}:{entity} phase {phase} fired clauses {fired}")
    return fired
