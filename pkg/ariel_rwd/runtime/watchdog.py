"""
Watchdog countdown state.
"""

from dataclasses import dataclass, field


@dataclass
class WatchdogState:
    """
    One watchdog task's countdown.

    The countdown restarts only when every watched task has sent a
    heartbeat since the last restart. `generation` changes on every
    (re)arm so that superseded deadline events can be recognized.
    """

    watchdog_id: int
    watched: frozenset[int]
    timeout: float
    counter_persistent: bool = True
    deadline: float = 0.0
    received_this_cycle: set[int] = field(default_factory=set)
    alive: bool = True
    generation: int = 0

    def arm(self, now: float) -> float:
        self.deadline = now + self.timeout
        self.received_this_cycle.clear()
        self.generation += 1
        return self.deadline

    def receive(self, sender: int, now: float) -> bool:
        """Record a heartbeat; True when it completed the set and restarted the countdown."""
        if not self.alive or sender not in self.watched:
            return False
        self.received_this_cycle.add(sender)
        if self.received_this_cycle == set(self.watched):
            self.arm(now)
            return True
        return False

    def tick(self, now: float) -> bool:
        """
        Deadline reached without the full heartbeat set.

        Returns:
            True when a notification must be sent (the watchdog is alive);
            the countdown is rearmed in that case
        """
        if not self.alive:
            return False
        self.arm(now)
        return True

    def kill(self) -> None:
        self.alive = False

    def revive(self, now: float, keep_counter: bool) -> bool:
        """
        Bring the watchdog back.

        With `keep_counter` the pending deadline survives; otherwise the
        countdown restarts at `now`.

        Returns:
            True when the kept deadline has already passed
        """
        self.alive = True
        if not keep_counter:
            self.arm(now)
            return False
        return self.deadline <= now
