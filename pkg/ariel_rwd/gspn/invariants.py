"""
Minimal P-invariants by the Farkas algorithm.

Starting from [C | I] (C the place x transition incidence matrix), each
transition column is cancelled in turn by combining rows with opposite
signs in that column. Rows whose identity part has a non-minimal support
are dropped as they appear, so the survivors are the minimal-support
non-negative invariants.
"""

import logging
from dataclasses import dataclass
from functools import reduce
from math import gcd

from ariel_rwd.gspn.net import Marking, PetriNet


@dataclass(frozen=True)
class PInvariant:
    coefficients: tuple[int, ...]

    @property
    def support_indices(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.coefficients) if c)

    def support(self, net: PetriNet) -> frozenset[str]:
        return frozenset(net.places[i].name for i in self.support_indices)

    def weighted_sum(self, marking: Marking) -> int:
        return sum(c * m for c, m in zip(self.coefficients, marking))

    def format(self, net: PetriNet) -> str:
        """`coef*place + ... = constant` under the initial marking."""
        terms = [f"{c}*{net.places[i].name}" for i, c in enumerate(self.coefficients) if c]
        return f"{' + '.join(terms)} = {self.weighted_sum(net.initial_marking)}"


def _normalize(row: list[int]) -> tuple[int, ...]:
    divisor = reduce(gcd, (abs(x) for x in row if x), 0)
    return tuple(x // divisor for x in row) if divisor > 1 else tuple(row)


def _minimal(rows: list[tuple[int, ...]], n_places: int) -> list[tuple[int, ...]]:
    supports = [frozenset(i for i in range(n_places) if row[-n_places + i]) for row in rows]
    kept: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for row, support in zip(rows, supports):
        if row in seen or any(other < support for other in supports):
            continue
        kept.append(row)
        seen.add(row)
    return kept


def p_invariants(net: PetriNet) -> list[PInvariant]:
    """
    Minimal-support P-invariants of `net`, each with gcd 1.

    Inhibitor arcs do not contribute to the incidence matrix. The result
    is sorted by support (place order), so it is deterministic.
    """
    incidence = net.incidence()
    n_places, n_transitions = incidence.shape
    rows: list[tuple[int, ...]] = [
        tuple(int(x) for x in incidence[p]) + tuple(1 if q == p else 0 for q in range(n_places))
        for p in range(n_places)
    ]

    for column in range(n_transitions):
        zero = [r for r in rows if r[column] == 0]
        positive = [r for r in rows if r[column] > 0]
        negative = [r for r in rows if r[column] < 0]
        combined = []
        for a in positive:
            for b in negative:
                row = [(-b[column]) * x + a[column] * y for x, y in zip(a, b)]
                combined.append(_normalize(row))
        rows = _minimal(zero + combined, n_places)

    invariants = sorted(
        {PInvariant(_normalize(list(r[n_transitions:]))) for r in rows},
        key=lambda inv: (sorted(inv.support_indices), inv.coefficients),
    )
    logging.debug(f"Found {len(invariants)} minimal P-invariants")
    return invariants


def covered_places(net: PetriNet, invariants: list[PInvariant]) -> frozenset[str]:
    """Places in the support of at least one invariant."""
    covered: set[str] = set()
    for inv in invariants:
        covered |= inv.support(net)
    return frozenset(covered)
