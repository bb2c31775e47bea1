from collections import deque
from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import null_space

from ariel_rwd.ariel.definitions import load_definitions
from ariel_rwd.gspn.net import PetriNet, Server, Timed

ROOT = Path(__file__).resolve().parent.parent
SAMPLES = ROOT / "samples"
ARIEL = SAMPLES / "ariel"
SCENARIOS = SAMPLES / "scenarios"
NETS = SAMPLES / "nets"


@pytest.fixture()
def defs() -> dict[str, int]:
    return load_definitions(ARIEL / "watchdogs.defs")


@pytest.fixture()
def listing():
    def read(name: str) -> str:
        return (ARIEL / name).read_text(encoding="utf-8")
    return read


def _enabled(net: PetriNet, m: tuple[int, ...]) -> list[int]:
    pre, inh = net.pre, net.inhibitor
    ok = []
    for t in range(len(net.transitions)):
        if np.any(np.asarray(m) < pre[t]):
            continue
        if np.any((inh[t] > 0) & (np.asarray(m) >= inh[t])):
            continue
        ok.append(t)
    imm = [t for t in ok if not isinstance(net.transitions[t].kind, Timed)]
    if imm:
        top = max(net.transitions[t].kind.priority for t in imm)
        return [t for t in imm if net.transitions[t].kind.priority == top]
    return ok


def brute_force_steady_state(net: PetriNet) -> dict[tuple[int, ...], float]:
    """
    Stationary probabilities of the tangible markings, computed with dense
    matrices: Q = U + E (I - P_VV)^-1 P_VT, then the null space of Q^T.
    """
    start = tuple(int(x) for x in net.initial_marking)
    index = {start: 0}
    order = [start]
    queue = deque([start])
    moves: dict[int, list[tuple[int, int]]] = {}
    while queue:
        m = queue.popleft()
        i = index[m]
        moves[i] = []
        for t in _enabled(net, m):
            nxt = tuple(int(x) for x in np.asarray(m) - net.pre[t] + net.post[t])
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            moves[i].append((t, index[nxt]))

    vanishing = [
        i for i, m in enumerate(order) if any(not isinstance(net.transitions[t].kind, Timed) for t in _enabled(net, m))
    ]
    tangible = [i for i in range(len(order)) if i not in set(vanishing)]
    tpos = {s: k for k, s in enumerate(tangible)}
    vpos = {s: k for k, s in enumerate(vanishing)}

    n_t, n_v = len(tangible), len(vanishing)
    u = np.zeros((n_t, n_t))
    e = np.zeros((n_t, n_v))
    p_vv = np.zeros((n_v, n_v))
    p_vt = np.zeros((n_v, n_t))

    for s in tangible:
        m = np.asarray(order[s])
        for t, target in moves[s]:
            kind = net.transitions[t].kind
            inputs = net.pre[t] > 0
            degree = int(np.min(m[inputs] // net.pre[t][inputs])) if inputs.any() else 1
            rate = kind.rate * (degree if kind.server is Server.INFINITE else 1)
            if target in tpos:
                u[tpos[s], tpos[target]] += rate
            else:
                e[tpos[s], vpos[target]] += rate
    for s in vanishing:
        total = sum(net.transitions[t].kind.weight for t, _ in moves[s])
        for t, target in moves[s]:
            p = net.transitions[t].kind.weight / total
            if target in tpos:
                p_vt[vpos[s], tpos[target]] += p
            else:
                p_vv[vpos[s], vpos[target]] += p

    if n_v:
        u = u + e @ np.linalg.solve(np.eye(n_v) - p_vv, p_vt)
    np.fill_diagonal(u, 0.0)
    q = u - np.diag(u.sum(axis=1))

    basis = null_space(q.T)
    assert basis.shape[1] == 1
    pi = basis[:, 0] / basis[:, 0].sum()
    return {order[s]: float(pi[tpos[s]]) for s in tangible}


@pytest.fixture()
def oracle():
    return brute_force_steady_state
