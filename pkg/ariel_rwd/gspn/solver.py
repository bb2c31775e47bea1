"""
Steady-state solution of a tangible chain.
"""

import logging

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from ariel_rwd.gspn.chain import TangibleChain
from ariel_rwd.gspn.errors import NotErgodic, SolverFailure


def residual(chain: TangibleChain, pi: np.ndarray) -> float:
    """Max-norm of pi Q."""
    return float(np.max(np.abs(chain.generator.T @ pi))) if len(pi) else 0.0


def check_ergodic(chain: TangibleChain) -> None:
    """
    Raises:
        NotErgodic: If the chain has more than one strongly connected component
    """
    n = len(chain)
    if n == 1:
        return
    off_diagonal = chain.generator - sparse.diags(chain.generator.diagonal())
    adjacency = (abs(off_diagonal) > 0).astype(np.int8)
    count, labels = connected_components(adjacency, directed=True, connection="strong")
    if count > 1:
        sizes = np.bincount(labels)
        raise NotErgodic(f"tangible chain has {count} communicating classes (sizes {sorted(sizes.tolist())})")


def _solve_direct(chain: TangibleChain) -> np.ndarray:
    n = len(chain)
    a = chain.dense().T.copy()
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError as e:
        raise SolverFailure(f"direct solve failed: {e}") from e


def _solve_iterative(chain: TangibleChain, tol: float, max_iterations: int) -> np.ndarray:
    """Power iteration on the uniformized chain P = I + Q / lambda."""
    n = len(chain)
    q = chain.generator
    lam = 1.02 * float(np.max(-q.diagonal()))
    if lam <= 0:
        raise SolverFailure("chain has no transitions")
    p_t = (sparse.identity(n, format="csr") + q / lam).T.tocsr()
    q_t = q.T.tocsr()

    pi = chain.initial.copy() if chain.initial.sum() > 0 else np.full(n, 1.0 / n)
    for iteration in range(1, max_iterations + 1):
        pi = p_t @ pi
        pi /= pi.sum()
        if iteration % 50 == 0 and float(np.max(np.abs(q_t @ pi))) <= tol:
            logging.debug(f"Power iteration converged after {iteration} iterations")
            return pi
    raise SolverFailure(f"power iteration did not reach tolerance {tol} in {max_iterations} iterations")


def steady_state(
    chain: TangibleChain,
    tol: float = 1e-10,
    direct_limit: int = 2000,
    max_iterations: int = 200000,
) -> np.ndarray:
    """
    Stationary distribution pi with pi Q = 0 and sum(pi) = 1.

    Chains with at most `direct_limit` states are solved directly with one
    balance equation replaced by the normalization; larger chains use power
    iteration on the uniformized chain.

    Args:
        chain: Tangible chain
        tol: Maximum allowed residual max-norm of pi Q
        direct_limit: Largest state count for the direct solver
        max_iterations: Iteration budget of the iterative solver

    Returns:
        The probability vector, ordered like `chain.states`

    Raises:
        NotErgodic: If the chain is reducible
        SolverFailure: If the residual exceeds `tol`
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    check_ergodic(chain)

    n = len(chain)
    if n == 1:
        pi = np.ones(1)
    elif n <= direct_limit:
        pi = _solve_direct(chain)
    else:
        pi = _solve_iterative(chain, tol, max_iterations)

    if np.any(pi < -tol):
        raise SolverFailure(f"negative probability {pi.min():.3g} in the solution")
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()

    r = residual(chain, pi)
    if r > tol:
        raise SolverFailure(f"residual {r:.3g} exceeds tolerance {tol:.3g}")
    logging.debug(f"Steady state over {n} states, residual {r:.3g}")
    return pi
