# Copyright (C) 2025 Veel Inc.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program. If not, see <https://www.gnu.org/licenses/>.

import logging
import math
import warnings
from typing import Iterable, List, Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from src.application.services.chain_core_service import (
    ChainCoreConfig,
    VectorLike,
    as_vector,
    check_lengths,
    require_positive,
    require_stationary,
    smoothness,
    stationary,
    validate_chain,
)
from src.domain.errors import (
    NoConvergence,
    OutOfRange,
    SizeMismatch,
    SolveFailure,
    VacuousBoundWarning,
)
from src.domain.models import (
    BoundCheck,
    Dist,
    MarkovChain,
    PageRankConfig,
    PageRankResult,
)
from src.utils.helpers import dual_exponent

logger = logging.getLogger(__name__)


class PageRankSolverConfig:
    """Constants for restart chains and the delta heuristic."""

    DELTA_MIN = 1e-12
    DELTA_MAX = 1.0
    DENSE_STATE_LIMIT = ChainCoreConfig.DENSE_STATE_LIMIT
    BOUND_TOLERANCE = 1e-10
    DENSITY_EXPONENTS = (math.inf, 2.0, 4.0)


def _as_dist(mu: VectorLike) -> Dist:
    return mu if isinstance(mu, Dist) else Dist.from_values(as_vector(mu))


def build_pagerank(
    chain: MarkovChain, config: PageRankConfig, lazy: Optional[bool] = None
) -> MarkovChain:
    """
    P(delta) = (1 - delta) P + delta 1^T mu.

    Args:
        chain: Base chain
        config: Restart distribution and probability
        lazy: Keep the rank-one part implicit; defaults to True for sparse chains

    Returns:
        The restart chain; the input chain itself when delta == 0
    """
    if config.mu.n != chain.n:
        raise SizeMismatch(chain.n, config.mu.n)
    if config.delta == 0.0:
        return chain

    base = chain.explicit_matrix()
    if lazy is None:
        lazy = sp.issparse(base)
    if lazy:
        return MarkovChain(
            n=chain.n, matrix=base, restart=config.mu.values, damping=config.delta
        )

    dense = base.toarray() if sp.issparse(base) else np.asarray(base)
    explicit = (1.0 - config.delta) * dense + config.delta * np.outer(
        np.ones(chain.n), config.mu.values
    )
    return validate_chain(explicit, storage="dense")


def _restart_step(chain: MarkovChain, mu: np.ndarray, delta: float, x: np.ndarray) -> np.ndarray:
    return (1.0 - delta) * chain.left_multiply(x) + delta * float(np.sum(x)) * mu


def _restart_residual(chain: MarkovChain, mu: np.ndarray, delta: float, x: np.ndarray) -> float:
    return float(np.abs(_restart_step(chain, mu, delta, x) - x).sum())


def pagerank_series(
    chain: MarkovChain, mu: VectorLike, delta: float, truncation: int
) -> Dist:
    """
    delta * sum_{t=0}^{T} (1 - delta)^t mu P^t, with the missing tail mass
    (1 - delta)^{T+1} placed on mu P^{T+1}.

    The result is within 2 (1 - delta)^{T+1} of pi_delta in l1.
    """
    if not 0.0 < delta <= 1.0:
        raise OutOfRange("delta", delta, "(0, 1]")
    if truncation < 0:
        raise OutOfRange("truncation", truncation, "[0, inf)")
    mu_v = as_vector(mu)
    check_lengths(chain.n, mu_v)

    v = mu_v.copy()
    acc = np.zeros(chain.n)
    weight = delta
    for _ in range(truncation + 1):
        acc += weight * v
        v = chain.left_multiply(v)
        weight *= 1.0 - delta
    tail = (1.0 - delta) ** (truncation + 1)
    acc += tail * v
    return Dist(values=acc / acc.sum())


def pagerank_stationary(chain: MarkovChain, config: PageRankConfig) -> PageRankResult:
    """
    Stationary distribution pi_delta of P(delta).

    "resolvent" solves pi_delta (I - (1 - delta) P) = delta mu; "series" sums
    the von Neumann series until the tail is below tol / 4; "power" iterates
    P(delta) until the l1 change, and the error it implies, are below tol.

    Raises:
        SizeMismatch, SolveFailure, NoConvergence
    """
    mu = config.mu
    if mu.n != chain.n:
        raise SizeMismatch(chain.n, mu.n)
    delta = config.delta

    if delta == 0.0:
        pi = stationary(chain, method="direct")
        residual = _restart_residual(chain, mu.values, 0.0, pi.values)
        return PageRankResult(pi_delta=pi, residual=residual, terms_used=0, solver="stationary")

    solver = config.solver
    if solver == "resolvent" and chain.is_composite and chain.n > PageRankSolverConfig.DENSE_STATE_LIMIT:
        logger.info("Resolvent on a large composite chain; using the series solver")
        solver = "series"

    if solver == "resolvent":
        x = _solve_resolvent(chain, mu.values, delta)
        terms = 0
    elif solver == "series":
        x, terms = _sum_series(chain, mu.values, delta, config.tol, config.max_terms)
    else:
        x, terms = _iterate_power(chain, mu.values, delta, config.tol, config.max_terms)

    x = np.where(x < 0, 0.0, x)
    pi_delta = Dist(values=x / x.sum())
    residual = _restart_residual(chain, mu.values, delta, pi_delta.values)
    if not residual <= config.tol:
        logger.error(f"PageRank {solver} residual {residual:.3e} above tol {config.tol:.1e}")
        raise SolveFailure(
            f"{solver} solver residual {residual!r} exceeds tolerance {config.tol!r}"
        )
    logger.debug(f"PageRank via {solver}: delta={delta:.6g}, residual={residual:.3e}")
    return PageRankResult(
        pi_delta=pi_delta, residual=residual, terms_used=terms, solver=solver
    )


def _solve_resolvent(chain: MarkovChain, mu: np.ndarray, delta: float) -> np.ndarray:
    rhs = delta * mu
    try:
        if chain.is_sparse and not chain.is_composite:
            system = sp.identity(chain.n, format="csc") - (1.0 - delta) * sp.csc_matrix(
                chain.matrix.T
            )
            x = spla.spsolve(system, rhs)
        else:
            system = np.eye(chain.n) - (1.0 - delta) * chain.to_dense().T
            x = np.linalg.solve(system, rhs)
    except (np.linalg.LinAlgError, RuntimeError) as e:
        raise SolveFailure(f"resolvent solve failed: {e}")
    if not np.all(np.isfinite(x)) or not x.sum() > 0:
        raise SolveFailure("resolvent solve produced an invalid vector")
    return x


def _sum_series(
    chain: MarkovChain, mu: np.ndarray, delta: float, tol: float, max_terms: int
) -> tuple[np.ndarray, int]:
    v = mu.copy()
    acc = np.zeros(chain.n)
    weight = delta
    tail = 1.0
    for term in range(1, max_terms + 1):
        acc += weight * v
        v = chain.left_multiply(v)
        weight *= 1.0 - delta
        tail *= 1.0 - delta
        if tail < tol / 4.0:
            return acc + tail * v, term
    logger.error(f"Series did not reach tail {tol / 4:.1e} within {max_terms} terms")
    raise NoConvergence(max_terms, 2.0 * tail)


def _iterate_power(
    chain: MarkovChain, mu: np.ndarray, delta: float, tol: float, max_terms: int
) -> tuple[np.ndarray, int]:
    # P(delta) contracts l1 by (1 - delta), so the error is change * (1 - delta) / delta.
    threshold = tol if delta >= 0.5 else tol * delta / (1.0 - delta)
    x = mu.copy()
    change = math.inf
    for iteration in range(1, max_terms + 1):
        y = _restart_step(chain, mu, delta, x)
        change = float(np.abs(y - x).sum())
        if change <= threshold:
            return x, iteration
        x = y
    raise NoConvergence(max_terms, change)


def tune_delta(
    gamma: float,
    epsilon: float,
    beta: float,
    p: float,
    sup_ratio: float = 1.0,
) -> float:
    """
    Closed-form restart probability

        delta* = sqrt(gamma * eps^(1/q) * max(log(1/eps), 1) * beta
                      / max(log(sup_ratio), 1))

    clamped to [1e-12, 1], where q is the dual exponent of p.

    Raises:
        OutOfRange: gamma outside (0, 1], epsilon outside (0, 1), beta < 1 or
            sup_ratio < 1
        InvalidExponent: p < 1
    """
    if not 0.0 < gamma <= 1.0:
        raise OutOfRange("gamma", gamma, "(0, 1]")
    if not 0.0 < epsilon < 1.0:
        raise OutOfRange("epsilon", epsilon, "(0, 1)")
    if not beta >= 1.0:
        raise OutOfRange("beta", beta, "[1, inf)")
    if not sup_ratio >= 1.0:
        raise OutOfRange("sup_ratio", sup_ratio, "[1, inf)")
    q = dual_exponent(p)
    if math.isinf(q):
        message = "p = 1 gives q = inf; the corruption term no longer shrinks with epsilon"
        logger.warning(message)
        warnings.warn(message, VacuousBoundWarning, stacklevel=2)

    eps_power = epsilon ** (1.0 / q)
    log_guard = max(math.log(1.0 / epsilon), 1.0)
    ratio_guard = max(math.log(sup_ratio), 1.0)
    delta = math.sqrt(gamma * eps_power * log_guard * beta / ratio_guard)
    return min(max(delta, PageRankSolverConfig.DELTA_MIN), PageRankSolverConfig.DELTA_MAX)


def check_pr_close(
    chain: MarkovChain,
    pi: VectorLike,
    mu: VectorLike,
    gamma: float,
    delta: float,
    t_values: Iterable[int],
) -> List[BoundCheck]:
    """
    ||pi - pi_delta||_1 against sqrt(2 ||d mu / d pi||_inf) exp(-t gamma) + 2 delta t.

    Each row compares lhs with the rhs at its own t.
    """
    if not 0.0 <= gamma <= 1.0:
        raise OutOfRange("gamma", gamma, "[0, 1]")
    pi_v = as_vector(pi)
    mu_d = _as_dist(mu)
    check_lengths(chain.n, pi_v, mu_d.values)

    pi_delta = pagerank_stationary(chain, PageRankConfig(mu=mu_d, delta=delta)).pi_delta
    lhs = float(np.abs(pi_v - pi_delta.values).sum())
    coefficient = math.sqrt(2.0 * smoothness(mu_d, pi_v, math.inf))

    checks = []
    for t in (int(t) for t in t_values):
        rhs = coefficient * math.exp(-t * gamma) + 2.0 * delta * t
        checks.append(
            BoundCheck(
                lhs=lhs,
                rhs=rhs,
                holds=lhs <= rhs + PageRankSolverConfig.BOUND_TOLERANCE,
                t=t,
            )
        )
    return checks


def check_density_contraction(
    chain: MarkovChain,
    pi: VectorLike,
    mu: VectorLike,
    delta: float,
    exponents: Sequence[float] = PageRankSolverConfig.DENSITY_EXPONENTS,
) -> List[BoundCheck]:
    """||d pi_delta / d pi||_{p,pi} against ||d mu / d pi||_{p,pi} for each p."""
    pi_v = as_vector(pi)
    mu_d = _as_dist(mu)
    check_lengths(chain.n, pi_v, mu_d.values)
    require_positive(pi_v)
    require_stationary(chain, pi_v)

    pi_delta = pagerank_stationary(chain, PageRankConfig(mu=mu_d, delta=delta)).pi_delta
    checks = []
    for p in exponents:
        lhs = smoothness(pi_delta, pi_v, p)
        rhs = smoothness(mu_d, pi_v, p)
        slack = PageRankSolverConfig.BOUND_TOLERANCE * max(1.0, rhs)
        checks.append(BoundCheck(lhs=lhs, rhs=rhs, holds=lhs <= rhs + slack, p=p))
    return checks


def check_corrupted_close(
    original_pr: MarkovChain,
    corrupted_pr: MarkovChain,
    pi: VectorLike,
    mu: VectorLike,
    p: float,
    epsilon: float,
    delta: float,
    t_values: Iterable[int],
) -> List[BoundCheck]:
    """
    ||pi_delta - pi~_delta||_1 against 2 exp(-delta t) + 2 eps^(1/q) beta t,
    with beta = ||d mu / d pi||_{p,pi} and pi stationary for the clean chain.
    """
    if not 0.0 < delta <= 1.0:
        raise OutOfRange("delta", delta, "(0, 1]")
    if not epsilon >= 0.0:
        raise OutOfRange("epsilon", epsilon, "[0, inf)")
    if original_pr.n != corrupted_pr.n:
        raise SizeMismatch(original_pr.n, corrupted_pr.n)
    pi_v = as_vector(pi)
    check_lengths(original_pr.n, pi_v)

    beta = smoothness(mu, pi_v, p)
    eps_power = epsilon ** (1.0 / dual_exponent(p))
    pi_delta = stationary(original_pr, method="direct")
    pi_tilde_delta = stationary(corrupted_pr, method="direct")
    lhs = float(np.abs(pi_delta.values - pi_tilde_delta.values).sum())

    checks = []
    for t in (int(t) for t in t_values):
        rhs = 2.0 * math.exp(-delta * t) + 2.0 * eps_power * beta * t
        checks.append(
            BoundCheck(
                lhs=lhs,
                rhs=rhs,
                holds=lhs <= rhs + PageRankSolverConfig.BOUND_TOLERANCE,
                t=t,
                p=p,
            )
        )
    return checks
