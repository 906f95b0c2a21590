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
from typing import Dict, Iterable, List, Literal

import numpy as np
import scipy.sparse.linalg as spla

from src.application.services.chain_core_service import (
    ChainCoreConfig,
    VectorLike,
    as_vector,
    check_lengths,
    require_positive,
    require_stationary,
    smoothness,
)
from src.domain.errors import IterativeNoConvergence, OutOfRange
from src.domain.models import BoundCheck, GapResult, MarkovChain

logger = logging.getLogger(__name__)


class SpectralConfig:
    DENSE_STATE_LIMIT = ChainCoreConfig.DENSE_STATE_LIMIT
    SVDS_TOLERANCE = 1e-9
    PERIODIC_GAP_THRESHOLD = 1e-10
    BOUND_TOLERANCE = 1e-10


def spectral_gap(
    chain: MarkovChain,
    pi: VectorLike,
    method: Literal["auto", "dense_svd", "iterative"] = "auto",
) -> GapResult:
    """
    L2(pi) spectral gap gamma = 1 - sup ||P f||_{2,pi} / ||f||_{2,pi} over
    mean-zero f.

    The supremum is the top singular value of D^{1/2} P D^{-1/2} restricted to
    the orthogonal complement of sqrt(pi).

    Args:
        chain: Validated chain
        pi: Strictly positive stationary distribution of the chain
        method: "auto" uses a dense SVD up to the dense limit and ARPACK above it

    Returns:
        GapResult with gamma clamped to [0, 1]

    Raises:
        ZeroMassState, NotStationary, IterativeNoConvergence
    """
    pi_v = as_vector(pi)
    check_lengths(chain.n, pi_v)
    require_positive(pi_v)
    require_stationary(chain, pi_v)

    if method == "auto":
        method = "dense_svd" if chain.n <= SpectralConfig.DENSE_STATE_LIMIT else "iterative"
    if method == "iterative" and chain.n <= 2:
        method = "dense_svd"

    sqrt_pi = np.sqrt(pi_v)
    if method == "dense_svd":
        top = _top_singular_value_dense(chain, sqrt_pi)
    else:
        top = _top_singular_value_iterative(chain, sqrt_pi)

    raw_gamma = 1.0 - top
    gamma = min(max(raw_gamma, 0.0), 1.0)
    periodic_suspect = raw_gamma <= SpectralConfig.PERIODIC_GAP_THRESHOLD
    if periodic_suspect:
        logger.warning(
            f"Spectral gap is numerically zero (raw {raw_gamma:.3e}); chain may be periodic"
        )
    logger.info(f"Spectral gap via {method}: gamma={gamma:.6g}")
    return GapResult(
        gamma=gamma,
        raw_gamma=raw_gamma,
        top_singular_value=top,
        method=method,
        periodic_suspect=periodic_suspect,
    )


def _top_singular_value_dense(chain: MarkovChain, sqrt_pi: np.ndarray) -> float:
    similar = (sqrt_pi[:, None] * chain.to_dense()) / sqrt_pi[None, :]
    projector = np.eye(chain.n) - np.outer(sqrt_pi, sqrt_pi)
    deflated = projector @ similar @ projector
    return float(np.linalg.svd(deflated, compute_uv=False)[0])


def _top_singular_value_iterative(chain: MarkovChain, sqrt_pi: np.ndarray) -> float:
    n = chain.n

    def deflate(v: np.ndarray) -> np.ndarray:
        return v - sqrt_pi * float(sqrt_pi @ v)

    def matvec(g: np.ndarray) -> np.ndarray:
        g = deflate(np.asarray(g, dtype=np.float64).ravel())
        return deflate(sqrt_pi * chain.right_multiply(g / sqrt_pi))

    def rmatvec(h: np.ndarray) -> np.ndarray:
        h = deflate(np.asarray(h, dtype=np.float64).ravel())
        return deflate(chain.left_multiply(h * sqrt_pi) / sqrt_pi)

    operator = spla.LinearOperator(
        shape=(n, n), matvec=matvec, rmatvec=rmatvec, dtype=np.float64
    )

    start = deflate(np.full(n, 1.0 / math.sqrt(n)))
    if np.linalg.norm(start) < 1e-8:
        # Uniform pi makes the all-ones start vanish; fall back to a centered ramp.
        start = deflate(np.arange(n, dtype=np.float64) - (n - 1) / 2.0)
    start /= np.linalg.norm(start)

    try:
        values = spla.svds(
            operator,
            k=1,
            tol=SpectralConfig.SVDS_TOLERANCE,
            v0=start,
            which="LM",
            return_singular_vectors=False,
        )
    except spla.ArpackNoConvergence as e:
        logger.error(f"ARPACK did not converge on the deflated operator: {e}")
        raise IterativeNoConvergence(str(e))
    return float(np.max(values))


def _evolve(chain: MarkovChain, start: np.ndarray, t_values: List[int]) -> Dict[int, np.ndarray]:
    """start P^t for every requested t, advancing one step at a time."""
    for t in t_values:
        if t < 0:
            raise OutOfRange("t", t, "[0, inf)")
    states: Dict[int, np.ndarray] = {}
    current, v = 0, start.copy()
    for t in sorted(set(t_values)):
        while current < t:
            v = chain.left_multiply(v)
            current += 1
        states[t] = v
    return states


def check_mixing_bound(
    chain: MarkovChain,
    pi: VectorLike,
    mu: VectorLike,
    gamma: float,
    t_values: Iterable[int],
) -> List[BoundCheck]:
    """
    ||pi - mu P^t||_1 against (1 - gamma)^t sqrt(2 ||d mu / d pi||_inf).

    gamma must not exceed the chain's spectral gap (plus 1e-10).
    """
    if not 0.0 <= gamma <= 1.0:
        raise OutOfRange("gamma", gamma, "[0, 1]")
    pi_v, mu_v = as_vector(pi), as_vector(mu)
    check_lengths(chain.n, pi_v, mu_v)
    coefficient = math.sqrt(2.0 * smoothness(mu_v, pi_v, math.inf))

    ts = [int(t) for t in t_values]
    evolved = _evolve(chain, mu_v, ts)
    checks = []
    for t in ts:
        lhs = float(np.abs(pi_v - evolved[t]).sum())
        rhs = (1.0 - gamma) ** t * coefficient
        checks.append(
            BoundCheck(
                lhs=lhs, rhs=rhs, holds=lhs <= rhs + SpectralConfig.BOUND_TOLERANCE, t=t
            )
        )
    return checks


def check_coupling_bound(
    chain: MarkovChain, pi: VectorLike, nu: VectorLike, t_values: Iterable[int]
) -> List[BoundCheck]:
    """||pi - nu||_1 against ||pi - nu P^t||_1 + t ||nu - nu P||_1 for stationary pi."""
    pi_v, nu_v = as_vector(pi), as_vector(nu)
    check_lengths(chain.n, pi_v, nu_v)
    require_stationary(chain, pi_v)

    lhs = float(np.abs(pi_v - nu_v).sum())
    one_step = float(np.abs(nu_v - chain.left_multiply(nu_v)).sum())
    ts = [int(t) for t in t_values]
    evolved = _evolve(chain, nu_v, ts)
    checks = []
    for t in ts:
        rhs = float(np.abs(pi_v - evolved[t]).sum()) + t * one_step
        checks.append(
            BoundCheck(
                lhs=lhs, rhs=rhs, holds=lhs <= rhs + SpectralConfig.BOUND_TOLERANCE, t=t
            )
        )
    return checks
