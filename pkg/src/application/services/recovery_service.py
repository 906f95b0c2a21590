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
from typing import List, Optional

import numpy as np

from src.application.services.chain_core_service import (
    VectorLike,
    as_vector,
    check_lengths,
    require_positive,
    tv_distance,
)
from src.application.services.pagerank_service import (
    PageRankSolverConfig,
    pagerank_stationary,
    tune_delta,
)
from src.domain.errors import OutOfRange, VacuousBoundWarning
from src.domain.models import (
    DeltaCandidate,
    Dist,
    MarkovChain,
    PageRankConfig,
    RecoveryDiagnostics,
    RecoveryResult,
    RefineStrategy,
)
from src.utils.helpers import (
    dual_exponent,
    log_spaced_grid,
    minimize_convex_over_integers,
)

logger = logging.getLogger(__name__)


class RecoveryConfig:
    """Search ranges behind the certified bound."""

    DELTA_MIN = PageRankSolverConfig.DELTA_MIN
    DELTA_MAX = 1.0
    T_MAX = 1_000_000
    GRID_SPAN = 10.0
    DEFAULT_GRID_POINTS = 9
    ZERO_CORRUPTION_DELTA = 1e-6
    VACUOUS_THRESHOLD = 1.0


def _validate_inputs(gamma: float, epsilon: float, beta: float, p: float) -> float:
    if not 0.0 < gamma <= 1.0:
        raise OutOfRange("gamma", gamma, "(0, 1]")
    if not 0.0 <= epsilon < 1.0:
        raise OutOfRange("epsilon", epsilon, "[0, 1)")
    if not beta >= 1.0:
        raise OutOfRange("beta", beta, "[1, inf)")
    q = dual_exponent(p)
    if math.isinf(q):
        raise OutOfRange("p", p, "(1, inf]")
    return q


def mixing_coefficient(
    beta: float, p: float, sup_ratio: Optional[float] = None
) -> Optional[float]:
    """
    Constant c with ||pi - pi_delta P^t||_1 <= c exp(-t gamma).

    c = sqrt(2 ||d mu / d pi||_inf), taking sup_ratio when given and beta
    itself when p = inf. Without either, p >= 2 falls back to
    sqrt(beta^2 - 1), which bounds ||d pi_delta / d pi - 1||_{2,pi}.
    None when no constant is available.
    """
    if sup_ratio is not None:
        return math.sqrt(2.0 * sup_ratio)
    if math.isinf(p):
        return math.sqrt(2.0 * beta)
    if p >= 2.0:
        return math.sqrt(max(beta * beta - 1.0, 0.0))
    return None


def evaluate_certified_bound(
    gamma: float,
    epsilon: float,
    beta: float,
    p: float,
    delta: float,
    sup_ratio: Optional[float] = None,
) -> DeltaCandidate:
    """
    Certified bounds at one restart probability.

    pagerank_bias_l1 = min_t c exp(-t gamma) + 2 delta t
    corruption_gap_l1 = min_t 2 exp(-delta t) + 2 eps^(1/q) beta t

    with t over the integers in [0, 1e6]; the TV bound is half their sum.
    """
    q = _validate_inputs(gamma, epsilon, beta, p)
    if not RecoveryConfig.DELTA_MIN <= delta <= RecoveryConfig.DELTA_MAX:
        raise OutOfRange("delta", delta, f"[{RecoveryConfig.DELTA_MIN}, 1]")

    coefficient = mixing_coefficient(beta, p, sup_ratio)
    if coefficient is None:
        bias = 2.0
    else:
        _, bias = minimize_convex_over_integers(
            lambda t: coefficient * math.exp(-t * gamma) + 2.0 * delta * t,
            0,
            RecoveryConfig.T_MAX,
        )

    if epsilon == 0.0:
        # Chains agree on the support of pi_delta, so the gap is its t -> inf limit.
        gap = 0.0
    else:
        slope = 2.0 * epsilon ** (1.0 / q) * beta
        _, gap = minimize_convex_over_integers(
            lambda t: 2.0 * math.exp(-delta * t) + slope * t, 0, RecoveryConfig.T_MAX
        )

    bias, gap = min(bias, 2.0), min(gap, 2.0)
    return DeltaCandidate(
        delta=delta,
        pagerank_bias_l1=bias,
        corruption_gap_l1=gap,
        certified_bound=0.5 * (bias + gap),
    )


def _delta_star(
    gamma: float, epsilon: float, beta: float, p: float, sup_ratio: Optional[float]
) -> float:
    if epsilon == 0.0:
        return RecoveryConfig.ZERO_CORRUPTION_DELTA
    if sup_ratio is not None:
        ratio = sup_ratio
    else:
        ratio = beta if math.isinf(p) else 1.0
    return tune_delta(gamma, epsilon, beta, p, sup_ratio=ratio)


def _finish(
    corrupted: MarkovChain,
    mu: Dist,
    best: DeltaCandidate,
    candidates: List[DeltaCandidate],
    delta_star: float,
    q: float,
    coefficient: Optional[float],
    reference: Optional[VectorLike],
) -> RecoveryResult:
    solved = pagerank_stationary(corrupted, PageRankConfig(mu=mu, delta=best.delta))
    vacuous = best.certified_bound >= RecoveryConfig.VACUOUS_THRESHOLD
    if vacuous:
        message = (
            f"Certified bound {best.certified_bound:.4g} >= 1 carries no information "
            f"(delta={best.delta:.4g})"
        )
        logger.warning(message)
        warnings.warn(message, VacuousBoundWarning, stacklevel=3)

    realized = None
    if reference is not None:
        realized = tv_distance(solved.pi_delta, reference)

    logger.info(
        f"Recovered with delta={best.delta:.6g}, certified TV bound "
        f"{best.certified_bound:.6g}"
    )
    return RecoveryResult(
        pi_hat=solved.pi_delta,
        delta_used=best.delta,
        certified_bound=best.certified_bound,
        certified_bound_l1=best.pagerank_bias_l1 + best.corruption_gap_l1,
        pagerank_bias_l1=best.pagerank_bias_l1,
        corruption_gap_l1=best.corruption_gap_l1,
        diagnostics=RecoveryDiagnostics(
            delta_star=delta_star,
            q=q,
            mixing_coefficient=coefficient,
            candidates=candidates,
            solver_residual=solved.residual,
            realized_tv=realized,
            vacuous=vacuous,
        ),
    )


def _as_restart(corrupted: MarkovChain, mu: VectorLike) -> Dist:
    mu_d = mu if isinstance(mu, Dist) else Dist.from_values(as_vector(mu))
    check_lengths(corrupted.n, mu_d.values)
    return mu_d


def recover(
    corrupted: MarkovChain,
    mu: VectorLike,
    gamma: float,
    epsilon: float,
    beta: float,
    p: float,
    refine: Optional[RefineStrategy] = None,
    sup_ratio: Optional[float] = None,
    reference: Optional[VectorLike] = None,
) -> RecoveryResult:
    """
    Estimate the clean stationary law from a corrupted chain with PageRank.

    Only the corrupted chain and the bounds (gamma, epsilon, beta, p) are used
    to choose delta; `reference` is read after the fact to report the realized
    error.

    Args:
        corrupted: Observed chain
        mu: Restart distribution
        gamma: Lower bound on the clean chain's spectral gap
        epsilon: Upper bound on the pi-weighted l1 corruption
        beta: Upper bound on ||d mu / d pi||_{p,pi}
        p: Smoothness exponent
        refine: Candidate deltas around delta*; grid(9) by default
        sup_ratio: Upper bound on ||d mu / d pi||_inf, if known
        reference: Clean stationary law for diagnostics only

    Returns:
        RecoveryResult whose certified_bound bounds d_TV(pi_hat, pi)
    """
    q = _validate_inputs(gamma, epsilon, beta, p)
    mu_d = _as_restart(corrupted, mu)
    refine = refine or RefineStrategy.grid(RecoveryConfig.DEFAULT_GRID_POINTS)

    delta_star = _delta_star(gamma, epsilon, beta, p, sup_ratio)
    if refine.kind == "none":
        deltas = [delta_star]
    else:
        deltas = log_spaced_grid(
            delta_star,
            refine.points,
            RecoveryConfig.DELTA_MIN,
            RecoveryConfig.DELTA_MAX,
            RecoveryConfig.GRID_SPAN,
        )

    candidates = [
        evaluate_certified_bound(gamma, epsilon, beta, p, delta, sup_ratio)
        for delta in deltas
    ]
    best = min(candidates, key=lambda c: (c.certified_bound, c.delta))
    logger.debug(
        f"delta*={delta_star:.6g}, {len(candidates)} candidates, best={best.delta:.6g}"
    )
    return _finish(
        corrupted,
        mu_d,
        best,
        candidates,
        delta_star,
        q,
        mixing_coefficient(beta, p, sup_ratio),
        reference,
    )


def recover_at_delta(
    corrupted: MarkovChain,
    mu: VectorLike,
    delta: float,
    gamma: float,
    epsilon: float,
    beta: float,
    p: float,
    sup_ratio: Optional[float] = None,
    reference: Optional[VectorLike] = None,
) -> RecoveryResult:
    """Same as recover with delta fixed by the caller."""
    q = _validate_inputs(gamma, epsilon, beta, p)
    mu_d = _as_restart(corrupted, mu)
    candidate = evaluate_certified_bound(gamma, epsilon, beta, p, delta, sup_ratio)
    return _finish(
        corrupted,
        mu_d,
        candidate,
        [candidate],
        _delta_star(gamma, epsilon, beta, p, sup_ratio),
        q,
        mixing_coefficient(beta, p, sup_ratio),
        reference,
    )


def spread_alpha(pi: VectorLike) -> float:
    """Largest alpha with alpha / n <= pi(x) <= 1 / (alpha n) for every x."""
    pi_v = as_vector(pi)
    require_positive(pi_v)
    scaled = pi_v.shape[0] * pi_v
    return float(min(np.min(scaled), np.min(1.0 / scaled)))


def recover_spread(
    corrupted: MarkovChain,
    alpha: float,
    epsilon_rows: float,
    gamma: float,
    refine: Optional[RefineStrategy] = None,
    reference: Optional[VectorLike] = None,
) -> RecoveryResult:
    """
    Recovery when pi is alpha-spread and an epsilon_rows fraction of rows is
    corrupted: mu uniform, p = inf, beta = 1 / alpha, epsilon = epsilon_rows / alpha.
    """
    if not 0.0 < alpha <= 1.0:
        raise OutOfRange("alpha", alpha, "(0, 1]")
    if not 0.0 <= epsilon_rows <= 1.0:
        raise OutOfRange("epsilon_rows", epsilon_rows, "[0, 1]")
    beta = 1.0 / alpha
    return recover(
        corrupted,
        Dist.uniform(corrupted.n),
        gamma=gamma,
        epsilon=epsilon_rows / alpha,
        beta=beta,
        p=math.inf,
        refine=refine,
        sup_ratio=beta,
        reference=reference,
    )
