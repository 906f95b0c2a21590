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
from typing import Callable, Dict, List

import numpy as np

from src.application.services.adversary_service import corrupt
from src.application.services.chain_core_service import (
    VectorLike,
    as_vector,
    check_contraction,
    check_lengths,
    require_positive,
    require_stationary,
    smoothness,
)
from src.application.services.pagerank_service import (
    build_pagerank,
    check_corrupted_close,
    check_density_contraction,
    check_pr_close,
)
from src.application.services.spectral_service import (
    check_coupling_bound,
    check_mixing_bound,
    spectral_gap,
)
from src.domain.errors import BudgetInfeasible, OutOfRange
from src.domain.models import (
    BoundCheck,
    CorruptionSpec,
    Dist,
    MarkovChain,
    PageRankConfig,
    SuiteName,
    VerificationReport,
    VerificationRow,
)
from src.utils.helpers import (
    derive_seed,
    dual_exponent,
    minimize_convex_over_integers,
)

logger = logging.getLogger(__name__)


class VerificationConfig:
    CONTRACTION_EXPONENTS = (1.0, 2.0, 4.0, math.inf)
    MIXING_HORIZON = 100
    COUPLING_HORIZON = 20
    PAGERANK_DELTAS = (0.01, 0.05, 0.1, 0.3)
    CORRUPTION_EXPONENTS = (2.0, math.inf)
    CORRUPTION_KINDS = ("per_row_tv", "row_replacement", "absorbing")
    CORRUPTION_BUDGETS = (0.01, 0.05, 0.2)
    T_MAX = 1_000_000
    DEFAULT_TRIALS = 20


SuiteRunner = Callable[[MarkovChain, np.ndarray, np.random.Generator, int], List[VerificationRow]]


def _rows(suite: SuiteName, case: str, checks: List[BoundCheck]) -> List[VerificationRow]:
    return [
        VerificationRow(
            suite=suite,
            case=case,
            t=check.t,
            p=check.p,
            lhs=check.lhs,
            rhs=check.rhs,
            holds=check.holds,
        )
        for check in checks
    ]


def _contract(
    chain: MarkovChain, pi: np.ndarray, rng: np.random.Generator, trials: int
) -> List[VerificationRow]:
    rows: List[VerificationRow] = []
    exponents = VerificationConfig.CONTRACTION_EXPONENTS
    for trial in range(trials):
        f = rng.normal(size=chain.n)
        p = exponents[trial % len(exponents)]
        rows.extend(_rows("contract", f"random-{trial}", [check_contraction(chain, pi, f, p)]))
    constant = np.full(chain.n, float(rng.normal()))
    for p in exponents:
        rows.extend(_rows("contract", "constant", [check_contraction(chain, pi, constant, p)]))
    return rows


def _mixing(
    chain: MarkovChain, pi: np.ndarray, rng: np.random.Generator, trials: int
) -> List[VerificationRow]:
    gamma = spectral_gap(chain, pi).gamma
    t_values = range(VerificationConfig.MIXING_HORIZON + 1)
    rows: List[VerificationRow] = []
    for trial in range(trials):
        mu = rng.dirichlet(np.ones(chain.n))
        rows.extend(
            _rows("mixing", f"mu-{trial}", check_mixing_bound(chain, pi, mu, gamma, t_values))
        )
    return rows


def _coupling(
    chain: MarkovChain, pi: np.ndarray, rng: np.random.Generator, trials: int
) -> List[VerificationRow]:
    t_values = range(VerificationConfig.COUPLING_HORIZON + 1)
    rows: List[VerificationRow] = []
    for trial in range(trials):
        nu = rng.dirichlet(np.ones(chain.n))
        rows.extend(
            _rows("coupling", f"nu-{trial}", check_coupling_bound(chain, pi, nu, t_values))
        )
    return rows


def _best_t(fn: Callable[[int], float]) -> int:
    t, _ = minimize_convex_over_integers(fn, 0, VerificationConfig.T_MAX)
    return t


def _prclose(
    chain: MarkovChain, pi: np.ndarray, rng: np.random.Generator, trials: int
) -> List[VerificationRow]:
    gamma = spectral_gap(chain, pi).gamma
    mu = Dist.uniform(chain.n)
    coefficient = math.sqrt(2.0 * smoothness(mu, pi, math.inf))
    rows: List[VerificationRow] = []
    for delta in VerificationConfig.PAGERANK_DELTAS:
        t_star = _best_t(lambda t: coefficient * math.exp(-t * gamma) + 2.0 * delta * t)
        case = f"delta={delta:g}"
        rows.extend(_rows("prclose", case, check_pr_close(chain, pi, mu, gamma, delta, [t_star])))
        rows.extend(_rows("prclose", case, check_density_contraction(chain, pi, mu, delta)))
    return rows


def _corruptclose(
    chain: MarkovChain, pi: np.ndarray, rng: np.random.Generator, trials: int
) -> List[VerificationRow]:
    mu = Dist.uniform(chain.n)
    kinds = VerificationConfig.CORRUPTION_KINDS
    budgets = VerificationConfig.CORRUPTION_BUDGETS
    rows: List[VerificationRow] = []
    for trial in range(trials):
        spec = CorruptionSpec(
            kind=kinds[trial % len(kinds)],
            budget=budgets[(trial // len(kinds)) % len(budgets)],
            seed=int(rng.integers(2**63)),
        )
        try:
            corrupted, report = corrupt(chain, pi, spec)
        except BudgetInfeasible as e:
            logger.debug(f"Skipping corruption draw {trial}: {e}")
            continue
        delta = float(rng.choice(VerificationConfig.PAGERANK_DELTAS))
        config = PageRankConfig(mu=mu, delta=delta)
        original_pr = build_pagerank(chain, config)
        corrupted_pr = build_pagerank(corrupted, config)
        for p in VerificationConfig.CORRUPTION_EXPONENTS:
            slope = 2.0 * report.epsilon ** (1.0 / dual_exponent(p)) * smoothness(mu, pi, p)
            t_star = _best_t(lambda t: 2.0 * math.exp(-delta * t) + slope * t)
            checks = check_corrupted_close(
                original_pr, corrupted_pr, pi, mu, p, report.epsilon, delta, [t_star]
            )
            rows.extend(_rows("corruptclose", f"{spec.kind}-{trial}", checks))
    return rows


_SUITES: Dict[str, SuiteRunner] = {
    "contract": _contract,
    "mixing": _mixing,
    "coupling": _coupling,
    "prclose": _prclose,
    "corruptclose": _corruptclose,
}


def run_suite(
    suite: SuiteName,
    chain: MarkovChain,
    pi: VectorLike,
    seed: int = 0,
    trials: int = VerificationConfig.DEFAULT_TRIALS,
) -> VerificationReport:
    """
    Run one inequality suite against a chain and its stationary distribution.

    Args:
        suite: contract, mixing, coupling, prclose or corruptclose
        chain: Validated chain
        pi: Strictly positive stationary distribution of the chain
        seed: Seed of the random draws (test functions, start laws, corruptions)
        trials: Random draws per suite

    Returns:
        VerificationReport whose `passed` is False when any row is violated
    """
    if suite not in _SUITES:
        raise OutOfRange("suite", suite, ", ".join(_SUITES))
    if trials < 1:
        raise OutOfRange("trials", trials, "[1, inf)")
    pi_v = as_vector(pi)
    check_lengths(chain.n, pi_v)
    require_positive(pi_v)
    require_stationary(chain, pi_v)

    rng = np.random.default_rng(derive_seed(seed, suite))
    rows = _SUITES[suite](chain, pi_v, rng, trials)
    report = VerificationReport(suite=suite, rows=rows)
    if report.passed:
        logger.info(f"Suite {suite} passed on {len(rows)} checks")
    else:
        logger.warning(
            f"Suite {suite} found {len(report.violations)} violations in {len(rows)} checks"
        )
    return report
