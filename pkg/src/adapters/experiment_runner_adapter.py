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
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from opentelemetry import trace

from infrastructure.sweep_cell_executor import SweepCellExecutor
from src.application.services.adversary_service import corrupt, make_test_chain
from src.application.services.chain_core_service import smoothness, stationary
from src.application.services.recovery_service import recover, recover_at_delta
from src.application.services.spectral_service import spectral_gap
from src.domain.models import (
    CorruptionSpec,
    Dist,
    ExperimentConfig,
    ExperimentRow,
    MarkovChain,
    RecoveryResult,
    RefineStrategy,
)
from src.ports.input import ExperimentPort
from src.ports.output import ChainStoragePort
from src.utils.helpers import derive_seed

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

DeltaRequest = Union[float, str]


@dataclass(frozen=True)
class TrialContext:
    """Everything a cell needs that depends only on the trial."""

    trial: int
    seed: int
    chain: MarkovChain
    pi: Dist
    mu: Dist
    gamma: float
    beta: float
    sup_ratio: float


class ExperimentRunnerAdapter(ExperimentPort):
    """
    Pipeline adapter that runs a corruption/recovery sweep.

    Responsibilities:
    - Loads or generates the clean chain of every trial
    - Corrupts it once per epsilon with a derived seed
    - Recovers at every requested delta and records realized vs certified error
    - Isolates failures so one cell never aborts the sweep
    """

    def __init__(
        self,
        storage: ChainStoragePort,
        executor: Optional[SweepCellExecutor] = None,
    ):
        """
        Args:
            storage: Chain and distribution files for path-based sources
            executor: Cell executor; sized from SENTINEL_THREADS when absent
        """
        self.storage = storage
        self.executor = executor or SweepCellExecutor()

    async def run_experiment(self, config: ExperimentConfig) -> List[ExperimentRow]:
        with tracer.start_as_current_span("experiment") as span:
            span.set_attribute("experiment.trials", config.trials)
            logger.info(
                f"Starting sweep: {config.trials} trials x {len(config.epsilons)} epsilons "
                f"x {len(config.deltas)} deltas"
            )

            base_chain: Optional[MarkovChain] = None
            if config.chain.path is not None:
                base_chain = await self.storage.load_chain(Path(config.chain.path))
            file_mu: Optional[Dist] = None
            if config.restart.kind == "file":
                file_mu = await self.storage.load_dist(Path(config.restart.path))

            trial_seeds = [derive_seed(config.master_seed, t) for t in range(config.trials)]
            contexts = await self.executor.run(
                [
                    self._trial_task(config, t, seed, base_chain, file_mu)
                    for t, seed in enumerate(trial_seeds)
                ],
                return_exceptions=True,
            )

            cells: List[Callable[[], ExperimentRow]] = []
            for trial, (seed, context) in enumerate(zip(trial_seeds, contexts)):
                for eps_index, eps in enumerate(config.epsilons):
                    for delta in config.deltas:
                        cells.append(
                            self._cell_task(config, trial, seed, context, eps_index, eps, delta)
                        )
            rows = await self.executor.run(cells)

            rows.sort(key=_row_order)
            failed = sum(1 for row in rows if row.status != "ok")
            span.set_attribute("experiment.rows", len(rows))
            span.set_attribute("experiment.failed_cells", failed)
            logger.info(f"Sweep finished with {len(rows)} rows, {failed} failed")
            return rows

    def _trial_task(
        self,
        config: ExperimentConfig,
        trial: int,
        seed: int,
        base_chain: Optional[MarkovChain],
        file_mu: Optional[Dist],
    ) -> Callable[[], TrialContext]:
        def task() -> TrialContext:
            try:
                return _prepare_trial(config, trial, seed, base_chain, file_mu)
            except Exception as e:
                logger.error(f"Trial {trial} could not be prepared: {e}")
                raise

        return task

    def _cell_task(
        self,
        config: ExperimentConfig,
        trial: int,
        seed: int,
        context: Union[TrialContext, BaseException],
        eps_index: int,
        eps: float,
        delta: DeltaRequest,
    ) -> Callable[[], ExperimentRow]:
        def task() -> ExperimentRow:
            with tracer.start_as_current_span("experiment.cell") as span:
                span.set_attribute("cell.trial", trial)
                span.set_attribute("cell.eps_target", eps)
                span.set_attribute("cell.delta", str(delta))
                if isinstance(context, BaseException):
                    return _error_row(config, trial, seed, eps, delta, context)
                try:
                    return _run_cell(config, context, eps_index, eps, delta)
                except Exception as e:
                    logger.error(
                        f"Cell (trial={trial}, eps={eps}, delta={delta}) failed: {e}"
                    )
                    span.record_exception(e)
                    return _error_row(config, trial, seed, eps, delta, e, context)

        return task


def _prepare_trial(
    config: ExperimentConfig,
    trial: int,
    seed: int,
    base_chain: Optional[MarkovChain],
    file_mu: Optional[Dist],
) -> TrialContext:
    if base_chain is not None:
        chain = base_chain
        pi = stationary(chain, method="direct")
    else:
        chain, pi = make_test_chain(config.chain.family, config.chain.n, seed=seed)

    if config.restart.kind == "uniform":
        mu = Dist.uniform(chain.n)
    elif config.restart.kind == "stationary":
        mu = pi
    else:
        mu = file_mu

    gamma = config.gamma if config.gamma is not None else spectral_gap(chain, pi).gamma
    # Jensen gives ||d mu / d pi||_{p,pi} >= 1; clamp rounding below it.
    beta = config.beta if config.beta is not None else max(smoothness(mu, pi, config.p), 1.0)
    sup_ratio = max(smoothness(mu, pi, math.inf), 1.0)
    logger.debug(f"Trial {trial}: n={chain.n}, gamma={gamma:.6g}, beta={beta:.6g}")
    return TrialContext(
        trial=trial,
        seed=seed,
        chain=chain,
        pi=pi,
        mu=mu,
        gamma=gamma,
        beta=beta,
        sup_ratio=sup_ratio,
    )


def _corruption_spec(
    config: ExperimentConfig, context: TrialContext, eps_index: int, eps: float
) -> CorruptionSpec:
    seed = derive_seed(context.seed, "corruption", eps_index)
    if config.selection == "budget" or eps == 0.0:
        return CorruptionSpec(kind=config.corruption_kind, budget=eps, seed=seed)
    n = context.chain.n
    count = min(n, max(1, math.floor(eps * n)))
    rows = np.random.default_rng(seed).choice(n, size=count, replace=False)
    return CorruptionSpec(
        kind=config.corruption_kind,
        budget=eps,
        target_rows=sorted(int(r) for r in rows),
        seed=seed,
    )


def _run_cell(
    config: ExperimentConfig,
    context: TrialContext,
    eps_index: int,
    eps: float,
    delta: DeltaRequest,
) -> ExperimentRow:
    started = time.perf_counter()
    spec = _corruption_spec(config, context, eps_index, eps)
    corrupted, report = corrupt(context.chain, context.pi, spec)

    common = dict(
        corrupted=corrupted,
        mu=context.mu,
        gamma=context.gamma,
        epsilon=report.epsilon,
        beta=context.beta,
        p=config.p,
        sup_ratio=context.sup_ratio,
        reference=context.pi,
    )
    if delta == "auto":
        refine = RefineStrategy.grid(config.refine) if config.refine else RefineStrategy.none()
        result = recover(refine=refine, **common)
    else:
        result = recover_at_delta(delta=float(delta), **common)
    elapsed_ms = (time.perf_counter() - started) * 1000.0

    return _ok_row(config, context, eps, report.epsilon, result, elapsed_ms)


def _ok_row(
    config: ExperimentConfig,
    context: TrialContext,
    eps: float,
    eps_measured: float,
    result: RecoveryResult,
    elapsed_ms: float,
) -> ExperimentRow:
    return ExperimentRow(
        trial=context.trial,
        seed=context.seed,
        n=context.chain.n,
        kind=config.corruption_kind,
        gamma=context.gamma,
        eps_target=eps,
        eps_measured=eps_measured,
        beta=context.beta,
        p=config.p,
        delta=result.delta_used,
        tv_pagerank_bias=0.5 * result.pagerank_bias_l1,
        tv_corruption_gap=0.5 * result.corruption_gap_l1,
        tv_realized=result.diagnostics.realized_tv,
        certified_bound=result.certified_bound,
        runtime_ms=elapsed_ms if config.record_runtime else 0.0,
    )


def _error_row(
    config: ExperimentConfig,
    trial: int,
    seed: int,
    eps: float,
    delta: DeltaRequest,
    error: BaseException,
    context: Optional[TrialContext] = None,
) -> ExperimentRow:
    return ExperimentRow(
        trial=trial,
        seed=seed,
        n=context.chain.n if context else (config.chain.n or 0),
        kind=config.corruption_kind,
        gamma=context.gamma if context else None,
        eps_target=eps,
        beta=context.beta if context else None,
        p=config.p,
        delta=None if delta == "auto" else float(delta),
        status=f"error:{type(error).__name__}",
    )


def _row_order(row: ExperimentRow) -> Tuple[int, float, float]:
    return (row.trial, row.eps_target, row.delta if row.delta is not None else -1.0)
