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

import argparse
import asyncio
import json
import logging
import math

import numpy as np

from src.adapters import RecoveryPipelineAdapter
from src.application.services import corrupt, make_test_chain, tv_distance
from src.core import SentinelSettings, setup_opentelemetry_and_logger
from src.domain.models import CorruptionSpec, Dist, RefineStrategy
from src.utils import derive_seed

logger = logging.getLogger("calibrate_recovery_threshold")


async def main():
    settings = SentinelSettings()
    setup_opentelemetry_and_logger(settings.service_name, settings.log_level)
    parser = argparse.ArgumentParser(
        description="Realized recovery error on lazy complete chains with absorbing rows"
    )
    parser.add_argument("--n", type=int, default=128)
    parser.add_argument("--gamma", type=float, default=0.5)
    parser.add_argument(
        "--epsilons", type=float, nargs="+", default=[0.001, 0.01, 0.05]
    )
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--master-seed", type=int, default=0)
    parser.add_argument(
        "--refine", type=int, default=9, help="Grid points around delta*; 0 keeps delta*"
    )
    args = parser.parse_args()

    chain, pi = make_test_chain("lazy_complete", args.n)
    mu = Dist.uniform(args.n)
    pipeline = RecoveryPipelineAdapter()
    refine = RefineStrategy.grid(args.refine) if args.refine else RefineStrategy.none()

    summary = []
    for eps_index, eps in enumerate(args.epsilons):
        realized, certified = [], []
        for seed in range(args.seeds):
            corruption_seed = derive_seed(args.master_seed, seed, eps_index)
            count = max(1, math.floor(eps * args.n))
            rows = np.random.default_rng(corruption_seed).choice(
                args.n, size=count, replace=False
            )
            spec = CorruptionSpec(
                kind="absorbing",
                budget=eps,
                target_rows=[int(r) for r in rows],
                seed=corruption_seed,
            )
            corrupted, report = corrupt(chain, pi, spec)
            result = await pipeline.recover(
                corrupted, mu, gamma=args.gamma, epsilon=report.epsilon, beta=1.0,
                p=math.inf,
                refine=refine,
            )
            realized.append(tv_distance(result.pi_hat, pi))
            certified.append(result.certified_bound)

        summary.append(
            {
                "eps": eps,
                "mean_realized_tv": float(np.mean(realized)),
                "max_realized_tv": float(np.max(realized)),
                "max_certified_bound": float(np.max(certified)),
            }
        )
        logger.info(f"eps={eps}: max realized TV {max(realized):.6g}")

    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    asyncio.run(main())
