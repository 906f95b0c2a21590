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
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from src.adapters import (
    BoundVerificationAdapter,
    CsvResultSinkAdapter,
    ExperimentRunnerAdapter,
    JsonChainStorageAdapter,
    RecoveryPipelineAdapter,
)
from src.application.services import (
    corrupt,
    pagerank_stationary,
    spectral_gap,
    stationary,
)
from src.core import SentinelSettings, setup_opentelemetry_and_logger
from src.domain.errors import ChainInputError, NumericalFailure
from src.domain.models import (
    EXPERIMENT_COLUMNS,
    VERIFICATION_COLUMNS,
    ChainFileModel,
    CorruptionSpec,
    Dist,
    DistFileModel,
    ExperimentConfig,
    MarkovChain,
    PageRankConfig,
    RefineStrategy,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NUMERICAL_FAILURE = 2
EXIT_BOUND_VIOLATED = 3

SUITES = ["contract", "mixing", "coupling", "prclose", "corruptclose"]


class UsageError(Exception):
    """Bad command-line arguments."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _exponent(raw: str) -> float:
    value = float(raw)
    if math.isnan(value):
        raise argparse.ArgumentTypeError(f"invalid exponent {raw!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="sentinel",
        description="Stationary-distribution recovery for adversarially corrupted Markov chains",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    cmd = commands.add_parser("stationary", help="Stationary distribution of a chain")
    cmd.add_argument("chain", type=Path)
    cmd.add_argument("--method", choices=["direct", "power"], default="direct")

    cmd = commands.add_parser("gap", help="L2 spectral gap")
    cmd.add_argument("chain", type=Path)
    cmd.add_argument("--pi", type=Path, help="Stationary distribution; solved if absent")
    cmd.add_argument("--method", choices=["auto", "dense_svd", "iterative"], default="auto")

    cmd = commands.add_parser("pagerank", help="Stationary law of the restart chain")
    cmd.add_argument("chain", type=Path)
    cmd.add_argument("--mu", type=Path, required=True)
    cmd.add_argument("--delta", type=float, required=True)
    cmd.add_argument("--solver", choices=["resolvent", "series", "power"], default="resolvent")

    cmd = commands.add_parser("corrupt", help="Apply a seeded corruption")
    cmd.add_argument("chain", type=Path)
    cmd.add_argument("--spec", required=True, help="CorruptionSpec JSON file or inline JSON")
    cmd.add_argument("--pi", type=Path, help="Stationary distribution; solved if absent")
    cmd.add_argument("--output", type=Path, help="Write the corrupted chain here")

    cmd = commands.add_parser("recover", help="PageRank recovery with a certified bound")
    cmd.add_argument("chain", type=Path)
    cmd.add_argument("--mu", type=Path, required=True)
    cmd.add_argument("--gamma", type=float, required=True)
    cmd.add_argument("--eps", type=float, required=True)
    cmd.add_argument("--beta", type=float, required=True)
    cmd.add_argument("--p", type=_exponent, required=True)
    cmd.add_argument("--refine", type=int, default=9, help="Grid points, 0 for none")
    cmd.add_argument("--sup-ratio", type=float, help="Bound on ||d mu / d pi||_inf")

    cmd = commands.add_parser("verify", help="Check an inequality suite")
    cmd.add_argument("chain", type=Path)
    cmd.add_argument("--suite", choices=SUITES, required=True)
    cmd.add_argument("--pi", type=Path, help="Stationary distribution; solved if absent")
    cmd.add_argument("--seed", type=int, default=0)
    cmd.add_argument("--trials", type=int, default=20)

    cmd = commands.add_parser("experiment", help="Run a corruption/recovery sweep")
    cmd.add_argument("config", type=Path)
    return parser


def _emit(text: str) -> None:
    sys.stdout.write(text + "\n")
    sys.stdout.flush()


async def _load_pi(
    storage: JsonChainStorageAdapter, chain: MarkovChain, path: Optional[Path]
) -> Dist:
    if path is not None:
        return await storage.load_dist(path)
    return stationary(chain, method="direct")


def _read_spec(raw: str) -> CorruptionSpec:
    if raw.lstrip().startswith("{"):
        return CorruptionSpec.model_validate_json(raw)
    path = Path(raw)
    if not path.is_file():
        raise FileNotFoundError(f"{path} does not exist")
    return CorruptionSpec.model_validate_json(path.read_text(encoding="utf-8"))


async def _dispatch(args: argparse.Namespace) -> int:
    storage = JsonChainStorageAdapter()
    sink = CsvResultSinkAdapter()

    if args.command == "experiment":
        text = await asyncio.to_thread(args.config.read_text, encoding="utf-8")
        config = ExperimentConfig.model_validate_json(text)
        rows = await ExperimentRunnerAdapter(storage).run_experiment(config)
        await sink.write_rows(
            [row.model_dump() for row in rows],
            EXPERIMENT_COLUMNS,
            destination=Path(config.output) if config.output else None,
        )
        return EXIT_OK

    chain = await storage.load_chain(args.chain)

    if args.command == "stationary":
        pi = stationary(chain, method=args.method)
        _emit(DistFileModel.from_dist(pi).model_dump_json())
    elif args.command == "gap":
        pi = await _load_pi(storage, chain, args.pi)
        _emit(spectral_gap(chain, pi, method=args.method).model_dump_json())
    elif args.command == "pagerank":
        mu = await storage.load_dist(args.mu)
        config = PageRankConfig(mu=mu, delta=args.delta, solver=args.solver)
        _emit(pagerank_stationary(chain, config).model_dump_json())
    elif args.command == "corrupt":
        spec = _read_spec(args.spec)
        pi = await _load_pi(storage, chain, args.pi)
        corrupted, report = corrupt(chain, pi, spec)
        if args.output is not None:
            await storage.save_chain(corrupted, args.output)
            _emit(report.model_dump_json())
        else:
            payload = {
                "chain": ChainFileModel.from_chain(corrupted).model_dump(),
                "report": report.model_dump(),
            }
            _emit(json.dumps(payload))
    elif args.command == "recover":
        mu = await storage.load_dist(args.mu)
        refine = RefineStrategy.grid(args.refine) if args.refine else RefineStrategy.none()
        result = await RecoveryPipelineAdapter().recover(
            chain,
            mu,
            gamma=args.gamma,
            epsilon=args.eps,
            beta=args.beta,
            p=args.p,
            refine=refine,
            sup_ratio=args.sup_ratio,
        )
        _emit(result.model_dump_json())
    elif args.command == "verify":
        pi = await _load_pi(storage, chain, args.pi)
        report = await BoundVerificationAdapter().verify(
            args.suite, chain, pi, seed=args.seed, trials=args.trials
        )
        await sink.write_rows(
            [row.model_dump() for row in report.rows], VERIFICATION_COLUMNS
        )
        if not report.passed:
            logger.error(
                f"Suite {args.suite} violated {len(report.violations)} inequalities"
            )
            return EXIT_BOUND_VIOLATED
    return EXIT_OK


def cli_main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the `sentinel` command.

    Returns:
        0 on success, 1 on input errors, 2 on numerical failures and 3 when a
        verify suite finds a violated inequality
    """
    settings = SentinelSettings()
    setup_opentelemetry_and_logger(settings.service_name, settings.log_level)
    try:
        args = build_parser().parse_args(argv)
        return asyncio.run(_dispatch(args))
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)
    except (NumericalFailure, np.linalg.LinAlgError) as e:
        logger.error(f"Numerical failure: {e}")
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE
    except (
        ChainInputError,
        ValidationError,
        json.JSONDecodeError,
        FileNotFoundError,
        UsageError,
        ValueError,
    ) as e:
        logger.error(f"Invalid input: {e}")
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
