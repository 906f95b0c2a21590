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

from src.domain.models.adversary_models import ChainFamily, CorruptionSpec
from src.domain.models.chain_models import (
    DENSE_STATE_LIMIT,
    ChainFileModel,
    CorruptionReport,
    Dist,
    DistFileModel,
    MarkovChain,
    WeightedFn,
)
from src.domain.models.experiment_models import (
    EXPERIMENT_COLUMNS,
    ChainSource,
    ExperimentConfig,
    ExperimentRow,
    RestartSource,
)
from src.domain.models.otel_models import ExceptionLogData, LogRecord
from src.domain.models.pagerank_models import PageRankConfig, PageRankResult
from src.domain.models.recovery_models import (
    DeltaCandidate,
    RecoveryDiagnostics,
    RecoveryResult,
    RefineStrategy,
)
from src.domain.models.spectral_models import BoundCheck, GapResult, all_hold
from src.domain.models.verification_models import (
    VERIFICATION_COLUMNS,
    SuiteName,
    VerificationReport,
    VerificationRow,
)

__all__ = [
    "DENSE_STATE_LIMIT",
    "MarkovChain",
    "Dist",
    "WeightedFn",
    "CorruptionReport",
    "ChainFileModel",
    "DistFileModel",
    "GapResult",
    "BoundCheck",
    "all_hold",
    "PageRankConfig",
    "PageRankResult",
    "ChainFamily",
    "CorruptionSpec",
    "RefineStrategy",
    "DeltaCandidate",
    "RecoveryDiagnostics",
    "RecoveryResult",
    "EXPERIMENT_COLUMNS",
    "ChainSource",
    "RestartSource",
    "ExperimentConfig",
    "ExperimentRow",
    "VERIFICATION_COLUMNS",
    "SuiteName",
    "VerificationRow",
    "VerificationReport",
    "ExceptionLogData",
    "LogRecord",
]
