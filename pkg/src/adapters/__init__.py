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

from src.adapters.bound_verification_adapter import BoundVerificationAdapter
from src.adapters.csv_result_sink_adapter import CsvResultSinkAdapter
from src.adapters.experiment_runner_adapter import ExperimentRunnerAdapter
from src.adapters.json_chain_storage_adapter import JsonChainStorageAdapter
from src.adapters.recovery_pipeline_adapter import RecoveryPipelineAdapter

__all__ = [
    "JsonChainStorageAdapter",
    "CsvResultSinkAdapter",
    "RecoveryPipelineAdapter",
    "BoundVerificationAdapter",
    "ExperimentRunnerAdapter",
]
