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

from abc import ABC, abstractmethod
from typing import List

from src.domain.models import ExperimentConfig, ExperimentRow


class ExperimentPort(ABC):
    """Use case: run a corruption/recovery sweep."""

    @abstractmethod
    async def run_experiment(self, config: ExperimentConfig) -> List[ExperimentRow]:
        """
        Run every (trial, epsilon, delta) cell of the sweep.

        Args:
            config: Sweep description
        Returns:
            Rows sorted by (trial, epsilon, delta); failed cells carry an
            `error:<Name>` status instead of aborting the sweep
        """
        pass
