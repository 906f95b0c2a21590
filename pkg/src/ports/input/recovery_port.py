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
from typing import Optional

from src.domain.models import Dist, MarkovChain, RecoveryResult, RefineStrategy


class RecoveryPort(ABC):
    """Use case: estimate a clean stationary law from a corrupted chain."""

    @abstractmethod
    async def recover(
        self,
        corrupted: MarkovChain,
        mu: Dist,
        gamma: float,
        epsilon: float,
        beta: float,
        p: float,
        refine: Optional[RefineStrategy] = None,
        sup_ratio: Optional[float] = None,
    ) -> RecoveryResult:
        """
        Args:
            corrupted: Observed chain
            mu: Restart distribution
            gamma: Spectral gap lower bound of the clean chain
            epsilon: Corruption upper bound
            beta: Smoothness of mu with respect to the clean stationary law
            p: Smoothness exponent
            refine: Candidate delta strategy
            sup_ratio: Optional bound on ||d mu / d pi||_inf
        Returns:
            RecoveryResult with the certified TV bound
        """
        pass
