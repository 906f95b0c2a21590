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

from src.domain.models import Dist, MarkovChain, SuiteName, VerificationReport


class BoundVerificationPort(ABC):
    @abstractmethod
    async def verify(
        self,
        suite: SuiteName,
        chain: MarkovChain,
        pi: Dist,
        seed: int = 0,
        trials: int = 20,
    ) -> VerificationReport:
        pass
