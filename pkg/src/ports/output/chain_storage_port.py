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
from pathlib import Path

from src.domain.models import Dist, MarkovChain


class ChainStoragePort(ABC):
    """Abstract base class for chain and distribution storage"""

    @abstractmethod
    async def load_chain(self, path: Path) -> MarkovChain:
        """Asynchronously reads and validates a chain file
        Args:
            :param path: Chain JSON file
        Returns:
            MarkovChain: validated chain
        """
        pass

    @abstractmethod
    async def save_chain(self, chain: MarkovChain, path: Path) -> Path:
        """Asynchronously writes a chain file
        Args:
            :param chain: Chain to write
            :param path: Destination file
        Returns:
            Path: the written file
        """
        pass

    @abstractmethod
    async def load_dist(self, path: Path) -> Dist:
        pass

    @abstractmethod
    async def save_dist(self, dist: Dist, path: Path) -> Path:
        pass
