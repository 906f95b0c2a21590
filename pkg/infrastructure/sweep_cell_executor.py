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

import asyncio
import logging
from typing import Callable, List, Optional, Sequence, TypeVar

from src.core.settings import SentinelSettings

logger = logging.getLogger(__name__)

T = TypeVar("T")


class SweepCellExecutor:
    """
    Bounded concurrent execution of independent sweep cells.

    Each cell is a blocking callable run through asyncio.to_thread; at most
    `max_workers` cells run at once. Results come back in submission order.
    """

    def __init__(self, max_workers: Optional[int] = None):
        """
        Args:
            max_workers: Concurrency cap; SENTINEL_THREADS when absent
        """
        self.max_workers = (
            max_workers if max_workers is not None else SentinelSettings().threads
        )
        if self.max_workers < 1:
            raise ValueError(f"max_workers must be >= 1, got {self.max_workers}")

    async def run(
        self, cells: Sequence[Callable[[], T]], return_exceptions: bool = False
    ) -> List[T | BaseException]:
        semaphore = asyncio.Semaphore(self.max_workers)

        async def _run_one(cell: Callable[[], T]) -> T:
            async with semaphore:
                return await asyncio.to_thread(cell)

        logger.debug(f"Running {len(cells)} cells on {self.max_workers} workers")
        return await asyncio.gather(
            *(_run_one(cell) for cell in cells), return_exceptions=return_exceptions
        )
