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
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

import pandas as pd

from src.ports.output import ResultSinkPort
from src.utils.helpers import FLOAT_FORMAT

logger = logging.getLogger(__name__)


class CsvResultSinkAdapter(ResultSinkPort):
    """Comma-delimited CSV with a header row and 17 significant digits."""

    async def write_rows(
        self,
        rows: List[Dict[str, Any]],
        columns: List[str],
        destination: Optional[Path] = None,
        stream: Optional[TextIO] = None,
    ) -> None:
        frame = pd.DataFrame.from_records(rows, columns=columns)
        if destination is not None:
            destination = Path(destination)
            await asyncio.to_thread(destination.parent.mkdir, parents=True, exist_ok=True)
            await asyncio.to_thread(self._to_csv, frame, destination)
            logger.info(f"Wrote {len(frame)} rows to {destination}")
            return
        self._to_csv(frame, stream or sys.stdout)

    @staticmethod
    def _to_csv(frame: pd.DataFrame, target: Any) -> None:
        frame.to_csv(target, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
