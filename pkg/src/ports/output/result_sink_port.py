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
from typing import Any, Dict, List, Optional, TextIO


class ResultSinkPort(ABC):
    """Abstract base class for tabular result output"""

    @abstractmethod
    async def write_rows(
        self,
        rows: List[Dict[str, Any]],
        columns: List[str],
        destination: Optional[Path] = None,
        stream: Optional[TextIO] = None,
    ) -> None:
        """Writes rows as CSV with a header row
        Args:
            :param rows: One mapping per row
            :param columns: Column order of the header
            :param destination: File path; the stream is used when absent
            :param stream: Text stream, stdout by default
        """
        pass
