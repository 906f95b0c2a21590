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

import logging
import os

from dotenv import load_dotenv

from src.utils.singleton_metaclass import SingletonMetaClass

logger = logging.getLogger(__name__)


class SentinelSettings(metaclass=SingletonMetaClass):
    """
    Process-wide settings read from the environment (and a .env file).

    Values are looked up on every access so tests can patch the environment.
    """

    def __init__(self, dotenv_path: str | None = None):
        load_dotenv(dotenv_path)

    @property
    def threads(self) -> int:
        raw = os.getenv("SENTINEL_THREADS", "0")
        try:
            requested = int(raw)
        except ValueError:
            raise ValueError(f"SENTINEL_THREADS must be an integer, got {raw!r}")
        if requested < 0:
            raise ValueError(f"SENTINEL_THREADS must be >= 0, got {requested}")
        if requested == 0:
            return os.cpu_count() or 1
        return requested

    @property
    def log_level(self) -> str:
        return os.getenv("SENTINEL_LOG_LEVEL", "INFO").upper()

    @property
    def service_name(self) -> str:
        return os.getenv("SENTINEL_SERVICE_NAME", "sentinel")
