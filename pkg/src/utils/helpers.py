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
import hashlib
import logging
import math
from pathlib import Path
from typing import Callable, List, Tuple

import numpy as np

from src.domain.errors import InvalidExponent

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def derive_seed(master_seed: int, *parts: int | str) -> int:
    """
    Derive a 64-bit child seed from a master seed and a path of labels.

    Args:
        master_seed: Root seed of the run
        parts: Trial index, grid index or any other label

    Returns:
        Unsigned 64-bit integer, stable across platforms and Python versions
    """
    digest = hashlib.blake2b(digest_size=8)
    digest.update(str(int(master_seed)).encode())
    for part in parts:
        digest.update(b"/")
        digest.update(str(part).encode())
    return int.from_bytes(digest.digest(), "big")


def dual_exponent(p: float) -> float:
    """Hoelder conjugate q of p, with q = 1 for p = inf and q = inf for p = 1."""
    if not p >= 1.0:
        raise InvalidExponent(p)
    if math.isinf(p):
        return 1.0
    if p == 1.0:
        return math.inf
    return p / (p - 1.0)


def log_spaced_grid(
    center: float, points: int, lower: float, upper: float, span: float = 10.0
) -> List[float]:
    """
    Log-spaced values over [center / span, center * span], clamped and deduplicated.

    Args:
        center: Middle of the grid
        points: Number of grid points before clamping
        lower: Smallest allowed value
        upper: Largest allowed value
        span: Multiplicative half-width of the grid

    Returns:
        Sorted list of distinct grid values
    """
    if points <= 1:
        return [min(max(center, lower), upper)]
    raw = np.geomspace(center / span, center * span, points)
    clamped = np.clip(raw, lower, upper)
    return sorted(set(float(v) for v in clamped))


def minimize_convex_over_integers(
    fn: Callable[[int], float], lo: int, hi: int
) -> Tuple[int, float]:
    """
    Minimize a convex function over the integers in [lo, hi] by ternary search.

    Ties go to the smaller argument.
    """
    left, right = lo, hi
    while right - left > 2:
        m1 = left + (right - left) // 3
        m2 = right - (right - left) // 3
        if fn(m1) <= fn(m2):
            right = m2
        else:
            left = m1
    best_t, best_value = left, fn(left)
    for t in range(left + 1, right + 1):
        value = fn(t)
        if value < best_value:
            best_t, best_value = t, value
    return best_t, best_value


async def file_exists_and_nonempty(file_path: Path) -> bool:
    """
    Helper function to check if a regular file exists and is non-empty

        :param file_path: Path to the file

        :return: True if the file exists and non-empty, False otherwise
    """

    def _sync_check():
        p = Path(file_path)
        return p.is_file() and p.stat().st_size > 0

    return await asyncio.to_thread(_sync_check)
