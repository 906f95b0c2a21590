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

from src.utils.helpers import (
    FLOAT_FORMAT,
    derive_seed,
    dual_exponent,
    file_exists_and_nonempty,
    log_spaced_grid,
    minimize_convex_over_integers,
)
from src.utils.singleton_metaclass import SingletonMetaClass

__all__ = [
    "FLOAT_FORMAT",
    "derive_seed",
    "dual_exponent",
    "file_exists_and_nonempty",
    "log_spaced_grid",
    "minimize_convex_over_integers",
    "SingletonMetaClass",
]
