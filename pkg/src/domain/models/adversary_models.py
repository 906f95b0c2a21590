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

from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator


class ChainFamily(str, Enum):
    LAZY_COMPLETE = "lazy_complete"
    LAZY_CYCLE = "lazy_cycle"
    RANDOM_REVERSIBLE = "random_reversible"
    RANDOM_DENSE = "random_dense"


class CorruptionSpec(BaseModel):
    kind: Literal["per_row_tv", "row_replacement", "absorbing"] = Field(
        ..., description="How corrupted rows are rewritten"
    )
    budget: float = Field(
        ..., ge=0.0, le=2.0, description="Target pi-weighted l1 corruption epsilon"
    )
    target_rows: Optional[List[int]] = Field(
        None, description="Rows to corrupt; chosen greedily by pi when absent"
    )
    seed: int = Field(0, ge=0, lt=2**64, description="Seed of the corruption RNG")

    @field_validator("target_rows")
    @classmethod
    def _unique_rows(cls, rows: Optional[List[int]]) -> Optional[List[int]]:
        if rows is None:
            return None
        if any(r < 0 for r in rows):
            raise ValueError("target rows must be nonnegative")
        return sorted(set(rows))
