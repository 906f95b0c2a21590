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

from typing import List, Literal, Optional

from pydantic import BaseModel, Field


class GapResult(BaseModel):
    gamma: float = Field(..., ge=0.0, le=1.0, description="Clamped L2(pi) spectral gap")
    raw_gamma: float = Field(
        ..., description="1 - top singular value before clamping to [0, 1]"
    )
    top_singular_value: float = Field(
        ..., description="Largest singular value of the deflated operator"
    )
    method: Literal["dense_svd", "iterative"] = Field(
        ..., description="How the singular value was obtained"
    )
    periodic_suspect: bool = Field(
        False, description="Gap is numerically zero; the chain may be periodic"
    )


class BoundCheck(BaseModel):
    """One evaluated inequality: the measured side against its bound."""

    lhs: float = Field(..., description="Measured quantity")
    rhs: float = Field(..., description="Bound it must not exceed")
    holds: bool = Field(..., description="lhs <= rhs up to the checking tolerance")
    t: Optional[int] = Field(None, description="Time index, when the bound has one")
    p: Optional[float] = Field(None, description="Norm exponent, when relevant")


def all_hold(checks: List[BoundCheck]) -> bool:
    return all(check.holds for check in checks)
