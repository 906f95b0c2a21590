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

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from src.domain.models.chain_models import Dist


class PageRankConfig(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mu: Dist = Field(..., description="Restart distribution")
    delta: float = Field(..., ge=0.0, le=1.0, description="Restart probability")
    solver: Literal["resolvent", "series", "power"] = Field(
        "resolvent", description="How the PageRank vector is computed"
    )
    tol: float = Field(1e-10, gt=0.0, description="Target l1 residual")
    max_terms: int = Field(
        1_000_000, gt=0, description="Cap on series terms or power iterations"
    )


class PageRankResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    pi_delta: Dist = Field(..., description="Stationary distribution of P(delta)")
    residual: float = Field(
        ..., ge=0.0, description="||pi_delta P(delta) - pi_delta||_1"
    )
    terms_used: int = Field(
        0, ge=0, description="Series terms or power iterations; 0 for direct solves"
    )
    solver: str = Field(..., description="Solver that produced pi_delta")
