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

from pydantic import BaseModel, ConfigDict, Field

from src.domain.models.chain_models import Dist


class RefineStrategy(BaseModel):
    kind: Literal["none", "grid"] = Field("grid", description="Refinement around delta*")
    points: int = Field(9, ge=1, description="Log-spaced candidates in [delta*/10, 10 delta*]")

    @classmethod
    def none(cls) -> "RefineStrategy":
        return cls(kind="none", points=1)

    @classmethod
    def grid(cls, points: int = 9) -> "RefineStrategy":
        return cls(kind="grid", points=points)


class DeltaCandidate(BaseModel):
    delta: float = Field(..., description="Restart probability tried")
    pagerank_bias_l1: float = Field(..., description="Certified bound on ||pi - pi_delta||_1")
    corruption_gap_l1: float = Field(
        ..., description="Certified bound on ||pi_delta - corrupted pi_delta||_1"
    )
    certified_bound: float = Field(..., description="Certified TV bound at this delta")


class RecoveryDiagnostics(BaseModel):
    delta_star: float = Field(..., description="Untuned closed-form restart probability")
    q: float = Field(..., description="Dual exponent of p")
    mixing_coefficient: Optional[float] = Field(
        None, description="Constant in front of exp(-t gamma); None when unavailable"
    )
    candidates: List[DeltaCandidate] = Field(default_factory=list)
    solver_residual: float = Field(..., description="Residual of the PageRank solve")
    realized_tv: Optional[float] = Field(
        None, description="d_TV(pi_hat, pi) when a reference distribution was given"
    )
    vacuous: bool = Field(False, description="Certified bound is >= 1")


class RecoveryResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    pi_hat: Dist = Field(..., description="PageRank estimate of the clean stationary law")
    delta_used: float = Field(..., description="Restart probability behind pi_hat")
    certified_bound: float = Field(
        ..., description="Upper bound on d_TV(pi_hat, pi) from the corruption inputs"
    )
    certified_bound_l1: float = Field(
        ..., description="Same bound expressed for ||pi_hat - pi||_1"
    )
    pagerank_bias_l1: float = Field(..., description="Bias component of the l1 bound")
    corruption_gap_l1: float = Field(..., description="Corruption component of the l1 bound")
    diagnostics: RecoveryDiagnostics
