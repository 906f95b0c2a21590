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

import math
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from src.domain.models.adversary_models import ChainFamily

EXPERIMENT_COLUMNS = [
    "trial",
    "seed",
    "n",
    "kind",
    "gamma",
    "eps_target",
    "eps_measured",
    "beta",
    "p",
    "delta",
    "tv_pagerank_bias",
    "tv_corruption_gap",
    "tv_realized",
    "certified_bound",
    "runtime_ms",
    "status",
]


class ChainSource(BaseModel):
    """Where the clean chain of every trial comes from."""

    path: Optional[str] = Field(None, description="Chain JSON file")
    family: Optional[ChainFamily] = Field(None, description="Generated test family")
    n: Optional[int] = Field(None, gt=1, description="States of the generated chain")

    @model_validator(mode="after")
    def _exactly_one_source(self) -> "ChainSource":
        if (self.path is None) == (self.family is None):
            raise ValueError("chain source needs exactly one of 'path' or 'family'")
        if self.family is not None and self.n is None:
            raise ValueError("generated chains need 'n'")
        return self


class RestartSource(BaseModel):
    kind: Literal["uniform", "stationary", "file"] = Field(
        "uniform", description="Restart distribution mu"
    )
    path: Optional[str] = Field(None, description="Dist JSON file for kind 'file'")

    @model_validator(mode="after")
    def _file_needs_path(self) -> "RestartSource":
        if self.kind == "file" and not self.path:
            raise ValueError("restart kind 'file' needs 'path'")
        return self


class ExperimentConfig(BaseModel):
    chain: ChainSource
    corruption_kind: Literal["per_row_tv", "row_replacement", "absorbing"] = Field(
        "absorbing", description="Adversary applied in every cell"
    )
    selection: Literal["budget", "fraction"] = Field(
        "budget",
        description=(
            "'budget' picks rows greedily while pi(C) <= eps/2; "
            "'fraction' corrupts max(1, floor(eps * n)) seeded rows"
        ),
    )
    epsilons: List[float] = Field(..., min_length=1, description="Target corruption grid")
    deltas: List[Union[float, Literal["auto"]]] = Field(
        default_factory=lambda: ["auto"], min_length=1, description="Restart grid"
    )
    restart: RestartSource = Field(default_factory=RestartSource)
    p: float = Field(math.inf, gt=1.0, description="Smoothness exponent")
    gamma: Optional[float] = Field(
        None, gt=0.0, le=1.0, description="Gap supplied to recovery; measured if absent"
    )
    beta: Optional[float] = Field(
        None, ge=1.0, description="Smoothness supplied to recovery; measured if absent"
    )
    trials: int = Field(1, ge=1)
    master_seed: int = Field(0, ge=0)
    refine: int = Field(9, ge=0, description="Grid refinement points, 0 for none")
    output: Optional[str] = Field(None, description="CSV destination; stdout if absent")
    record_runtime: bool = Field(
        False, description="Write wall-clock runtime; 0 keeps reruns byte-identical"
    )

    @field_validator("epsilons")
    @classmethod
    def _check_epsilons(cls, values: List[float]) -> List[float]:
        for eps in values:
            if not 0.0 <= eps <= 2.0:
                raise ValueError(f"epsilon {eps!r} outside [0, 2]")
        return values

    @field_validator("deltas")
    @classmethod
    def _check_deltas(
        cls, values: List[Union[float, str]]
    ) -> List[Union[float, str]]:
        for delta in values:
            if delta != "auto" and not 0.0 < float(delta) <= 1.0:
                raise ValueError(f"delta {delta!r} outside (0, 1]")
        return values


class ExperimentRow(BaseModel):
    trial: int
    seed: int
    n: int
    kind: str
    gamma: Optional[float] = None
    eps_target: float
    eps_measured: Optional[float] = None
    beta: Optional[float] = None
    p: float
    delta: Optional[float] = None
    tv_pagerank_bias: Optional[float] = None
    tv_corruption_gap: Optional[float] = None
    tv_realized: Optional[float] = None
    certified_bound: Optional[float] = None
    runtime_ms: float = 0.0
    status: str = "ok"
