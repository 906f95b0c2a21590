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

from typing import Any, List, Literal, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    field_validator,
    model_validator,
)

from src.domain.errors import InvalidDistribution, StateSpaceTooLarge

DENSE_STATE_LIMIT = 2048
DIST_SUM_TOLERANCE = 1e-10


def _frozen_vector(values: Any) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 1:
        raise ValueError(f"expected a one-dimensional vector, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


class Dist(BaseModel):
    """A probability vector over the states 0..n-1."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray = Field(..., description="Probability mass of each state")

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, v: Any) -> np.ndarray:
        return _frozen_vector(v)

    @field_serializer("values")
    def _serialize_values(self, values: np.ndarray) -> List[float]:
        return values.tolist()

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @classmethod
    def from_values(
        cls, values: Any, tolerance: float = DIST_SUM_TOLERANCE
    ) -> "Dist":
        """
        Build a validated distribution.

        Args:
            values: Nonnegative finite entries summing to 1 within tolerance
            tolerance: Allowed deviation of the total mass from 1

        Returns:
            Dist renormalized to unit mass

        Raises:
            InvalidDistribution: If an entry is negative or not finite, or the
                mass is off by more than the tolerance
        """
        arr = np.array(values, dtype=np.float64, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidDistribution(
                f"distribution must be a non-empty vector, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise InvalidDistribution(f"entry {bad} is not finite")
        if np.any(arr < 0):
            bad = int(np.flatnonzero(arr < 0)[0])
            raise InvalidDistribution(f"entry {bad} is negative: {arr[bad]!r}")
        total = float(arr.sum())
        if abs(total - 1.0) > tolerance:
            raise InvalidDistribution(
                f"entries sum to {total!r}, outside tolerance {tolerance!r}"
            )
        return cls(values=arr / total)

    @classmethod
    def uniform(cls, n: int) -> "Dist":
        return cls(values=np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, n: int, state: int) -> "Dist":
        arr = np.zeros(n)
        arr[state] = 1.0
        return cls(values=arr)


class WeightedFn(BaseModel):
    """A real-valued function on states, read against a reference distribution."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray = Field(..., description="Function value at each state")

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, v: Any) -> np.ndarray:
        arr = _frozen_vector(v)
        if not np.all(np.isfinite(arr)):
            raise ValueError("function values must be finite")
        return arr

    @field_serializer("values")
    def _serialize_values(self, values: np.ndarray) -> List[float]:
        return values.tolist()

    @property
    def n(self) -> int:
        return int(self.values.shape[0])


class CorruptionReport(BaseModel):
    """How far a corrupted chain sits from the original, weighted by pi."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    epsilon: float = Field(
        ..., description="Sum over x of pi(x) * ||P(x,.) - P~(x,.)||_1"
    )
    per_row_tv: np.ndarray = Field(
        ..., description="Total-variation distance between matching rows"
    )
    corrupted_rows: List[int] = Field(
        default_factory=list, description="Rows whose TV distance is positive"
    )

    @field_validator("per_row_tv", mode="before")
    @classmethod
    def _coerce_rows(cls, v: Any) -> np.ndarray:
        return _frozen_vector(v)

    @field_serializer("per_row_tv")
    def _serialize_rows(self, values: np.ndarray) -> List[float]:
        return values.tolist()

    @model_validator(mode="after")
    def _check_epsilon(self) -> "CorruptionReport":
        if not (-1e-12 <= self.epsilon <= 2.0 + 1e-10):
            raise ValueError(f"epsilon must lie in [0, 2], got {self.epsilon!r}")
        return self


class MarkovChain(BaseModel):
    """
    Row-stochastic transition matrix on states 0..n-1.

    The base matrix is a dense ndarray or a scipy CSR matrix. A chain may also
    carry a rank-one restart part, in which case it acts as
    (1 - damping) * matrix + damping * 1^T restart without materializing it.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(..., gt=0, description="Number of states")
    matrix: Any = Field(..., description="Dense ndarray or scipy CSR matrix")
    restart: Optional[np.ndarray] = Field(
        None, description="Restart distribution of a lazily applied composite"
    )
    damping: float = Field(0.0, ge=0.0, le=1.0, description="Restart probability")

    @field_validator("restart", mode="before")
    @classmethod
    def _coerce_restart(cls, v: Any) -> Optional[np.ndarray]:
        if v is None:
            return None
        return _frozen_vector(v)

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    @property
    def is_composite(self) -> bool:
        return self.restart is not None

    @property
    def storage(self) -> Literal["dense", "sparse"]:
        return "sparse" if self.is_sparse else "dense"

    def left_multiply(self, v: np.ndarray) -> np.ndarray:
        """Row vector times the chain, v P."""
        out = np.asarray(self.matrix.T @ v, dtype=np.float64).ravel()
        if self.restart is not None:
            mass = float(np.sum(v))
            out = (1.0 - self.damping) * out + self.damping * mass * self.restart
        return out

    def right_multiply(self, f: np.ndarray) -> np.ndarray:
        """The chain applied to a function, P f."""
        out = np.asarray(self.matrix @ f, dtype=np.float64).ravel()
        if self.restart is not None:
            out = (1.0 - self.damping) * out + self.damping * float(self.restart @ f)
        return out

    def to_dense(self) -> np.ndarray:
        base = self.matrix.toarray() if self.is_sparse else np.array(self.matrix)
        if self.restart is not None:
            base = (1.0 - self.damping) * base + self.damping * np.outer(
                np.ones(self.n), self.restart
            )
        return base

    def explicit_matrix(self) -> Any:
        """
        The transition matrix in its stored form.

        Composites are materialized densely, which is only allowed up to the
        dense state limit.
        """
        if self.restart is None:
            return self.matrix
        if self.n > DENSE_STATE_LIMIT:
            raise StateSpaceTooLarge(self.n, DENSE_STATE_LIMIT)
        return self.to_dense()

    def row_entries(self, row: int) -> Tuple[np.ndarray, np.ndarray]:
        """Column indices and probabilities of the nonzero entries of one row."""
        if self.restart is not None:
            dense_row = (1.0 - self.damping) * self._base_row(row) + (
                self.damping * self.restart
            )
            cols = np.flatnonzero(dense_row)
            return cols, dense_row[cols]
        if self.is_sparse:
            start, end = self.matrix.indptr[row], self.matrix.indptr[row + 1]
            return (
                np.array(self.matrix.indices[start:end]),
                np.array(self.matrix.data[start:end], dtype=np.float64),
            )
        dense_row = np.asarray(self.matrix[row], dtype=np.float64)
        cols = np.flatnonzero(dense_row)
        return cols, dense_row[cols]

    def _base_row(self, row: int) -> np.ndarray:
        if self.is_sparse:
            return self.matrix.getrow(row).toarray().ravel()
        return np.asarray(self.matrix[row], dtype=np.float64)

    def triplets(self) -> List[Tuple[int, int, float]]:
        """Nonzero entries as (row, col, prob), sorted by row then column."""
        coo = sp.coo_matrix(self.explicit_matrix())
        order = np.lexsort((coo.col, coo.row))
        return [
            (int(coo.row[k]), int(coo.col[k]), float(coo.data[k]))
            for k in order
            if coo.data[k] != 0.0
        ]


class ChainFileModel(BaseModel):
    """On-disk JSON layout of a chain."""

    n: int = Field(..., gt=0, description="Number of states")
    format: Literal["dense", "triplets"] = Field(
        ..., description="Dense row lists or sparse (row, col, prob) triplets"
    )
    data: List[List[float]] = Field(..., description="Rows or triplets")

    @model_validator(mode="after")
    def _check_shape(self) -> "ChainFileModel":
        if self.format == "dense":
            if len(self.data) != self.n:
                raise ValueError(f"dense chain needs {self.n} rows, got {len(self.data)}")
        else:
            for entry in self.data:
                if len(entry) != 3:
                    raise ValueError(f"triplet must have 3 fields, got {entry}")
                if entry[0] != int(entry[0]) or entry[1] != int(entry[1]):
                    raise ValueError(f"triplet indices must be integers, got {entry}")
        return self

    @classmethod
    def from_chain(cls, chain: MarkovChain) -> "ChainFileModel":
        if chain.is_sparse:
            return cls(
                n=chain.n,
                format="triplets",
                data=[[i, j, p] for i, j, p in chain.triplets()],
            )
        return cls(n=chain.n, format="dense", data=chain.to_dense().tolist())


class DistFileModel(BaseModel):
    """On-disk JSON layout of a distribution."""

    n: int = Field(..., gt=0, description="Number of states")
    values: List[float] = Field(..., description="Probability of each state")

    @model_validator(mode="after")
    def _check_length(self) -> "DistFileModel":
        if len(self.values) != self.n:
            raise ValueError(f"expected {self.n} values, got {len(self.values)}")
        return self

    @classmethod
    def from_dist(cls, dist: Dist) -> "DistFileModel":
        return cls(n=dist.n, values=dist.values.tolist())
