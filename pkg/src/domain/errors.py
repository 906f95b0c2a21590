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

from typing import Optional, Tuple


class SentinelError(Exception):
    """Base class for every error raised by the sentinel services."""


class ChainInputError(SentinelError, ValueError):
    """The caller supplied a chain, distribution or parameter that is invalid."""


class NumericalFailure(SentinelError, RuntimeError):
    """A solver could not produce a trustworthy answer."""


class NonSquare(ChainInputError):
    def __init__(self, shape: Tuple[int, ...]):
        self.shape = shape
        super().__init__(f"transition matrix must be square, got shape {shape}")


class NonFiniteEntry(ChainInputError):
    def __init__(self, row: int, col: int):
        self.row = row
        self.col = col
        super().__init__(f"entry ({row}, {col}) is not finite")


class NegativeEntry(ChainInputError):
    def __init__(self, row: int, col: int, value: float):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"entry ({row}, {col}) is negative: {value!r}")


class RowSumOutOfTolerance(ChainInputError):
    def __init__(self, row: int, actual_sum: float, tolerance: float):
        self.row = row
        self.actual_sum = actual_sum
        self.tolerance = tolerance
        super().__init__(
            f"row {row} sums to {actual_sum!r}, outside tolerance {tolerance!r}"
        )


class InvalidTriplet(ChainInputError):
    pass


class InvalidDistribution(ChainInputError):
    pass


class LengthMismatch(ChainInputError):
    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"length mismatch: expected {expected}, got {actual}")


class SizeMismatch(ChainInputError):
    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"state-space size mismatch: {expected} vs {actual}")


class InvalidExponent(ChainInputError):
    def __init__(self, p: float):
        self.p = p
        super().__init__(f"norm exponent must be >= 1, got {p!r}")


class UnsupportedMass(ChainInputError):
    def __init__(self, state: int):
        self.state = state
        super().__init__(f"mu puts mass on state {state} where pi is zero")


class ZeroMassState(ChainInputError):
    def __init__(self, state: int):
        self.state = state
        super().__init__(f"pi must be strictly positive, state {state} has zero mass")


class NotStationary(ChainInputError):
    def __init__(self, residual: float, tolerance: float):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"distribution is not stationary: ||pi P - pi||_1 = {residual!r} "
            f"exceeds {tolerance!r}"
        )


class OutOfRange(ChainInputError):
    def __init__(self, name: str, value: float, allowed: str):
        self.name = name
        self.value = value
        super().__init__(f"{name}={value!r} is outside {allowed}")


class BudgetInfeasible(ChainInputError):
    def __init__(self, budget: float, smallest_mass: float):
        self.budget = budget
        self.smallest_mass = smallest_mass
        super().__init__(
            f"budget {budget!r} cannot cover any row: smallest pi mass is "
            f"{smallest_mass!r} > budget / 2"
        )


class StateSpaceTooLarge(ChainInputError):
    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(f"state space of size {n} exceeds limit {limit}")


class NoConvergence(NumericalFailure):
    def __init__(self, iterations: int, residual: Optional[float] = None):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no convergence after {iterations} iterations (last change {residual!r})"
        )


class SingularSystem(NumericalFailure):
    pass


class NonUniqueStationary(NumericalFailure):
    def __init__(self, nullity: int):
        self.nullity = nullity
        super().__init__(
            f"stationary distribution is not unique: null space of P^T - I "
            f"has dimension {nullity}"
        )


class IterativeNoConvergence(NumericalFailure):
    pass


class SolveFailure(NumericalFailure):
    pass


class VacuousBoundWarning(UserWarning):
    """A certified bound was produced but carries no information."""


__all__ = [
    "SentinelError",
    "ChainInputError",
    "NumericalFailure",
    "NonSquare",
    "NonFiniteEntry",
    "NegativeEntry",
    "RowSumOutOfTolerance",
    "InvalidTriplet",
    "InvalidDistribution",
    "LengthMismatch",
    "SizeMismatch",
    "InvalidExponent",
    "UnsupportedMass",
    "ZeroMassState",
    "NotStationary",
    "OutOfRange",
    "BudgetInfeasible",
    "StateSpaceTooLarge",
    "NoConvergence",
    "SingularSystem",
    "NonUniqueStationary",
    "IterativeNoConvergence",
    "SolveFailure",
    "VacuousBoundWarning",
]
