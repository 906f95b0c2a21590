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

SuiteName = Literal["contract", "mixing", "coupling", "prclose", "corruptclose"]

VERIFICATION_COLUMNS = ["suite", "case", "t", "p", "lhs", "rhs", "holds"]


class VerificationRow(BaseModel):
    suite: SuiteName
    case: str = Field(..., description="Which random draw or parameter set")
    t: Optional[int] = None
    p: Optional[float] = None
    lhs: float
    rhs: float
    holds: bool


class VerificationReport(BaseModel):
    suite: SuiteName
    rows: List[VerificationRow] = Field(default_factory=list)

    @property
    def violations(self) -> List[VerificationRow]:
        return [row for row in self.rows if not row.holds]

    @property
    def passed(self) -> bool:
        return not self.violations
