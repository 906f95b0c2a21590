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

from datetime import datetime
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


class ExceptionLogData(BaseModel):
    type: str = Field(..., description="Exception class name")
    message: str = Field(..., description="The exception message")
    module: Optional[str] = Field(None, description="Module defining the exception")
    method: Optional[str] = Field(None, description="Function where it was raised")
    stack_trace: Optional[str] = Field(None, description="Formatted traceback")
    numerical: bool = Field(
        False, description="True for solver failures, False for input errors"
    )


class LogRecord(BaseModel):
    sequence: int = Field(..., description="Per-handler sequence number")
    timestamp: str | datetime = Field(..., description="UTC creation time")
    type: str = Field(default="logs", description="The type of the logs")
    message: str = Field(..., description="The log message content")
    level: int = Field(..., description="Debug=1, Info=2, Warning=3, Error=4, Critical=5")
    trace_id: str = Field(default="", description="Current OpenTelemetry trace id")
    span_id: str = Field(default="", description="Current OpenTelemetry span id")
    traceparent: str = Field(default="", description="W3C traceparent header value")
    category_name: str = Field(..., description="Dotted module path of the emitter")
    attributes: Optional[Dict[str, Any]] = Field(
        None, description="Structured fields passed through logging's 'extra'"
    )
    exception: Optional[ExceptionLogData] = Field(
        None, description="Details of an attached exception"
    )
