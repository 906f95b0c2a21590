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

import logging
import os
import sys
import traceback
from datetime import datetime, timezone
from typing import Any, Dict, Optional, TextIO

from opentelemetry import trace
from opentelemetry.sdk.resources import SERVICE_NAME, Resource
from opentelemetry.sdk.trace import TracerProvider

from src.domain.errors import NumericalFailure
from src.domain.models import ExceptionLogData, LogRecord

LOG_LEVEL_MAPPER = {
    "NOTSET": 0,
    "DEBUG": 1,
    "INFO": 2,
    "WARNING": 3,
    "ERROR": 4,
    "CRITICAL": 5,
}

# Attributes every LogRecord has; anything else arrived through `extra=`.
_STANDARD_RECORD_ATTRS = set(
    logging.LogRecord("", 0, "", 0, "", (), None).__dict__
) | {"message", "asctime"}

_tracer_configured = False


class JsonConsoleHandler(logging.StreamHandler):
    """
    Writes one JSON object per log record, tagged with the active span.

    Defaults to stderr; stdout carries command results.
    """

    def __init__(self, stream: Optional[TextIO] = None):
        super().__init__(stream or sys.stderr)
        self.sequence = 0

    def emit(self, record):
        try:
            self.sequence += 1
            span = trace.get_current_span()
            context = span.get_span_context()
            trace_id = (
                f"{context.trace_id:032x}" if context and context.is_valid else ""
            )
            span_id = f"{context.span_id:016x}" if context and context.is_valid else ""
            traceparent = f"00-{trace_id}-{span_id}-01" if trace_id and span_id else ""

            exception = None
            if record.exc_info and record.exc_info[1] is not None:
                exc_type, exc, tb = record.exc_info
                exception = ExceptionLogData(
                    type=exc_type.__name__,
                    message=str(exc),
                    module=exc.__class__.__module__,
                    method=tb.tb_frame.f_code.co_name if tb else None,
                    stack_trace="".join(traceback.format_exception(*record.exc_info)),
                    numerical=isinstance(exc, NumericalFailure),
                )

            log_model = LogRecord(
                sequence=self.sequence,
                timestamp=datetime.fromtimestamp(
                    record.created, tz=timezone.utc
                ).isoformat(),
                message=record.getMessage(),
                level=LOG_LEVEL_MAPPER.get(record.levelname, 0),
                trace_id=trace_id,
                span_id=span_id,
                traceparent=traceparent,
                category_name=os.path.splitext(
                    os.path.relpath(record.pathname, start=os.getcwd())
                )[0].replace(os.sep, "."),
                attributes=_extra_attributes(record),
                exception=exception,
            )

            self.stream.write(log_model.model_dump_json(exclude_none=True) + "\n")
            self.flush()
        except Exception:
            self.handleError(record)


def _extra_attributes(record: logging.LogRecord) -> Optional[Dict[str, Any]]:
    extra = {
        key: value
        for key, value in record.__dict__.items()
        if key not in _STANDARD_RECORD_ATTRS and not key.startswith("_")
    }
    if not extra:
        return None
    return {key: _jsonable(value) for key, value in extra.items()}


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return repr(value)


def setup_opentelemetry_and_logger(
    service_name: str, level: str = "INFO", stream: Optional[TextIO] = None
) -> logging.Logger:
    """
    Install the tracer provider (once per process) and route the root logger
    through a single JSON handler.

    Args:
        service_name: Value of the service.name resource attribute
        level: Root logger level name
        stream: Destination of the JSON lines, stderr by default

    Returns:
        The configured root logger
    """
    global _tracer_configured
    if not _tracer_configured:
        trace.set_tracer_provider(
            TracerProvider(resource=Resource.create({SERVICE_NAME: service_name}))
        )
        _tracer_configured = True

    logger = logging.getLogger()
    logger.setLevel(level if level in LOG_LEVEL_MAPPER else logging.INFO)

    for handler in logger.handlers[:]:  # Clear any existing handlers
        logger.removeHandler(handler)

    logger.addHandler(JsonConsoleHandler(stream))
    logger.debug(f"Logging initialized for service: {service_name}.")

    return logger
