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

import asyncio
import logging
from typing import Optional

from opentelemetry import trace

from src.application.services.recovery_service import recover
from src.domain.models import Dist, MarkovChain, RecoveryResult, RefineStrategy
from src.ports.input import RecoveryPort

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


class RecoveryPipelineAdapter(RecoveryPort):
    """Runs recovery off the event loop inside a `recover` span."""

    async def recover(
        self,
        corrupted: MarkovChain,
        mu: Dist,
        gamma: float,
        epsilon: float,
        beta: float,
        p: float,
        refine: Optional[RefineStrategy] = None,
        sup_ratio: Optional[float] = None,
    ) -> RecoveryResult:
        with tracer.start_as_current_span("recover") as span:
            span.set_attribute("chain.n", corrupted.n)
            span.set_attribute("recover.epsilon", epsilon)
            span.set_attribute("recover.gamma", gamma)
            try:
                result = await asyncio.to_thread(
                    recover,
                    corrupted,
                    mu,
                    gamma,
                    epsilon,
                    beta,
                    p,
                    refine,
                    sup_ratio,
                )
            except Exception as e:
                logger.error(f"Recovery failed: {e}")
                span.record_exception(e)
                raise
            span.set_attribute("recover.delta", result.delta_used)
            span.set_attribute("recover.certified_bound", result.certified_bound)
            return result
