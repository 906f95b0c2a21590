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

from opentelemetry import trace

from src.application.services.verification_service import run_suite
from src.domain.models import Dist, MarkovChain, SuiteName, VerificationReport
from src.ports.input import BoundVerificationPort

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


class BoundVerificationAdapter(BoundVerificationPort):
    async def verify(
        self,
        suite: SuiteName,
        chain: MarkovChain,
        pi: Dist,
        seed: int = 0,
        trials: int = 20,
    ) -> VerificationReport:
        with tracer.start_as_current_span("verify") as span:
            span.set_attribute("verify.suite", suite)
            span.set_attribute("chain.n", chain.n)
            try:
                report = await asyncio.to_thread(run_suite, suite, chain, pi, seed, trials)
            except Exception as e:
                logger.error(f"Suite {suite} could not run: {e}")
                span.record_exception(e)
                raise
            span.set_attribute("verify.violations", len(report.violations))
            return report
