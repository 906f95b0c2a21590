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
from pathlib import Path

from src.application.services.chain_core_service import validate_chain
from src.domain.models import ChainFileModel, Dist, DistFileModel, MarkovChain
from src.ports.output import ChainStoragePort
from src.utils.helpers import file_exists_and_nonempty

logger = logging.getLogger(__name__)


class JsonChainStorageAdapter(ChainStoragePort):
    """Implement the ChainStoragePort on local JSON files."""

    async def load_chain(self, path: Path) -> MarkovChain:
        path = Path(path)
        text = await self._read(path)
        model = ChainFileModel.model_validate_json(text)
        if model.format == "triplets":
            chain = validate_chain(model.data, layout="triplets", n=model.n)
        else:
            chain = validate_chain(model.data)
        logger.info(f"Loaded {model.format} chain with {chain.n} states from {path}")
        return chain

    async def save_chain(self, chain: MarkovChain, path: Path) -> Path:
        model = ChainFileModel.from_chain(chain)
        return await self._write(Path(path), model.model_dump_json())

    async def load_dist(self, path: Path) -> Dist:
        path = Path(path)
        model = DistFileModel.model_validate_json(await self._read(path))
        return Dist.from_values(model.values)

    async def save_dist(self, dist: Dist, path: Path) -> Path:
        return await self._write(Path(path), DistFileModel.from_dist(dist).model_dump_json())

    @staticmethod
    async def _read(path: Path) -> str:
        if not await file_exists_and_nonempty(path):
            logger.error(f"File {path} is missing or empty")
            raise FileNotFoundError(f"{path} is missing or empty")
        return await asyncio.to_thread(path.read_text, encoding="utf-8")

    @staticmethod
    async def _write(path: Path, text: str) -> Path:
        await asyncio.to_thread(path.parent.mkdir, parents=True, exist_ok=True)
        await asyncio.to_thread(path.write_text, text + "\n", encoding="utf-8")
        logger.info(f"Wrote {path}")
        return path
