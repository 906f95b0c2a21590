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

import numpy as np
import pytest

from src.application.services import make_test_chain, validate_chain
from src.core import SentinelSettings
from src.domain.models import Dist


@pytest.fixture
def two_state_chain():
    """[[1 - a, a], [b, 1 - b]] with a = 0.3, b = 0.1; pi = (0.25, 0.75)."""
    return validate_chain([[0.7, 0.3], [0.1, 0.9]])


@pytest.fixture
def two_state_pi():
    return Dist(values=[0.25, 0.75])


@pytest.fixture
def path_chain():
    """Reversible walk on a 3-state path with pi = (1/4, 1/2, 1/4)."""
    return validate_chain([[0.5, 0.5, 0.0], [0.25, 0.5, 0.25], [0.0, 0.5, 0.5]])


@pytest.fixture
def path_pi():
    return Dist(values=[0.25, 0.5, 0.25])


@pytest.fixture
def lazy_complete_16():
    return make_test_chain("lazy_complete", 16)


@pytest.fixture
def reversible_12():
    return make_test_chain("random_reversible", 12, seed=7)


@pytest.fixture
def rng():
    return np.random.default_rng(20250101)


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are a process singleton; drop it so env patches take effect."""
    SentinelSettings.drop_instance()
    yield
    SentinelSettings.drop_instance()


@pytest.fixture(autouse=True)
def restore_root_logger():
    """The CLI replaces the root handlers; put pytest's back afterwards."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
