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

from src.application.services.adversary_service import (
    AdversaryConfig,
    corrupt,
    make_test_chain,
    product_chain,
    product_measure,
    product_pair,
    star_pair,
)
from src.application.services.chain_core_service import (
    ChainCoreConfig,
    adjoint,
    apply_adjoint_density,
    check_contraction,
    density,
    l1_distance,
    measure_corruption,
    smoothness,
    stationarity_residual,
    stationary,
    tv_distance,
    validate_chain,
    weighted_lp_norm,
)
from src.application.services.pagerank_service import (
    PageRankSolverConfig,
    build_pagerank,
    check_corrupted_close,
    check_density_contraction,
    check_pr_close,
    pagerank_series,
    pagerank_stationary,
    tune_delta,
)
from src.application.services.recovery_service import (
    RecoveryConfig,
    evaluate_certified_bound,
    mixing_coefficient,
    recover,
    recover_at_delta,
    recover_spread,
    spread_alpha,
)
from src.application.services.spectral_service import (
    SpectralConfig,
    check_coupling_bound,
    check_mixing_bound,
    spectral_gap,
)
from src.application.services.verification_service import (
    VerificationConfig,
    run_suite,
)

__all__ = [
    "AdversaryConfig",
    "ChainCoreConfig",
    "PageRankSolverConfig",
    "RecoveryConfig",
    "SpectralConfig",
    "VerificationConfig",
    "validate_chain",
    "stationary",
    "stationarity_residual",
    "l1_distance",
    "tv_distance",
    "weighted_lp_norm",
    "density",
    "smoothness",
    "check_contraction",
    "adjoint",
    "apply_adjoint_density",
    "measure_corruption",
    "spectral_gap",
    "check_mixing_bound",
    "check_coupling_bound",
    "build_pagerank",
    "pagerank_series",
    "pagerank_stationary",
    "tune_delta",
    "check_pr_close",
    "check_density_contraction",
    "check_corrupted_close",
    "corrupt",
    "star_pair",
    "product_measure",
    "product_chain",
    "product_pair",
    "make_test_chain",
    "mixing_coefficient",
    "evaluate_certified_bound",
    "recover",
    "recover_at_delta",
    "recover_spread",
    "spread_alpha",
    "run_suite",
]
