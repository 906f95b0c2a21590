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

import math
import warnings

import numpy as np
import pytest

from src.application.services import (
    corrupt,
    evaluate_certified_bound,
    make_test_chain,
    mixing_coefficient,
    recover,
    recover_at_delta,
    recover_spread,
    smoothness,
    spectral_gap,
    spread_alpha,
    stationary,
    tv_distance,
)
from src.domain.errors import OutOfRange, VacuousBoundWarning, ZeroMassState
from src.domain.models import CorruptionSpec, Dist, RefineStrategy


@pytest.fixture(scope="module")
def absorbed_complete_128():
    """lazy_complete(128) with state 0 turned into an absorbing state."""
    chain, pi = make_test_chain("lazy_complete", 128)
    spec = CorruptionSpec(kind="absorbing", budget=0.01, target_rows=[0])
    corrupted, report = corrupt(chain, pi, spec)
    return corrupted, pi, report


class TestMixingCoefficient:
    @pytest.mark.parametrize(
        "beta, p, sup_ratio, expected",
        [
            (1.0, math.inf, None, math.sqrt(2.0)),
            (2.0, math.inf, None, 2.0),
            (2.0, math.inf, 1.5, math.sqrt(3.0)),
            (2.0, 2.0, None, math.sqrt(3.0)),
            (2.0, 1.5, None, None),
            (2.0, 1.5, 4.0, math.sqrt(8.0)),
            (5.0, 2.0, 1.5, math.sqrt(3.0)),
        ],
    )
    def test_sup_ratio_constant_with_l2_fallback(self, beta, p, sup_ratio, expected):
        value = mixing_coefficient(beta, p, sup_ratio)
        if expected is None:
            assert value is None
        else:
            assert value == pytest.approx(expected)


class TestEvaluateCertifiedBound:
    def test_matches_brute_force_minimum(self):
        candidate = evaluate_certified_bound(1.0, 0.04, 2.0, math.inf, 0.1)
        bias = min(2.0 * math.exp(-t) + 0.2 * t for t in range(2000))
        gap = min(2 * math.exp(-0.1 * t) + 2 * 0.04 * 2.0 * t for t in range(2000))
        assert candidate.pagerank_bias_l1 == pytest.approx(bias)
        assert candidate.corruption_gap_l1 == pytest.approx(gap)
        assert candidate.certified_bound == pytest.approx(0.5 * (bias + gap))

    def test_bias_uses_sup_norm_constant_at_p_infinity(self):
        candidate = evaluate_certified_bound(0.5, 0.01, 1.5, math.inf, 0.01)
        bias = min(math.sqrt(3.0) * math.exp(-t / 2) + 0.02 * t for t in range(5000))
        assert candidate.pagerank_bias_l1 == pytest.approx(bias, rel=1e-12)
        assert candidate.pagerank_bias_l1 == pytest.approx(0.19172361712837196, rel=1e-9)

    def test_zero_corruption_has_no_gap(self):
        candidate = evaluate_certified_bound(0.5, 0.0, 1.0, math.inf, 0.1)
        assert candidate.corruption_gap_l1 == 0.0
        assert candidate.pagerank_bias_l1 > 0.0
        assert candidate.certified_bound == pytest.approx(0.5 * candidate.pagerank_bias_l1)

    def test_p_one_is_rejected(self):
        with pytest.raises(OutOfRange):
            evaluate_certified_bound(0.5, 0.01, 1.0, 1.0, 0.1)

    def test_unknown_coefficient_gives_trivial_bias(self):
        candidate = evaluate_certified_bound(0.5, 0.01, 2.0, 1.5, 0.1)
        assert candidate.pagerank_bias_l1 == 2.0

    def test_components_are_capped(self):
        candidate = evaluate_certified_bound(1e-3, 0.5, 50.0, math.inf, 1e-6)
        assert candidate.pagerank_bias_l1 <= 2.0
        assert candidate.corruption_gap_l1 <= 2.0
        assert candidate.certified_bound <= 2.0

    @pytest.mark.parametrize("delta", [1e-3, 0.05, 0.5, 1.0])
    def test_nondecreasing_in_epsilon(self, delta):
        bounds = [
            evaluate_certified_bound(0.5, eps, 1.5, 2.0, delta).certified_bound
            for eps in (0.0, 1e-4, 1e-3, 0.01, 0.1, 0.5)
        ]
        for smaller, larger in zip(bounds, bounds[1:]):
            assert larger >= smaller - 1e-9

    @pytest.mark.parametrize(
        "args",
        [
            (0.0, 0.1, 1.0, 2.0, 0.1),
            (0.5, 1.0, 1.0, 2.0, 0.1),
            (0.5, 0.1, 0.9, 2.0, 0.1),
            (0.5, 0.1, 1.0, 2.0, 0.0),
            (0.5, 0.1, 1.0, 2.0, 1.5),
        ],
    )
    def test_out_of_range(self, args):
        with pytest.raises(OutOfRange):
            evaluate_certified_bound(*args)


class TestRecover:
    def test_uncorrupted_chain_with_stationary_restart(self, reversible_12):
        chain, pi = reversible_12
        beta = smoothness(pi, pi, math.inf)
        result = recover(chain, pi, 0.1, 0.0, beta, math.inf, reference=pi)
        assert 0.0 < result.certified_bound < 1e-4
        assert result.corruption_gap_l1 == 0.0
        assert result.diagnostics.realized_tv == pytest.approx(0.0, abs=1e-7)
        assert result.diagnostics.delta_star == 1e-6

    def test_certified_bound_shrinks_with_delta_when_uncorrupted(self, reversible_12):
        chain, pi = reversible_12
        result = recover(chain, pi, 0.1, 0.0, 1.0, math.inf)
        bounds = [c.certified_bound for c in result.diagnostics.candidates]
        assert bounds == sorted(bounds)
        assert result.delta_used == min(c.delta for c in result.diagnostics.candidates)

    def test_ties_go_to_the_smallest_delta(self, reversible_12):
        # No mixing constant for p < 2 without sup_ratio, so every candidate scores 1.
        chain, pi = reversible_12
        with pytest.warns(VacuousBoundWarning):
            result = recover(chain, pi, 0.1, 0.0, 1.0, 1.5)
        deltas = [c.delta for c in result.diagnostics.candidates]
        assert len(deltas) == 9
        assert {c.certified_bound for c in result.diagnostics.candidates} == {1.0}
        assert result.delta_used == min(deltas)

    def test_no_refinement_uses_delta_star(self, absorbed_complete_128):
        corrupted, _, report = absorbed_complete_128
        result = recover(
            corrupted, Dist.uniform(128), 0.5, report.epsilon, 1.0, math.inf,
            refine=RefineStrategy.none(),
        )
        assert len(result.diagnostics.candidates) == 1
        assert result.delta_used == result.diagnostics.delta_star

    def test_measured_corruption_of_one_absorbing_row(self, absorbed_complete_128):
        _, _, report = absorbed_complete_128
        assert report.epsilon == pytest.approx((1 / 128) * (1 - 1 / 128))

    def test_naive_stationary_is_captured(self, absorbed_complete_128):
        corrupted, pi, _ = absorbed_complete_128
        naive = stationary(corrupted, method="power")
        assert tv_distance(naive, pi) >= 0.9

    def test_pagerank_recovery_is_certified(self, absorbed_complete_128):
        corrupted, pi, report = absorbed_complete_128
        result = recover(
            corrupted, Dist.uniform(128), 0.5, report.epsilon, 1.0, math.inf, reference=pi
        )
        # delta* ~ 0.1372; the grid point delta* * 10^(-1/4) wins with t = 3 and t = 30.
        assert result.diagnostics.mixing_coefficient == pytest.approx(math.sqrt(2.0))
        assert result.delta_used == pytest.approx(0.07718, rel=1e-3)
        assert result.pagerank_bias_l1 == pytest.approx(0.7786, abs=1e-3)
        assert result.corruption_gap_l1 == pytest.approx(0.6626, abs=1e-3)
        assert result.certified_bound == pytest.approx(0.7206, abs=1e-3)
        assert result.certified_bound < 0.9
        # Absorbed mass is (1 + delta) / (2n) / (delta + (1 - delta) / (2n)) at state 0.
        assert result.diagnostics.realized_tv == pytest.approx(0.04428, abs=1e-3)
        assert result.diagnostics.realized_tv <= result.certified_bound
        assert result.certified_bound_l1 == pytest.approx(2 * result.certified_bound)
        assert not result.diagnostics.vacuous

    @pytest.mark.parametrize("p", [2.0, math.inf])
    @pytest.mark.parametrize("seed", range(8))
    def test_bound_is_sound_on_reversible_chains(self, seed, p):
        chain, pi = make_test_chain("random_reversible", 12, seed=seed)
        gamma = spectral_gap(chain, pi).gamma
        spec = CorruptionSpec(kind="row_replacement", budget=0.2, seed=seed)
        corrupted, report = corrupt(chain, pi, spec)
        mu = Dist.uniform(12)
        result = recover(
            corrupted,
            mu,
            gamma,
            report.epsilon,
            smoothness(mu, pi, p),
            p,
            sup_ratio=smoothness(mu, pi, math.inf),
            reference=pi,
        )
        assert result.diagnostics.realized_tv <= result.certified_bound + 1e-9

    def test_vacuous_bound_warns(self, absorbed_complete_128):
        corrupted, _, _ = absorbed_complete_128
        with pytest.warns(VacuousBoundWarning):
            result = recover(corrupted, Dist.uniform(128), 1e-3, 0.5, 50.0, math.inf)
        assert result.diagnostics.vacuous

    def test_restart_length_must_match(self, absorbed_complete_128):
        corrupted, _, _ = absorbed_complete_128
        with pytest.raises(ValueError):
            recover(corrupted, Dist.uniform(4), 0.5, 0.01, 1.0, math.inf)


class TestRecoverAtDelta:
    def test_fixed_delta(self, absorbed_complete_128):
        corrupted, pi, report = absorbed_complete_128
        result = recover_at_delta(
            corrupted, Dist.uniform(128), 0.3, 0.5, report.epsilon, 1.0, math.inf, reference=pi
        )
        assert result.delta_used == 0.3
        assert len(result.diagnostics.candidates) == 1
        assert result.diagnostics.realized_tv <= result.certified_bound


class TestSpread:
    def test_spread_alpha(self, two_state_pi):
        assert spread_alpha(two_state_pi) == pytest.approx(0.5)
        assert spread_alpha(Dist.uniform(7)) == pytest.approx(1.0)

    def test_spread_alpha_needs_positive_pi(self):
        with pytest.raises(ZeroMassState):
            spread_alpha([0.5, 0.5, 0.0])

    def test_recover_spread(self, absorbed_complete_128):
        corrupted, pi, _ = absorbed_complete_128
        result = recover_spread(corrupted, 1.0, 1 / 128, 0.5, reference=pi)
        assert result.diagnostics.realized_tv <= result.certified_bound
        assert result.certified_bound < 0.9

    def test_recover_spread_without_corruption_is_bias_only(self, reversible_12):
        chain, pi = reversible_12
        alpha = spread_alpha(pi)
        result = recover_spread(chain, alpha, 0.0, 0.1, reference=pi)
        assert result.corruption_gap_l1 == 0.0
        assert result.certified_bound == pytest.approx(0.5 * result.pagerank_bias_l1)
        assert result.diagnostics.mixing_coefficient == pytest.approx(math.sqrt(2.0 / alpha))
        assert result.diagnostics.realized_tv <= result.certified_bound

    @pytest.mark.parametrize("alpha, epsilon_rows", [(0.0, 0.1), (1.5, 0.1), (0.5, 1.5)])
    def test_recover_spread_ranges(self, alpha, epsilon_rows, absorbed_complete_128):
        corrupted, _, _ = absorbed_complete_128
        with pytest.raises(OutOfRange):
            recover_spread(corrupted, alpha, epsilon_rows, 0.5)


ABSORBING_FRACTIONS = (0.001, 0.01, 0.05)
SWEEP_SEEDS = range(20)


@pytest.fixture(scope="module")
def absorbing_sweep():
    """lazy_complete(128) with floor(eps n) (at least one) random rows made absorbing."""
    chain, pi = make_test_chain("lazy_complete", 128)
    mu = Dist.uniform(128)
    trials = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VacuousBoundWarning)
        for eps in ABSORBING_FRACTIONS:
            runs = []
            for seed in SWEEP_SEEDS:
                count = max(1, math.floor(eps * chain.n))
                rows = np.random.default_rng(seed).choice(chain.n, size=count, replace=False)
                spec = CorruptionSpec(
                    kind="absorbing", budget=eps, target_rows=sorted(int(r) for r in rows)
                )
                corrupted, report = corrupt(chain, pi, spec)
                args = (corrupted, mu, 0.5, report.epsilon, 1.0, math.inf)
                runs.append(
                    (
                        corrupted,
                        report,
                        recover(*args, reference=pi),
                        recover(*args, refine=RefineStrategy.none(), reference=pi),
                    )
                )
            trials[eps] = runs
    return pi, trials


class TestAbsorbingFractions:
    """End-to-end recovery on lazy_complete(128) across absorbing-row fractions."""

    @pytest.mark.parametrize("eps", ABSORBING_FRACTIONS)
    def test_bound_is_sound_on_every_trial(self, eps, absorbing_sweep):
        _, trials = absorbing_sweep
        for _, _, refined, at_delta_star in trials[eps]:
            for result in (refined, at_delta_star):
                assert result.diagnostics.realized_tv <= result.certified_bound + 1e-8

    def test_restart_beats_the_naive_stationary_at_smallest_fraction(self, absorbing_sweep):
        pi, trials = absorbing_sweep
        for corrupted, _, refined, _ in trials[0.001]:
            assert tv_distance(stationary(corrupted, method="power"), pi) >= 0.9
            assert refined.diagnostics.realized_tv <= 0.35

    @pytest.mark.parametrize("eps", [0.001, 0.01])
    def test_certified_bound_is_informative_for_small_fractions(self, eps, absorbing_sweep):
        _, trials = absorbing_sweep
        for _, report, refined, _ in trials[eps]:
            assert report.epsilon <= 0.01
            assert refined.certified_bound < 0.9

    def test_mean_error_at_delta_star_is_nondecreasing(self, absorbing_sweep):
        # The refined grid can reach delta = 1, where a uniform restart equals pi on
        # this chain, so the trend is measured at delta* itself.
        _, trials = absorbing_sweep
        means = [
            float(np.mean([run[3].diagnostics.realized_tv for run in trials[eps]]))
            for eps in ABSORBING_FRACTIONS
        ]
        assert all(m > 0.0 for m in means)
        for smaller, larger in zip(means, means[1:]):
            assert larger >= smaller - 1e-12
        assert means[-1] > means[0] + 0.01
