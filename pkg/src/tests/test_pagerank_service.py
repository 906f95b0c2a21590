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

import numpy as np
import pytest

from src.application.services import (
    build_pagerank,
    check_corrupted_close,
    check_density_contraction,
    check_pr_close,
    corrupt,
    l1_distance,
    make_test_chain,
    measure_corruption,
    pagerank_series,
    pagerank_stationary,
    smoothness,
    spectral_gap,
    tune_delta,
    validate_chain,
)
from src.domain.errors import (
    OutOfRange,
    SizeMismatch,
    UnsupportedMass,
    VacuousBoundWarning,
)
from src.domain.models import CorruptionSpec, Dist, PageRankConfig, all_hold


@pytest.fixture
def null_state_chain():
    """State 0 is transient, so pi puts no mass on it."""
    chain = validate_chain([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.0, 0.5, 0.5]])
    return chain, np.array([0.0, 0.5, 0.5])


class TestBuildPageRank:
    def test_zero_delta_returns_the_chain(self, two_state_chain):
        config = PageRankConfig(mu=Dist.uniform(2), delta=0.0)
        assert build_pagerank(two_state_chain, config) is two_state_chain

    def test_full_restart_rows_equal_mu(self, two_state_chain):
        mu = Dist.from_values([0.9, 0.1])
        restart = build_pagerank(two_state_chain, PageRankConfig(mu=mu, delta=1.0))
        np.testing.assert_allclose(restart.to_dense(), [[0.9, 0.1], [0.9, 0.1]])

    def test_lazy_identity(self):
        chain = validate_chain(np.eye(2))
        restart = build_pagerank(chain, PageRankConfig(mu=Dist.uniform(2), delta=0.5))
        np.testing.assert_allclose(restart.to_dense(), [[0.75, 0.25], [0.25, 0.75]])

    def test_sparse_chain_stays_implicit(self):
        chain, _ = make_test_chain("lazy_cycle", 2100)
        restart = build_pagerank(chain, PageRankConfig(mu=Dist.uniform(2100), delta=0.3))
        assert restart.is_composite
        np.testing.assert_allclose(restart.right_multiply(np.ones(2100)), 1.0)

    def test_size_mismatch(self, two_state_chain):
        with pytest.raises(SizeMismatch):
            build_pagerank(two_state_chain, PageRankConfig(mu=Dist.uniform(3), delta=0.1))


class TestPageRankStationary:
    @pytest.mark.parametrize("solver", ["resolvent", "series", "power"])
    def test_solvers_agree(self, solver, two_state_chain):
        mu = Dist.from_values([0.5, 0.5])
        reference = pagerank_stationary(
            two_state_chain, PageRankConfig(mu=mu, delta=0.2, solver="resolvent")
        ).pi_delta
        result = pagerank_stationary(
            two_state_chain, PageRankConfig(mu=mu, delta=0.2, solver=solver)
        )
        assert result.solver == solver
        assert result.residual <= 1e-10
        np.testing.assert_allclose(result.pi_delta.values, reference.values, atol=1e-9)

    @pytest.mark.parametrize("delta", [0.01, 0.1, 0.5])
    @pytest.mark.parametrize("n, seed", [(8, 0), (64, 1), (256, 2)])
    def test_solvers_agree_on_random_chains(self, n, seed, delta):
        chain, _ = make_test_chain("random_dense", n, seed=seed)
        mu = Dist.from_values(np.random.default_rng(seed).dirichlet(np.ones(n)))
        results = {
            solver: pagerank_stationary(
                chain, PageRankConfig(mu=mu, delta=delta, solver=solver)
            )
            for solver in ("resolvent", "series", "power")
        }
        reference = results["resolvent"].pi_delta.values
        tol = PageRankConfig(mu=mu, delta=delta).tol
        for result in results.values():
            assert l1_distance(result.pi_delta, reference) <= 10 * tol
            # Fixed point pi_delta = delta mu + (1 - delta) pi_delta P.
            fixed = delta * mu.values + (1 - delta) * chain.left_multiply(result.pi_delta.values)
            assert np.abs(fixed - result.pi_delta.values).sum() <= 1e-10 + 1e-13

    def test_two_state_closed_form(self, two_state_chain):
        # pi_delta = delta mu (I - (1 - delta) P)^-1
        mu = np.array([0.5, 0.5])
        delta = 0.2
        expected = delta * mu @ np.linalg.inv(np.eye(2) - (1 - delta) * two_state_chain.to_dense())
        result = pagerank_stationary(two_state_chain, PageRankConfig(mu=Dist(values=mu), delta=delta))
        np.testing.assert_allclose(result.pi_delta.values, expected, atol=1e-12)

    def test_zero_delta_is_plain_stationary(self, two_state_chain, two_state_pi):
        result = pagerank_stationary(
            two_state_chain, PageRankConfig(mu=Dist.uniform(2), delta=0.0)
        )
        np.testing.assert_allclose(result.pi_delta.values, two_state_pi.values, atol=1e-12)

    def test_large_composite_chain_falls_back_to_series(self):
        chain, pi = make_test_chain("lazy_complete", 5000)
        result = pagerank_stationary(chain, PageRankConfig(mu=pi, delta=0.1))
        assert result.solver == "series"
        np.testing.assert_allclose(result.pi_delta.values, pi.values, atol=1e-12)


class TestPageRankSeries:
    @pytest.mark.parametrize("truncation", [0, 1, 5, 20])
    def test_truncation_error_bound(self, truncation, reversible_12):
        chain, _ = reversible_12
        mu = Dist.point_mass(chain.n, 0)
        delta = 0.3
        exact = pagerank_stationary(chain, PageRankConfig(mu=mu, delta=delta)).pi_delta
        approx = pagerank_series(chain, mu, delta, truncation)
        assert approx.values.sum() == pytest.approx(1.0)
        assert l1_distance(approx, exact) <= 2 * (1 - delta) ** (truncation + 1) + 1e-12

    def test_rejects_zero_delta(self, two_state_chain):
        with pytest.raises(OutOfRange):
            pagerank_series(two_state_chain, Dist.uniform(2), 0.0, 3)


class TestTuneDelta:
    def test_reference_value(self):
        delta = tune_delta(0.5, 0.01, 1.0, math.inf, sup_ratio=math.e)
        assert delta == pytest.approx(math.sqrt(0.5 * 0.01 * math.log(100.0)), rel=1e-12)
        assert delta == pytest.approx(0.15174, abs=1e-5)

    def test_monotone_in_epsilon(self):
        deltas = [tune_delta(0.5, eps, 1.0, math.inf) for eps in (1e-6, 1e-4, 1e-2, 0.3, 0.9)]
        assert deltas == sorted(deltas)

    def test_smaller_exponent_gives_larger_delta(self):
        assert tune_delta(0.5, 0.01, 1.0, 2.0) > tune_delta(0.5, 0.01, 1.0, math.inf)

    def test_monotone_in_gamma(self):
        deltas = [tune_delta(gamma, 0.01, 1.0, math.inf) for gamma in (0.005, 0.02, 0.1, 0.5, 1.0)]
        assert deltas == sorted(deltas)
        assert deltas[0] < deltas[-1]

    @pytest.mark.parametrize("p", [2.0, math.inf])
    def test_monotone_in_beta(self, p):
        deltas = [tune_delta(0.5, 1e-4, beta, p) for beta in (1.0, 3.0, 10.0, 30.0, 100.0)]
        assert deltas == sorted(deltas)
        assert deltas[0] < deltas[-1]

    def test_p_one_warns(self):
        with pytest.warns(VacuousBoundWarning):
            delta = tune_delta(0.5, 0.01, 1.0, 1.0)
        assert 0.0 < delta <= 1.0

    def test_clamped_to_one(self):
        assert tune_delta(1.0, 0.9, 1e6, math.inf) == 1.0

    @pytest.mark.parametrize(
        "args",
        [(0.0, 0.1, 1.0, 2.0), (0.5, 0.0, 1.0, 2.0), (0.5, 1.0, 1.0, 2.0), (0.5, 0.1, 0.5, 2.0)],
    )
    def test_out_of_range(self, args):
        with pytest.raises(OutOfRange):
            tune_delta(*args)


class TestPageRankCloseness:
    def test_point_mass_restart_on_lazy_complete(self):
        chain, pi = make_test_chain("lazy_complete", 32)
        checks = check_pr_close(chain, pi, Dist.point_mass(32, 0), 0.5, 0.05, range(51))
        assert len(checks) == 51
        assert all_hold(checks)

    @pytest.mark.parametrize("delta", [0.01, 0.1, 0.5])
    def test_random_reversible(self, delta, reversible_12, rng):
        chain, pi = reversible_12
        gamma = spectral_gap(chain, pi).gamma
        mu = rng.dirichlet(np.ones(chain.n))
        assert all_hold(check_pr_close(chain, pi, mu, gamma, delta, range(0, 200, 7)))

    def test_stationary_restart_is_exact(self, reversible_12):
        chain, pi = reversible_12
        checks = check_pr_close(chain, pi, pi, 0.1, 0.2, [0])
        assert checks[0].lhs == pytest.approx(0.0, abs=1e-12)


class TestDensityContraction:
    def test_stationary_restart_has_unit_density(self, reversible_12):
        chain, pi = reversible_12
        for check in check_density_contraction(chain, pi, pi, 0.3):
            assert check.lhs == pytest.approx(1.0)
            assert check.rhs == pytest.approx(1.0)
            assert check.holds

    def test_full_restart_is_equality(self, reversible_12, rng):
        chain, pi = reversible_12
        mu = rng.dirichlet(np.ones(chain.n))
        for check in check_density_contraction(chain, pi, mu, 1.0):
            assert check.lhs == pytest.approx(check.rhs, rel=1e-9)

    @pytest.mark.parametrize("seed", range(10))
    def test_random_restarts(self, seed):
        chain, pi = make_test_chain("random_dense", 8, seed=seed)
        mu = np.random.default_rng(seed).dirichlet(np.ones(8))
        assert all_hold(check_density_contraction(chain, pi, mu, 0.05, exponents=(1.0, 2.0, 3.0, math.inf)))


class TestCorruptedCloseness:
    @pytest.mark.parametrize("p", [2.0, math.inf])
    @pytest.mark.parametrize("kind", ["per_row_tv", "row_replacement", "absorbing"])
    def test_corruptions_of_reversible_chain(self, kind, p, reversible_12):
        chain, pi = reversible_12
        corrupted, report = corrupt(chain, pi, CorruptionSpec(kind=kind, budget=0.2, seed=11))
        mu = Dist.uniform(chain.n)
        config = PageRankConfig(mu=mu, delta=0.1)
        checks = check_corrupted_close(
            build_pagerank(chain, config),
            build_pagerank(corrupted, config),
            pi,
            mu,
            p,
            report.epsilon,
            0.1,
            range(0, 100, 3),
        )
        assert all_hold(checks)
        assert all(c.p == p for c in checks)

    def test_identical_chains_have_zero_lhs(self, reversible_12):
        chain, pi = reversible_12
        pr = build_pagerank(chain, PageRankConfig(mu=pi, delta=0.2))
        (check,) = check_corrupted_close(pr, pr, pi, pi, 2.0, 0.0, 0.2, [10])
        assert check.lhs == pytest.approx(0.0, abs=1e-12)
        assert check.rhs == pytest.approx(2 * math.exp(-2.0))

    def test_restart_outside_support_is_rejected(self, null_state_chain):
        chain, pi = null_state_chain
        mu = Dist.uniform(3)
        pr = build_pagerank(chain, PageRankConfig(mu=mu, delta=0.2))
        with pytest.raises(UnsupportedMass):
            check_corrupted_close(pr, pr, pi, mu, 2.0, 0.0, 0.2, [1])

    def test_corruption_off_the_support_is_invisible(self, null_state_chain):
        chain, pi = null_state_chain
        corrupted = validate_chain([[1.0, 0.0, 0.0], [0.0, 0.5, 0.5], [0.0, 0.5, 0.5]])
        mu = Dist.from_values([0.0, 0.5, 0.5])
        assert smoothness(mu, pi, math.inf) == pytest.approx(1.0)
        config = PageRankConfig(mu=mu, delta=0.2)
        (check,) = check_corrupted_close(
            build_pagerank(chain, config), build_pagerank(corrupted, config), pi, mu, 2.0, 0.0, 0.2, [5]
        )
        assert check.lhs == pytest.approx(0.0, abs=1e-12)
        assert check.holds

    def test_null_row_corruption_moves_pagerank_at_zero_epsilon(self, null_state_chain):
        # Rewriting the pi-null row costs nothing, yet a restart that visits state 0
        # shifts pi~_delta; the checker refuses that restart instead of passing it.
        chain, pi = null_state_chain
        corrupted = validate_chain([[1.0, 0.0, 0.0], [0.0, 0.5, 0.5], [0.0, 0.5, 0.5]])
        assert measure_corruption(chain, corrupted, pi).epsilon == 0.0

        config = PageRankConfig(mu=Dist.uniform(3), delta=0.2)
        clean = pagerank_stationary(chain, config).pi_delta
        dirty = pagerank_stationary(corrupted, config).pi_delta
        np.testing.assert_allclose(clean.values, [1 / 9, 7 / 15, 19 / 45], atol=1e-12)
        np.testing.assert_allclose(dirty.values, np.full(3, 1 / 3), atol=1e-12)
        assert l1_distance(clean, dirty) == pytest.approx(4 / 9, abs=1e-12)

        with pytest.raises(UnsupportedMass):
            check_corrupted_close(
                build_pagerank(chain, config),
                build_pagerank(corrupted, config),
                pi,
                config.mu,
                2.0,
                0.0,
                0.2,
                [1, 10, 100],
            )

    def test_rejects_zero_delta(self, two_state_chain, two_state_pi):
        with pytest.raises(OutOfRange):
            check_corrupted_close(
                two_state_chain, two_state_chain, two_state_pi, two_state_pi, 2.0, 0.0, 0.0, [1]
            )
