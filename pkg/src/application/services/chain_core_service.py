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
import math
from typing import Any, Iterable, Literal, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from src.domain.errors import (
    InvalidDistribution,
    InvalidExponent,
    InvalidTriplet,
    LengthMismatch,
    NegativeEntry,
    NoConvergence,
    NonFiniteEntry,
    NonSquare,
    NonUniqueStationary,
    NotStationary,
    RowSumOutOfTolerance,
    SingularSystem,
    SizeMismatch,
    UnsupportedMass,
    ZeroMassState,
)
from src.domain.models import (
    DENSE_STATE_LIMIT,
    BoundCheck,
    CorruptionReport,
    Dist,
    MarkovChain,
    WeightedFn,
)

logger = logging.getLogger(__name__)

VectorLike = Union[Dist, WeightedFn, np.ndarray, Sequence[float]]


class ChainCoreConfig:
    """Numerical constants shared by the chain primitives."""

    ROW_SUM_TOLERANCE = 1e-10
    STATIONARITY_TOLERANCE = 1e-8
    STATIONARY_SOLVE_TOLERANCE = 1e-10
    MAX_POWER_ITERATIONS = 1_000_000
    NULLITY_RELATIVE_THRESHOLD = 1e-8
    ADJOINT_IDENTITY_TOLERANCE = 1e-10
    CONTRACTION_TOLERANCE = 1e-10
    DENSE_STATE_LIMIT = DENSE_STATE_LIMIT


def as_vector(x: VectorLike) -> np.ndarray:
    if isinstance(x, (Dist, WeightedFn)):
        return x.values
    return np.asarray(x, dtype=np.float64)


def check_lengths(expected: int, *vectors: np.ndarray) -> None:
    for vector in vectors:
        if vector.shape[0] != expected:
            raise LengthMismatch(expected, int(vector.shape[0]))


def validate_chain(
    raw: Any,
    row_tolerance: float = ChainCoreConfig.ROW_SUM_TOLERANCE,
    layout: Literal["dense", "triplets"] = "dense",
    n: Optional[int] = None,
    storage: Literal["auto", "dense", "sparse"] = "auto",
) -> MarkovChain:
    """
    Check a raw transition matrix and wrap it as a MarkovChain.

    Rows whose sums are within the tolerance are renormalized to sum to 1.

    Args:
        raw: Dense rows (list of lists or ndarray), a scipy sparse matrix, or an
            iterable of (row, col, prob) triplets when layout is "triplets"
        row_tolerance: Allowed deviation of each row sum from 1
        layout: How to read a plain Python sequence
        n: Number of states for triplet input; inferred from the indices if absent
        storage: "auto" keeps dense up to the dense limit and sparse above it

    Returns:
        Validated MarkovChain

    Raises:
        NonSquare, NonFiniteEntry, NegativeEntry, RowSumOutOfTolerance,
        InvalidTriplet
    """
    if sp.issparse(raw):
        csr = _validate_sparse(sp.csr_matrix(raw, dtype=np.float64), row_tolerance)
    elif layout == "triplets":
        csr = _validate_triplets(raw, n, row_tolerance)
    else:
        dense = _validate_dense(raw, row_tolerance)
        size = dense.shape[0]
        if storage == "sparse" or (
            storage == "auto" and size > ChainCoreConfig.DENSE_STATE_LIMIT
        ):
            return MarkovChain(n=size, matrix=_freeze_sparse(sp.csr_matrix(dense)))
        dense.setflags(write=False)
        return MarkovChain(n=size, matrix=dense)

    size = csr.shape[0]
    if storage == "dense" or (
        storage == "auto" and size <= ChainCoreConfig.DENSE_STATE_LIMIT
    ):
        dense = csr.toarray()
        dense.setflags(write=False)
        return MarkovChain(n=size, matrix=dense)
    return MarkovChain(n=size, matrix=_freeze_sparse(csr))


def _freeze_sparse(csr: sp.csr_matrix) -> sp.csr_matrix:
    csr.sort_indices()
    csr.data.setflags(write=False)
    return csr


def _validate_dense(raw: Any, row_tolerance: float) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=np.float64)
    except (TypeError, ValueError):
        rows = len(raw) if hasattr(raw, "__len__") else 0
        raise NonSquare((rows,))
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NonSquare(tuple(arr.shape))

    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        raise NonFiniteEntry(int(bad[0][0]), int(bad[0][1]))
    bad = np.argwhere(arr < 0)
    if bad.size:
        i, j = int(bad[0][0]), int(bad[0][1])
        raise NegativeEntry(i, j, float(arr[i, j]))

    sums = arr.sum(axis=1)
    _check_row_sums(sums, row_tolerance)
    return arr / sums[:, None]


def _validate_sparse(csr: sp.csr_matrix, row_tolerance: float) -> sp.csr_matrix:
    if csr.shape[0] != csr.shape[1] or csr.shape[0] == 0:
        raise NonSquare(tuple(csr.shape))
    csr.sum_duplicates()
    coo = csr.tocoo()
    bad = np.flatnonzero(~np.isfinite(coo.data))
    if bad.size:
        raise NonFiniteEntry(int(coo.row[bad[0]]), int(coo.col[bad[0]]))
    bad = np.flatnonzero(coo.data < 0)
    if bad.size:
        k = bad[0]
        raise NegativeEntry(int(coo.row[k]), int(coo.col[k]), float(coo.data[k]))

    sums = np.asarray(csr.sum(axis=1)).ravel()
    _check_row_sums(sums, row_tolerance)
    return sp.csr_matrix(sp.diags(1.0 / sums) @ csr)


def _validate_triplets(
    raw: Iterable[Sequence[float]], n: Optional[int], row_tolerance: float
) -> sp.csr_matrix:
    entries = [tuple(entry) for entry in raw]
    if any(len(entry) != 3 for entry in entries):
        raise InvalidTriplet("every triplet needs exactly (row, col, prob)")
    rows, cols, probs = [], [], []
    for r, c, prob in entries:
        if r != int(r) or c != int(c):
            raise InvalidTriplet(f"indices must be integers, got ({r}, {c})")
        rows.append(int(r))
        cols.append(int(c))
        probs.append(float(prob))
    size = n if n is not None else (max(max(rows), max(cols)) + 1 if rows else 0)
    if size <= 0:
        raise NonSquare((size,))

    rows_arr, cols_arr = np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64)
    out_of_bounds = (rows_arr < 0) | (rows_arr >= size) | (cols_arr < 0) | (cols_arr >= size)
    if out_of_bounds.any():
        k = int(np.flatnonzero(out_of_bounds)[0])
        raise InvalidTriplet(f"index ({rows[k]}, {cols[k]}) outside 0..{size - 1}")
    keys = rows_arr * size + cols_arr
    unique_keys, counts = np.unique(keys, return_counts=True)
    if (counts > 1).any():
        dup = int(unique_keys[np.flatnonzero(counts > 1)[0]])
        raise InvalidTriplet(f"duplicate entry ({dup // size}, {dup % size})")

    csr = sp.csr_matrix(
        (np.array(probs, dtype=np.float64), (rows_arr, cols_arr)), shape=(size, size)
    )
    return _validate_sparse(csr, row_tolerance)


def _check_row_sums(sums: np.ndarray, row_tolerance: float) -> None:
    deviation = np.abs(sums - 1.0)
    bad = np.flatnonzero(~(deviation <= row_tolerance))
    if bad.size:
        row = int(bad[0])
        raise RowSumOutOfTolerance(row, float(sums[row]), row_tolerance)


def stationarity_residual(chain: MarkovChain, pi: VectorLike) -> float:
    """||pi P - pi||_1."""
    pi_v = as_vector(pi)
    check_lengths(chain.n, pi_v)
    return float(np.abs(chain.left_multiply(pi_v) - pi_v).sum())


def require_stationary(
    chain: MarkovChain,
    pi: np.ndarray,
    tolerance: float = ChainCoreConfig.STATIONARITY_TOLERANCE,
) -> float:
    residual = stationarity_residual(chain, pi)
    if not residual <= tolerance:
        raise NotStationary(residual, tolerance)
    return residual


def _as_distribution(x: np.ndarray) -> Dist:
    x = np.where(x < 0, 0.0, x)
    total = float(x.sum())
    if not total > 0 or not math.isfinite(total):
        raise SingularSystem("solver returned a vector with no positive mass")
    return Dist(values=x / total)


def stationary(
    chain: MarkovChain,
    method: Literal["direct", "power"] = "direct",
    tol: float = ChainCoreConfig.STATIONARY_SOLVE_TOLERANCE,
    max_iter: int = ChainCoreConfig.MAX_POWER_ITERATIONS,
) -> Dist:
    """
    Stationary distribution of a chain.

    Args:
        chain: Validated chain
        method: "direct" solves the linear system; "power" iterates from the uniform
            distribution until the l1 change drops below tol
        tol: Residual target ||pi P - pi||_1
        max_iter: Iteration cap for the power method

    Returns:
        Dist pi with ||pi P - pi||_1 <= tol

    Raises:
        NonUniqueStationary: The null space of P^T - I has dimension > 1 (dense)
        SingularSystem: The direct solve failed
        NoConvergence: The power method hit max_iter
    """
    if method == "power":
        return _stationary_power(chain, tol, max_iter)
    if chain.n <= ChainCoreConfig.DENSE_STATE_LIMIT:
        return _stationary_dense(chain, tol)
    return _stationary_sparse(chain, tol)


def _stationary_dense(chain: MarkovChain, tol: float) -> Dist:
    n = chain.n
    P = chain.to_dense()
    system = P.T - np.eye(n)

    singular_values = np.linalg.svd(system, compute_uv=False)
    threshold = ChainCoreConfig.NULLITY_RELATIVE_THRESHOLD * np.linalg.norm(P, 2)
    nullity = int(np.sum(singular_values <= threshold))
    if nullity > 1:
        logger.error(f"Stationary distribution not unique, nullity={nullity}")
        raise NonUniqueStationary(nullity)

    augmented = np.vstack([system, np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    try:
        x, *_ = np.linalg.lstsq(augmented, rhs, rcond=None)
    except np.linalg.LinAlgError as e:
        raise SingularSystem(f"dense stationary solve failed: {e}")

    pi = _as_distribution(x)
    residual = stationarity_residual(chain, pi)
    if not residual <= tol:
        raise SingularSystem(
            f"direct solve residual {residual!r} exceeds tolerance {tol!r}"
        )
    logger.debug(f"Direct stationary solve n={n}, residual={residual:.3e}")
    return pi


def _stationary_sparse(chain: MarkovChain, tol: float) -> Dist:
    n = chain.n
    if chain.is_composite:
        # Composite chains solve the restart resolvent, which already fixes the mass.
        system = sp.identity(n, format="csc") - (1.0 - chain.damping) * sp.csc_matrix(
            chain.matrix.T
        )
        rhs = chain.damping * np.asarray(chain.restart)
    else:
        system = (sp.csr_matrix(chain.matrix.T) - sp.identity(n, format="csr")).tolil()
        system[n - 1, :] = np.ones(n)
        system = system.tocsc()
        rhs = np.zeros(n)
        rhs[-1] = 1.0
    try:
        x = spla.spsolve(system, rhs)
    except RuntimeError as e:
        raise SingularSystem(f"sparse stationary solve failed: {e}")
    if not np.all(np.isfinite(x)):
        raise SingularSystem("sparse stationary solve produced non-finite values")

    pi = _as_distribution(x)
    residual = stationarity_residual(chain, pi)
    if not residual <= tol:
        raise SingularSystem(
            f"sparse solve residual {residual!r} exceeds tolerance {tol!r}"
        )
    return pi


def _stationary_power(chain: MarkovChain, tol: float, max_iter: int) -> Dist:
    v = Dist.uniform(chain.n).values.copy()
    change = math.inf
    for iteration in range(1, max_iter + 1):
        w = chain.left_multiply(v)
        change = float(np.abs(w - v).sum())
        if change < tol:
            logger.debug(
                f"Power iteration converged after {iteration} steps, change={change:.3e}"
            )
            return _as_distribution(v)
        v = w
    logger.error(f"Power iteration did not converge in {max_iter} steps")
    raise NoConvergence(max_iter, change)


def l1_distance(p: VectorLike, q: VectorLike) -> float:
    p_v, q_v = as_vector(p), as_vector(q)
    check_lengths(p_v.shape[0], q_v)
    return float(np.abs(p_v - q_v).sum())


def tv_distance(p: VectorLike, q: VectorLike) -> float:
    """Total-variation distance, half the l1 distance."""
    return 0.5 * l1_distance(p, q)


def weighted_lp_norm(f: VectorLike, pi: VectorLike, p: float) -> float:
    """
    ||f||_{p,pi} = (sum_x pi(x) |f(x)|^p)^(1/p); for p = inf the max of |f|
    over the support of pi.
    """
    if not p >= 1.0:
        raise InvalidExponent(p)
    f_v, pi_v = as_vector(f), as_vector(pi)
    check_lengths(pi_v.shape[0], f_v)
    if math.isinf(p):
        support = pi_v > 0
        if not support.any():
            return 0.0
        return float(np.max(np.abs(f_v[support])))
    return float(np.sum(pi_v * np.abs(f_v) ** p) ** (1.0 / p))


def density(mu: VectorLike, pi: VectorLike) -> np.ndarray:
    """d mu / d pi, zero where both vanish."""
    mu_v, pi_v = as_vector(mu), as_vector(pi)
    check_lengths(pi_v.shape[0], mu_v)
    unsupported = np.flatnonzero((pi_v <= 0) & (mu_v > 0))
    if unsupported.size:
        raise UnsupportedMass(int(unsupported[0]))
    ratio = np.zeros_like(pi_v)
    support = pi_v > 0
    ratio[support] = mu_v[support] / pi_v[support]
    return ratio


def smoothness(mu: VectorLike, pi: VectorLike, p: float) -> float:
    """||d mu / d pi||_{p,pi}."""
    if not p >= 1.0:
        raise InvalidExponent(p)
    return weighted_lp_norm(density(mu, pi), pi, p)


def check_contraction(
    chain: MarkovChain, pi: VectorLike, f: VectorLike, p: float
) -> BoundCheck:
    """||P f||_{p,pi} against ||f||_{p,pi} for a stationary pi."""
    f_v = as_vector(f)
    check_lengths(chain.n, f_v)
    lhs = weighted_lp_norm(chain.right_multiply(f_v), pi, p)
    rhs = weighted_lp_norm(f_v, pi, p)
    slack = ChainCoreConfig.CONTRACTION_TOLERANCE * max(1.0, rhs)
    return BoundCheck(lhs=lhs, rhs=rhs, holds=lhs <= rhs + slack, p=p)


def require_positive(pi: np.ndarray) -> None:
    zero = np.flatnonzero(~(pi > 0))
    if zero.size:
        raise ZeroMassState(int(zero[0]))


def adjoint(chain: MarkovChain, pi: VectorLike) -> MarkovChain:
    """
    Time reversal P*(x, y) = pi(y) P(y, x) / pi(x).

    Raises:
        ZeroMassState: pi vanishes somewhere
        NotStationary: ||pi P - pi||_1 exceeds the stationarity tolerance
    """
    pi_v = as_vector(pi)
    check_lengths(chain.n, pi_v)
    require_positive(pi_v)
    residual = require_stationary(chain, pi_v)

    P = chain.explicit_matrix()
    if sp.issparse(P):
        reversed_matrix = sp.csr_matrix(sp.diags(1.0 / pi_v) @ P.T @ sp.diags(pi_v))
    else:
        reversed_matrix = (P.T * pi_v[None, :]) / pi_v[:, None]

    # Row sums of P* are (pi P)(x) / pi(x), off by at most residual / min pi.
    row_tolerance = max(
        ChainCoreConfig.ROW_SUM_TOLERANCE, 1.01 * residual / float(pi_v.min()) + 1e-12
    )
    star = validate_chain(
        reversed_matrix, row_tolerance=row_tolerance, storage=chain.storage
    )
    require_stationary(star, pi_v)
    return star


def apply_adjoint_density(
    chain: MarkovChain, pi: VectorLike, mu: VectorLike
) -> WeightedFn:
    """
    P* applied to f = d mu / d pi - 1, cross-checked against (mu P) / pi - 1.
    """
    pi_v, mu_v = as_vector(pi), as_vector(mu)
    check_lengths(chain.n, pi_v, mu_v)
    star = adjoint(chain, pi_v)

    f = mu_v / pi_v - 1.0
    mean = float(pi_v @ f)
    if abs(mean) > 1e-9:
        raise InvalidDistribution(f"E_pi[d mu / d pi - 1] = {mean!r}, expected 0")

    image = star.right_multiply(f)
    expected = chain.left_multiply(mu_v) / pi_v - 1.0
    gap = float(np.max(np.abs(image - expected)))
    tolerance = ChainCoreConfig.ADJOINT_IDENTITY_TOLERANCE * max(
        1.0, float(np.max(np.abs(expected)))
    )
    if gap > tolerance:
        raise NotStationary(gap, tolerance)
    return WeightedFn(values=image)


def _row_l1_differences(original: MarkovChain, corrupted: MarkovChain) -> np.ndarray:
    A, B = original.explicit_matrix(), corrupted.explicit_matrix()
    if sp.issparse(A) or sp.issparse(B):
        diff = sp.csr_matrix(A) - sp.csr_matrix(B)
        return np.asarray(abs(diff).sum(axis=1)).ravel()
    return np.abs(np.asarray(A) - np.asarray(B)).sum(axis=1)


def measure_corruption(
    original: MarkovChain, corrupted: MarkovChain, pi: VectorLike
) -> CorruptionReport:
    """
    epsilon = sum_x pi(x) ||P(x,.) - P~(x,.)||_1 with per-row TV distances.

    Raises:
        SizeMismatch: Chains live on different state spaces
        NotStationary: pi is not stationary for the original chain
    """
    if original.n != corrupted.n:
        raise SizeMismatch(original.n, corrupted.n)
    pi_v = as_vector(pi)
    check_lengths(original.n, pi_v)
    require_stationary(original, pi_v)

    row_l1 = _row_l1_differences(original, corrupted)
    per_row_tv = 0.5 * row_l1
    epsilon = min(max(float(pi_v @ row_l1), 0.0), 2.0)
    corrupted_rows = [int(i) for i in np.flatnonzero(per_row_tv > 0)]
    logger.debug(
        f"Measured corruption epsilon={epsilon:.6g} over {len(corrupted_rows)} rows"
    )
    return CorruptionReport(
        epsilon=epsilon, per_row_tv=per_row_tv, corrupted_rows=corrupted_rows
    )


def mass_on(pi: VectorLike, rows: Iterable[int]) -> float:
    pi_v = as_vector(pi)
    return float(sum(pi_v[r] for r in rows))
