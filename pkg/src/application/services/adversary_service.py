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
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from src.application.services.chain_core_service import (
    ChainCoreConfig,
    VectorLike,
    as_vector,
    check_lengths,
    measure_corruption,
    require_stationary,
    stationarity_residual,
    stationary,
    validate_chain,
)
from src.domain.errors import (
    BudgetInfeasible,
    LengthMismatch,
    NotStationary,
    OutOfRange,
    StateSpaceTooLarge,
)
from src.domain.models import (
    ChainFamily,
    CorruptionReport,
    CorruptionSpec,
    Dist,
    MarkovChain,
)

logger = logging.getLogger(__name__)

RowEntries = Tuple[np.ndarray, np.ndarray]


class AdversaryConfig:
    """Knobs of the corruption models and test-chain generators."""

    DENSE_STATE_LIMIT = ChainCoreConfig.DENSE_STATE_LIMIT
    MAX_PRODUCT_COORDINATES = 20
    PER_ROW_TARGETS = 3
    SPARSE_REPLACEMENT_SUPPORT = 64
    STAR_STATIONARITY_TOLERANCE = 1e-12


def corrupt(
    chain: MarkovChain, pi: VectorLike, spec: CorruptionSpec
) -> Tuple[MarkovChain, CorruptionReport]:
    """
    Apply a seeded adversarial corruption and measure it against pi.

    per_row_tv moves budget/2 of mass out of every targeted row (all rows when
    no targets are given), row_replacement draws flat Dirichlet rows, and
    absorbing turns rows into self-loops. Without explicit targets the last two
    corrupt rows in ascending pi order while pi(C) <= budget / 2.

    Returns:
        The corrupted chain and its CorruptionReport

    Raises:
        NotStationary, OutOfRange, BudgetInfeasible
    """
    pi_v = as_vector(pi)
    check_lengths(chain.n, pi_v)
    require_stationary(chain, pi_v)

    if spec.budget == 0.0:
        return chain, measure_corruption(chain, chain, pi_v)

    if spec.target_rows is not None:
        rows = spec.target_rows
        out_of_range = [r for r in rows if r >= chain.n]
        if out_of_range:
            raise OutOfRange("target row", out_of_range[0], f"[0, {chain.n - 1}]")
    elif spec.kind == "per_row_tv":
        rows = list(range(chain.n))
    else:
        rows = _greedy_targets(pi_v, spec.budget)

    rng = np.random.default_rng(spec.seed)
    replacements: Dict[int, RowEntries] = {}
    for row in rows:
        if spec.kind == "per_row_tv":
            cols, vals = chain.row_entries(row)
            replacements[row] = _shift_row_mass(cols, vals, spec.budget / 2.0, chain.n, rng)
        elif spec.kind == "row_replacement":
            replacements[row] = _dirichlet_row(chain, rng)
        else:
            replacements[row] = (np.array([row]), np.array([1.0]))

    corrupted = _assemble(chain, replacements)
    report = measure_corruption(chain, corrupted, pi_v)
    logger.info(
        f"Applied {spec.kind} corruption to {len(rows)} rows: "
        f"budget={spec.budget:.6g}, measured epsilon={report.epsilon:.6g}"
    )
    return corrupted, report


def _greedy_targets(pi: np.ndarray, budget: float) -> List[int]:
    order = np.lexsort((np.arange(pi.shape[0]), pi))
    chosen: List[int] = []
    mass = 0.0
    for state in order:
        if mass + pi[state] > budget / 2.0:
            break
        chosen.append(int(state))
        mass += float(pi[state])
    if not chosen:
        raise BudgetInfeasible(budget, float(pi[order[0]]))
    return sorted(chosen)


def _shift_row_mass(
    cols: np.ndarray,
    vals: np.ndarray,
    amount: float,
    n: int,
    rng: np.random.Generator,
) -> RowEntries:
    """Move `amount` of mass from the largest entries onto seeded non-donor columns."""
    full_support = cols.shape[0] == n
    smallest = float(vals.min()) if full_support else 0.0
    amount = min(amount, 1.0 - smallest)
    if amount <= 0.0:
        return cols, vals

    row = dict(zip(cols.tolist(), vals.tolist()))
    order = sorted(range(cols.shape[0]), key=lambda k: (-vals[k], cols[k]))
    if full_support:
        # The smallest column stays untouched so a non-donor target always exists.
        order = order[:-1]

    remaining = amount
    donors = set()
    for k in order:
        col = int(cols[k])
        take = min(row[col], remaining)
        row[col] -= take
        remaining -= take
        donors.add(col)
        if remaining <= 0.0:
            break
    moved = amount - max(remaining, 0.0)

    count = min(AdversaryConfig.PER_ROW_TARGETS, n - len(donors))
    targets: List[int] = []
    while len(targets) < count:
        col = int(rng.integers(n))
        if col not in donors and col not in targets:
            targets.append(col)
    weights = rng.dirichlet(np.ones(count))
    for col, weight in zip(targets, weights):
        row[col] = row.get(col, 0.0) + moved * float(weight)

    new_cols = np.array(sorted(c for c, v in row.items() if v > 0.0), dtype=np.int64)
    return new_cols, np.array([row[c] for c in new_cols.tolist()])


def _dirichlet_row(chain: MarkovChain, rng: np.random.Generator) -> RowEntries:
    if chain.is_sparse:
        size = min(chain.n, AdversaryConfig.SPARSE_REPLACEMENT_SUPPORT)
        cols = np.sort(rng.choice(chain.n, size=size, replace=False))
    else:
        cols = np.arange(chain.n)
    return cols, rng.dirichlet(np.ones(cols.shape[0]))


def _assemble(chain: MarkovChain, replacements: Dict[int, RowEntries]) -> MarkovChain:
    base = chain.explicit_matrix()
    if sp.issparse(base):
        keep = np.ones(chain.n)
        keep[list(replacements)] = 0.0
        kept = sp.diags(keep) @ base
        rows, cols, vals = [], [], []
        for row, (row_cols, row_vals) in replacements.items():
            rows.extend([row] * row_cols.shape[0])
            cols.extend(row_cols.tolist())
            vals.extend(row_vals.tolist())
        fresh = sp.csr_matrix((vals, (rows, cols)), shape=(chain.n, chain.n))
        return validate_chain(sp.csr_matrix(kept + fresh), storage="sparse")

    matrix = np.array(base, dtype=np.float64)
    for row, (row_cols, row_vals) in replacements.items():
        matrix[row, :] = 0.0
        matrix[row, row_cols] = row_vals
    return validate_chain(matrix, storage="dense")


def star_pair(n: int) -> Tuple[MarkovChain, Dist, MarkovChain, Dist]:
    """
    Star on n outer states (center 0) and its center-row corruption.

    The clean center stays put w.p. 1/2 and moves uniformly outward; the
    corrupted center sends 1/4 to state 1 and spreads 1/4 over the rest.
    Outer states stay or return to the center w.p. 1/2 each.

    Returns:
        (P, pi, P~, pi~) with
        pi = (1/2, 1/(2n), ..., 1/(2n)) and
        pi~ = (1/2, 1/4, 1/(4(n-1)), ..., 1/(4(n-1)))
    """
    if n < 2:
        raise OutOfRange("n", n, "[2, inf)")
    outer = [(j, j, 0.5) for j in range(1, n + 1)] + [
        (j, 0, 0.5) for j in range(1, n + 1)
    ]
    clean = [(0, 0, 0.5)] + [(0, j, 1.0 / (2 * n)) for j in range(1, n + 1)]
    dirty = [(0, 0, 0.5), (0, 1, 0.25)] + [
        (0, j, 1.0 / (4 * (n - 1))) for j in range(2, n + 1)
    ]
    original = validate_chain(clean + outer, layout="triplets", n=n + 1)
    corrupted = validate_chain(dirty + outer, layout="triplets", n=n + 1)

    pi = Dist(values=np.array([0.5] + [1.0 / (2 * n)] * n))
    pi_tilde = Dist(values=np.array([0.5, 0.25] + [1.0 / (4 * (n - 1))] * (n - 1)))
    for chain, dist in ((original, pi), (corrupted, pi_tilde)):
        residual = stationarity_residual(chain, dist)
        if residual > AdversaryConfig.STAR_STATIONARITY_TOLERANCE:
            raise NotStationary(residual, AdversaryConfig.STAR_STATIONARITY_TOLERANCE)
    return original, pi, corrupted, pi_tilde


def product_measure(p_vec: Sequence[float]) -> Dist:
    """Law of independent bits with P(bit i = 1) = p_vec[i]; bit i of the state index."""
    probs = np.asarray(p_vec, dtype=np.float64)
    states = np.arange(2 ** probs.shape[0])
    weights = np.ones(states.shape[0])
    for i, p in enumerate(probs):
        on = ((states >> i) & 1).astype(bool)
        weights *= np.where(on, p, 1.0 - p)
    return Dist(values=weights)


def product_chain(n: int, p_vec: Sequence[float]) -> Tuple[MarkovChain, Dist]:
    """
    Random-scan resampler on {0,1}^n: pick a coordinate uniformly and redraw it
    as 1 with probability p_vec[i]. Its spectral gap is 1/n.
    """
    if n < 1:
        raise OutOfRange("n", n, "[1, inf)")
    if n > AdversaryConfig.MAX_PRODUCT_COORDINATES:
        raise StateSpaceTooLarge(2**n, 2**AdversaryConfig.MAX_PRODUCT_COORDINATES)
    probs = np.asarray(p_vec, dtype=np.float64)
    if probs.shape[0] != n:
        raise LengthMismatch(n, int(probs.shape[0]))
    for p in probs:
        if not 0.0 <= p <= 1.0:
            raise OutOfRange("p_i", float(p), "[0, 1]")

    size = 2**n
    states = np.arange(size)
    rows, cols, vals = [], [], []
    for i, p in enumerate(probs):
        bit = 1 << i
        rows.extend([states, states])
        cols.extend([states | bit, states & ~bit])
        vals.extend([np.full(size, p / n), np.full(size, (1.0 - p) / n)])
    matrix = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    ).tocsr()
    chain = validate_chain(matrix)
    return chain, product_measure(probs)


def product_pair(
    n: int, p_vec: Sequence[float], shift: float
) -> Tuple[MarkovChain, Dist, MarkovChain, Dist]:
    """
    Two product chains that differ only in the bias of coordinate 0, by `shift`.

    Their stationary laws are `shift` apart in TV while the pi-weighted row
    corruption is 2 * shift / n, so no estimator can beat epsilon / gamma order.
    """
    probs = np.asarray(p_vec, dtype=np.float64).copy()
    original, pi = product_chain(n, probs)
    probs[0] += shift
    corrupted, pi_tilde = product_chain(n, probs)
    return original, pi, corrupted, pi_tilde


def make_test_chain(
    kind: Union[ChainFamily, str], n: int, seed: int = 0
) -> Tuple[MarkovChain, Dist]:
    """
    Generate a chain of a known family together with its stationary law.

    lazy_complete and lazy_cycle have uniform pi; random_reversible has a
    seeded pi with detailed balance; random_dense is solved for pi.
    """
    family = ChainFamily(kind)
    if n < 1:
        raise OutOfRange("n", n, "[1, inf)")

    if family is ChainFamily.LAZY_COMPLETE:
        uniform = Dist.uniform(n)
        if n > AdversaryConfig.DENSE_STATE_LIMIT:
            # 1/2 I + 1/2 1^T u, kept as a rank-one restart over the identity.
            return (
                MarkovChain(
                    n=n,
                    matrix=sp.identity(n, format="csr"),
                    restart=uniform.values,
                    damping=0.5,
                ),
                uniform,
            )
        return validate_chain(0.5 * np.eye(n) + 0.5 / n), uniform

    if family is ChainFamily.LAZY_CYCLE:
        states = np.arange(n)
        rows = np.concatenate([states, states, states])
        cols = np.concatenate([states, (states + 1) % n, (states - 1) % n])
        vals = np.concatenate([np.full(n, 0.5), np.full(n, 0.25), np.full(n, 0.25)])
        matrix = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
        return validate_chain(matrix), Dist.uniform(n)

    if n > AdversaryConfig.DENSE_STATE_LIMIT:
        raise StateSpaceTooLarge(n, AdversaryConfig.DENSE_STATE_LIMIT)
    rng = np.random.default_rng(seed)

    if family is ChainFamily.RANDOM_REVERSIBLE:
        pi = rng.uniform(0.5, 1.5, size=n)
        pi /= pi.sum()
        weights = rng.uniform(0.1, 1.0, size=(n, n))
        weights = (weights + weights.T) / 2.0
        np.fill_diagonal(weights, 0.0)
        scale = 2.0 * max(float(np.max(weights.sum(axis=1) / pi)), 1e-300)
        matrix = weights / (scale * pi[:, None])
        np.fill_diagonal(matrix, 1.0 - matrix.sum(axis=1))
        return validate_chain(matrix), Dist(values=pi)

    matrix = rng.uniform(size=(n, n)) + 1e-3
    matrix /= matrix.sum(axis=1, keepdims=True)
    chain = validate_chain(matrix)
    return chain, stationary(chain, method="direct")
