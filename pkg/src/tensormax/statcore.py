"""Maximum off-diagonal entry of the order-m sample product tensor.

The statistic is the maximum over strictly increasing index m-tuples
(i_1 < ... < i_m) of

    | sum_k x[k, i_1] * ... * x[k, i_m] | / sqrt(n),

together with its signed counterpart (no absolute value) and the
multi-population variant where the factor at depth s comes from the s-th
matrix.  Tuples with repeated indices (the generalized diagonal) are
excluded by construction.

Two evaluation paths are provided and are required to agree bit for bit:

* :func:`max_entry` walks the tuples depth-first, carrying the length-n
  vector of partial products across shared prefixes, so the total work
  is n * sum_s C(p, s) multiply-adds instead of the naive n*m*C(p, m).
* :func:`max_entry_bruteforce` re-multiplies every tuple from scratch
  and is the reference implementation for tests.

Bit identity holds because both paths build each per-tuple product
left-to-right in index order and reduce over observations with numpy's
deterministic pairwise sum on a contiguous length-n vector, then divide
by sqrt(n).  Ties in the maximum are broken toward the lexicographically
smallest tuple; reported tuples are 1-based.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

DEFAULT_COST_CEILING = 10**10
ORACLE_COST_CEILING = 10**7
_SATURATION = 2**63 - 1


class BudgetError(RuntimeError):
    """Raised before any work when the estimated cost exceeds the ceiling."""


@dataclass(frozen=True)
class EnumerationCost:
    """Predicted size of a full enumeration.

    ``multiply_adds`` counts the work of the prefix-sharing scheme,
    n * sum_{s=1..m} C(p, s).  Counts above 2**63 - 1 are clamped and
    flagged as saturated.
    """

    tuples: int
    multiply_adds: int
    saturated: bool


@dataclass(frozen=True)
class StatResult:
    """Maximum entry statistics and their attaining index tuples.

    ``argmax_abs`` and ``argmax_signed`` are 1-based strictly increasing
    tuples.  ``w_abs >= w_signed`` always, and ``tuple_count`` is C(p, m).
    """

    w_abs: float
    w_signed: float
    argmax_abs: tuple[int, ...]
    argmax_signed: tuple[int, ...]
    n: int
    p: int
    m: int
    tuple_count: int

    def to_json(self) -> dict:
        return {
            "w_abs": self.w_abs,
            "w_signed": self.w_signed,
            "argmax_abs": list(self.argmax_abs),
            "argmax_signed": list(self.argmax_signed),
            "n": self.n,
            "p": self.p,
            "m": self.m,
            "tuple_count": self.tuple_count,
        }


def enumeration_cost(p: int, m: int, n: int) -> EnumerationCost:
    """Closed-form cost estimate for enumerating all increasing m-tuples."""
    if p < 1 or m < 1 or n < 1:
        raise ValueError(f"invalid dimensions p={p}, m={m}, n={n}")
    if m > p:
        raise ValueError(f"m must be <= p, got m={m}, p={p}")
    tuples = math.comb(p, m)
    nodes = sum(math.comb(p, s) for s in range(1, m + 1))
    ops = n * nodes
    saturated = tuples > _SATURATION or ops > _SATURATION
    return EnumerationCost(
        tuples=min(tuples, _SATURATION),
        multiply_adds=min(ops, _SATURATION),
        saturated=saturated,
    )


def load_matrix_csv(path) -> np.ndarray:
    """Read a headerless CSV of decimal floats as an n-by-p matrix."""
    values = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    return np.ascontiguousarray(values)


def _as_matrix(X) -> np.ndarray:
    A = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    if A.ndim != 2:
        raise ValueError(f"data matrix must be 2-dimensional, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"data matrix must be non-empty, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("data matrix contains non-finite values")
    return A


def _check_budget(p: int, m: int, n: int, ceiling: int) -> None:
    cost = enumeration_cost(p, m, n)
    if cost.saturated or cost.multiply_adds > ceiling:
        ops = "more than 9.2e18" if cost.saturated else f"{cost.multiply_adds:,}"
        raise BudgetError(
            f"enumeration needs an estimated {ops} multiply-adds for "
            f"p={p}, m={m}, n={n}, above the ceiling of {ceiling:,}; "
            f"raise cost_ceiling to override"
        )


class _Best:
    """Running (value, tuple) maxima with lexicographic tie-breaking."""

    __slots__ = ("abs_val", "abs_arg", "sig_val", "sig_arg")

    def __init__(self):
        self.abs_val = -1.0
        self.abs_arg = None
        self.sig_val = -math.inf
        self.sig_arg = None

    def merge(self, other: "_Best") -> None:
        if other.abs_arg is not None and (
            other.abs_val > self.abs_val
            or (other.abs_val == self.abs_val and (self.abs_arg is None or other.abs_arg < self.abs_arg))
        ):
            self.abs_val, self.abs_arg = other.abs_val, other.abs_arg
        if other.sig_arg is not None and (
            other.sig_val > self.sig_val
            or (other.sig_val == self.sig_val and (self.sig_arg is None or other.sig_arg < self.sig_arg))
        ):
            self.sig_val, self.sig_arg = other.sig_val, other.sig_arg


def _scan_first_range(xts: list[np.ndarray], m: int, sqrt_n: float, first_lo: int, first_hi: int) -> _Best:
    """Depth-first walk over tuples whose first index lies in [first_lo, first_hi).

    ``xts[d]`` is the transposed matrix supplying the factor at depth d,
    stored row-contiguous so that slicing a block of trailing columns is
    a contiguous view.  Tuples are visited in lexicographic order, so a
    strictly-greater update rule realizes the smallest-tuple tie-break.
    """
    p = xts[0].shape[0]
    best = _Best()

    def visit(depth: int, start: int, partial: np.ndarray, prefix: tuple[int, ...]) -> None:
        if depth == m - 1:
            block = xts[depth][start:]
            sums = np.sum(block * partial, axis=1) / sqrt_n
            mags = np.abs(sums)
            k = int(np.argmax(mags))
            if mags[k] > best.abs_val:
                best.abs_val = float(mags[k])
                best.abs_arg = prefix + (start + k,)
            k = int(np.argmax(sums))
            if sums[k] > best.sig_val:
                best.sig_val = float(sums[k])
                best.sig_arg = prefix + (start + k,)
            return
        for j in range(start, p - (m - 1 - depth)):
            visit(depth + 1, j + 1, partial * xts[depth][j], prefix + (j,))

    for i in range(first_lo, first_hi):
        visit(1, i + 1, xts[0][i], (i,))
    return best


def _max_entry_core(xts: list[np.ndarray], n: int, workers: int) -> _Best:
    m = len(xts)
    p = xts[0].shape[0]
    sqrt_n = math.sqrt(n)
    first_count = p - m + 1
    workers = max(1, int(workers))
    if workers == 1 or first_count <= 1:
        return _scan_first_range(xts, m, sqrt_n, 0, first_count)
    # Static partition over the first index; each worker owns a private
    # running maximum and the merge is order-independent, so the result
    # cannot depend on scheduling.
    bounds = np.linspace(0, first_count, min(workers, first_count) + 1).astype(int)
    best = _Best()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_scan_first_range, xts, m, sqrt_n, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for fut in futures:
            best.merge(fut.result())
    return best


def _result_from_best(best: _Best, n: int, p: int, m: int) -> StatResult:
    return StatResult(
        w_abs=best.abs_val,
        w_signed=best.sig_val,
        argmax_abs=tuple(i + 1 for i in best.abs_arg),
        argmax_signed=tuple(i + 1 for i in best.sig_arg),
        n=n,
        p=p,
        m=m,
        tuple_count=math.comb(p, m),
    )


def max_entry(X, m: int, workers: int = 1, cost_ceiling: int = DEFAULT_COST_CEILING) -> StatResult:
    """Maximum (absolute and signed) off-diagonal tensor entry.

    Parameters
    ----------
    X : array_like
        n-by-p data matrix; rows are observations.
    m : int
        Tensor order, 2 <= m <= p.
    workers : int
        Thread count for partitioning over the first tuple index.  The
        result is identical for every value.
    cost_ceiling : int
        Maximum multiply-adds allowed; a BudgetError is raised before
        any work when the enumeration would exceed it.

    Returns
    -------
    StatResult
        Bit-identical to :func:`max_entry_bruteforce` on the same input.
    """
    A = _as_matrix(X)
    n, p = A.shape
    if not isinstance(m, (int, np.integer)) or m < 2 or m > p:
        raise ValueError(f"m must satisfy 2 <= m <= p={p}, got {m!r}")
    _check_budget(p, m, n, cost_ceiling)
    xt = np.ascontiguousarray(A.T)
    best = _max_entry_core([xt] * int(m), n, workers)
    return _result_from_best(best, n, p, int(m))


def max_entry_multi(matrices, workers: int = 1, cost_ceiling: int = DEFAULT_COST_CEILING) -> StatResult:
    """Maximum entry of the multi-population product tensor.

    The factor at tuple depth s is drawn from ``matrices[s]``; all
    matrices must share the same (n, p).  The order m is the number of
    matrices.  With identical matrices this reduces exactly to
    :func:`max_entry`.
    """
    mats = [_as_matrix(M) for M in matrices]
    m = len(mats)
    if m < 2:
        raise ValueError(f"need at least 2 matrices, got {m}")
    n, p = mats[0].shape
    for idx, M in enumerate(mats[1:], start=2):
        if M.shape != (n, p):
            raise ValueError(
                f"matrix {idx} has shape {M.shape}, expected {(n, p)} shared by all populations"
            )
    if m > p:
        raise ValueError(f"m must be <= p, got m={m}, p={p}")
    _check_budget(p, m, n, cost_ceiling)
    xts = [np.ascontiguousarray(M.T) for M in mats]
    best = _max_entry_core(xts, n, workers)
    return _result_from_best(best, n, p, m)


def max_entry_bruteforce(X, m: int) -> StatResult:
    """Reference evaluation: every tuple product rebuilt from scratch.

    No partial products are shared between tuples, so agreement with
    :func:`max_entry` genuinely exercises the prefix-reuse logic.  Guarded
    to small instances (C(p, m) * n <= 1e7).
    """
    A = _as_matrix(X)
    n, p = A.shape
    if not isinstance(m, (int, np.integer)) or m < 2 or m > p:
        raise ValueError(f"m must satisfy 2 <= m <= p={p}, got {m!r}")
    cost = math.comb(p, m) * n
    if cost > ORACLE_COST_CEILING:
        raise BudgetError(
            f"bruteforce cost C(p,m)*n = {cost:,} exceeds the oracle ceiling "
            f"of {ORACLE_COST_CEILING:,}"
        )
    sqrt_n = math.sqrt(n)
    best = _Best()
    for combo in itertools.combinations(range(p), int(m)):
        prod = A[:, combo[0]].copy()
        for j in combo[1:]:
            prod = prod * A[:, j]
        val = float(np.sum(prod) / sqrt_n)
        av = abs(val)
        if av > best.abs_val:
            best.abs_val = av
            best.abs_arg = combo
        if val > best.sig_val:
            best.sig_val = val
            best.sig_arg = combo
    return _result_from_best(best, n, p, int(m))
