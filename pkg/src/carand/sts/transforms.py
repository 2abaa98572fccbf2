"""Matrix rank, spectral, Maurer universal and linear complexity tests."""
from __future__ import annotations

import math

import numpy as np

from ..bitio import as_bits
from ..numerics import dft_magnitudes, erfc, gf2_ranks, igamc, linear_complexities
from .base import chi_square, inapplicable, outcome
from .tables import (LINEAR_COMPLEXITY, UNIVERSAL_MIN_N, UNIVERSAL_MOMENTS,
                     linear_complexity_mean, rank_class_probabilities,
                     universal_block_length)

MIN_MATRICES = 38


def binary_matrix_rank(bits, rows: int = 32, cols: int = 32, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    params = {"rows": rows, "cols": cols}
    N = n // (rows * cols)
    if N == 0 or (strict and N < MIN_MATRICES):
        return inapplicable("rank", n, f"needs at least {MIN_MATRICES} matrices", **params)
    ranks = gf2_ranks(s[: N * rows * cols].reshape(N, rows, cols))
    full = min(rows, cols)
    observed = [np.count_nonzero(ranks == full), np.count_nonzero(ranks == full - 1)]
    observed.append(N - sum(observed))
    chi2 = chi_square(observed, N * np.asarray(rank_class_probabilities(rows, cols)))
    return outcome("rank", n, math.exp(-chi2 / 2), params=params, chi2=chi2,
                   counts=[int(c) for c in observed])


def spectral_pvalue(n1: float, n: int) -> tuple[float, float]:
    """(d, p) for ``n1`` sub-threshold peaks among the n/2 magnitudes."""
    n0 = 0.95 * n / 2.0
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    return d, erfc(abs(d) / math.sqrt(2))


def dft_spectral(bits, *, strict: bool = True, magnitudes=None):
    s = as_bits(bits)
    n = s.size
    if n < 2 or (strict and n < 1000):
        return inapplicable("fft", n, "needs n >= 1000")
    mags = dft_magnitudes(2.0 * s - 1.0) if magnitudes is None else np.asarray(magnitudes)
    threshold = math.sqrt(math.log(1 / 0.05) * n)
    n1 = int(np.count_nonzero(mags < threshold))
    d, p = spectral_pvalue(n1, n)
    return outcome("fft", n, p, threshold=threshold, n1=n1, d=d)


def universal_gaps(values: np.ndarray) -> np.ndarray:
    """Distance from each block to the previous block with the same value.

    Positions are 1-based; a value not seen before gets its own position,
    as if last seen at position 0.
    """
    values = np.asarray(values)
    pos = np.arange(1, values.size + 1)
    order = np.lexsort((pos, values))
    v, p = values[order], pos[order]
    gaps = p.copy()
    same = v[1:] == v[:-1]
    gaps[1:][same] = p[1:][same] - p[:-1][same]
    out = np.empty_like(gaps)
    out[order] = gaps
    return out


def maurer_universal(bits, L: int | None = None, Q: int | None = None, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    if L is None:
        L = universal_block_length(n)
        if L is None:
            return inapplicable("universal", n, f"needs n >= {UNIVERSAL_MIN_N[6]}")
    elif strict and n < UNIVERSAL_MIN_N.get(L, 0):
        return inapplicable("universal", n, f"L={L} needs n >= {UNIVERSAL_MIN_N[L]}", L=L)
    Q = 10 * 2 ** L if Q is None else Q
    K = n // L - Q
    params = {"L": L, "Q": Q, "K": K}
    if K <= 0 or L not in UNIVERSAL_MOMENTS:
        return inapplicable("universal", n, "no test segment", **params)
    blocks = s[: (Q + K) * L].reshape(Q + K, L)
    weights = 1 << np.arange(L - 1, -1, -1)
    values = blocks.astype(np.int64) @ weights
    gaps = universal_gaps(values)[Q:]
    fn = float(np.sum(np.log2(gaps))) / K
    expected, variance = UNIVERSAL_MOMENTS[L]
    c = 0.7 - 0.8 / L + (4 + 32 / L) * K ** (-3 / L) / 15
    sigma = c * math.sqrt(variance / K)
    p = erfc(abs(fn - expected) / (math.sqrt(2) * sigma))
    return outcome("universal", n, p, params=params, fn=fn, expected=expected, sigma=sigma)


LINEAR_COMPLEXITY_EDGES = (-2.5, -1.5, -0.5, 0.5, 1.5, 2.5)
MIN_LC_BLOCKS = 200


def linear_complexity(bits, M: int = 500, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    N = n // M
    params = {"M": M}
    if N == 0 or (strict and N < MIN_LC_BLOCKS):
        return inapplicable("linear_complexity", n, f"needs at least {MIN_LC_BLOCKS} blocks", **params)
    Ls = linear_complexities(s[: N * M].reshape(N, M))
    mu = linear_complexity_mean(M)
    T = (-1) ** M * (Ls - mu) + 2.0 / 9.0
    # right-closed intervals: T <= -2.5, (-2.5, -1.5], ..., T > 2.5
    category = np.searchsorted(np.asarray(LINEAR_COMPLEXITY_EDGES), T, side="left")
    counts = np.bincount(category, minlength=7)
    chi2 = chi_square(counts, N * np.asarray(LINEAR_COMPLEXITY))
    return outcome("linear_complexity", n, igamc(3, chi2 / 2), params=params,
                   chi2=chi2, mu=mu, counts=counts.tolist())
