"""Frequency, block frequency, runs and longest-run tests."""
from __future__ import annotations

import math

import numpy as np

from ..bitio import as_bits
from ..numerics import erfc, igamc
from .base import chi_square, inapplicable, outcome
from .tables import LONGEST_RUN


def frequency_monobit(bits, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    if n == 0 or (strict and n < 100):
        return inapplicable("frequency", n, "needs n >= 100")
    total = 2 * int(np.count_nonzero(s)) - n
    s_obs = abs(total) / math.sqrt(n)
    return outcome("frequency", n, erfc(s_obs / math.sqrt(2)), sum=total, s_obs=s_obs)


def block_frequency(bits, M: int = 128, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    params = {"M": M}
    if M < 1 or M > n:
        return inapplicable("block_frequency", n, "block size exceeds sequence", **params)
    if strict and n < 100:
        return inapplicable("block_frequency", n, "needs n >= 100", **params)
    N = n // M
    pi = s[: N * M].reshape(N, M).mean(axis=1)
    chi2 = 4.0 * M * float(np.sum((pi - 0.5) ** 2))
    return outcome("block_frequency", n, igamc(N / 2, chi2 / 2), params=params,
                   chi2=chi2, blocks=N)


def count_runs(bits) -> int:
    s = as_bits(bits)
    return int(np.count_nonzero(s[1:] != s[:-1])) + 1 if s.size else 0


def runs(bits, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    if n == 0 or (strict and n < 100):
        return inapplicable("runs", n, "needs n >= 100")
    pi = np.count_nonzero(s) / n
    if abs(pi - 0.5) >= 2 / math.sqrt(n):
        return outcome("runs", n, 0.0, pi=pi, prerequisite_failed=True)
    v = count_runs(s)
    p = erfc(abs(v - 2 * n * pi * (1 - pi)) / (2 * math.sqrt(2 * n) * pi * (1 - pi)))
    return outcome("runs", n, p, pi=pi, runs=v, prerequisite_failed=False)


def longest_runs(blocks: np.ndarray) -> np.ndarray:
    """Longest run of ones in each row of a 2-D 0/1 array."""
    blocks = np.asarray(blocks, dtype=np.uint8)
    N, M = blocks.shape
    framed = np.zeros((N, M + 1), dtype=np.uint8)
    framed[:, 1:] = blocks
    flat = np.append(framed.reshape(-1), 0)
    zeros = np.flatnonzero(flat == 0)
    gaps = np.diff(zeros) - 1
    owner = zeros[:-1] // (M + 1)
    best = np.zeros(N, dtype=np.int64)
    np.maximum.at(best, owner, gaps)
    return best


def longest_run_block_size(n: int) -> int:
    if n < 6272:
        return 8
    if n < 750_000:
        return 128
    return 10_000


def longest_run_of_ones(bits, M: int | None = None, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    if n < 128:
        return inapplicable("longest_run", n, "needs n >= 128")
    M = longest_run_block_size(n) if M is None else M
    if M not in LONGEST_RUN:
        raise ValueError(f"no reference table for block size {M}")
    bounds, probs = LONGEST_RUN[M]
    N = n // M
    v = longest_runs(s[: N * M].reshape(N, M))
    category = np.searchsorted(np.asarray(bounds), v, side="left")
    counts = np.bincount(category, minlength=len(probs))
    chi2 = chi_square(counts, N * np.asarray(probs))
    K = len(probs) - 1
    return outcome("longest_run", n, igamc(K / 2, chi2 / 2), params={"M": M},
                   chi2=chi2, counts=counts.tolist())
