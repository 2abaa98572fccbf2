"""Template matching, serial and approximate entropy tests."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..bitio import as_bits
from ..numerics import igamc
from .base import chi_square, inapplicable, outcome, pattern_counts, window_values
from .tables import OVERLAPPING_9_1032, overlapping_probabilities


def is_aperiodic(template: int, m: int) -> bool:
    """True when no proper prefix of the m-bit template equals its suffix."""
    for shift in range(1, m):
        k = m - shift
        if (template >> shift) == (template & ((1 << k) - 1)):
            return False
    return True


@lru_cache(maxsize=None)
def aperiodic_templates(m: int) -> tuple[int, ...]:
    return tuple(t for t in range(1 << m) if is_aperiodic(t, m))


def template_string(template: int, m: int) -> str:
    return format(template, f"0{m}b")


def count_nonoverlapping(block, template: int, m: int) -> int:
    """Matches of ``template`` in ``block``; after a match the window jumps m bits."""
    hits = np.flatnonzero(window_values(as_bits(block), m) == template)
    if hits.size == 0:
        return 0
    if is_aperiodic(template, m):
        return int(hits.size)  # aperiodic matches can never overlap
    count, free_from = 0, 0
    for h in hits:
        if h >= free_from:
            count += 1
            free_from = h + m
    return count


def non_overlapping_template(bits, m: int = 9, templates=None, N: int = 8, *,
                             strict: bool = True):
    s = as_bits(bits)
    n = s.size
    params = {"m": m, "N": N}
    M = n // N
    if M < m or (strict and n < N * m):
        return inapplicable("non_overlapping_template", n, f"needs n >= {N * m}", **params)
    templates = aperiodic_templates(m) if templates is None else tuple(templates)
    blocks = s[: N * M].reshape(N, M)
    if all(is_aperiodic(t, m) for t in templates):
        census = np.stack([np.bincount(window_values(b, m), minlength=1 << m) for b in blocks])
        W = census[:, list(templates)]
    else:
        W = np.array([[count_nonoverlapping(b, t, m) for t in templates] for b in blocks])
    mu = (M - m + 1) / 2.0 ** m
    var = M * (1 / 2.0 ** m - (2 * m - 1) / 2.0 ** (2 * m))
    chi2 = np.sum((W - mu) ** 2, axis=0) / var
    p = [igamc(N / 2, c / 2) for c in chi2]
    params["M"] = M
    return outcome("non_overlapping_template", n, p,
                   labels=[template_string(t, m) for t in templates], params=params,
                   chi2=chi2.tolist(), counts=W.T.tolist())


def overlapping_counts(blocks: np.ndarray, m: int) -> np.ndarray:
    """Overlapping occurrences of 1^m in each row."""
    blocks = np.asarray(blocks, dtype=np.int64)
    vals = window_values(blocks, m)
    return np.count_nonzero(vals == (1 << m) - 1, axis=-1)


def overlapping_template(bits, m: int = 9, M: int = 1032, K: int = 5, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    N = n // M
    params = {"m": m, "M": M, "K": K}
    if N == 0 or (strict and n < M):
        return inapplicable("overlapping_template", n, f"needs n >= {M}", **params)
    if (m, M, K) == (9, 1032, 5):
        probs = np.asarray(OVERLAPPING_9_1032)
    else:
        probs = overlapping_probabilities(M, m, K + 1)
    hits = overlapping_counts(s[: N * M].reshape(N, M), m)
    counts = np.bincount(np.minimum(hits, K), minlength=K + 1)
    chi2 = chi_square(counts, N * probs)
    return outcome("overlapping_template", n, igamc(K / 2, chi2 / 2), params=params,
                   chi2=chi2, counts=counts.tolist())


def psi_squared(bits, m: int) -> float:
    s = as_bits(bits)
    n = s.size
    if m <= 0:
        return 0.0
    counts = pattern_counts(s, m).astype(np.float64)
    return float(2.0 ** m / n * np.sum(counts ** 2) - n)


def serial(bits, m: int = 16, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    if m < 2 or n < m:
        return inapplicable("serial", n, "needs 2 <= m <= n", m=m)
    if strict and not m < int(math.log2(n)) - 2:
        return inapplicable("serial", n, "needs m < floor(log2 n) - 2", m=m)
    psi = [psi_squared(s, m - k) for k in range(3)]
    del1 = psi[0] - psi[1]
    del2 = psi[0] - 2 * psi[1] + psi[2]
    # both differences are non-negative in exact arithmetic
    p1 = igamc(2.0 ** (m - 2), max(del1, 0.0) / 2)
    p2 = igamc(2.0 ** (m - 3), max(del2, 0.0) / 2)
    return outcome("serial", n, [p1, p2], labels=["p1", "p2"], params={"m": m},
                   psi2=psi, del1=del1, del2=del2)


def phi(bits, m: int) -> float:
    s = as_bits(bits)
    if m <= 0:
        return 0.0
    c = pattern_counts(s, m)
    c = c[c > 0] / s.size
    return float(np.sum(c * np.log(c)))


def approximate_entropy(bits, m: int = 10, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    if m < 1 or n < m + 1:
        return inapplicable("approximate_entropy", n, "needs 1 <= m < n", m=m)
    if strict and not m < int(math.log2(n)) - 5:
        return inapplicable("approximate_entropy", n, "needs m < floor(log2 n) - 5", m=m)
    apen = phi(s, m) - phi(s, m + 1)
    chi2 = 2.0 * n * (math.log(2) - apen)
    return outcome("approximate_entropy", n, igamc(2.0 ** (m - 1), max(chi2, 0.0) / 2),
                   params={"m": m}, apen=apen, chi2=chi2)
