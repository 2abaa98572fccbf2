"""Tests on the +/-1 random walk: cumulative sums and random excursions."""
from __future__ import annotations

import math

import numpy as np

from ..bitio import as_bits
from ..numerics import erfc, igamc, normal_cdf
from .base import chi_square, inapplicable, outcome
from .tables import excursion_probabilities

EXCURSION_STATES = (-4, -3, -2, -1, 1, 2, 3, 4)
VARIANT_STATES = tuple(x for x in range(-9, 10) if x)
MIN_CYCLES = 500


def walk(bits) -> np.ndarray:
    return np.cumsum(2 * as_bits(bits).astype(np.int64) - 1)


def cusum_pvalue(z: int, n: int) -> float:
    """Two-sided p-value for a maximal partial-sum excursion z over n steps."""
    sqn = math.sqrt(n)
    # integer bounds truncate toward zero, as in the NIST reference code
    k = np.arange(int((-n / z + 1) / 4), int((n / z - 1) / 4) + 1)
    sum1 = np.sum(normal_cdf((4 * k + 1) * z / sqn) - normal_cdf((4 * k - 1) * z / sqn))
    k = np.arange(int((-n / z - 3) / 4), int((n / z - 1) / 4) + 1)
    sum2 = np.sum(normal_cdf((4 * k + 3) * z / sqn) - normal_cdf((4 * k + 1) * z / sqn))
    return float(1.0 - sum1 + sum2)


def cumulative_sums(bits, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    if n == 0 or (strict and n < 100):
        return inapplicable("cumulative_sums", n, "needs n >= 100")
    forward = int(np.max(np.abs(walk(s))))
    backward = int(np.max(np.abs(walk(s[::-1]))))
    p = [cusum_pvalue(forward, n), cusum_pvalue(backward, n)]
    return outcome("cumulative_sums", n, p, labels=["forward", "backward"],
                   z_forward=forward, z_backward=backward)


def excursion_walk(bits) -> np.ndarray:
    """Partial sums closed with a trailing zero when the walk does not end at 0."""
    S = walk(bits)
    if S.size == 0 or S[-1] != 0:
        S = np.append(S, 0)
    return S


def cycle_visits(S: np.ndarray, states) -> np.ndarray:
    """Visits to each state within each zero-delimited cycle, shape (len(states), J)."""
    zero = S == 0
    J = int(np.count_nonzero(zero))
    cycle = np.cumsum(zero) - zero  # cycle index of every position
    out = np.zeros((len(states), J), dtype=np.int64)
    for row, x in enumerate(states):
        out[row] = np.bincount(cycle[S == x], minlength=J)[:J]
    return out


def _cycles_needed(n: int, strict: bool) -> float:
    return max(0.005 * math.sqrt(n), MIN_CYCLES) if strict else 1


def random_excursions(bits, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    if n == 0:
        return inapplicable("random_excursions", n, "empty sequence")
    S = excursion_walk(s)
    J = int(np.count_nonzero(S == 0))
    if J < _cycles_needed(n, strict):
        return inapplicable("random_excursions", n, f"only {J} cycles, needs {MIN_CYCLES}",
                            statistics={"J": J})
    visits = cycle_visits(S, EXCURSION_STATES)
    chi2, counts = [], []
    for x, v in zip(EXCURSION_STATES, visits):
        nu = np.bincount(np.minimum(v, 5), minlength=6)
        counts.append(nu.tolist())
        chi2.append(chi_square(nu, J * excursion_probabilities(x)))
    p = [igamc(2.5, c / 2) for c in chi2]
    return outcome("random_excursions", n, p, labels=[f"{x:+d}" for x in EXCURSION_STATES],
                   J=J, chi2=chi2, counts=counts)


def state_visits(S: np.ndarray, states) -> np.ndarray:
    """Total visits to each state over the whole walk."""
    lo = int(S.min())
    counts = np.bincount(S - lo)
    return np.array([counts[x - lo] if 0 <= x - lo < counts.size else 0 for x in states])


def random_excursions_variant(bits, *, strict: bool = True):
    s = as_bits(bits)
    n = s.size
    if n == 0:
        return inapplicable("random_excursions_variant", n, "empty sequence")
    S = excursion_walk(s)
    J = int(np.count_nonzero(S == 0))
    if J < _cycles_needed(n, strict):
        return inapplicable("random_excursions_variant", n, f"only {J} cycles, needs {MIN_CYCLES}",
                            statistics={"J": J})
    xi = state_visits(S, VARIANT_STATES)
    p = [erfc(abs(c - J) / math.sqrt(2.0 * J * (4 * abs(x) - 2)))
         for x, c in zip(VARIANT_STATES, xi)]
    return outcome("random_excursions_variant", n, p,
                   labels=[f"{x:+d}" for x in VARIANT_STATES], J=J, visits=xi.tolist())
