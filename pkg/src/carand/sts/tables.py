"""Reference probabilities for the tests, as literal tables.

Each literal table sits next to the function that derives it;
``tests/test_tables.py`` recomputes every table from its derivation.
"""
from __future__ import annotations

import math

import numpy as np

# -- longest run of ones in a block --------------------------------------------
# block size -> (category upper bounds, probabilities). The first category is
# "longest run <= bounds[0]", the last is "> bounds[-1]".
# Derivation: longest_run_probabilities(M, bounds).
LONGEST_RUN = {
    8: ((1, 2, 3), (0.21484375, 0.3671875, 0.23046875, 0.1875)),
    128: ((4, 5, 6, 7, 8), (0.117403578838, 0.242955959277, 0.249363483179,
                            0.175177060347, 0.102701071304, 0.112398847055)),
    10_000: ((10, 11, 12, 13, 14, 15), (0.08663231108, 0.208200648388, 0.248418581942,
                                        0.193912786742, 0.121458485089, 0.068011089304,
                                        0.073366097456)),
}


def longest_run_cdf(block: int, k: int) -> float:
    """P(longest run of ones in ``block`` fair bits <= k), by a run-length chain."""
    if k < 0:
        return 0.0
    state = np.zeros(k + 1)
    state[0] = 1.0
    for _ in range(block):
        nxt = np.empty_like(state)
        nxt[0] = 0.5 * state.sum()
        nxt[1:] = 0.5 * state[:-1]
        state = nxt
    return float(state.sum())


def longest_run_probabilities(block: int, bounds) -> list[float]:
    cdf = [longest_run_cdf(block, k) for k in bounds]
    return [cdf[0]] + [b - a for a, b in zip(cdf, cdf[1:])] + [1.0 - cdf[-1]]


# -- binary matrix rank ----------------------------------------------------------

def rank_probability(r: int, rows: int = 32, cols: int = 32) -> float:
    """P(rank = r) for a uniformly random rows x cols matrix over GF(2)."""
    p = 2.0 ** (r * (rows + cols - r) - rows * cols)
    for i in range(r):
        p *= (1 - 2.0 ** (i - rows)) * (1 - 2.0 ** (i - cols)) / (1 - 2.0 ** (i - r))
    return p


def rank_class_probabilities(rows: int = 32, cols: int = 32) -> tuple[float, float, float]:
    """Probabilities of full rank, full rank minus one, and anything lower."""
    full = min(rows, cols)
    p_full = rank_probability(full, rows, cols)
    p_less1 = rank_probability(full - 1, rows, cols)
    return p_full, p_less1, 1.0 - p_full - p_less1


# -- overlapping template (all ones, m = 9, M = 1032) -------------------------------
# Probabilities of 0, 1, 2, 3, 4 and >= 5 overlapping occurrences in a block.
# Derivation: overlapping_probabilities(1032, 9), an exact Markov chain.
OVERLAPPING_9_1032 = (0.364091053217, 0.185658900106, 0.139381130459,
                      0.100571143999, 0.0704323263464, 0.139865445873)


def overlapping_probabilities(block: int, m: int, categories: int = 6) -> np.ndarray:
    """Exact distribution of the overlapping count of 1^m in ``block`` fair bits.

    Chain state is (current run of ones capped at m-1, occurrences capped at
    ``categories - 1``); a one extending a run of m-1 is an occurrence.
    """
    top = categories - 1
    state = np.zeros((m, categories))
    state[0, 0] = 1.0
    for _ in range(block):
        nxt = np.zeros_like(state)
        nxt[0] = 0.5 * state.sum(axis=0)
        nxt[1:m] += 0.5 * state[: m - 1]
        hit = 0.5 * state[m - 1]
        nxt[m - 1, 1:] += hit[:-1]
        nxt[m - 1, top] += hit[top]
        state = nxt
    return state.sum(axis=0)


def overlapping_probabilities_poisson(block: int, m: int, categories: int = 6) -> np.ndarray:
    """The compound-Poisson approximation (eta = lambda / 2) the exact chain refines."""
    lam = (block - m + 1) / 2.0 ** m
    eta = lam / 2.0
    probs = [math.exp(-eta)]
    for u in range(1, categories - 1):
        s = sum(math.comb(u - 1, l - 1) * eta ** l / math.factorial(l) for l in range(1, u + 1))
        probs.append(math.exp(-eta) * s / 2.0 ** u)
    probs.append(1.0 - sum(probs))
    return np.array(probs)


# -- Maurer's universal statistic ---------------------------------------------------
# L -> minimum n. Below the first entry the test does not apply.
UNIVERSAL_MIN_N = {
    6: 387_840, 7: 904_960, 8: 2_068_480, 9: 4_654_080, 10: 10_342_400,
    11: 22_753_280, 12: 49_643_520, 13: 107_560_960, 14: 231_669_760,
    15: 496_435_200, 16: 1_059_061_760,
}
# L -> (expected value, variance) of log2 of the gap between repeats.
# Derivation: universal_moments(L).
UNIVERSAL_MOMENTS = {
    1: (0.7326495, 0.690), 2: (1.5374383, 1.338), 3: (2.4016068, 1.901),
    4: (3.3112247, 2.358), 5: (4.2534266, 2.705), 6: (5.2177052, 2.954),
    7: (6.1962507, 3.125), 8: (7.1836656, 3.238), 9: (8.1764248, 3.311),
    10: (9.1723243, 3.356), 11: (10.170032, 3.384), 12: (11.168765, 3.401),
    13: (12.168070, 3.410), 14: (13.167693, 3.416), 15: (14.167488, 3.419),
    16: (15.167379, 3.421),
}


def universal_moments(L: int, tail: float = 60.0) -> tuple[float, float]:
    """Mean and variance of log2(G) with G geometric, P(G = i) = q (1 - q)^(i-1), q = 2^-L."""
    q = 2.0 ** -L
    i = np.arange(1, int(tail / q) + 1, dtype=float)
    w = q * np.exp((i - 1) * np.log1p(-q))
    lg = np.log2(i)
    mean = float(np.sum(w * lg))
    return mean, float(np.sum(w * lg * lg) - mean * mean)


def universal_block_length(n: int) -> int | None:
    chosen = None
    for L, min_n in UNIVERSAL_MIN_N.items():
        if n >= min_n:
            chosen = L
    return chosen


# -- linear complexity -----------------------------------------------------------
# Probabilities of the seven T-categories (T <= -2.5, ..., T > 2.5).
LINEAR_COMPLEXITY = (1 / 96, 1 / 32, 1 / 8, 1 / 2, 1 / 4, 1 / 16, 1 / 48)


def linear_complexity_mean(M: int) -> float:
    return M / 2.0 + (9.0 + (-1) ** (M + 1)) / 36.0 - (M / 3.0 + 2.0 / 9.0) / 2.0 ** M


# -- random excursions ---------------------------------------------------------------

def excursion_probabilities(x: int) -> np.ndarray:
    """P(a cycle visits state x exactly k times), k = 0..4, and >= 5."""
    a = abs(x)
    stay = 1.0 - 1.0 / (2 * a)
    probs = [stay]
    probs += [1.0 / (4 * a * a) * stay ** (k - 1) for k in range(1, 5)]
    probs.append(1.0 / (2 * a) * stay ** 4)
    return np.array(probs)
