from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..bitio import as_bits

ALPHA = 0.01


@dataclass(frozen=True)
class TestOutcome:
    """Result of one statistical test on one sequence.

    ``p_values`` holds one entry per sub-test (template, state, direction, ...),
    labelled by ``labels``. An inapplicable outcome carries no p-values and
    ``reason`` says why.
    """

    __test__ = False  # not a pytest class

    test: str
    n: int
    p_values: tuple[float, ...] = ()
    labels: tuple[str, ...] = ()
    params: dict = field(default_factory=dict)
    statistics: dict = field(default_factory=dict)
    applicable: bool = True
    reason: str | None = None

    def __post_init__(self):
        if self.applicable:
            for p in self.p_values:
                if not 0.0 <= p <= 1.0:
                    raise ValueError(f"{self.test}: p-value {p!r} outside [0, 1]")
            if len(self.labels) != len(self.p_values):
                raise ValueError(f"{self.test}: {len(self.labels)} labels for {len(self.p_values)} p-values")

    @property
    def p_value(self) -> float:
        if len(self.p_values) != 1:
            raise AttributeError(f"{self.test} has {len(self.p_values)} p-values")
        return self.p_values[0]

    def passed(self, alpha: float = ALPHA) -> bool | None:
        if not self.applicable:
            return None
        return all(p >= alpha for p in self.p_values)


def inapplicable(test: str, n: int, reason: str, statistics=None, **params) -> TestOutcome:
    return TestOutcome(test=test, n=n, params=params, statistics=statistics or {},
                       applicable=False, reason=reason)


def outcome(test: str, n: int, p, *, labels=None, params=None, **statistics) -> TestOutcome:
    ps = np.atleast_1d(np.asarray(p, dtype=float))
    # Series and special-function round-off can step a hair outside [0, 1].
    ps = np.clip(ps, 0.0, 1.0)
    if np.isnan(ps).any():
        raise FloatingPointError(f"{test}: NaN p-value")
    if labels is None:
        labels = ("",) if ps.size == 1 else tuple(str(i) for i in range(ps.size))
    return TestOutcome(test=test, n=n, p_values=tuple(float(x) for x in ps),
                       labels=tuple(labels), params=params or {}, statistics=statistics)


def to_pm1(bits) -> np.ndarray:
    return 2.0 * as_bits(bits) - 1.0


def window_values(bits: np.ndarray, m: int, cyclic: bool = False) -> np.ndarray:
    """Integer value of every m-bit window (first bit most significant)."""
    bits = np.asarray(bits, dtype=np.int64)
    if cyclic:
        n = bits.shape[-1]
        if n == 0:
            return np.zeros(bits.shape[:-1] + (0,), dtype=np.int64)
        bits = np.take(bits, np.arange(n + m - 1) % n, axis=-1)
    count = bits.shape[-1] - m + 1
    if count <= 0:
        return np.zeros(bits.shape[:-1] + (0,), dtype=np.int64)
    vals = np.zeros(bits.shape[:-1] + (count,), dtype=np.int64)
    for k in range(m):
        vals <<= 1
        vals |= bits[..., k:k + count]
    return vals


def pattern_counts(bits: np.ndarray, m: int) -> np.ndarray:
    """Counts of each m-bit pattern over the n cyclically extended windows."""
    if m <= 0:
        return np.zeros(0, dtype=np.int64)
    return np.bincount(window_values(bits, m, cyclic=True), minlength=1 << m)


def chi_square(observed, expected) -> float:
    observed = np.asarray(observed, dtype=float)
    expected = np.asarray(expected, dtype=float)
    return float(np.sum((observed - expected) ** 2 / expected))
