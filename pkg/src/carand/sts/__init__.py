"""The fifteen SP 800-22 statistical tests.

Every test takes a 0/1 sequence and returns a :class:`TestOutcome`. With
``strict=True`` (the default) a sequence shorter than the test's recommended
minimum yields an inapplicable outcome instead of a p-value.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..bitio import as_bits
from .base import ALPHA, TestOutcome
from .frequency import block_frequency, frequency_monobit, longest_run_of_ones, runs
from .templates import (approximate_entropy, aperiodic_templates, non_overlapping_template,
                        overlapping_template, serial, template_string)
from .transforms import binary_matrix_rank, dft_spectral, linear_complexity, maurer_universal
from .walks import (EXCURSION_STATES, VARIANT_STATES, cumulative_sums, random_excursions,
                    random_excursions_variant)


@dataclass(frozen=True)
class TestParams:
    __test__ = False

    alpha: float = ALPHA
    block_frequency_m: int = 128
    longest_run_m: int | None = None  # None: picked from n
    rank_rows: int = 32
    rank_cols: int = 32
    non_overlapping_m: int = 9
    overlapping_m: int = 9
    overlapping_block: int = 1032
    universal_l: int | None = None  # None: picked from n
    universal_q: int | None = None
    linear_complexity_m: int = 500
    serial_m: int = 16
    apen_m: int = 10
    strict: bool = True


# (id, display name, runner) in reporting order.
TESTS = (
    ("frequency", "Frequency (Monobit)",
     lambda s, p: frequency_monobit(s, strict=p.strict)),
    ("block_frequency", "Frequency within a block",
     lambda s, p: block_frequency(s, p.block_frequency_m, strict=p.strict)),
    ("runs", "Runs",
     lambda s, p: runs(s, strict=p.strict)),
    ("longest_run", "Longest run of ones in a block",
     lambda s, p: longest_run_of_ones(s, p.longest_run_m, strict=p.strict)),
    ("rank", "Binary matrix rank",
     lambda s, p: binary_matrix_rank(s, p.rank_rows, p.rank_cols, strict=p.strict)),
    ("fft", "Discrete Fourier transform (spectral)",
     lambda s, p: dft_spectral(s, strict=p.strict)),
    ("non_overlapping_template", "Non-overlapping template matching",
     lambda s, p: non_overlapping_template(s, p.non_overlapping_m, strict=p.strict)),
    ("overlapping_template", "Overlapping template matching",
     lambda s, p: overlapping_template(s, p.overlapping_m, p.overlapping_block, strict=p.strict)),
    ("universal", "Maurer's universal statistic",
     lambda s, p: maurer_universal(s, p.universal_l, p.universal_q, strict=p.strict)),
    ("linear_complexity", "Linear complexity",
     lambda s, p: linear_complexity(s, p.linear_complexity_m, strict=p.strict)),
    ("serial", "Serial",
     lambda s, p: serial(s, p.serial_m, strict=p.strict)),
    ("approximate_entropy", "Approximate entropy",
     lambda s, p: approximate_entropy(s, p.apen_m, strict=p.strict)),
    ("cumulative_sums", "Cumulative sums",
     lambda s, p: cumulative_sums(s, strict=p.strict)),
    ("random_excursions", "Random excursions",
     lambda s, p: random_excursions(s, strict=p.strict)),
    ("random_excursions_variant", "Random excursions variant",
     lambda s, p: random_excursions_variant(s, strict=p.strict)),
)

TEST_IDS = tuple(t[0] for t in TESTS)
TEST_NAMES = {t[0]: t[1] for t in TESTS}
_RUNNERS = {t[0]: t[2] for t in TESTS}


def sub_test_labels(test_id: str, params: TestParams | None = None) -> list[str]:
    """Labels of the p-values a test reports, in order."""
    params = params or TestParams()
    if test_id == "non_overlapping_template":
        m = params.non_overlapping_m
        return [template_string(t, m) for t in aperiodic_templates(m)]
    if test_id == "serial":
        return ["p1", "p2"]
    if test_id == "cumulative_sums":
        return ["forward", "backward"]
    if test_id == "random_excursions":
        return [f"{x:+d}" for x in EXCURSION_STATES]
    if test_id == "random_excursions_variant":
        return [f"{x:+d}" for x in VARIANT_STATES]
    return [""]


def run_test(test_id: str, bits, params: TestParams | None = None) -> TestOutcome:
    if test_id not in _RUNNERS:
        raise KeyError(f"unknown test {test_id!r}")
    return _RUNNERS[test_id](as_bits(bits), params or TestParams())


def run_all(bits, params: TestParams | None = None, tests=TEST_IDS) -> dict[str, TestOutcome]:
    bits = as_bits(bits)
    params = params or TestParams()
    return {t: run_test(t, bits, params) for t in tests}


__all__ = [
    "ALPHA", "TESTS", "TEST_IDS", "TEST_NAMES", "TestOutcome", "TestParams",
    "approximate_entropy", "binary_matrix_rank", "block_frequency", "cumulative_sums",
    "dft_spectral", "frequency_monobit", "linear_complexity", "longest_run_of_ones",
    "maurer_universal", "non_overlapping_template", "overlapping_template",
    "random_excursions", "random_excursions_variant", "run_all", "run_test", "runs", "serial",
    "sub_test_labels",
]
