import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import naive
from carand import sts
from carand.numerics import erfc, igamc
from carand.sts import frequency, tables, templates, transforms, walks
from carand.sts.base import pattern_counts, window_values

LONGEST_RUN_128 = ("11001100000101010110110001001100111000000000001001001101010100010001001111010110"
                   "100000001101011111001100111001101101100010110010")


def bits(text):
    return np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")


def random_bits(n, seed=0):
    return np.random.default_rng(seed).integers(0, 2, n, dtype=np.uint8)


# -- frequency family ---------------------------------------------------------------

def test_monobit():
    out = sts.frequency_monobit(bits("1011010101"), strict=False)
    assert out.p_value == pytest.approx(0.527089, abs=1e-6)
    assert sts.frequency_monobit(np.tile([0, 1], 50)).p_value == 1.0
    assert sts.frequency_monobit(np.ones(100)).p_value < 1e-20
    assert not sts.frequency_monobit(bits("1011010101")).applicable


def test_block_frequency():
    out = sts.block_frequency(bits("0110011010"), 3, strict=False)
    assert out.statistics["chi2"] == pytest.approx(1.0)
    assert out.p_value == pytest.approx(igamc(1.5, 0.5), abs=1e-12)
    assert out.p_value == pytest.approx(0.801252, abs=1e-6)
    assert sts.block_frequency(np.ones(1000), 10).p_value < 1e-10
    assert sts.block_frequency(np.tile([0, 1], 500), 10).p_value == 1.0
    assert not sts.block_frequency(bits("0110"), 8, strict=False).applicable


def test_runs():
    out = sts.runs(bits("1001101011"), strict=False)
    assert out.statistics["runs"] == 7
    assert out.p_value == pytest.approx(0.147232, abs=1e-6)
    zero = sts.runs(np.zeros(200))
    assert zero.p_value == 0.0 and zero.statistics["prerequisite_failed"]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_complement_symmetry(seed):
    s = random_bits(2000, seed)
    c = 1 - s
    for test in (sts.frequency_monobit, sts.runs, sts.cumulative_sums):
        assert np.allclose(test(s).p_values, test(c).p_values)
    assert np.allclose(sts.serial(s, 5).p_values, sts.serial(c, 5).p_values)
    assert np.allclose(sts.approximate_entropy(s, 4).p_values, sts.approximate_entropy(c, 4).p_values)


def test_longest_run_example():
    out = sts.longest_run_of_ones(bits(LONGEST_RUN_128))
    assert out.params["M"] == 8
    assert out.statistics["counts"] == [4, 9, 3, 0]
    assert out.statistics["chi2"] == pytest.approx(4.882457, abs=1e-5)
    assert out.p_value == pytest.approx(0.180609, abs=1e-4)


def test_longest_run_extremes_and_bands():
    assert sts.longest_run_of_ones(np.ones(6272)).p_value < 1e-10
    assert sts.longest_run_of_ones(np.zeros(6272)).p_value < 1e-10
    assert [frequency.longest_run_block_size(n) for n in (128, 6272, 750_000)] == [8, 128, 10_000]
    assert not sts.longest_run_of_ones(np.ones(100)).applicable


def test_longest_run_tables_are_distributions():
    for M, (bounds, probs) in tables.LONGEST_RUN.items():
        assert sum(probs) == pytest.approx(1.0, abs=1e-9)
        assert probs == pytest.approx(tables.longest_run_probabilities(M, bounds), abs=1e-9)
    # published M=128 class probabilities
    assert tables.LONGEST_RUN[128][1] == pytest.approx(
        [0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124], abs=1e-4)  # published to 4 digits


# -- rank, spectral, universal, linear complexity --------------------------------------

def test_rank_probabilities():
    assert tables.rank_class_probabilities() == pytest.approx((0.2888, 0.5776, 0.1336), abs=1e-4)


def test_rank_small_example():
    out = sts.binary_matrix_rank(bits("01011001001010101101"), 3, 3, strict=False)
    # two 3x3 matrices (trailing bits dropped): one of rank 3, one of rank 2
    assert out.statistics["counts"] == [1, 1, 0]
    # the published figure 0.741948 uses the 32x32 class probabilities
    chi2_32 = sum((o - 2 * q) ** 2 / (2 * q) for o, q in zip([1, 1, 0], (0.2888, 0.5776, 0.1336)))
    assert math.exp(-chi2_32 / 2) == pytest.approx(0.741948, abs=1e-5)
    # the test itself uses the exact 3x3 distribution; enumerate all 512 matrices
    ranks = [naive.gf2_rank(naive.bits_of(v, 9).reshape(3, 3)) for v in range(512)]
    probs = [ranks.count(3) / 512, ranks.count(2) / 512, sum(r <= 1 for r in ranks) / 512]
    assert tables.rank_class_probabilities(3, 3) == pytest.approx(probs, abs=1e-12)
    chi2 = sum((o - 2 * q) ** 2 / (2 * q) for o, q in zip([1, 1, 0], probs))
    assert out.p_value == pytest.approx(math.exp(-chi2 / 2), abs=1e-12)


def test_rank_applicability_and_degenerate():
    assert not sts.binary_matrix_rank(random_bits(38 * 1024 - 1)).applicable
    assert sts.binary_matrix_rank(random_bits(38 * 1024)).applicable
    row = random_bits(32)
    assert sts.binary_matrix_rank(np.tile(row, 32 * 40)).p_value < 1e-10


def test_spectral():
    assert sts.dft_spectral(np.tile([0, 1], 1000)).p_value < 1e-10
    assert transforms.spectral_pvalue(0.95 * 2000 / 2, 2000) == (0.0, 1.0)
    s = random_bits(64, 3)
    x = 2.0 * s - 1
    slow = np.abs(naive.dft(x))[:32]
    assert sts.dft_spectral(s, strict=False).p_value == pytest.approx(
        sts.dft_spectral(s, strict=False, magnitudes=slow).p_value, abs=1e-12)


def test_universal_example():
    out = sts.maurer_universal(bits("01011010011101010111"), 2, 4, strict=False)
    assert out.statistics["fn"] == pytest.approx(1.1949875, abs=1e-6)
    # the worked example drops the finite-K factor c; the test applies it
    L, K = 2, 6
    c = 0.7 - 0.8 / L + (4 + 32 / L) * K ** (-3 / L) / 15
    sigma = c * math.sqrt(1.338 / K)
    assert out.p_value == pytest.approx(erfc(abs(1.1949875 - 1.5374383) / (math.sqrt(2) * sigma)), abs=1e-6)


def test_universal_parameters():
    assert not sts.maurer_universal(random_bits(10_000)).applicable
    out = sts.maurer_universal(random_bits(1_000_000))
    assert out.params["L"] == 7 and out.params["Q"] == 1280
    assert tables.universal_block_length(904_960) == 7
    assert tables.universal_block_length(904_959) == 6
    assert sts.maurer_universal(np.tile(random_bits(7, 1), 150_000)).p_value < 1e-10


def test_universal_moments_match_table():
    for L in range(6, 17):
        mean, var = tables.universal_moments(L)
        assert mean == pytest.approx(tables.UNIVERSAL_MOMENTS[L][0], abs=2e-5)
        assert var == pytest.approx(tables.UNIVERSAL_MOMENTS[L][1], abs=2e-3)


def test_linear_complexity():
    assert tables.linear_complexity_mean(500) == pytest.approx(250 + (9 + (-1) ** 501) / 36)
    assert tables.linear_complexity_mean(500) == pytest.approx(250.2222, abs=1e-4)
    assert sts.linear_complexity(np.zeros(500 * 200)).p_value < 1e-10
    assert not sts.linear_complexity(random_bits(500 * 199)).applicable
    out = sts.linear_complexity(random_bits(500 * 200, 5))
    assert sum(out.statistics["counts"]) == 200


def test_linear_complexity_mini_blocks():
    table = naive.minimal_lfsr_table(12)
    s = random_bits(12 * 60, 8)
    blocks = s.reshape(60, 12)
    from carand.numerics import linear_complexities
    got = linear_complexities(blocks)
    for b, L in zip(blocks, got):
        assert L == table[12][int("".join(map(str, b)), 2)]


# -- templates ------------------------------------------------------------------------

def test_aperiodic_template_census():
    assert len(templates.aperiodic_templates(9)) == 148
    assert len(templates.aperiodic_templates(2)) == 2
    brute = [t for t in range(512)
             if all(templates.template_string(t, 9)[k:] != templates.template_string(t, 9)[:9 - k]
                    for k in range(1, 9))]
    assert list(templates.aperiodic_templates(9)) == brute


def test_non_overlapping_example():
    s = bits("10100100101110010110")
    out = sts.non_overlapping_template(s, 3, templates=[0b001], N=2, strict=False)
    assert out.statistics["counts"] == [[2, 1]]
    assert out.p_values[0] == pytest.approx(0.344154, abs=1e-6)


def test_non_overlapping_counts_never_fire_on_zeros():
    t = int("000000001", 2)
    assert templates.count_nonoverlapping(np.zeros(1000), t, 9) == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=200), st.integers(2, 6), st.data())
def test_non_overlapping_counter_matches_scanner(block, m, data):
    t = data.draw(st.integers(0, 2 ** m - 1))
    tmpl = naive.bits_of(t, m).tolist()
    assert templates.count_nonoverlapping(np.array(block), t, m) == naive.nonoverlapping_count(block, tmpl)


def test_non_overlapping_full_test_shape():
    out = sts.non_overlapping_template(random_bits(10 ** 5))
    assert len(out.p_values) == 148 and out.labels[0] == "000000001"


def test_overlapping_probabilities():
    assert tables.overlapping_probabilities(1032, 9) == pytest.approx(tables.OVERLAPPING_9_1032, abs=1e-10)
    # the corrected reference values
    assert tables.OVERLAPPING_9_1032 == pytest.approx(
        [0.364091, 0.185659, 0.139381, 0.100571, 0.070432, 0.139865], abs=1e-6)


def test_overlapping_extremes():
    assert sts.overlapping_template(np.zeros(10 ** 5)).p_value < 1e-10
    assert sts.overlapping_template(np.ones(10 ** 5)).p_value < 1e-10
    assert not sts.overlapping_template(np.ones(1000)).applicable


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=9, max_size=300))
def test_overlapping_counts_match_scanner(block):
    got = templates.overlapping_counts(np.array([block]), 9)[0]
    assert got == naive.overlapping_count(block, [1] * 9)


def test_serial_examples():
    s = bits("0011011101")
    for m in (1, 2, 3):
        counts = naive.cyclic_pattern_counts(s.tolist(), m)
        assert templates.psi_squared(s, m) == pytest.approx(2 ** m / 10 * sum(c * c for c in counts) - 10)
    assert templates.psi_squared(s, 2) == pytest.approx(1.2)
    out = sts.serial(s, 3, strict=False)
    assert out.p_values == pytest.approx((0.808792, 0.670320), abs=1e-6)
    uniform = np.tile(bits("0011"), 64)  # every 2-bit pattern equally often
    assert sts.serial(uniform, 2, strict=False).p_values[0] == pytest.approx(1.0)
    assert sts.serial(np.zeros(10 ** 4), 5).p_values[0] < 1e-10


def test_approximate_entropy_example():
    s = bits("0100110101")
    phi = lambda m: sum(c / 10 * math.log(c / 10) for c in naive.cyclic_pattern_counts(s.tolist(), m) if c)
    out = sts.approximate_entropy(s, 3, strict=False)
    assert out.statistics["apen"] == pytest.approx(phi(3) - phi(4), abs=1e-12)
    assert out.p_value == pytest.approx(0.261961, abs=1e-6)
    z = sts.approximate_entropy(np.zeros(10 ** 4), 5)
    assert z.statistics["apen"] == pytest.approx(0.0, abs=1e-12) and z.p_value < 1e-10


def test_serial_apen_applicability():
    assert not sts.serial(random_bits(1000), 16).applicable
    assert not sts.approximate_entropy(random_bits(1000), 10).applicable


# -- random walks -------------------------------------------------------------------------

def test_cumulative_sums_example():
    out = sts.cumulative_sums(bits("1011010111"), strict=False)
    assert out.statistics["z_forward"] == 4
    assert out.p_values[0] == pytest.approx(0.4116588, abs=1e-6)
    assert sts.cumulative_sums(np.tile([1, 0], 5000)).p_values[0] == pytest.approx(1.0)
    assert max(sts.cumulative_sums(np.ones(1000)).p_values) < 1e-10


def test_cusum_truncation_matches_nist_loop_bounds():
    # z = 4, n = 10: start bounds truncate toward zero (-0.375 -> 0, -1.375 -> -1),
    # the loop runs while k <= 0.375, so k = {0} and k = {-1, 0}
    z, n = 4, 10
    sq = math.sqrt(n)
    phi = lambda x: 0.5 * erfc(-x / math.sqrt(2))
    s1 = sum(phi((4 * k + 1) * z / sq) - phi((4 * k - 1) * z / sq) for k in (0,))
    s2 = sum(phi((4 * k + 3) * z / sq) - phi((4 * k + 1) * z / sq) for k in (-1, 0))
    assert walks.cusum_pvalue(z, n) == pytest.approx(1 - s1 + s2, abs=1e-15)


def test_random_excursions_example():
    out = sts.random_excursions(bits("0110110101"), strict=False)
    assert out.statistics["J"] == 3
    plus1 = out.labels.index("+1")
    assert out.statistics["counts"][plus1] == [1, 1, 0, 1, 0, 0]
    # J * pi_k(1) = 1.5, .75, .375, .1875, .09375, .09375 gives chi2 = 13/3 exactly
    assert out.statistics["chi2"][plus1] == pytest.approx(13 / 3, abs=1e-12)
    assert out.p_values[plus1] == pytest.approx(igamc(2.5, 13 / 6), abs=1e-12)
    assert out.p_values[plus1] == pytest.approx(0.5025, abs=1e-4)
    assert tables.excursion_probabilities(1)[0] == pytest.approx(0.5)


def test_random_excursions_variant_example():
    out = sts.random_excursions_variant(bits("0110110101"), strict=False)
    assert out.statistics["visits"][out.labels.index("+1")] == 4
    assert out.p_values[out.labels.index("+1")] == pytest.approx(0.683091, abs=1e-6)


def test_excursions_alternating_and_applicability():
    s = np.tile([1, 0], 1000)
    visits = walks.cycle_visits(walks.excursion_walk(s), walks.EXCURSION_STATES)
    assert not visits[[0, 1, 2, 5, 6, 7]].any()
    assert not sts.random_excursions(random_bits(10_000)).applicable
    assert not sts.random_excursions_variant(random_bits(10_000)).applicable
    J = 600
    p = sts.random_excursions_variant(np.tile([0, 1], J), strict=False).p_values
    # +1 is never visited; -1 is visited exactly J times
    assert p[VARIANT_INDEX[-1]] == pytest.approx(1.0)
    assert p[VARIANT_INDEX[1]] == pytest.approx(erfc(math.sqrt(J / (2 * 2))))


VARIANT_INDEX = {x: i for i, x in enumerate(walks.VARIANT_STATES)}


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=60))
def test_cycle_and_state_counters(seq):
    S = walks.excursion_walk(np.array(seq))
    assert walks.cycle_visits(S, walks.EXCURSION_STATES).tolist() == naive.cycle_visits(seq, walks.EXCURSION_STATES)
    got = walks.state_visits(walks.walk(np.array(seq)), walks.VARIANT_STATES).tolist()
    assert got == naive.state_visits(seq, walks.VARIANT_STATES)


# -- shared helpers and the runner -----------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=80), st.integers(1, 6))
def test_pattern_counts_match_naive(seq, m):
    assert pattern_counts(np.array(seq), m).tolist() == naive.cyclic_pattern_counts(seq, m)
    vals = window_values(np.array(seq), m)
    assert vals.size == max(len(seq) - m + 1, 0)


def test_run_all_on_reference_stream():
    s = random_bits(1_000_000, 11)
    results = sts.run_all(s)
    assert list(results) == list(sts.TEST_IDS) and len(results) == 15
    for tid, out in results.items():
        if out.applicable:
            assert all(0 <= p <= 1 for p in out.p_values)
            assert list(out.labels) == sts.sub_test_labels(tid) or tid in ("frequency",)
    counts = {t: len(results[t].p_values) for t in ("serial", "cumulative_sums")}
    assert counts == {"serial": 2, "cumulative_sums": 2}


def test_outcome_validation():
    with pytest.raises(KeyError):
        sts.run_test("nonexistent", random_bits(100))
    assert sts.frequency_monobit(np.ones(100)).passed() is False
    assert sts.frequency_monobit(np.ones(10)).passed() is None
