"""Run the test battery over many streams and apply the two-level analysis.

For every test and every sub-test (template, state, direction) the battery
computes the proportion of streams with p >= alpha and a 10-bin chi-square
uniformity p-value over the streams' p-values. A test is approved (``A``)
when its proportion lies inside ``1 - alpha +/- 3 sqrt(alpha (1 - alpha) / m)``
and its uniformity p-value is at least the threshold.

Tests with several sub-tests are folded into one verdict:
the proportion is the mean of the sub-test proportions, and the uniformity
p-value is the Bonferroni-adjusted minimum ``min(1, K * min_k p_k)``. Both
stay valid however the sub-tests depend on each other.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field, replace
from functools import partial

import numpy as np

from . import keystream
from ._pool import ordered_map
from .ca import REPRESENTATIVE_RULES
from .numerics import igamc
from .sts import TEST_IDS, TestParams, run_all, sub_test_labels

APPROVED = "A"
REJECTED = "R"
UNIFORMITY_BINS = 10


class BatteryError(RuntimeError):
    pass


@dataclass(frozen=True)
class BatteryConfig:
    rules: tuple[int, ...] = REPRESENTATIVE_RULES
    stream_length: int = 1_000_000
    streams: int = 10
    alpha: float = 0.01
    uniformity_threshold: float = 0.0001
    params: TestParams = field(default_factory=TestParams)

    def __post_init__(self):
        if self.streams < 2:
            raise ValueError("the two-level analysis needs at least 2 streams")
        if self.stream_length < 1:
            raise ValueError("stream_length must be positive")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")

    @property
    def bits_needed(self) -> int:
        return self.stream_length * self.streams

    def describe(self) -> dict:
        return {
            "rules": list(self.rules),
            "stream_length": self.stream_length,
            "streams": self.streams,
            "alpha": self.alpha,
            "uniformity_threshold": self.uniformity_threshold,
            "params": asdict(self.params),
        }


# Alternate layout: the 1000 x 10^4 corpus tested sequence by sequence.
SHORT_STREAMS = BatteryConfig(stream_length=10_000, streams=1000)


@dataclass(frozen=True)
class Aggregate:
    count: int
    proportion: float
    lower: float
    upper: float
    uniformity_p: float

    @property
    def proportion_ok(self) -> bool:
        return self.lower <= self.proportion <= self.upper


def proportion_band(alpha: float, m: int) -> tuple[float, float]:
    centre = 1.0 - alpha
    half = 3.0 * math.sqrt(alpha * (1.0 - alpha) / m)
    return centre - half, centre + half


def uniformity_pvalue(p_values) -> float:
    p = np.asarray(p_values, dtype=float)
    counts, _ = np.histogram(p, bins=UNIFORMITY_BINS, range=(0.0, 1.0))
    expected = p.size / UNIFORMITY_BINS
    chi2 = float(np.sum((counts - expected) ** 2) / expected)
    return igamc((UNIFORMITY_BINS - 1) / 2, chi2 / 2)


def aggregate(p_values, alpha: float = 0.01) -> Aggregate:
    p = np.asarray(p_values, dtype=float)
    if p.size < 2:
        raise ValueError("aggregation needs at least 2 p-values")
    lower, upper = proportion_band(alpha, p.size)
    return Aggregate(count=int(p.size), proportion=float(np.mean(p >= alpha)),
                     lower=lower, upper=upper, uniformity_p=uniformity_pvalue(p))


@dataclass
class TestSummary:
    __test__ = False

    test: str
    applicable: bool
    streams: int
    labels: list[str] = field(default_factory=list)
    proportion: float | None = None
    lower: float | None = None
    upper: float | None = None
    proportion_ok: bool | None = None
    uniformity_p: float | None = None
    uniformity_ok: bool | None = None
    verdict: str | None = None
    sub_proportions: list[float] = field(default_factory=list)
    sub_uniformity: list[float] = field(default_factory=list)
    p_values: list[list[float] | None] = field(default_factory=list)


def summarize_test(test: str, per_stream: list, alpha: float, uniformity_threshold: float,
                   labels=None) -> TestSummary:
    """Fold one test's per-stream p-value lists (None = inapplicable) into a verdict."""
    used = [p for p in per_stream if p is not None]
    labels = list(labels or [])
    if len(used) < 2:
        return TestSummary(test=test, applicable=False, streams=len(used), labels=labels,
                           p_values=per_stream)
    table = np.asarray(used, dtype=float)  # streams x sub-tests
    subs = [aggregate(table[:, k], alpha) for k in range(table.shape[1])]
    proportion = float(np.mean([a.proportion for a in subs]))
    lower, upper = proportion_band(alpha, table.shape[0])
    uniformity = min(1.0, len(subs) * min(a.uniformity_p for a in subs))
    prop_ok = lower <= proportion <= upper
    unif_ok = uniformity >= uniformity_threshold
    return TestSummary(
        test=test, applicable=True, streams=table.shape[0], labels=labels,
        proportion=proportion, lower=lower, upper=upper, proportion_ok=prop_ok,
        uniformity_p=uniformity, uniformity_ok=unif_ok,
        verdict=APPROVED if prop_ok and unif_ok else REJECTED,
        sub_proportions=[a.proportion for a in subs],
        sub_uniformity=[a.uniformity_p for a in subs],
        p_values=per_stream,
    )


@dataclass
class RuleReport:
    label: str
    stream_length: int
    streams: int
    tests: dict[str, TestSummary]

    def verdicts(self) -> dict[str, str | None]:
        return {t: s.verdict for t, s in self.tests.items()}

    def count(self, verdict: str | None) -> int:
        return sum(1 for s in self.tests.values() if s.verdict == verdict)


@dataclass
class BatteryReport:
    config: dict
    rules: list[RuleReport]

    def rule(self, label) -> RuleReport:
        for r in self.rules:
            if r.label == str(label):
                return r
        raise KeyError(label)

    def matrix(self) -> dict[str, dict[str, str | None]]:
        return {r.label: r.verdicts() for r in self.rules}

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> BatteryReport:
        rules = []
        for r in doc["rules"]:
            tests = {k: TestSummary(**v) for k, v in r["tests"].items()}
            rules.append(RuleReport(r["label"], r["stream_length"], r["streams"], tests))
        return cls(config=doc["config"], rules=rules)


def rule_label(rule) -> str:
    return str(rule)


def _stream_pvalues(bits, params: TestParams) -> dict[str, list[float] | None]:
    return {t: (list(o.p_values) if o.applicable else None) for t, o in run_all(bits, params).items()}


def summarize_streams(label, results: list[dict], config: BatteryConfig) -> RuleReport:
    tests = {}
    for t in TEST_IDS:
        tests[t] = summarize_test(t, [r[t] for r in results], config.alpha,
                                  config.uniformity_threshold, sub_test_labels(t, config.params))
    return RuleReport(rule_label(label), config.stream_length, len(results), tests)


def _corpus_stream(corpus, length, params, index):
    return _stream_pvalues(corpus[index * length:(index + 1) * length], params)


def run_corpus(label, corpus, config: BatteryConfig, jobs: int | None = 1) -> RuleReport:
    corpus = np.asarray(corpus, dtype=np.uint8)
    if corpus.size < config.bits_needed:
        raise BatteryError(f"corpus for {label} has {corpus.size} bits, "
                           f"{config.bits_needed} needed ({config.streams} x {config.stream_length})")
    work = partial(_corpus_stream, corpus, config.stream_length, config.params)
    results = ordered_map(work, range(config.streams), jobs)
    return summarize_streams(label, results, config)


def run_battery(corpora, config: BatteryConfig | None = None, jobs: int | None = 1) -> BatteryReport:
    """Battery over one corpus (array) or several (mapping label -> array), in order."""
    config = config or BatteryConfig()
    if not isinstance(corpora, dict):
        corpora = {config.rules[0] if len(config.rules) == 1 else "corpus": corpora}
    rules = [run_corpus(label, bits, config, jobs) for label, bits in corpora.items()]
    return BatteryReport(config=config.describe(), rules=rules)


# -- reference generator -------------------------------------------------------

def reference_stream(seed: int, index: int, length: int) -> np.ndarray:
    """Stream ``index`` of the calibration source: PCG64 seeded by SeedSequence(seed, spawn_key=(index,))."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))
    return rng.integers(0, 2, size=length, dtype=np.uint8)


def _reference_pvalues(seed, length, params, index):
    return _stream_pvalues(reference_stream(seed, index, length), params)


def run_reference(config: BatteryConfig, seed: int = 0, jobs: int | None = 1,
                  label: str = "reference") -> RuleReport:
    """Battery over ``config.streams`` reference streams generated on the fly."""
    work = partial(_reference_pvalues, seed, config.stream_length, config.params)
    return summarize_streams(label, ordered_map(work, range(config.streams), jobs), config)


# -- reproduction of the approve/reject matrix ------------------------------------------

@dataclass
class Reproduction:
    repeats: list[BatteryReport]
    seeds: list[dict[str, int]]
    modal: dict[str, dict[str, str | None]]

    def approved_counts(self) -> list[dict[str, int]]:
        return [{r.label: r.count(APPROVED) for r in rep.rules} for rep in self.repeats]

    def to_dict(self) -> dict:
        return {"repeats": [r.to_dict() for r in self.repeats], "seeds": self.seeds,
                "modal": self.modal}

    @classmethod
    def from_dict(cls, doc) -> Reproduction:
        return cls([BatteryReport.from_dict(r) for r in doc["repeats"]], doc["seeds"], doc["modal"])


# Ties are broken toward the more conservative verdict.
_TIE_ORDER = {REJECTED: 0, None: 1, APPROVED: 2}


def modal_verdict(verdicts) -> str | None:
    counts = Counter(verdicts)
    return min(counts, key=lambda v: (-counts[v], _TIE_ORDER[v]))


def modal_matrix(reports: list[BatteryReport]) -> dict[str, dict[str, str | None]]:
    labels = [r.label for r in reports[0].rules]
    return {lab: {t: modal_verdict([rep.rule(lab).tests[t].verdict for rep in reports])
                  for t in TEST_IDS} for lab in labels}


def repeat_seed(base_seeds, rule_index: int, repeat: int) -> int:
    return base_seeds[rule_index] + repeat * len(base_seeds)


def reproduce_paper(repeats: int = 3, rules=REPRESENTATIVE_RULES, seeds=None,
                    gen: keystream.GenSpec | None = None, config: BatteryConfig | None = None,
                    jobs: int | None = 1, corpus_dir=None, progress=None) -> Reproduction:
    """Generate one corpus per rule, test it, and repeat with fresh seeds.

    Repeat ``r`` of rule ``i`` uses master seed ``seeds[i] + r * len(rules)``.
    """
    rules = tuple(rules)
    seeds = tuple(range(len(rules))) if seeds is None else tuple(seeds)
    if len(seeds) != len(rules):
        raise ValueError("need one seed per rule")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    gen = gen or keystream.GenSpec()
    config = replace(config or BatteryConfig(), rules=rules)
    reports, used = [], []
    for rep in range(repeats):
        corpora, seed_map = {}, {}
        for i, rule in enumerate(rules):
            seed = repeat_seed(seeds, i, rep)
            spec = replace(gen, rule=rule, master_seed=seed)
            path = None
            if corpus_dir is not None:
                path = f"{corpus_dir}/rule{rule}_repeat{rep}.bits"
            if progress:
                progress(f"repeat {rep + 1}/{repeats}: rule {rule} (seed {seed})")
            corpora[rule_label(rule)] = keystream.generate_corpus(spec, path, jobs)
            seed_map[rule_label(rule)] = seed
        reports.append(run_battery(corpora, config, jobs))
        used.append(seed_map)
    return Reproduction(reports, used, modal_matrix(reports))
