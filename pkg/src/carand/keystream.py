"""Bit sequences and corpora extracted from cellular-automaton evolutions.

Initial rows come from SplitMix64 so every corpus is reproducible from its
master seed. The generator, bit for bit:

    GAMMA = 0x9E3779B97F4A7C15
    mix(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
             return z ^ (z >> 31)                      (all mod 2**64)
    next():  state = state + GAMMA; return mix(state)

Sequence ``index`` of a corpus starts from state
``mix(master_seed) ^ mix((index + 1) * GAMMA)``. A row of width ``w`` takes
``ceil(w / 64)`` outputs; cell ``j`` is bit ``63 - j % 64`` of output
``j // 64`` (MSB first).
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from functools import partial

import numpy as np

from . import bitio
from ._pool import ordered_map
from .ca import CYCLIC, Lattice, RuleTable, rule_from_number, step_rows

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15

ROWS = "rows"
CENTER = "center"
EXTRACTIONS = (ROWS, CENTER)

MANIFEST_FORMAT = "carand-corpus-manifest"
MANIFEST_VERSION = 1

BitSequence = np.ndarray  # 1-D uint8 array of 0/1


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, state: int):
        self.state = state & MASK64

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def bits(self, count: int) -> np.ndarray:
        words = [self.next() for _ in range(-(-count // 64))]
        raw = np.array(words, dtype=">u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="big")[:count]

    @classmethod
    def for_sequence(cls, master_seed: int, index: int) -> SplitMix64:
        return cls(mix64(master_seed) ^ mix64((index + 1) * GAMMA))


def random_initial(width: int, rng: SplitMix64, boundary: str = CYCLIC) -> Lattice:
    if width < 3:
        raise ValueError("width must be at least 3")
    return Lattice(rng.bits(width), boundary)


@dataclass(frozen=True)
class GenSpec:
    rule: int = 30
    seed_width: int = 100
    extraction: str = CENTER
    warmup_rows: int = 0
    bits_per_sequence: int = 10_000
    sequences: int = 1000
    master_seed: int = 0
    boundary: str = CYCLIC

    def __post_init__(self):
        rule_from_number(self.rule)
        if self.extraction not in EXTRACTIONS:
            raise ValueError(f"extraction must be one of {EXTRACTIONS}")
        if self.seed_width < 3:
            raise ValueError("seed_width must be at least 3")
        if self.bits_per_sequence < 1 or self.sequences < 1 or self.warmup_rows < 0:
            raise ValueError("bit and sequence counts must be positive, warmup non-negative")
        if self.extraction == ROWS and self.bits_per_sequence % self.seed_width:
            raise ValueError("bits_per_sequence must be a multiple of seed_width for row extraction")
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("master_seed must fit in 64 bits")

    @property
    def rows_needed(self) -> int:
        """Rows of evolution (initial row included) one sequence consumes."""
        if self.extraction == ROWS:
            return self.warmup_rows + self.bits_per_sequence // self.seed_width
        return self.warmup_rows + self.bits_per_sequence

    @property
    def corpus_bits(self) -> int:
        return self.sequences * self.bits_per_sequence


def extract(evolution, strategy: str = ROWS, warmup: int = 0,
            nbits: int | None = None) -> BitSequence:
    """Flatten an evolution (rows top to bottom) into a bit sequence.

    ``rows`` concatenates whole rows after the first ``warmup``; ``center``
    takes cell ``w // 2`` of each row after the warmup.
    """
    rows = np.asarray([lat.cells if isinstance(lat, Lattice) else lat for lat in evolution],
                      dtype=np.uint8)
    if strategy not in EXTRACTIONS:
        raise ValueError(f"unknown extraction {strategy!r}")
    if rows.ndim != 2:
        raise ValueError("evolution must be a sequence of equal-width rows")
    kept = rows[warmup:]
    bits = kept.reshape(-1) if strategy == ROWS else kept[:, rows.shape[1] // 2]
    if nbits is not None:
        if bits.size < nbits:
            raise ValueError(f"evolution supplies {bits.size} bits after warmup, {nbits} requested")
        bits = bits[:nbits]
    elif bits.size == 0:
        raise ValueError("no rows left after warmup")
    return np.ascontiguousarray(bits)


def stream_bits(initial: np.ndarray, rule: RuleTable, nbits: int, strategy: str,
                warmup: int, boundary: str = CYCLIC) -> np.ndarray:
    """Extract ``nbits`` per initial row from a batch ``(k, w)`` of initial rows.

    Only the rows that are kept are stored, so centre-column streams of any
    length stay in O(k * nbits) memory.
    """
    rows = np.atleast_2d(np.asarray(initial, dtype=np.uint8))
    k, width = rows.shape
    per_row = width if strategy == ROWS else 1
    needed = warmup + -(-nbits // per_row)
    out = np.empty((k, needed - warmup, per_row), dtype=np.uint8)
    for t in range(needed):
        if t:
            rows = step_rows(rows, rule, boundary)
        if t >= warmup:
            out[:, t - warmup] = rows if strategy == ROWS else rows[:, width // 2:width // 2 + 1]
    return out.reshape(k, -1)[:, :nbits]


def _initial_rows(spec: GenSpec, indices) -> np.ndarray:
    return np.stack([SplitMix64.for_sequence(spec.master_seed, i).bits(spec.seed_width)
                     for i in indices])


def _generate_chunk(spec: GenSpec, indices) -> np.ndarray:
    return stream_bits(_initial_rows(spec, indices), rule_from_number(spec.rule),
                       spec.bits_per_sequence, spec.extraction, spec.warmup_rows, spec.boundary)


def generate_sequence(spec: GenSpec, index: int) -> BitSequence:
    if not 0 <= index < spec.sequences:
        raise IndexError(f"sequence index {index} outside 0..{spec.sequences - 1}")
    return _generate_chunk(spec, [index])[0]


def generate_bits(spec: GenSpec, jobs: int | None = 1, chunk: int = 100) -> BitSequence:
    """All sequences of ``spec`` concatenated in index order."""
    chunks = [range(i, min(i + chunk, spec.sequences)) for i in range(0, spec.sequences, chunk)]
    parts = ordered_map(partial(_generate_chunk, spec), chunks, jobs)
    return np.concatenate([p.reshape(-1) for p in parts])


def manifest_for(spec: GenSpec, bits: BitSequence, file_format: str) -> dict:
    return {
        "format": MANIFEST_FORMAT,
        "version": MANIFEST_VERSION,
        "spec": asdict(spec),
        "file_format": file_format,
        "total_bits": int(bits.size),
        "sequence_offsets": [i * spec.bits_per_sequence for i in range(spec.sequences)],
        "sha256": bitio.sha256_bits(bits),
    }


def manifest_path(corpus_path) -> str:
    return f"{corpus_path}.manifest.json"


def generate_corpus(spec: GenSpec, path=None, jobs: int | None = 1) -> BitSequence:
    """Generate the corpus; when ``path`` is given also write it and its manifest."""
    bits = generate_bits(spec, jobs)
    if path is not None:
        bitio.write_bits(path, bits)
        fmt = "ascii" if bitio.is_ascii_path(path) else "packed"
        with open(manifest_path(path), "w", encoding="utf-8") as fh:
            json.dump(manifest_for(spec, bits, fmt), fh, indent=2)
            fh.write("\n")
    return bits


def load_manifest(path) -> tuple[GenSpec, dict]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != MANIFEST_FORMAT:
        raise ValueError(f"{path} is not a corpus manifest")
    if doc.get("version") != MANIFEST_VERSION:
        raise ValueError(f"unsupported manifest version {doc.get('version')}")
    return GenSpec(**doc["spec"]), doc


def regenerate(manifest_file, jobs: int | None = 1) -> BitSequence:
    """Rebuild a corpus from its manifest and check it against the stored checksum."""
    spec, doc = load_manifest(manifest_file)
    bits = generate_bits(spec, jobs)
    if bitio.sha256_bits(bits) != doc["sha256"]:
        raise ValueError("regenerated corpus does not match the manifest checksum")
    return bits


def with_seed(spec: GenSpec, master_seed: int) -> GenSpec:
    return replace(spec, master_seed=master_seed)
