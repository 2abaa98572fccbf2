"""Vernam-style stream cipher keyed by a cellular-automaton keystream.

For demonstration only. There is no authentication, no nonce and no
protection against keystream reuse: encrypting two messages under one key
leaks their XOR. Do not use it to protect real data.

The keystream bits are packed MSB-first into bytes, the same packing the
packed bit-file format uses, and XORed byte-wise with the message.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import bitio
from .ca import CYCLIC, rule_from_number
from .keystream import CENTER, EXTRACTIONS, SplitMix64, stream_bits

MIN_KEY_WIDTH = 64
KEY_FORMAT = "carand-cipher-key"


class DegenerateKeyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CipherKey:
    rule: int
    lattice: np.ndarray
    extraction: str = CENTER
    warmup: int = 64

    def __post_init__(self):
        rule_from_number(self.rule)
        cells = bitio.as_bits(self.lattice).copy()
        cells.flags.writeable = False
        object.__setattr__(self, "lattice", cells)
        if cells.size < MIN_KEY_WIDTH:
            raise DegenerateKeyError(f"key lattice must have at least {MIN_KEY_WIDTH} cells")
        if not 0 < int(cells.sum()) < cells.size:
            raise DegenerateKeyError("an all-zero or all-one lattice gives a constant keystream")
        if self.extraction not in EXTRACTIONS:
            raise ValueError(f"extraction must be one of {EXTRACTIONS}")
        if self.warmup < 0:
            raise ValueError("warmup must be non-negative")

    @property
    def width(self) -> int:
        return self.lattice.size

    def __eq__(self, other):
        if not isinstance(other, CipherKey):
            return NotImplemented
        return (self.rule, self.extraction, self.warmup) == (other.rule, other.extraction, other.warmup) \
            and np.array_equal(self.lattice, other.lattice)

    def to_json(self) -> str:
        return json.dumps({
            "format": KEY_FORMAT,
            "rule": self.rule,
            "width": self.width,
            "lattice": bitio.pack(self.lattice).hex(),
            "extraction": self.extraction,
            "warmup": self.warmup,
        }, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> CipherKey:
        doc = json.loads(text)
        if doc.get("format") != KEY_FORMAT:
            raise ValueError("not a cipher key file")
        cells = bitio.unpack(bytes.fromhex(doc["lattice"]), doc["width"])
        return cls(doc["rule"], cells, doc["extraction"], doc["warmup"])

    def flipped(self, cell: int) -> CipherKey:
        cells = self.lattice.copy()
        cells[cell] ^= 1
        return CipherKey(self.rule, cells, self.extraction, self.warmup)


def random_key(seed: int, rule: int = 30, width: int = MIN_KEY_WIDTH, **kwargs) -> CipherKey:
    """A key whose lattice is drawn from SplitMix64; redraws degenerate lattices."""
    rng = SplitMix64(seed)
    while True:
        cells = rng.bits(width)
        if 0 < cells.sum() < width:
            return CipherKey(rule, cells, **kwargs)


def keystream(key: CipherKey, n_bits: int) -> np.ndarray:
    if n_bits < 0:
        raise ValueError("n_bits must be non-negative")
    if n_bits == 0:
        return np.zeros(0, dtype=np.uint8)
    return stream_bits(key.lattice, rule_from_number(key.rule), n_bits, key.extraction,
                       key.warmup, CYCLIC)[0]


def encrypt(plaintext: bytes, key: CipherKey) -> bytes:
    data = np.frombuffer(bytes(plaintext), dtype=np.uint8)
    if data.size == 0:
        return b""
    pad = np.frombuffer(bitio.pack(keystream(key, 8 * data.size)), dtype=np.uint8)
    return (data ^ pad).tobytes()


def decrypt(ciphertext: bytes, key: CipherKey) -> bytes:
    return encrypt(ciphertext, key)
