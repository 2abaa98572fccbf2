"""Bit-sequence file formats.

ASCII: one '0'/'1' character per bit, a newline after every 100 characters
on write; newlines are ignored on read.

Packed: a 16-byte header (``MAGIC`` followed by a little-endian uint32 format
version), a little-endian uint64 bit count, then the bits MSB-first within
each byte with the final byte zero-padded.
"""
from __future__ import annotations

import hashlib
import os
import struct

import numpy as np

MAGIC = b"CARAND-BITS\x00"
VERSION = 1
HEADER = struct.Struct("<12sIQ")
ASCII_LINE = 100
ASCII_SUFFIXES = (".txt", ".asc", ".ascii")


class BitFormatError(ValueError):
    pass


def as_bits(bits) -> np.ndarray:
    """Coerce to a 1-D uint8 array of 0/1, rejecting anything else."""
    if isinstance(bits, str):
        bits = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    arr = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if arr.size and arr.max() > 1:
        raise ValueError("bit sequences may only contain 0 and 1")
    return arr


def to_string(bits) -> str:
    return (as_bits(bits) + ord("0")).astype(np.uint8).tobytes().decode("ascii")


def pack(bits) -> bytes:
    return np.packbits(as_bits(bits), bitorder="big").tobytes()


def unpack(data: bytes, nbits: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="big")
    if bits.size < nbits:
        raise BitFormatError(f"payload holds {bits.size} bits, header says {nbits}")
    return bits[:nbits]


def encode_packed(bits) -> bytes:
    bits = as_bits(bits)
    return HEADER.pack(MAGIC, VERSION, bits.size) + pack(bits)


def decode_packed(data: bytes) -> np.ndarray:
    if len(data) < HEADER.size:
        raise BitFormatError("truncated header")
    magic, version, nbits = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BitFormatError("not a packed bit file")
    if version != VERSION:
        raise BitFormatError(f"unsupported packed format version {version}")
    payload = data[HEADER.size:]
    if len(payload) != (nbits + 7) // 8:
        raise BitFormatError(f"expected {(nbits + 7) // 8} payload bytes, found {len(payload)}")
    return unpack(payload, nbits)


def encode_ascii(bits) -> bytes:
    text = to_string(bits)
    lines = [text[i:i + ASCII_LINE] for i in range(0, len(text), ASCII_LINE)]
    return ("\n".join(lines) + "\n").encode("ascii") if lines else b""


def decode_ascii(data: bytes) -> np.ndarray:
    raw = np.frombuffer(data, dtype=np.uint8)
    raw = raw[(raw != ord("\n")) & (raw != ord("\r"))]
    bits = raw - ord("0")
    if bits.size and bits.max() > 1:
        raise BitFormatError("ASCII bit files may only contain '0', '1' and newlines")
    return bits.astype(np.uint8)


def is_ascii_path(path) -> bool:
    return os.path.splitext(str(path))[1].lower() in ASCII_SUFFIXES


def encode(bits, path) -> bytes:
    return encode_ascii(bits) if is_ascii_path(path) else encode_packed(bits)


def write_bits(path, bits) -> None:
    with open(path, "wb") as fh:
        fh.write(encode(bits, path))


def read_bits(path) -> np.ndarray:
    """Read either format; the packed header is detected by its magic."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data.startswith(MAGIC):
        return decode_packed(data)
    return decode_ascii(data)


def sha256_bits(bits) -> str:
    """Checksum of the bit content, independent of on-disk format."""
    bits = as_bits(bits)
    h = hashlib.sha256(struct.pack("<Q", bits.size))
    h.update(pack(bits))
    return h.hexdigest()
