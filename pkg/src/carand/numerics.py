"""Special functions and GF(2) kernels used by the statistical tests."""
from __future__ import annotations

import math

import numpy as np
from numba import njit
from scipy import special


def erfc(x: float) -> float:
    return float(special.erfc(x))


def igamc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x)."""
    if not a > 0:
        raise ValueError(f"igamc needs a > 0, got {a}")
    if not x >= 0:
        raise ValueError(f"igamc needs x >= 0, got {x}")
    return float(special.gammaincc(a, x))


def normal_cdf(x):
    return 0.5 * special.erfc(-np.asarray(x, dtype=float) / math.sqrt(2.0))


# -- GF(2) rank --------------------------------------------------------------

def gf2_rank(matrix) -> int:
    """Rank over GF(2) of a 0/1 matrix of any shape."""
    m = np.asarray(matrix, dtype=np.uint8)
    if m.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if m.size == 0:
        return 0
    # Each row becomes one Python integer; elimination keeps a pivot per
    # leading bit.
    rows = [int.from_bytes(np.packbits(r, bitorder="big").tobytes(), "big") for r in m]
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = row
                rank += 1
                break
            row ^= pivots[lead]
    return rank


@njit(cache=True)
def _rank_packed(rows):
    # rows: (k, nrows) uint64, one matrix row per word, columns <= 64.
    k, nrows = rows.shape
    out = np.empty(k, dtype=np.int64)
    work = np.empty(nrows, dtype=np.uint64)
    for idx in range(k):
        for i in range(nrows):
            work[i] = rows[idx, i]
        rank = 0
        for bit in range(63, -1, -1):
            mask = np.uint64(1) << np.uint64(bit)
            pivot = -1
            for i in range(rank, nrows):
                if work[i] & mask:
                    pivot = i
                    break
            if pivot < 0:
                continue
            tmp = work[pivot]
            work[pivot] = work[rank]
            work[rank] = tmp
            for i in range(rank + 1, nrows):
                if work[i] & mask:
                    work[i] ^= tmp
            rank += 1
            if rank == nrows:
                break
        out[idx] = rank
    return out


def gf2_ranks(matrices: np.ndarray) -> np.ndarray:
    """Ranks of a stack ``(k, rows, cols)`` of 0/1 matrices with cols <= 64."""
    matrices = np.asarray(matrices, dtype=np.uint8)
    k, rows, cols = matrices.shape
    if cols > 64:
        return np.array([gf2_rank(m) for m in matrices], dtype=np.int64)
    padded = np.zeros((k, rows, 64), dtype=np.uint8)
    padded[:, :, 64 - cols:] = matrices
    words = np.packbits(padded, axis=-1, bitorder="big").view(">u8")[..., 0]
    return _rank_packed(np.ascontiguousarray(words.astype(np.uint64)))


# -- Berlekamp-Massey ----------------------------------------------------------

@njit(cache=True)
def _parity(x):
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return x & np.uint64(1)


@njit(cache=True)
def _shift_left1(words):
    carry = np.uint64(0)
    for w in range(words.size):
        top = words[w] >> np.uint64(63)
        words[w] = (words[w] << np.uint64(1)) | carry
        carry = top


@njit(cache=True)
def _bm_packed(s, c, b, hist, tmp):
    # Polynomials live in multi-word bitsets (bit i = coefficient of x^i).
    # hist has bit i = s[N - i], so the discrepancy is parity(c & hist).
    # b is kept pre-multiplied by x^(N - m).
    nw = c.size
    for w in range(nw):
        c[w] = 0
        b[w] = 0
        hist[w] = 0
    c[0] = 1
    b[0] = 2
    L = 0
    for n in range(s.size):
        _shift_left1(hist)
        hist[0] |= np.uint64(s[n])
        acc = np.uint64(0)
        for w in range(nw):
            acc ^= c[w] & hist[w]
        if _parity(acc):
            if 2 * L <= n:
                for w in range(nw):
                    tmp[w] = c[w]
                    c[w] ^= b[w]
                    b[w] = tmp[w]
                L = n + 1 - L
            else:
                for w in range(nw):
                    c[w] ^= b[w]
        _shift_left1(b)
    return L


@njit(cache=True)
def _bm_blocks(blocks):
    k, m = blocks.shape
    nw = (m + 1) // 64 + 2
    c = np.zeros(nw, dtype=np.uint64)
    b = np.zeros(nw, dtype=np.uint64)
    hist = np.zeros(nw, dtype=np.uint64)
    tmp = np.zeros(nw, dtype=np.uint64)
    out = np.empty(k, dtype=np.int64)
    for i in range(k):
        out[i] = _bm_packed(blocks[i], c, b, hist, tmp)
    return out


def berlekamp_massey(bits) -> int:
    """Linear complexity: length of the shortest LFSR over GF(2) producing ``bits``."""
    s = np.ascontiguousarray(np.asarray(bits, dtype=np.uint8).reshape(1, -1))
    if s.size == 0:
        return 0
    return int(_bm_blocks(s)[0])


def linear_complexities(blocks: np.ndarray) -> np.ndarray:
    """Berlekamp-Massey over every row of a ``(k, m)`` 0/1 array."""
    return _bm_blocks(np.ascontiguousarray(blocks, dtype=np.uint8))


# -- spectra -------------------------------------------------------------------

def dft_magnitudes(x) -> np.ndarray:
    """|F(j)| for j = 0 .. n//2 - 1 of a real sequence, exact length n (no padding)."""
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    return np.abs(np.fft.rfft(x))[: x.size // 2]
