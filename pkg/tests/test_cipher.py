import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import naive
from carand import bitio
from carand.cipher import (CipherKey, DegenerateKeyError, decrypt, encrypt, keystream, random_key)
from carand.keystream import CENTER, ROWS, GenSpec, SplitMix64, generate_sequence

FIXTURE_LATTICE = "9f6d8fecf88eecd5"  # random_key(2024)
GOLDEN_KEYSTREAM = "26549ddabf47991a206afc8358b0dcc8ed75dfdfe4f1bb10620fed085f221c03"
GOLDEN_PLAINTEXT = b"CA keystream 16B"
GOLDEN_CIPHERTEXT = "6515bdb1da3eea6e520f9dee7881ea8a"


@pytest.fixture
def key():
    return CipherKey(30, bitio.unpack(bytes.fromhex(FIXTURE_LATTICE), 64))


def test_fixture_key_is_random_key_2024(key):
    assert random_key(2024) == key


def test_golden_keystream(key):
    ks = keystream(key, 256)
    assert bitio.pack(ks).hex() == GOLDEN_KEYSTREAM
    # brute force: evolve 64 warmup + 256 rows and read the centre cell
    rows = naive.evolve(key.lattice.tolist(), 30, 64 + 255)
    assert [r[32] for r in rows[64:]] == ks.tolist()


def test_golden_ciphertext(key):
    assert encrypt(GOLDEN_PLAINTEXT, key).hex() == GOLDEN_CIPHERTEXT
    assert decrypt(bytes.fromhex(GOLDEN_CIPHERTEXT), key) == GOLDEN_PLAINTEXT


def test_keystream_matches_generator_path(key):
    # the same rule, width, extraction and warmup through the corpus generator
    spec = GenSpec(rule=30, seed_width=64, warmup_rows=64, bits_per_sequence=500, sequences=1,
                   master_seed=77, extraction=CENTER)
    row = SplitMix64.for_sequence(77, 0).bits(64)
    assert np.array_equal(keystream(CipherKey(30, row), 500), generate_sequence(spec, 0))
    spec = GenSpec(rule=30, seed_width=64, warmup_rows=3, bits_per_sequence=640, sequences=1,
                   master_seed=77, extraction=ROWS)
    assert np.array_equal(keystream(CipherKey(30, row, ROWS, 3), 640), generate_sequence(spec, 0))


def test_empty_and_zero(key):
    assert keystream(key, 0).size == 0
    assert encrypt(b"", key) == b"" and decrypt(b"", key) == b""
    assert encrypt(bytes(32), key) == bitio.pack(keystream(key, 256))
    with pytest.raises(ValueError):
        keystream(key, -1)


def test_degenerate_keys():
    with pytest.raises(DegenerateKeyError):
        CipherKey(30, np.zeros(64, dtype=np.uint8))
    with pytest.raises(DegenerateKeyError):
        CipherKey(30, np.ones(64, dtype=np.uint8))
    with pytest.raises(DegenerateKeyError):
        CipherKey(30, SplitMix64(1).bits(32))
    with pytest.raises(ValueError):
        CipherKey(300, SplitMix64(1).bits(64))


def test_key_serialization(key):
    text = key.to_json()
    assert CipherKey.from_json(text) == key
    assert '"lattice": "9f6d8fecf88eecd5"' in text
    with pytest.raises(ValueError):
        CipherKey.from_json('{"format": "other"}')


@settings(max_examples=100, deadline=None)
@given(st.binary(max_size=300), st.integers(0, 2 ** 63))
def test_involution(data, seed):
    k = random_key(seed)
    assert decrypt(encrypt(data, k), k) == data
    assert encrypt(encrypt(data, k), k) == data


def test_wrong_key():
    rng = np.random.default_rng(0)
    for i in range(50):
        msg = rng.bytes(16)
        k1, k2 = random_key(2 * i), random_key(2 * i + 1)
        assert decrypt(encrypt(msg, k1), k2) != msg


def test_avalanche_sample():
    rng = np.random.default_rng(1)
    for seed in range(5):
        k = random_key(seed)
        base = keystream(k, 1024)
        for cell in rng.choice(64, 4, replace=False):
            assert np.mean(base != keystream(k.flipped(cell), 1024)) >= 0.30
