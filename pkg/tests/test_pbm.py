import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigcloud.errors import FormatError
from sigcloud.model import RasterSignature, binarize
from sigcloud.pbm import load_pbm, load_pgm, save_pbm, sniff_and_load


# --- independent oracle: plain-text P1 <-> packed P4 transcoder -------------
# Written against the format description only; shares no code with the codec.

def p1_to_p4_oracle(p1_bytes: bytes) -> bytes:
    tokens = p1_bytes.split()
    assert tokens[0] == b"P1"
    width, height = int(tokens[1]), int(tokens[2])
    digits = b"".join(tokens[3:]).decode()
    assert len(digits) == width * height
    out = bytearray(f"P4\n{width} {height}\n".encode())
    for row in range(height):
        row_bits = digits[row * width : (row + 1) * width]
        byte = 0
        nbits = 0
        for ch in row_bits:
            byte = (byte << 1) | (ch == "1")
            nbits += 1
            if nbits == 8:
                out.append(byte)
                byte = nbits = 0
        if nbits:
            out.append(byte << (8 - nbits))
    return bytes(out)


def random_raster(rng, width, height, density=0.3) -> RasterSignature:
    black = {
        (c, r) for c in range(width) for r in range(height) if rng.random() < density
    }
    return RasterSignature(width, height, frozenset(black))


def as_plain_p1(sig: RasterSignature) -> bytes:
    rows = []
    for r in range(sig.height):
        rows.append(" ".join("1" if (c, r) in sig.black else "0" for c in range(sig.width)))
    return (f"P1\n{sig.width} {sig.height}\n" + "\n".join(rows) + "\n").encode()


# --- load_pbm ----------------------------------------------------------------

def test_load_p1_direct_encoding():
    sig = load_pbm(b"P1\n2 2\n1 0\n0 1\n")
    assert sig == RasterSignature(2, 2, frozenset({(0, 0), (1, 1)}))


def test_load_p1_all_white():
    sig = load_pbm(b"P1\n1 1\n0\n")
    assert sig == RasterSignature(1, 1, frozenset())


def test_load_p1_unseparated_digits_and_comments():
    sig = load_pbm(b"P1 # magic\n# a comment line\n2 2 # dims\n10\n01\n")
    assert sig.black == frozenset({(0, 0), (1, 1)})


def test_p4_equals_p1_transcription():
    rng = np.random.default_rng(7)
    for _ in range(25):
        sig = random_raster(rng, 16, 16)
        p1 = as_plain_p1(sig)
        p4 = p1_to_p4_oracle(p1)
        assert load_pbm(p4) == load_pbm(p1) == sig


def test_p4_non_byte_aligned_width():
    rng = np.random.default_rng(8)
    for width in (1, 3, 7, 9, 13):
        sig = random_raster(rng, width, 5)
        assert load_pbm(p1_to_p4_oracle(as_plain_p1(sig))) == sig


@pytest.mark.parametrize(
    "data, fragment",
    [
        (b"P6\n2 2\n", "unsupported magic"),
        (b"P1\n0 2\n", "width must be positive"),
        (b"P1\n2 -2\n", "expected height"),
        (b"P1\n2\n", "unexpected end of data"),
        (b"P1\n2 2\n1 0 1\n", "raster truncated"),
        (b"P1\n2 2\n1 0 1 2\n", "invalid plain-bitmap pixel"),
        (b"P1\n20000 2\n", "exceeds maximum"),
        (b"P4\n4 4\n\x00", "raster truncated"),
    ],
)
def test_load_pbm_errors_name_byte_offset(data, fragment):
    with pytest.raises(FormatError) as err:
        load_pbm(data)
    assert fragment in str(err.value)
    assert "at byte" in str(err.value)


# --- save_pbm ----------------------------------------------------------------

def test_save_p1_trivial_forms():
    assert save_pbm(RasterSignature(1, 1, frozenset())) == b"P1\n1 1\n0\n"
    assert save_pbm(RasterSignature(2, 1, frozenset({(0, 0), (1, 0)}))) == b"P1\n2 1\n1 1\n"


def test_round_trip_100_random_bitmaps():
    rng = np.random.default_rng(42)
    for i in range(100):
        w = int(rng.integers(1, 24))
        h = int(rng.integers(1, 24))
        sig = random_raster(rng, w, h, density=float(rng.uniform(0, 1)))
        assert load_pbm(save_pbm(sig, ascii=True)) == sig
        assert load_pbm(save_pbm(sig, ascii=False)) == sig


@settings(max_examples=60, deadline=None)
@given(
    w=st.integers(1, 12),
    h=st.integers(1, 12),
    seed=st.integers(0, 2**31),
    ascii=st.booleans(),
)
def test_round_trip_property(w, h, seed, ascii):
    sig = random_raster(np.random.default_rng(seed), w, h)
    assert load_pbm(save_pbm(sig, ascii=ascii)) == sig


# --- PGM + binarize ----------------------------------------------------------

def test_load_pgm_plain_and_binary_agree():
    plain = b"P2\n# gray\n3 2\n255\n0 128 255\n10 200 30\n"
    binary = b"P5\n3 2\n255\n" + bytes([0, 128, 255, 10, 200, 30])
    assert np.array_equal(load_pgm(plain), load_pgm(binary))
    assert load_pgm(plain).shape == (2, 3)


def test_load_pgm_rejects_wide_maxval():
    with pytest.raises(FormatError, match="maxval"):
        load_pgm(b"P5\n2 2\n65535\n" + bytes(8))


def test_binarize_trivials():
    assert binarize(np.full((3, 3), 255), 128).black == frozenset()
    full = binarize(np.zeros((2, 2)), 128)
    assert full.black == frozenset({(0, 0), (0, 1), (1, 0), (1, 1)})
    # strict inequality: 127 < 128 is ink, 128 < 128 is not
    assert binarize(np.array([[127]]), 128).black == frozenset({(0, 0)})
    assert binarize(np.array([[128]]), 128).black == frozenset()


def test_sniff_and_load_pgm_path():
    gray = b"P2\n2 1\n255\n0 255\n"
    sig = sniff_and_load(gray)
    assert sig.black == frozenset({(0, 0)})
