"""Netpbm codecs: PBM (P1/P4) in and out, PGM (P2/P5) in for binarization.

Header comments (``#`` to end of line) are accepted anywhere whitespace is
allowed. Dimensions are capped at 10000x10000. All parse errors carry the
byte offset of the offending input.
"""

from __future__ import annotations

import numpy as np

from .errors import FormatError
from .model import RasterSignature

MAX_DIMENSION = 10_000

_WHITESPACE = b" \t\r\n\x0b\x0c"


class _Scanner:
    """Tokenizer over header bytes, tracking the current offset."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def fail(self, message: str):
        raise FormatError(f"{message} at byte {self.pos}")

    def skip_space(self) -> None:
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos]
            if c in _WHITESPACE:
                self.pos += 1
            elif c == ord("#"):
                nl = data.find(b"\n", self.pos)
                self.pos = n if nl < 0 else nl + 1
            else:
                return

    def token(self, what: str) -> bytes:
        self.skip_space()
        if self.pos >= len(self.data):
            self.fail(f"unexpected end of data, expected {what}")
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos] not in _WHITESPACE:
            if self.data[self.pos] == ord("#"):
                break
            self.pos += 1
        return self.data[start : self.pos]

    def int_token(self, what: str) -> int:
        start_pos = self.pos
        tok = self.token(what)
        if not tok.isdigit():
            self.pos = start_pos
            self.skip_space()
            self.fail(f"expected {what}, got {tok[:16]!r}")
        return int(tok)

    def dimension(self, what: str) -> int:
        at = self.pos
        value = self.int_token(what)
        if value <= 0:
            self.pos = at
            self.skip_space()
            self.fail(f"{what} must be positive, got {value}")
        if value > MAX_DIMENSION:
            self.pos = at
            self.skip_space()
            self.fail(f"{what} {value} exceeds maximum {MAX_DIMENSION}")
        return value

    def raster_start(self) -> int:
        # Binary rasters begin after exactly one whitespace byte.
        if self.pos >= len(self.data) or self.data[self.pos] not in _WHITESPACE:
            self.fail("expected single whitespace before binary raster")
        return self.pos + 1


def load_pbm(data: bytes) -> RasterSignature:
    """Decode P1 (plain) or P4 (packed) bitmap bytes into a RasterSignature."""
    sc = _Scanner(bytes(data))
    magic = sc.token("magic number")
    if magic not in (b"P1", b"P4"):
        sc.pos = 0
        sc.fail(f"unsupported magic {magic[:8]!r} (want P1 or P4)")
    width = sc.dimension("width")
    height = sc.dimension("height")
    if magic == b"P1":
        black = _read_plain_bits(sc, width, height)
    else:
        black = _read_packed_bits(sc, width, height)
    return RasterSignature(width, height, black)


def _read_plain_bits(sc: _Scanner, width: int, height: int) -> set[tuple[int, int]]:
    black: set[tuple[int, int]] = set()
    data, n = sc.data, len(sc.data)
    for row in range(height):
        for col in range(width):
            sc.skip_space()
            if sc.pos >= n:
                sc.fail(f"raster truncated, expected {width * height} pixels")
            c = data[sc.pos]
            if c == ord("1"):
                black.add((col, row))
            elif c != ord("0"):
                sc.fail(f"invalid plain-bitmap pixel {chr(c)!r}")
            sc.pos += 1
    return black


def _read_packed_bits(sc: _Scanner, width: int, height: int) -> set[tuple[int, int]]:
    start = sc.raster_start()
    row_bytes = (width + 7) // 8
    needed = row_bytes * height
    raster = sc.data[start : start + needed]
    if len(raster) < needed:
        sc.pos = len(sc.data)
        sc.fail(f"raster truncated, expected {needed} bytes, got {len(raster)}")
    bits = np.unpackbits(np.frombuffer(raster, dtype=np.uint8).reshape(height, row_bytes), axis=1)
    rows, cols = np.nonzero(bits[:, :width])
    return {(int(c), int(r)) for r, c in zip(rows, cols)}


def save_pbm(sig: RasterSignature, ascii: bool = True) -> bytes:
    """Encode a RasterSignature as P1 (default) or P4 bytes.

    ``load_pbm(save_pbm(s))`` reproduces ``s`` exactly in both encodings.
    """
    header = f"{'P1' if ascii else 'P4'}\n{sig.width} {sig.height}\n".encode()
    grid = np.zeros((sig.height, sig.width), dtype=np.uint8)
    for col, row in sig.black:
        grid[row, col] = 1
    if ascii:
        rows = b"\n".join(b" ".join(b"1" if v else b"0" for v in row) for row in grid)
        return header + rows + b"\n"
    packed = np.packbits(grid, axis=1)
    return header + packed.tobytes()


def load_pgm(data: bytes) -> np.ndarray:
    """Decode P2/P5 graymap bytes into an (height, width) uint8 intensity grid.

    Only single-byte maxvals (1..255) are accepted.
    """
    sc = _Scanner(bytes(data))
    magic = sc.token("magic number")
    if magic not in (b"P2", b"P5"):
        sc.pos = 0
        sc.fail(f"unsupported magic {magic[:8]!r} (want P2 or P5)")
    width = sc.dimension("width")
    height = sc.dimension("height")
    at = sc.pos
    maxval = sc.int_token("maxval")
    if not 1 <= maxval <= 255:
        sc.pos = at
        sc.skip_space()
        sc.fail(f"maxval {maxval} out of supported range 1..255")
    if magic == b"P2":
        grid = np.empty((height, width), dtype=np.uint8)
        for row in range(height):
            for col in range(width):
                at = sc.pos
                value = sc.int_token("pixel value")
                if value > maxval:
                    sc.pos = at
                    sc.skip_space()
                    sc.fail(f"pixel value {value} exceeds maxval {maxval}")
                grid[row, col] = value
        return grid
    start = sc.raster_start()
    needed = width * height
    raster = sc.data[start : start + needed]
    if len(raster) < needed:
        sc.pos = len(sc.data)
        sc.fail(f"raster truncated, expected {needed} bytes, got {len(raster)}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def sniff_and_load(data: bytes, threshold: int = 128) -> RasterSignature:
    """Load PBM directly or PGM via binarize, keyed on the magic number."""
    from .model import binarize

    magic = bytes(data[:2])
    if magic in (b"P2", b"P5"):
        return binarize(load_pgm(data), threshold)
    return load_pbm(data)
