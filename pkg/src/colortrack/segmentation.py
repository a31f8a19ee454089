"""Per-pixel color thresholding into a bit-packed binary mask.

Two threshold spaces are supported: a raw-RGB box, and rg chromaticity
(normalized RGB), which is approximately invariant to illumination level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imaging import Frame

WORD_BITS = 32


@dataclass
class PackedBinaryMask:
    """Row-major bit-packed binary image, 1 bit per pixel, 32-bit words.

    Pixel (x, y) lives at linear index i = y*width + x, word i//32,
    bit i%32 (LSB-first). Trailing bits past width*height stay zero.
    """

    width: int
    height: int
    words: np.ndarray  # uint32, length ceil(width*height/32)

    def __post_init__(self):
        n = _word_count(self.width, self.height)
        w = np.asarray(self.words, dtype=np.uint32)
        if w.shape != (n,):
            raise ValueError(f"expected {n} words, got shape {w.shape}")
        self.words = w

    @classmethod
    def zeros(cls, width: int, height: int) -> "PackedBinaryMask":
        return cls(width, height, np.zeros(_word_count(width, height), np.uint32))

    @classmethod
    def from_bool(cls, bits: np.ndarray) -> "PackedBinaryMask":
        """Pack a (height, width) boolean array."""
        height, width = bits.shape
        flat = np.packbits(bits.reshape(-1), bitorder="little")
        pad = (-len(flat)) % 4
        if pad:
            flat = np.concatenate([flat, np.zeros(pad, np.uint8)])
        return cls(width, height, flat.view("<u4").astype(np.uint32))

    def to_bool(self) -> np.ndarray:
        """Unpack to a (height, width) boolean array."""
        flat = np.unpackbits(self.words.astype("<u4").view(np.uint8),
                             bitorder="little")
        return flat[: self.width * self.height].reshape(self.height, self.width) != 0

    def count(self) -> int:
        return int(self.to_bool().sum())


def _word_count(width: int, height: int) -> int:
    return (width * height + WORD_BITS - 1) // WORD_BITS


def mask_get(mask: PackedBinaryMask, x: int, y: int) -> int:
    if not (0 <= x < mask.width and 0 <= y < mask.height):
        raise IndexError(f"pixel ({x}, {y}) outside {mask.width}x{mask.height}")
    i = y * mask.width + x
    return (int(mask.words[i // WORD_BITS]) >> (i % WORD_BITS)) & 1


def mask_set(mask: PackedBinaryMask, x: int, y: int, bit: int) -> None:
    if not (0 <= x < mask.width and 0 <= y < mask.height):
        raise IndexError(f"pixel ({x}, {y}) outside {mask.width}x{mask.height}")
    i = y * mask.width + x
    w, b = i // WORD_BITS, i % WORD_BITS
    if bit:
        mask.words[w] |= np.uint32(1 << b)
    else:
        mask.words[w] &= np.uint32(~(1 << b) & 0xFFFFFFFF)


@dataclass(frozen=True)
class RgbBoxThreshold:
    """Inclusive min/max box per widened 8-bit channel."""

    r_min: int
    r_max: int
    g_min: int
    g_max: int
    b_min: int
    b_max: int

    def __post_init__(self):
        for lo, hi in ((self.r_min, self.r_max), (self.g_min, self.g_max),
                       (self.b_min, self.b_max)):
            if not 0 <= lo <= hi <= 255:
                raise ValueError(f"bad channel range [{lo}, {hi}]")


@dataclass(frozen=True)
class ChromaThreshold:
    """Inclusive box in rg chromaticity plus a minimum-luminance guard.

    Near-black pixels have meaningless chromaticity (the normalization
    divides by I), so pixels with I < i_min never match.
    """

    r_min: float
    r_max: float
    g_min: float
    g_max: float
    i_min: int = 30

    def __post_init__(self):
        for lo, hi in ((self.r_min, self.r_max), (self.g_min, self.g_max)):
            if not 0.0 <= lo <= hi <= 1.0:
                raise ValueError(f"bad chroma range [{lo}, {hi}]")
        if self.i_min < 1:
            raise ValueError("i_min must be >= 1")


@dataclass(frozen=True)
class ChromaPoint:
    r: float
    g: float


def luminance(r: int, g: int, b: int) -> int:
    """Sum of the widened channels, 0..765."""
    return int(r) + int(g) + int(b)


def chromaticity(r, g, b) -> ChromaPoint | None:
    """Normalized (r, g) fractions; None when the pixel is pure black (I = 0).

    Accepts real-valued channels: the normalization is scale-invariant,
    chromaticity(s*R, s*G, s*B) == chromaticity(R, G, B) for any s > 0.
    """
    i = r + g + b
    if i == 0:
        return None
    return ChromaPoint(r / i, g / i)


def threshold_from_pick(color: tuple[int, int, int], mode: str, *,
                        rgb_margin: int = 24, chroma_margin: float = 0.05,
                        i_min: int = 30):
    """Derive a threshold from a single picked pixel with symmetric margins."""
    r, g, b = color
    if mode == "rgb":
        return RgbBoxThreshold(
            max(r - rgb_margin, 0), min(r + rgb_margin, 255),
            max(g - rgb_margin, 0), min(g + rgb_margin, 255),
            max(b - rgb_margin, 0), min(b + rgb_margin, 255),
        )
    if mode == "chroma":
        cp = chromaticity(r, g, b)
        if cp is None:
            raise ValueError("cannot derive a chroma threshold from a black pick")
        return ChromaThreshold(
            max(cp.r - chroma_margin, 0.0), min(cp.r + chroma_margin, 1.0),
            max(cp.g - chroma_margin, 0.0), min(cp.g + chroma_margin, 1.0),
            i_min,
        )
    raise ValueError(f"unknown threshold mode: {mode!r}")


def segment_rgb(frame: Frame, t: RgbBoxThreshold) -> PackedBinaryMask:
    """Bit set iff all three widened channels fall inside their ranges."""
    rgb = frame.widened()
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    bits = ((r >= t.r_min) & (r <= t.r_max)
            & (g >= t.g_min) & (g <= t.g_max)
            & (b >= t.b_min) & (b <= t.b_max))
    return PackedBinaryMask.from_bool(bits)


def segment_chroma(frame: Frame, t: ChromaThreshold) -> PackedBinaryMask:
    """Bit set iff I >= i_min and (r, g) chromaticity falls inside the box."""
    rgb = frame.widened().astype(np.int32)
    i = rgb[..., 0] + rgb[..., 1] + rgb[..., 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(i > 0, rgb[..., 0] / i, 0.0)
        g = np.where(i > 0, rgb[..., 1] / i, 0.0)
    bits = ((i >= t.i_min)
            & (r >= t.r_min) & (r <= t.r_max)
            & (g >= t.g_min) & (g <= t.g_max))
    return PackedBinaryMask.from_bool(bits)


def write_pbm(mask: PackedBinaryMask, path) -> None:
    """Export as binary PBM (P4). PBM is MSB-first, so bits are reordered."""
    bits = mask.to_bool()
    rows = np.packbits(bits, axis=1)  # MSB-first, rows padded to a byte
    with open(path, "wb") as f:
        f.write(b"P4\n%d %d\n" % (mask.width, mask.height))
        f.write(rows.tobytes())


def write_mask_words(mask: PackedBinaryMask, path) -> None:
    """Dump the raw packed words, little-endian, for exact round-trips."""
    with open(path, "wb") as f:
        f.write(mask.words.astype("<u4").tobytes())


def read_mask_words(path, width: int, height: int) -> PackedBinaryMask:
    with open(path, "rb") as f:
        data = f.read()
    n = _word_count(width, height)
    if len(data) != 4 * n:
        raise ValueError(f"mask dump is {len(data)} bytes, expected {4 * n}")
    words = np.frombuffer(data, dtype="<u4").astype(np.uint32)
    return PackedBinaryMask(width, height, words)
