"""RGB565 pixel codec, frame container, file I/O, and a synthetic scene renderer."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_WIDTH = 320
DEFAULT_HEIGHT = 240


def decode(word: int) -> tuple[int, int, int]:
    """Split a 16-bit RGB565 word into its (r5, g6, b5) fields."""
    if not 0 <= word <= 0xFFFF:
        raise ValueError(f"RGB565 word out of range: {word}")
    return (word >> 11) & 0x1F, (word >> 5) & 0x3F, word & 0x1F


def encode(r5: int, g6: int, b5: int) -> int:
    """Pack (r5, g6, b5) fields into a 16-bit RGB565 word."""
    if not (0 <= r5 <= 31 and 0 <= g6 <= 63 and 0 <= b5 <= 31):
        raise ValueError(f"RGB565 field out of range: ({r5}, {g6}, {b5})")
    return (r5 << 11) | (g6 << 5) | b5


def widen(word: int) -> tuple[int, int, int]:
    """Expand an RGB565 word to 8-bit channels by bit replication.

    Replication (v5<<3)|(v5>>2) maps full scale to 255 exactly, unlike a
    plain shift.
    """
    r5, g6, b5 = decode(word)
    return (r5 << 3) | (r5 >> 2), (g6 << 2) | (g6 >> 4), (b5 << 3) | (b5 >> 2)


def narrow(r: int, g: int, b: int) -> int:
    """Quantize an 8-bit RGB triple to RGB565 by truncation."""
    if not all(0 <= c <= 255 for c in (r, g, b)):
        raise ValueError(f"8-bit channel out of range: ({r}, {g}, {b})")
    return encode(r >> 3, g >> 2, b >> 3)


def widen_channels(words: np.ndarray) -> np.ndarray:
    """Vectorized widen: uint16 array -> uint8 array with a trailing axis of 3."""
    words = np.asarray(words, dtype=np.uint16)
    r5 = (words >> 11) & 0x1F
    g6 = (words >> 5) & 0x3F
    b5 = words & 0x1F
    out = np.empty(words.shape + (3,), dtype=np.uint8)
    out[..., 0] = (r5 << 3) | (r5 >> 2)
    out[..., 1] = (g6 << 2) | (g6 >> 4)
    out[..., 2] = (b5 << 3) | (b5 >> 2)
    return out


def narrow_channels(rgb: np.ndarray) -> np.ndarray:
    """Vectorized narrow: uint8 array with trailing axis of 3 -> uint16 words."""
    rgb = np.asarray(rgb)
    r = rgb[..., 0].astype(np.uint16) >> 3
    g = rgb[..., 1].astype(np.uint16) >> 2
    b = rgb[..., 2].astype(np.uint16) >> 3
    return (r << 11) | (g << 5) | b


@dataclass(frozen=True)
class Frame:
    """Row-major RGB565 pixel grid; the unit of all vision processing."""

    width: int
    height: int
    pixels: np.ndarray  # uint16, shape (height, width)

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint16)
        if px.shape != (self.height, self.width):
            raise ValueError(
                f"pixel array shape {px.shape} does not match "
                f"{self.width}x{self.height}"
            )
        object.__setattr__(self, "pixels", px)
        self.pixels.setflags(write=False)

    @classmethod
    def filled(cls, width: int, height: int, word: int = 0) -> "Frame":
        return cls(width, height, np.full((height, width), word, dtype=np.uint16))

    def widened(self) -> np.ndarray:
        """8-bit channels, shape (height, width, 3)."""
        return widen_channels(self.pixels)


@dataclass(frozen=True)
class Shape:
    """One colored shape in a synthetic scene, placed in angular coordinates."""

    kind: str  # disk | triangle | rectangle
    az: float  # degrees
    el: float  # degrees
    size: float  # angular diameter, degrees
    color: tuple[int, int, int]  # 8-bit RGB

    def __post_init__(self):
        if self.kind not in ("disk", "triangle", "rectangle"):
            raise ValueError(f"unknown shape kind: {self.kind!r}")
        if self.size <= 0:
            raise ValueError("shape angular size must be > 0")


@dataclass(frozen=True)
class Scene:
    """Synthetic stand-in for the physical test objects in front of the camera."""

    background: tuple[int, int, int] = (16, 16, 16)
    shapes: tuple[Shape, ...] = ()
    illumination: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.illumination <= 1.0:
            raise ValueError("illumination must be in [0, 1]")
        object.__setattr__(self, "shapes", tuple(self.shapes))


def _lit(color: tuple[int, int, int], illumination: float) -> tuple[int, int, int]:
    # Truncation keeps rendering monotone in the illumination scalar.
    return tuple(int(illumination * c) for c in color)


def render(scene: Scene, pose, intrinsics) -> Frame:
    """Rasterize a scene as seen from a camera pose.

    Later shapes overdraw earlier ones; every color is scaled by the scene
    illumination (floor) and quantized to RGB565 by truncation.
    """
    w, h = intrinsics.width, intrinsics.height
    bg = narrow(*_lit(scene.background, scene.illumination))
    pixels = np.full((h, w), bg, dtype=np.uint16)
    ys, xs = np.mgrid[0:h, 0:w]
    for shape in scene.shapes:
        cx = w / 2 + (shape.az - pose.pan) * intrinsics.ppd_x
        cy = h / 2 + (shape.el - pose.tilt) * intrinsics.ppd_y
        rx = shape.size / 2 * intrinsics.ppd_x
        ry = shape.size / 2 * intrinsics.ppd_y
        if shape.kind == "disk":
            covered = ((xs - cx) / rx) ** 2 + ((ys - cy) / ry) ** 2 <= 1.0
        elif shape.kind == "rectangle":
            covered = (np.abs(xs - cx) <= rx) & (np.abs(ys - cy) <= ry)
        else:  # triangle: apex up, base down, inscribed in the bounding box
            u = (ys - (cy - ry)) / (2 * ry)  # 0 at apex, 1 at base
            covered = (u >= 0) & (u <= 1) & (np.abs(xs - cx) <= rx * u)
        pixels[covered] = narrow(*_lit(shape.color, scene.illumination))
    return Frame(w, h, pixels)


def write_ppm(frame: Frame, path) -> None:
    """Write a frame as binary PPM (P6, maxval 255), widening each pixel."""
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (frame.width, frame.height))
        f.write(frame.widened().tobytes())


def _read_ppm_token(f) -> bytes:
    # Tokens are separated by whitespace; '#' starts a comment to end of line.
    tok = b""
    while True:
        c = f.read(1)
        if not c:
            if tok:
                return tok
            raise ValueError("malformed PPM header: unexpected end of file")
        if c == b"#":
            while c and c != b"\n":
                c = f.read(1)
            continue
        if c.isspace():
            if tok:
                return tok
            continue
        tok += c


def read_ppm(path) -> Frame:
    """Read a binary PPM (P6, maxval 255) and narrow it to an RGB565 frame."""
    with open(path, "rb") as f:
        if _read_ppm_token(f) != b"P6":
            raise ValueError("malformed PPM header: not a P6 file")
        try:
            width = int(_read_ppm_token(f))
            height = int(_read_ppm_token(f))
            maxval = int(_read_ppm_token(f))
        except ValueError as e:
            raise ValueError(f"malformed PPM header: {e}") from None
        if width <= 0 or height <= 0:
            raise ValueError(f"bad PPM dimensions {width}x{height}")
        if maxval != 255:
            raise ValueError(f"unsupported PPM maxval {maxval} (need 255)")
        payload = f.read(width * height * 3)
        if len(payload) != width * height * 3:
            raise ValueError("truncated PPM payload")
    rgb = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return Frame(width, height, narrow_channels(rgb))


def write_rgb565(frame: Frame, path) -> None:
    """Dump raw little-endian RGB565 words, row-major, no header."""
    with open(path, "wb") as f:
        f.write(frame.pixels.astype("<u2").tobytes())


def read_rgb565(path, width: int, height: int) -> Frame:
    """Read a raw RGB565 dump; dimensions are supplied out-of-band."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) != width * height * 2:
        raise ValueError(
            f"raw payload is {len(data)} bytes, expected {width * height * 2}"
        )
    pixels = np.frombuffer(data, dtype="<u2").reshape(height, width)
    return Frame(width, height, pixels.astype(np.uint16))
