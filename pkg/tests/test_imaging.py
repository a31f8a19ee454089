import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from colortrack import imaging
from colortrack.imaging import (Frame, Scene, Shape, decode, encode, narrow,
                                render, widen)
from colortrack.plant import CameraIntrinsics, CameraPose


def test_decode_examples():
    assert decode(0x0000) == (0, 0, 0)
    assert decode(0xFFFF) == (31, 63, 31)
    assert decode(0xF800) == (31, 0, 0)


def test_encode_examples():
    assert encode(31, 0, 0) == 0xF800
    assert encode(0, 63, 0) == 0x07E0


def test_encode_out_of_range():
    with pytest.raises(ValueError):
        encode(32, 0, 0)
    with pytest.raises(ValueError):
        encode(0, 64, 0)
    with pytest.raises(ValueError):
        encode(0, 0, -1)


def test_encode_decode_exhaustive():
    for w in range(0x10000):
        assert encode(*decode(w)) == w


def test_widen_examples():
    assert widen(0x0000) == (0, 0, 0)
    assert widen(0xFFFF) == (255, 255, 255)
    # replication formula evaluated by hand: r5=g6>>1=16, g6=32, b5=2... see
    # decode(0x8410) == (16, 32, 16)
    assert widen(0x8410) == (132, 130, 132)


def test_narrow_examples():
    assert narrow(255, 255, 255) == 0xFFFF
    assert narrow(7, 3, 7) == 0x0000


def test_narrow_widen_identity_exhaustive():
    for w in range(0x10000):
        assert narrow(*widen(w)) == w


@given(st.tuples(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255)))
def test_widen_narrow_idempotent(rgb):
    once = widen(narrow(*rgb))
    assert widen(narrow(*once)) == once


def test_vectorized_codec_matches_scalar():
    words = np.arange(0x10000, dtype=np.uint16)
    wide = imaging.widen_channels(words)
    sample = np.random.default_rng(0).integers(0, 0x10000, 200)
    for w in sample:
        assert tuple(wide[w]) == widen(int(w))
    assert np.array_equal(imaging.narrow_channels(wide), words)


def test_frame_shape_validation():
    with pytest.raises(ValueError):
        Frame(4, 4, np.zeros((3, 4), np.uint16))


# -- rendering ---------------------------------------------------------------

INTR = CameraIntrinsics(width=320, height=240, ppd_x=8.0, ppd_y=8.0)
POSE = CameraPose()


def test_render_empty_scene_uniform_background():
    frame = render(Scene(background=(200, 100, 50)), POSE, INTR)
    assert np.all(frame.pixels == narrow(200, 100, 50))


def test_render_centered_disk():
    scene = Scene(shapes=[Shape("disk", 0.0, 0.0, 4.0, (255, 0, 0))])
    frame = render(scene, POSE, INTR)
    ys, xs = np.nonzero(frame.pixels == narrow(255, 0, 0))
    assert (xs.min() + xs.max()) // 2 == 160
    assert (ys.min() + ys.max()) // 2 == 120
    assert frame.pixels[120, 160] == narrow(255, 0, 0)


def test_render_overdraw_order():
    scene = Scene(shapes=[Shape("disk", 0.0, 0.0, 4.0, (255, 0, 0)),
                          Shape("disk", 0.0, 0.0, 4.0, (0, 0, 255))])
    frame = render(scene, POSE, INTR)
    assert frame.pixels[120, 160] == narrow(0, 0, 255)


def test_render_deterministic():
    scene = Scene(shapes=[Shape("triangle", 3.0, -2.0, 5.0, (10, 200, 90))],
                  illumination=0.7)
    a = render(scene, POSE, INTR)
    b = render(scene, POSE, INTR)
    assert np.array_equal(a.pixels, b.pixels)


def test_render_half_illumination_vs_per_pixel_oracle():
    color = (237, 121, 63)
    full = render(Scene(shapes=[Shape("disk", 0.0, 0.0, 4.0, color)],
                        illumination=1.0), POSE, INTR)
    half = render(Scene(shapes=[Shape("disk", 0.0, 0.0, 4.0, color)],
                        illumination=0.5), POSE, INTR)
    obj = full.pixels == narrow(*color)
    expected = narrow(*(c // 2 for c in color))
    assert np.all(half.pixels[obj] == expected)
    # halving then widening stays within one quantization count of half the
    # widened full-illumination channels
    wide_full = np.array(widen(narrow(*color)), dtype=float)
    wide_half = np.array(widen(expected), dtype=float)
    assert np.all(np.abs(wide_half - wide_full / 2) <= 8)


@pytest.mark.parametrize("kind", ["disk", "rectangle", "triangle"])
def test_render_illumination_monotone(kind):
    scene = lambda s: Scene(background=(40, 60, 80),
                            shapes=[Shape(kind, 1.0, -1.0, 6.0, (250, 130, 40))],
                            illumination=s)
    prev = None
    for s in (0.2, 0.4, 0.6, 0.8, 1.0):
        wide = render(scene(s), POSE, INTR).widened().astype(int)
        if prev is not None:
            assert np.all(prev <= wide)
        prev = wide


def test_shape_validation():
    with pytest.raises(ValueError):
        Shape("hexagon", 0, 0, 1.0, (0, 0, 0))
    with pytest.raises(ValueError):
        Shape("disk", 0, 0, 0.0, (0, 0, 0))
    with pytest.raises(ValueError):
        Scene(illumination=1.5)


# -- file I/O ----------------------------------------------------------------

def test_ppm_single_white_pixel(tmp_path):
    p = tmp_path / "white.ppm"
    p.write_bytes(b"P6\n1 1\n255\n\xff\xff\xff")
    frame = imaging.read_ppm(p)
    assert frame.width == frame.height == 1
    assert frame.pixels[0, 0] == 0xFFFF


def test_ppm_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    frame = Frame(13, 9, rng.integers(0, 0x10000, (9, 13)).astype(np.uint16))
    p = tmp_path / "f.ppm"
    imaging.write_ppm(frame, p)
    back = imaging.read_ppm(p)
    assert np.array_equal(back.pixels, frame.pixels)


def test_ppm_header_comments(tmp_path):
    p = tmp_path / "c.ppm"
    p.write_bytes(b"P6\n# a comment\n2 1\n255\n" + b"\x00" * 6)
    frame = imaging.read_ppm(p)
    assert frame.width == 2 and frame.height == 1


def test_ppm_truncated(tmp_path):
    p = tmp_path / "t.ppm"
    p.write_bytes(b"P6\n2 2\n255\n\xff\xff")
    with pytest.raises(ValueError, match="truncated"):
        imaging.read_ppm(p)


def test_ppm_bad_magic(tmp_path):
    p = tmp_path / "b.ppm"
    p.write_bytes(b"P5\n1 1\n255\n\x00")
    with pytest.raises(ValueError, match="P6"):
        imaging.read_ppm(p)


def test_ppm_bad_maxval(tmp_path):
    p = tmp_path / "m.ppm"
    p.write_bytes(b"P6\n1 1\n65535\n\x00\x00\x00\x00\x00\x00")
    with pytest.raises(ValueError, match="maxval"):
        imaging.read_ppm(p)


def test_rgb565_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    frame = Frame(8, 5, rng.integers(0, 0x10000, (5, 8)).astype(np.uint16))
    p = tmp_path / "f.rgb565"
    imaging.write_rgb565(frame, p)
    assert p.stat().st_size == 8 * 5 * 2
    back = imaging.read_rgb565(p, 8, 5)
    assert np.array_equal(back.pixels, frame.pixels)


def test_rgb565_little_endian(tmp_path):
    frame = Frame(1, 1, np.array([[0xF800]], np.uint16))
    p = tmp_path / "one.rgb565"
    imaging.write_rgb565(frame, p)
    assert p.read_bytes() == b"\x00\xf8"


def test_rgb565_size_mismatch(tmp_path):
    p = tmp_path / "bad.rgb565"
    p.write_bytes(b"\x00\x00")
    with pytest.raises(ValueError, match="expected"):
        imaging.read_rgb565(p, 2, 2)
