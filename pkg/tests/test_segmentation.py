from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colortrack import segmentation as seg
from colortrack.imaging import Frame, widen
from colortrack.segmentation import (ChromaThreshold, PackedBinaryMask,
                                     RgbBoxThreshold, chromaticity, luminance,
                                     mask_get, mask_set, segment_chroma,
                                     segment_rgb, threshold_from_pick)


def naive_bits(frame, threshold):
    """Unpacked per-pixel reference segmentation (no bit packing)."""
    out = np.zeros((frame.height, frame.width), dtype=bool)
    for y in range(frame.height):
        for x in range(frame.width):
            r, g, b = widen(int(frame.pixels[y, x]))
            if isinstance(threshold, RgbBoxThreshold):
                out[y, x] = (threshold.r_min <= r <= threshold.r_max
                             and threshold.g_min <= g <= threshold.g_max
                             and threshold.b_min <= b <= threshold.b_max)
            else:
                i = r + g + b
                out[y, x] = (i >= threshold.i_min and i > 0
                             and threshold.r_min <= r / i <= threshold.r_max
                             and threshold.g_min <= g / i <= threshold.g_max)
    return out


def random_frame(rng, w=32, h=32):
    return Frame(w, h, rng.integers(0, 0x10000, (h, w)).astype(np.uint16))


def test_luminance_examples():
    assert luminance(0, 0, 0) == 0
    assert luminance(255, 255, 255) == 765
    assert luminance(100, 50, 50) == 200


def test_chromaticity_examples():
    cp = chromaticity(85, 85, 85)
    assert cp.r == pytest.approx(1 / 3) and cp.g == pytest.approx(1 / 3)
    assert chromaticity(100, 50, 50) == chromaticity(200, 100, 100)
    assert chromaticity(100, 50, 50).r == 0.5
    assert chromaticity(0, 0, 0) is None


@given(st.integers(1, 10**6), st.integers(0, 10**6), st.integers(0, 10**6),
       st.fractions(min_value=Fraction(1, 1000), max_value=1000))
@settings(max_examples=300)
def test_chromaticity_exact_scale_invariance(r, g, b, s):
    # exact rational arithmetic: the normalization cancels any positive scale
    r, g, b = Fraction(r), Fraction(g), Fraction(b)
    assert chromaticity(r * s, g * s, b * s) == chromaticity(r, g, b)


def test_threshold_from_pick_rgb():
    t = threshold_from_pick((128, 128, 128), "rgb")
    assert (t.r_min, t.r_max) == (104, 152)
    assert (t.g_min, t.g_max) == (104, 152)
    assert (t.b_min, t.b_max) == (104, 152)


def test_threshold_from_pick_rgb_clamps():
    t = threshold_from_pick((250, 10, 10), "rgb")
    assert t.r_max == 255
    assert t.g_min == 0 and t.b_min == 0


def test_threshold_from_pick_chroma():
    t = threshold_from_pick((200, 100, 100), "chroma")
    assert (t.r_min, t.r_max) == pytest.approx((0.45, 0.55))
    assert (t.g_min, t.g_max) == pytest.approx((0.20, 0.30))
    assert t.i_min == 30


def test_threshold_from_pick_black_chroma_rejected():
    with pytest.raises(ValueError, match="black"):
        threshold_from_pick((0, 0, 0), "chroma")


def test_threshold_validation():
    with pytest.raises(ValueError):
        RgbBoxThreshold(10, 5, 0, 255, 0, 255)
    with pytest.raises(ValueError):
        ChromaThreshold(0.5, 0.4, 0.0, 1.0)
    with pytest.raises(ValueError):
        ChromaThreshold(0.0, 1.0, 0.0, 1.0, i_min=0)


# -- packed mask addressing --------------------------------------------------

def test_mask_word_count_qvga():
    mask = PackedBinaryMask.zeros(320, 240)
    assert len(mask.words) == 2400


def test_mask_addressing_definition():
    mask = PackedBinaryMask.zeros(320, 240)
    mask_set(mask, 0, 0, 1)
    assert mask.words[0] == 1
    mask_set(mask, 0, 0, 0)
    mask_set(mask, 31, 0, 1)
    assert mask.words[0] == 1 << 31
    mask_set(mask, 31, 0, 0)
    mask_set(mask, 32, 0, 1)
    assert mask.words[1] == 1


def test_mask_bounds():
    mask = PackedBinaryMask.zeros(8, 8)
    with pytest.raises(IndexError):
        mask_get(mask, 8, 0)
    with pytest.raises(IndexError):
        mask_set(mask, 0, -1, 1)


@given(st.lists(st.tuples(st.integers(0, 19), st.integers(0, 11),
                          st.integers(0, 1)), max_size=60))
def test_mask_set_get_matches_boolean_oracle(ops):
    mask = PackedBinaryMask.zeros(20, 12)
    ref = np.zeros((12, 20), dtype=bool)
    for x, y, bit in ops:
        mask_set(mask, x, y, bit)
        ref[y, x] = bool(bit)
    for x, y, _ in ops:
        assert mask_get(mask, x, y) == int(ref[y, x])
    assert np.array_equal(mask.to_bool(), ref)


def test_pack_round_trip_and_trailing_zeros():
    rng = np.random.default_rng(11)
    bits = rng.random((7, 9)) < 0.5  # 63 bits: one partial trailing word
    mask = PackedBinaryMask.from_bool(bits)
    assert np.array_equal(mask.to_bool(), bits)
    assert (int(mask.words[-1]) >> (63 % 32)) == 0


def test_mask_words_file_round_trip(tmp_path):
    rng = np.random.default_rng(2)
    mask = PackedBinaryMask.from_bool(rng.random((10, 13)) < 0.4)
    p = tmp_path / "mask.words"
    seg.write_mask_words(mask, p)
    back = seg.read_mask_words(p, 13, 10)
    assert np.array_equal(back.words, mask.words)
    with pytest.raises(ValueError, match="expected"):
        seg.read_mask_words(p, 13, 20)


def test_pbm_export_msb_first(tmp_path):
    bits = np.zeros((1, 8), dtype=bool)
    bits[0, 0] = True  # leftmost pixel -> MSB of the first PBM byte
    p = tmp_path / "m.pbm"
    seg.write_pbm(PackedBinaryMask.from_bool(bits), p)
    data = p.read_bytes()
    assert data.startswith(b"P4\n8 1\n")
    assert data[-1] == 0x80


# -- segmentation ------------------------------------------------------------

def test_segment_rgb_uniform_frame():
    frame = Frame.filled(16, 8, 0xF800)
    pick = widen(0xF800)
    mask = segment_rgb(frame, threshold_from_pick(pick, "rgb"))
    assert mask.count() == 16 * 8


def test_segment_rgb_inclusive_bounds():
    t = RgbBoxThreshold(99, 99, 0, 255, 0, 255)
    word = None
    for w in range(0x10000):
        if widen(w)[0] == 99:
            word = w
            break
    frame = Frame.filled(1, 1, word)
    assert segment_rgb(frame, t).count() == 1


def test_segment_rgb_vs_naive_oracle():
    rng = np.random.default_rng(5)
    t = RgbBoxThreshold(40, 200, 10, 220, 30, 240)
    for _ in range(10):
        frame = random_frame(rng)
        mask = segment_rgb(frame, t)
        assert np.array_equal(mask.to_bool(), naive_bits(frame, t))


def test_segment_chroma_vs_naive_oracle():
    rng = np.random.default_rng(6)
    t = ChromaThreshold(0.2, 0.6, 0.1, 0.5, i_min=30)
    for _ in range(10):
        frame = random_frame(rng)
        mask = segment_chroma(frame, t)
        assert np.array_equal(mask.to_bool(), naive_bits(frame, t))


def test_segment_chroma_uniform_pick():
    from colortrack.imaging import narrow
    word = narrow(200, 100, 100)
    frame = Frame.filled(12, 12, word)
    t = threshold_from_pick(widen(word), "chroma")
    assert segment_chroma(frame, t).count() == 144


def test_segment_chroma_black_frame_empty():
    frame = Frame.filled(16, 16, 0x0000)
    t = ChromaThreshold(0.0, 1.0, 0.0, 1.0, i_min=30)
    assert segment_chroma(frame, t).count() == 0


def test_segment_chroma_half_scale_near_invariant():
    # pre-scale the nominal color in real arithmetic, then quantize; masks
    # may differ only on quantization-boundary pixels
    color = (230, 120, 30)
    from colortrack.imaging import narrow
    full = Frame.filled(16, 16, narrow(*color))
    half = Frame.filled(16, 16, narrow(*(c // 2 for c in color)))
    t = threshold_from_pick(widen(narrow(*color)), "chroma")
    a = segment_chroma(full, t).to_bool()
    b = segment_chroma(half, t).to_bool()
    assert (a != b).mean() <= 0.05


def test_segment_rgb_not_illumination_invariant():
    # a scale factor exists under which the RGB box loses the object while
    # chroma keeps it
    color = (230, 120, 30)
    from colortrack.imaging import narrow
    scale = 0.4
    dim = Frame.filled(16, 16, narrow(*(int(scale * c) for c in color)))
    rgb_t = threshold_from_pick(widen(narrow(*color)), "rgb")
    chroma_t = threshold_from_pick(widen(narrow(*color)), "chroma")
    assert segment_rgb(dim, rgb_t).count() < 0.5 * 256
    assert segment_chroma(dim, chroma_t).count() >= 0.95 * 256
