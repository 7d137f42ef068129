import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from karyoband import imagecore
from karyoband.imagecore import ImageError


class TestToGrayscale:
    def test_grayscale_identity(self):
        img = np.arange(16, dtype=np.uint8).reshape(4, 4)
        assert np.array_equal(imagecore.to_grayscale(img), img)

    def test_white_maps_to_white(self):
        rgb = np.full((2, 2, 3), 255, dtype=np.uint8)
        assert np.all(imagecore.to_grayscale(rgb) == 255)

    def test_pure_red(self):
        rgb = np.zeros((1, 1, 3), dtype=np.uint8)
        rgb[..., 0] = 255
        # round(0.2126 * 255) with BT.709 weights
        assert imagecore.to_grayscale(rgb)[0, 0] == 54

    def test_rejects_two_channels(self):
        with pytest.raises(ImageError):
            imagecore.to_grayscale(np.zeros((2, 2, 2), dtype=np.uint8))

    @given(hnp.arrays(np.uint8, (5, 7)))
    def test_idempotent_on_single_channel(self, img):
        once = imagecore.to_grayscale(img)
        assert np.array_equal(imagecore.to_grayscale(once), once)


class TestPadSquare:
    def test_noop_at_target(self):
        img = np.arange(16, dtype=np.uint8).reshape(4, 4)
        assert np.array_equal(imagecore.pad_square(img, 4), img)

    def test_even_surplus_split(self):
        img = np.zeros((2, 4), dtype=np.uint8)
        out = imagecore.pad_square(img, 4, fill=255)
        assert out.shape == (4, 4)
        assert np.all(out[0] == 255) and np.all(out[3] == 255)
        assert np.all(out[1:3] == 0)

    def test_odd_surplus_goes_right(self):
        img = np.zeros((4, 3), dtype=np.uint8)
        out = imagecore.pad_square(img, 4, fill=255)
        assert np.all(out[:, 3] == 255)
        assert np.all(out[:, :3] == 0)

    def test_target_too_small(self):
        with pytest.raises(ImageError):
            imagecore.pad_square(np.zeros((5, 2), dtype=np.uint8), 4)

    @given(hnp.arrays(np.uint8, st.tuples(st.integers(1, 8), st.integers(1, 8))),
           st.integers(0, 6))
    def test_pad_then_crop_is_identity(self, img, extra):
        target = max(img.shape) + extra
        out = imagecore.pad_square(img, target)
        top = (target - img.shape[0]) // 2
        left = (target - img.shape[1]) // 2
        crop = out[top:top + img.shape[0], left:left + img.shape[1]]
        assert np.array_equal(crop, img)


class TestResize:
    def test_identity(self):
        img = np.random.default_rng(0).integers(0, 256, (128, 128)).astype(np.uint8)
        assert np.array_equal(imagecore.resize(img, 128), img)

    def test_constant_stays_constant(self):
        img = np.full((256, 256), 93, dtype=np.uint8)
        out = imagecore.resize(img, 128)
        assert out.shape == (128, 128)
        assert np.all(out == 93)

    def test_checkerboard_upscale(self):
        img = np.array([[0, 255], [255, 0]], dtype=np.uint8)
        out = imagecore.resize(img, 4)
        # corners sample outside the source center grid and clamp
        assert out[0, 0] == 0 and out[0, 3] == 255
        assert out[3, 0] == 255 and out[3, 3] == 0
        # hand-evaluated bilinear value at (1,1): fx = fy = 0.25
        top = 0 * 0.75 + 255 * 0.25
        bot = 255 * 0.75 + 0 * 0.25
        expected = round(top * 0.75 + bot * 0.25)
        assert out[1, 1] == expected
        assert 0 < out[1, 1] < 255

    def test_rejects_non_square(self):
        with pytest.raises(ImageError):
            imagecore.resize(np.zeros((4, 6), dtype=np.uint8), 4)


class TestBinarize:
    def test_dark_rectangle(self):
        img = np.full((20, 20), 255, dtype=np.uint8)
        img[5:15, 3:12] = 0
        mask = imagecore.binarize(img)
        expected = np.zeros((20, 20), dtype=bool)
        expected[5:15, 3:12] = True
        assert np.array_equal(mask, expected)

    def test_largest_component_only(self):
        img = np.full((20, 20), 255, dtype=np.uint8)
        img[5:15, 3:12] = 0
        img[18, 18] = 0
        mask = imagecore.binarize(img)
        assert not mask[18, 18]
        assert mask[10, 5]

    def test_ring_is_filled(self):
        img = np.full((21, 21), 255, dtype=np.uint8)
        rr, cc = np.mgrid[:21, :21]
        d = np.hypot(rr - 10, cc - 10)
        img[(d > 4) & (d < 8)] = 0
        mask = imagecore.binarize(img)
        assert mask[10, 10]  # hole filled

    def test_degenerate_raises(self):
        with pytest.raises(ImageError):
            imagecore.binarize(np.full((5, 5), 7, dtype=np.uint8))

    def test_single_component_no_holes(self):
        from scipy import ndimage
        rng = np.random.default_rng(3)
        img = np.full((40, 40), 250, dtype=np.uint8)
        img[8:30, 10:30] = rng.integers(40, 120, (22, 20))
        img[rng.integers(0, 40, 15), rng.integers(0, 40, 15)] = 0
        mask = imagecore.binarize(img)
        four = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
        _, n = ndimage.label(mask, structure=four)
        assert n == 1
        bg_labels, _ = ndimage.label(~mask, structure=np.ones((3, 3)))
        border = set(bg_labels[0]) | set(bg_labels[-1]) | set(bg_labels[:, 0]) | set(bg_labels[:, -1])
        assert set(np.unique(bg_labels[~mask])) <= border


class TestBandedIO:
    def test_roundtrip(self, tmp_path):
        arr = np.full((6, 6), 255, dtype=np.uint8)
        arr[2:4, 2:4] = 0
        arr[4, 4] = 127
        imagecore.save_banded(arr, tmp_path / "m.png")
        assert np.array_equal(imagecore.load_banded(tmp_path / "m.png"), arr)

    def test_rejects_non_codes(self, tmp_path):
        arr = np.full((4, 4), 3, dtype=np.uint8)
        with pytest.raises(ImageError):
            imagecore.save_banded(arr, tmp_path / "m.png")
