import numpy as np
import pytest

from karyoband import dataset, imagecore, synth
from karyoband.imagecore import ImageError


def make_karyotype(rng, n_blobs=3, size=200):
    img = np.full((size, size), 250, dtype=np.uint8)
    placed = 0
    step = size // n_blobs
    for i in range(n_blobs):
        ch = synth.render_chromosome(synth.random_pattern(rng, 40), width=10, size=60)
        r = 10 + (i % n_blobs) * step // 2
        c = 10 + i * step
        h = min(ch.image.shape[0], size - r)
        w = min(ch.image.shape[1], size - c)
        img[r:r + h, c:c + w] = np.minimum(img[r:r + h, c:c + w],
                                           ch.image[:h, :w])
        placed += 1
    return img


class TestSplitKaryotype:
    def test_three_blobs(self):
        img = np.full((60, 120), 255, dtype=np.uint8)
        img[5:20, 5:15] = 30
        img[30:50, 40:55] = 40
        img[10:40, 80:95] = 50
        crops = dataset.split_karyotype(img, min_area=20)
        assert len(crops) == 3

    def test_blank_image(self):
        assert dataset.split_karyotype(np.full((40, 40), 200, dtype=np.uint8)) == []

    def test_min_area_filter(self):
        img = np.full((60, 60), 255, dtype=np.uint8)
        img[5:30, 5:20] = 30
        img[50:52, 50:52] = 30  # 4 px blob
        crops = dataset.split_karyotype(img, min_area=20)
        assert len(crops) == 1


class TestPreprocess:
    def test_identity_path(self):
        img = np.random.default_rng(0).integers(0, 256, (128, 128)).astype(np.uint8)
        assert np.array_equal(dataset.preprocess(img, 128), img)

    def test_pad_then_resize(self):
        img = np.full((60, 100), 50, dtype=np.uint8)
        out = dataset.preprocess(img, 100)
        assert out.shape == (128, 128)

    def test_rgb_input(self):
        rgb = np.zeros((64, 64, 3), dtype=np.uint8)
        out = dataset.preprocess(rgb, 64)
        assert out.shape == (128, 128) and out.dtype == np.uint8


class TestMakeSplits:
    def test_fractions_20(self):
        items = [(f"s{i}", f"g{i}") for i in range(20)]
        assign = dataset.make_splits(items, seed=0)
        counts = {s: sum(1 for v in assign.values() if v == s)
                  for s in ("train", "val", "test")}
        assert counts == {"train": 14, "val": 3, "test": 3}

    def test_deterministic(self):
        items = [(f"s{i}", f"g{i % 7}") for i in range(40)]
        assert dataset.make_splits(items, 5) == dataset.make_splits(items, 5)

    def test_groups_never_split(self):
        items = [(f"s{i}", f"g{i % 5}") for i in range(50)]
        assign = dataset.make_splits(items, 3)
        for g in range(5):
            splits = {assign[f"s{i}"] for i in range(50) if i % 5 == g}
            assert len(splits) == 1

    def test_too_few_raises(self):
        with pytest.raises(ImageError):
            dataset.make_splits([("a", "a"), ("b", "b")], 0)

    def test_large_count_fractions(self):
        items = [(f"s{i}", f"g{i}") for i in range(42684)]
        assign = dataset.make_splits(items, 1)
        n_test = sum(1 for v in assign.values() if v == "test")
        n_val = sum(1 for v in assign.values() if v == "val")
        assert abs(n_test - 6403) <= 1
        assert abs(n_val - 6403) <= 1


@pytest.fixture(scope="module")
def src_dir(tmp_path_factory):
    src = tmp_path_factory.mktemp("src")
    rng = np.random.default_rng(10)
    for cls in (1, 2):
        d = src / str(cls)
        d.mkdir()
        for j in range(5):
            ch = synth.random_chromosome(rng, noise=3.0)
            imagecore.save_gray(ch.image, d / f"k{j % 3}__c{cls}_{j}.png")
    return src


class TestBuildDataset:
    def test_build_and_manifest(self, src_dir, tmp_path):
        manifest = dataset.build_dataset(src_dir, tmp_path / "out", seed=1)
        assert len(manifest.entries) == 10
        splits = {e.split for e in manifest.entries}
        assert splits <= {"train", "val", "test"}
        for e in manifest.entries:
            assert (tmp_path / "out" / "images" / f"{e.sample_id}.png").exists()
            assert (tmp_path / "out" / "masks" / f"{e.sample_id}.png").exists()
            assert (tmp_path / "out" / e.split / f"{e.sample_id}.png").exists()
        for e in manifest.by_split("test"):
            assert e.perlin is not None
            assert (tmp_path / "out" / "test_perlin" / "masks" / f"{e.sample_id}.png").exists()

    def test_test_perlin_shares_shapes(self, src_dir, tmp_path):
        manifest = dataset.build_dataset(src_dir, tmp_path / "out", seed=1)
        for e in manifest.by_split("test"):
            real = imagecore.load_banded(tmp_path / "out" / "masks" / f"{e.sample_id}.png")
            per = imagecore.load_banded(
                tmp_path / "out" / "test_perlin" / "masks" / f"{e.sample_id}.png")
            assert np.array_equal(real != 255, per != 255)

    def test_manifest_json_roundtrip(self, src_dir, tmp_path):
        manifest = dataset.build_dataset(src_dir, tmp_path / "out", seed=2)
        back = dataset.Manifest.from_json(manifest.to_json())
        assert back.to_json() == manifest.to_json()

    def test_byte_identical_rebuild(self, src_dir, tmp_path):
        import filecmp
        dataset.build_dataset(src_dir, tmp_path / "a", seed=3)
        dataset.build_dataset(src_dir, tmp_path / "b", seed=3)
        for rel in sorted(p.relative_to(tmp_path / "a")
                          for p in (tmp_path / "a").rglob("*") if p.is_file()):
            assert filecmp.cmp(tmp_path / "a" / rel, tmp_path / "b" / rel, shallow=False), rel


class TestKaryotypeLayout:
    def test_karyotype_ingestion(self, tmp_path):
        rng = np.random.default_rng(11)
        src = tmp_path / "src"
        src.mkdir()
        for i in range(3):
            imagecore.save_gray(make_karyotype(rng), src / f"kary{i}.png")
        manifest = dataset.build_dataset(src, tmp_path / "out", seed=4, min_area=60)
        assert len(manifest.entries) >= 6
        assert all(e.chrom_class == 0 for e in manifest.entries)
        groups = {e.group for e in manifest.entries}
        assert groups <= {"kary0", "kary1", "kary2"}
