import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from histosynth.dataset import compute_tps
from histosynth.labels import (ClassId, LabelGrid, POLYGONS, POLYGONS_AIR_CELLS,
                               POLYGONS_NOISE, RgbImage, N_LABELS)
from histosynth.masks import (MaskLayout, NoiseSpec, ThresholdSpec,
                              extract_air_cells, inject_noise, one_hot_encode,
                              synthesize_mask)
from histosynth.masks.encode import decode_one_hot
from histosynth.masks.raster import (DegeneratePolygonError, PolygonAnnotation,
                                     rasterize_polygons)


def point_in_polygon(px, py, verts):
    """Even-odd ray cast used as an independent rasterization oracle."""
    inside = False
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        if (y0 > py) != (y1 > py):
            xc = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
            if px < xc:
                inside = not inside
    return inside


class TestRasterize:
    def test_empty_annotations_gives_background(self):
        g = rasterize_polygons([], 8, 5, background=ClassId.INFLAMMATION)
        assert (g.labels == int(ClassId.INFLAMMATION)).all()
        assert g.resolution_tag == POLYGONS

    def test_rectangle_pixel_count(self):
        rect = PolygonAnnotation(ClassId.PDL1_POS,
                                 [(10, 10), (20, 10), (20, 20), (10, 20)])
        g = rasterize_polygons([rect], 32, 32)
        assert int((g.labels == int(ClassId.PDL1_POS)).sum()) == 100
        # pixel-center oracle over every pixel
        for y in range(32):
            for x in range(32):
                expect = point_in_polygon(x + 0.5, y + 0.5, rect.vertices)
                assert (g.labels[y, x] == int(ClassId.PDL1_POS)) == expect

    def test_triangle_matches_point_in_polygon_oracle(self):
        tri = PolygonAnnotation(ClassId.PDL1_NEG, [(2.2, 1.1), (27.5, 6.3), (9.0, 25.8)])
        g = rasterize_polygons([tri], 30, 28)
        for y in range(28):
            for x in range(30):
                expect = point_in_polygon(x + 0.5, y + 0.5, tri.vertices)
                assert (g.labels[y, x] == int(ClassId.PDL1_NEG)) == expect

    def test_overlap_last_writer_wins(self):
        a = PolygonAnnotation(ClassId.PDL1_POS, [(0, 0), (10, 0), (10, 10), (0, 10)])
        b = PolygonAnnotation(ClassId.INFLAMMATION, [(5, 5), (15, 5), (15, 15), (5, 15)])
        g = rasterize_polygons([a, b], 16, 16)
        assert g.labels[7, 7] == int(ClassId.INFLAMMATION)
        assert g.labels[2, 2] == int(ClassId.PDL1_POS)

    def test_degenerate_rejected_with_index(self):
        bad = PolygonAnnotation(ClassId.PDL1_POS, [(0, 0), (5, 5)])
        with pytest.raises(DegeneratePolygonError) as exc:
            rasterize_polygons([PolygonAnnotation(ClassId.OTHER, [(0, 0), (3, 0), (0, 3)]),
                                bad], 8, 8)
        assert exc.value.index == 1

    def test_collinear_rejected(self):
        with pytest.raises(DegeneratePolygonError):
            rasterize_polygons([PolygonAnnotation(ClassId.OTHER,
                                                  [(0, 0), (2, 2), (4, 4)])], 8, 8)

    def test_no_auxiliary_labels(self):
        rng = np.random.default_rng(3)
        anns = [PolygonAnnotation(ClassId(int(rng.integers(0, 4))),
                                  [(rng.uniform(0, 20), rng.uniform(0, 20))
                                   for _ in range(5)])
                for _ in range(4)]
        anns = [a for a in anns]
        try:
            g = rasterize_polygons(anns, 20, 20)
        except DegeneratePolygonError:
            return
        assert g.labels.max() <= 3


class TestInjectNoise:
    def base(self, h=32, w=32):
        return LabelGrid(np.zeros((h, w), dtype=np.uint8))

    def test_large_distance_is_identity_except_tag(self):
        g = self.base()
        out = inject_noise(g, NoiseSpec(1e6, seed=0))
        assert (out.labels == g.labels).all()
        assert out.resolution_tag == POLYGONS_NOISE

    def test_count_within_binomial_4sigma(self):
        h, w, d = 512, 128, 15
        g = self.base(h, w)
        out = inject_noise(g, NoiseSpec(d, seed=5))
        n = h * w
        p = 1 / d ** 2
        count = int((out.labels == int(ClassId.NOISE)).sum())
        sigma = np.sqrt(n * p * (1 - p))
        assert abs(count - n * p) <= 4 * sigma

    def test_deterministic(self):
        g = self.base()
        a = inject_noise(g, NoiseSpec(4, seed=9))
        b = inject_noise(g, NoiseSpec(4, seed=9))
        assert (a.labels == b.labels).all()

    def test_only_noise_pixels_change(self):
        g = LabelGrid(np.random.default_rng(0).integers(0, 4, (40, 40)).astype(np.uint8))
        out = inject_noise(g, NoiseSpec(3, seed=1))
        changed = out.labels != g.labels
        assert (out.labels[changed] == int(ClassId.NOISE)).all()
        assert changed.sum() == (out.labels == int(ClassId.NOISE)).sum()

    def test_requires_polygons_tag(self):
        g = LabelGrid(np.zeros((8, 8), dtype=np.uint8), POLYGONS_NOISE)
        with pytest.raises(ValueError):
            inject_noise(g, NoiseSpec(4))

    def test_d_below_one_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(0.5)


class TestExtractAirCells:
    def test_white_is_all_air(self):
        img = RgbImage(np.full((6, 6, 3), 255, dtype=np.uint8))
        base = LabelGrid(np.zeros((6, 6), dtype=np.uint8))
        out = extract_air_cells(img, base, ThresholdSpec(240, 60))
        assert (out.labels == int(ClassId.AIR)).all()
        assert out.resolution_tag == POLYGONS_AIR_CELLS

    def test_mid_gray_keeps_base(self):
        img = RgbImage(np.full((6, 6, 3), 128, dtype=np.uint8))
        base = LabelGrid(np.full((6, 6), int(ClassId.PDL1_NEG), dtype=np.uint8))
        out = extract_air_cells(img, base, ThresholdSpec(240, 60))
        assert (out.labels == int(ClassId.PDL1_NEG)).all()

    def test_checkerboard_matches_per_pixel_oracle(self):
        h, w = 10, 14
        checker = np.indices((h, w)).sum(axis=0) % 2
        gray = np.where(checker == 0, 20, 235).astype(np.uint8)
        img = RgbImage(np.stack([gray] * 3, axis=-1))
        base = LabelGrid(np.full((h, w), int(ClassId.OTHER), dtype=np.uint8))
        out = extract_air_cells(img, base, ThresholdSpec(200, 60))
        for y in range(h):
            for x in range(w):
                g = gray[y, x]
                if g > 200:
                    assert out.labels[y, x] == int(ClassId.AIR)
                elif g < 60:
                    assert out.labels[y, x] == int(ClassId.CELL)
                else:
                    assert out.labels[y, x] == int(ClassId.OTHER)

    def test_dimension_mismatch_rejected(self):
        img = RgbImage(np.zeros((4, 4, 3), dtype=np.uint8))
        base = LabelGrid(np.zeros((5, 4), dtype=np.uint8))
        with pytest.raises(ValueError):
            extract_air_cells(img, base, ThresholdSpec())

    def test_threshold_ordering_enforced(self):
        with pytest.raises(ValueError):
            ThresholdSpec(air_threshold=100, cell_threshold=150)


class TestSynthesizeMask:
    def test_target_one_has_no_negative(self):
        m = synthesize_mask(1.0, MaskLayout(), 96, 64, seed=0)
        assert (m.labels != int(ClassId.PDL1_NEG)).all()
        assert compute_tps(m) == 1.0

    def test_target_zero_all_negative(self):
        m = synthesize_mask(0.0, MaskLayout(), 96, 64, seed=0)
        assert (m.labels != int(ClassId.PDL1_POS)).all()

    @pytest.mark.parametrize("target", [0.3, 0.01, 0.5, 0.77])
    def test_tps_tolerance(self, target):
        m = synthesize_mask(target, MaskLayout(), 96, 64, seed=1)
        assert abs(compute_tps(m) - target) <= 0.02

    def test_deterministic(self):
        a = synthesize_mask(0.3, MaskLayout(), 64, 64, seed=5)
        b = synthesize_mask(0.3, MaskLayout(), 64, 64, seed=5)
        assert (a.labels == b.labels).all()

    def test_infeasible_layout_rejected(self):
        layout = MaskLayout(n_regions=0)
        with pytest.raises(ValueError):
            synthesize_mask(0.5, layout, 32, 32, seed=0)

    def test_bad_fractions_rejected(self):
        with pytest.raises(ValueError):
            MaskLayout(inflammation_fraction=0.8, other_fraction=0.4)


class TestOneHot:
    def test_uniform_other(self):
        g = LabelGrid(np.zeros((4, 6), dtype=np.uint8))
        stack = one_hot_encode(g)
        assert stack.shape == (N_LABELS, 4, 6)
        assert (stack[0] == 1).all()
        assert stack[1:].sum() == 0

    @given(st.integers(0, 2 ** 31))
    @settings(max_examples=25, deadline=None)
    def test_round_trip_and_channel_sum(self, seed):
        rng = np.random.default_rng(seed)
        arr = rng.integers(0, N_LABELS, (8, 12)).astype(np.uint8)
        g = LabelGrid(arr, POLYGONS_AIR_CELLS)
        stack = one_hot_encode(g)
        assert (stack.sum(axis=0) == 1).all()
        assert (decode_one_hot(stack).labels == arr).all()

    def test_out_of_range_rejected(self):
        g = LabelGrid(np.full((2, 2), int(ClassId.CELL), dtype=np.uint8),
                      POLYGONS_AIR_CELLS)
        with pytest.raises(ValueError):
            one_hot_encode(g, n_labels=3)
