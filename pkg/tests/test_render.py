import math

import numpy as np
import pytest

from zitterdyn.solvers.spectrum import SearchBox
from zitterdyn.views.domain_coloring import (
    MAX_RESOLUTION, colorize, draw_markers, pixel_centers, render_domain_coloring, save_ppm,
)
from zitterdyn.utils.errors import ExportError, ModelViolationError


def border_hues(hue):
    """Hue along the image border, counter-clockwise in the complex plane."""
    h, w = hue.shape
    bottom = hue[h - 1, :]
    right = hue[::-1, w - 1]
    top = hue[0, ::-1]
    left = hue[:, 0]
    return np.concatenate([bottom, right, top, left]).astype(np.int64)


def test_double_zero_winds_twice():
    image = render_domain_coloring(0.0, "-1,1,-1,1", 64, workers=1)
    hues = border_hues(image.hsv[..., 0])
    steps = np.diff(np.append(hues, hues[0]))
    steps = (steps + 128) % 256 - 128
    assert int(np.sum(steps)) == 512


def test_identical_config_identical_bytes():
    first = render_domain_coloring(0.3, "-3,3,-3,3", 40, workers=3)
    second = render_domain_coloring(0.3, "-3,3,-3,3", 40, workers=1)
    assert first.to_ppm_bytes() == second.to_ppm_bytes()


def test_velocity_drops_out_at_unit_exponential():
    box = SearchBox(-1.0, 1.0, 2.0 * math.pi - 1.0, 2.0 * math.pi + 1.0)
    rest = render_domain_coloring(0.0, box, 3, workers=1)
    moving = render_domain_coloring(0.9, box, 3, workers=1)
    assert (rest.width, rest.height) == (3, 3)
    assert np.array_equal(rest.rgb[1, 1], moving.rgb[1, 1])


def test_aspect_ratio():
    image = render_domain_coloring(0.0, "0,12,-60,60", 20, workers=1)
    assert (image.width, image.height) == (20, 200)
    assert image.rgb.shape == (200, 20, 3)


def test_zero_is_black():
    image = render_domain_coloring(0.0, "-1.5,1.5,-1.5,1.5", 3, workers=1)
    assert image.rgb[1, 1].tolist() == [0, 0, 0]


def test_colorize_special_values():
    hsv = colorize(np.array([0.0, np.inf, 1.0, 1j]))
    assert hsv[0].tolist() == [0, 0, 0]
    assert hsv[1].tolist() == [0, 0, 255]
    assert hsv[2, 0] == 0
    assert hsv[3, 0] == 64


def test_pixel_centers_orientation():
    re, im = pixel_centers(SearchBox(0.0, 4.0, 0.0, 2.0), 4, 2)
    assert re.tolist() == [0.5, 1.5, 2.5, 3.5]
    assert im.tolist() == [1.5, 0.5]


def test_root_markers():
    image = render_domain_coloring(0.0, "-1,1,-1,1", 21, roots=[0j, 5 + 5j], workers=1)
    white = [255, 255, 255]
    assert image.rgb[10, 10].tolist() == white
    assert image.rgb[8, 10].tolist() == white
    assert image.rgb[10, 12].tolist() == white
    assert image.rgb[8, 8].tolist() != white


def test_draw_markers_counts_visible_roots():
    image = render_domain_coloring(0.0, "-1,1,-1,1", 21, workers=1)
    assert draw_markers(image, [0.5 + 0.5j, 3.0 + 0j]) == 1


@pytest.mark.parametrize("resolution", [0, MAX_RESOLUTION + 1, 1.5])
def test_rejects_bad_resolution(resolution):
    with pytest.raises(ModelViolationError):
        render_domain_coloring(0.0, "-1,1,-1,1", resolution)


def test_rejects_degenerate_box():
    with pytest.raises(ModelViolationError):
        render_domain_coloring(0.0, "1,1,-1,1", 10)


def test_save_ppm(tmp_path):
    image = render_domain_coloring(0.0, "-2,2,-1,1", 16, workers=1)
    path = tmp_path / "fig.ppm"
    save_ppm(image, path)
    data = path.read_bytes()
    assert data.startswith(b"P6\n16 8\n255\n")
    assert data == image.to_ppm_bytes()


def test_save_ppm_unwritable(tmp_path):
    image = render_domain_coloring(0.0, "-1,1,-1,1", 4, workers=1)
    with pytest.raises(ExportError):
        save_ppm(image, tmp_path / "missing" / "fig.ppm")
