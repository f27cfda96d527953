"""
Domain-coloring images of the characteristic function.

Palette: hue follows arg f linearly over [0, 360), value bands restart at
every power of two of |f|, saturation is fixed. Pixels are sampled at their
centers, so identical settings give identical bytes.
"""

import logging
from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw

from ..solvers.spectrum import SearchBox, char_fn
from ..utils.errors import ExportError, ModelViolationError
from ..utils.parallel import map_ordered

logger = logging.getLogger("Zitterdyn.render")

MAX_RESOLUTION = 8192
SATURATION = 204
VALUE_FLOOR = 0.55
MARKER_COLOR = (255, 255, 255)
MARKER_ARM = 2


@dataclass
class DomainColorImage:
    """
    A rendered image.

    Attributes:
        width, height: pixel size
        box: SearchBox covered by the image
        beta: velocity parameter of the rendered function
        hsv: (height, width, 3) uint8 hue / saturation / value planes before conversion
        rgb: (height, width, 3) uint8 pixels, markers included
    """
    width: int
    height: int
    box: SearchBox
    beta: float
    hsv: np.ndarray
    rgb: np.ndarray

    def to_pil(self):
        return Image.fromarray(self.rgb)

    def to_ppm_bytes(self):
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + self.rgb.tobytes()

    def pixel_of(self, z):
        """(column, row) of the pixel containing z, or None outside the image."""
        box = self.box
        col = int(np.floor((z.real - box.re_min) / (box.re_max - box.re_min) * self.width))
        row = int(np.floor((box.im_max - z.imag) / (box.im_max - box.im_min) * self.height))
        if 0 <= col < self.width and 0 <= row < self.height:
            return col, row
        return None


def colorize(values):
    """
    Map complex values to HSV bytes.

    Zeros are painted black; non-finite values white.
    """
    values = np.asarray(values, dtype=complex)
    hsv = np.empty(values.shape + (3,), dtype=np.uint8)
    with np.errstate(divide="ignore", invalid="ignore"):
        phase = np.mod(np.angle(values), 2.0 * np.pi)
        octave = np.log2(np.abs(values))
        hue = np.floor(np.nan_to_num(phase) / (2.0 * np.pi) * 256.0).astype(np.int64) % 256
        band = octave - np.floor(octave)
        value = np.floor(255.0 * (VALUE_FLOOR + (1.0 - VALUE_FLOOR) * np.nan_to_num(band)))

    hsv[..., 0] = hue
    hsv[..., 1] = SATURATION
    hsv[..., 2] = value.astype(np.uint8)

    zero = values == 0
    hsv[zero] = (0, 0, 0)
    bad = ~np.isfinite(values) & ~zero
    hsv[bad] = (0, 0, 255)
    return hsv


def pixel_centers(box, width, height):
    """Real and imaginary parts of the pixel centers; row 0 is the top (largest Im)."""
    re = box.re_min + (np.arange(width) + 0.5) * (box.re_max - box.re_min) / width
    im = box.im_max - (np.arange(height) + 0.5) * (box.im_max - box.im_min) / height
    return re, im


def render_domain_coloring(beta, box, resolution, roots=None, workers=None):
    """
    Render f(z) = z^2 + z + (1 - beta^2)(1 - e^z) over box.

    Args:
        beta: velocity parameter
        box: SearchBox or "re_min,re_max,im_min,im_max"
        resolution: image width in pixels; the height keeps the box aspect ratio
        roots: optional iterable of complex values drawn as crosses
        workers: thread count for the row fan-out

    Returns:
        DomainColorImage
    """
    if isinstance(box, str):
        box = SearchBox.parse(box)
    if not isinstance(resolution, (int, np.integer)) or not 1 <= resolution <= MAX_RESOLUTION:
        raise ModelViolationError(f"Resolution must be an integer in [1, {MAX_RESOLUTION}], got {resolution}",
                                  resolution=resolution)
    width = int(resolution)
    height = max(1, int(round(width * (box.im_max - box.im_min) / (box.re_max - box.re_min))))
    if height > MAX_RESOLUTION:
        raise ModelViolationError(f"Box aspect ratio gives height {height} > {MAX_RESOLUTION}", height=height)

    re, im = pixel_centers(box, width, height)

    def row(y):
        return colorize(char_fn(re + 1j * y, beta))

    hsv = np.stack(map_ordered(row, im, workers), axis=0)
    rgb = np.asarray(Image.frombytes("HSV", (width, height), hsv.tobytes()).convert("RGB"))
    image = DomainColorImage(width=width, height=height, box=box, beta=float(beta), hsv=hsv, rgb=rgb)
    if roots is not None:
        draw_markers(image, roots)
    logger.info(f"Rendered {width}x{height} image for beta={beta}")
    return image


def draw_markers(image, roots):
    """Overlay a white cross, five pixels across, on every root inside the image."""
    canvas = Image.fromarray(image.rgb)
    draw = ImageDraw.Draw(canvas)
    drawn = 0
    for z in roots:
        pixel = image.pixel_of(complex(z))
        if pixel is None:
            continue
        col, row = pixel
        draw.line([(col - MARKER_ARM, row), (col + MARKER_ARM, row)], fill=MARKER_COLOR)
        draw.line([(col, row - MARKER_ARM), (col, row + MARKER_ARM)], fill=MARKER_COLOR)
        drawn += 1
    image.rgb = np.asarray(canvas)
    logger.debug(f"Drew {drawn} root markers")
    return drawn


def save_ppm(image, path):
    """Write the image as binary PPM (P6)."""
    try:
        image.to_pil().save(path, format="PPM")
    except OSError as e:
        raise ExportError(f"Cannot write image {path}: {e}", path=str(path)) from e
    logger.info(f"Wrote {path}")
