"""Image writers: binary PPM (P6) always, PNG through Pillow on request."""

import logging
from pathlib import Path

import numpy as np
from PIL import Image

logger = logging.getLogger(__name__)


def _rgb(image):
    gray = np.asarray(image, dtype=np.uint8)
    return np.repeat(gray[:, :, None], 3, axis=2)


def write_ppm(image, path):
    """Write a grayscale array as a P6 image (each gray value repeated over R, G, B)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rgb = _rgb(image)
    height, width = rgb.shape[:2]
    with open(path, 'wb') as f:
        f.write(f"P6\n{width} {height}\n255\n".encode('ascii'))
        f.write(rgb.tobytes())
    return path


def read_ppm(path):
    """Read a P6 image written by ``write_ppm`` back into a grayscale array."""
    data = Path(path).read_bytes()
    parts = data.split(b'\n', 3)
    if parts[0] != b'P6':
        raise ValueError(f"{path} is not a binary PPM")
    width, height = (int(x) for x in parts[1].split())
    rgb = np.frombuffer(parts[3], dtype=np.uint8).reshape(height, width, 3)
    return rgb[:, :, 0].copy()


def write_png(image, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(_rgb(image)).save(path, format='PNG')
    return path


def write_image(image, path, png=False):
    """Write ``path`` as PPM and, with ``png``, a sibling ``.png``; returns the paths written."""
    path = Path(path)
    if path.suffix.lower() != '.ppm':
        path = path.with_suffix('.ppm')
    paths = [write_ppm(image, path)]
    if png:
        paths.append(write_png(image, path.with_suffix('.png')))
    logger.debug(f"Wrote {', '.join(str(p) for p in paths)}")
    return paths
