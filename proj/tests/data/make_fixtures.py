"""Regenerates the natural-image fixtures used by the test suites.

Host: scikit-image `camera` (CC0). Watermark: scikit-image `coffee` (CC0),
converted to gray and center-cropped to a square before resizing.
"""
import pathlib

import numpy as np
import skimage.color
import skimage.data
import skimage.transform

OUT = pathlib.Path(__file__).resolve().parent


def write_pgm(path, img):
    img = np.asarray(img, dtype=np.uint8)
    h, w = img.shape
    path.write_bytes(b"P5\n%d %d\n255\n" % (w, h) + img.tobytes())


def square(img):
    h, w = img.shape
    s = min(h, w)
    top, left = (h - s) // 2, (w - s) // 2
    return img[top:top + s, left:left + s]


def resize(img, n):
    out = skimage.transform.resize(img.astype(float), (n, n), anti_aliasing=True,
                                   preserve_range=True)
    return np.clip(np.round(out), 0, 255)


camera = skimage.data.camera().astype(float)
coffee = square(skimage.color.rgb2gray(skimage.data.coffee()) * 255.0)

for n in (512, 256):
    write_pgm(OUT / f"camera_{n}.pgm", resize(camera, n))
    write_pgm(OUT / f"coffee_{n}.pgm", resize(coffee, n))
