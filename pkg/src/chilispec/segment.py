"""Region-of-interest extraction: false color, Otsu threshold, connectivity.

The sample sits in a petri dish against the dark scanner box, so the ROI
is found by thresholding the luminance of a false-color composite,
keeping the largest 4-connected foreground component and filling any
interior holes (specular dark spots must not punch through the mask).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .cube import BandImage, HyperCube, band_at

__all__ = [
    "Mask",
    "false_color",
    "otsu_threshold",
    "connected_components",
    "fill_holes",
    "extract_roi",
    "save_mask_csv",
]

# 4-connectivity: up/down/left/right only.
_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass
class Mask:
    """Boolean pixel mask aligned with a cube's spatial extent."""

    bits: np.ndarray  # (height, width) bool

    def __post_init__(self) -> None:
        b = np.asarray(self.bits, dtype=bool)
        if b.ndim != 2:
            raise ValueError("mask bits must be 2-D (height, width)")
        self.bits = b

    @property
    def height(self) -> int:
        return int(self.bits.shape[0])

    @property
    def width(self) -> int:
        return int(self.bits.shape[1])

    def count(self) -> int:
        return int(self.bits.sum())


def _normalized(values: np.ndarray) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


def _pooled_spread(a: np.ndarray, b: np.ndarray) -> float:
    """Pooled per-class spread, IQR-based so stray bright pixels cannot inflate it.

    A threshold that merely splits one Gaussian mode leaves a class-mean
    gap of ~2.6x this spread; genuinely separated modes sit far above.
    """

    def iqr_sigma(v: np.ndarray) -> float:
        q25, q75 = np.percentile(v, [25.0, 75.0])
        return float(q75 - q25) / 1.349

    n_a, n_b = a.size, b.size
    return float(
        np.sqrt((iqr_sigma(a) ** 2 * n_a + iqr_sigma(b) ** 2 * n_b) / (n_a + n_b))
    )


def false_color(cube: HyperCube) -> tuple[BandImage, BandImage, BandImage]:
    """R/G/B composite from the 698, 590 and 450 nm bands, each min-max normalized."""

    w = cube.wavelengths
    if not (w[0] <= 450 and w[-1] >= 698):
        raise ValueError(
            f"cube wavelength span [{w[0]:g}, {w[-1]:g}] nm does not cover 450-698 nm"
        )
    channels = []
    for target in (698.0, 590.0, 450.0):
        band = band_at(cube, target)
        channels.append(BandImage(values=_normalized(band.values), wavelength=band.wavelength))
    return channels[0], channels[1], channels[2]


def otsu_threshold(image: BandImage | np.ndarray) -> float:
    """Threshold maximizing between-class variance over a 256-bin histogram."""

    values = image.values if isinstance(image, BandImage) else np.asarray(image)
    flat = values.ravel().astype(np.float64)
    lo, hi = float(flat.min()), float(flat.max())
    if lo == hi:
        raise ValueError("Otsu threshold undefined for a constant image")
    counts, edges = np.histogram(flat, bins=256, range=(lo, hi))
    centers = 0.5 * (edges[:-1] + edges[1:])

    total = counts.sum()
    w0 = np.cumsum(counts)[:-1]  # pixels at or below cut k (bins 0..k)
    w1 = total - w0
    csum = np.cumsum(counts * centers)[:-1]
    tsum = float((counts * centers).sum())
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = csum / w0
        mu1 = (tsum - csum) / w1
        sigma_b = w0 * w1 * (mu0 - mu1) ** 2
    sigma_b = np.where((w0 == 0) | (w1 == 0), -np.inf, sigma_b)
    k = int(np.argmax(sigma_b))  # first maximum -> lowest threshold
    return float(edges[k + 1])


def connected_components(mask: Mask) -> np.ndarray:
    """Label 4-connected true-regions; ids dense from 1 in raster first-encounter order."""

    labels, n = ndimage.label(mask.bits, structure=_CROSS)
    if n == 0:
        return labels
    # canonicalize: renumber by first occurrence in raster scan
    flat = labels.ravel()
    ids, first = np.unique(flat, return_index=True)
    keep = ids != 0
    ids, first = ids[keep], first[keep]
    order = np.argsort(first, kind="stable")
    remap = np.zeros(int(ids.max()) + 1, dtype=labels.dtype)
    remap[ids[order]] = np.arange(1, ids.size + 1)
    return remap[labels]


def fill_holes(mask: Mask) -> Mask:
    """Convert background components that do not touch the image border to foreground."""

    bg_labels = connected_components(Mask(bits=~mask.bits))
    border_ids = np.unique(
        np.concatenate(
            [bg_labels[0, :], bg_labels[-1, :], bg_labels[:, 0], bg_labels[:, -1]]
        )
    )
    holes = (bg_labels > 0) & ~np.isin(bg_labels, border_ids)
    return Mask(bits=mask.bits | holes)


def extract_roi(cube: HyperCube) -> Mask:
    """Segment the sample region from the false-color luminance.

    Otsu-thresholds the mean of the three false-color channels, picks the
    foreground side (the side bounded away from the image border, else the
    brighter side), keeps the largest 4-connected component and fills
    interior holes.  When the threshold merely splits a unimodal intensity
    distribution (class-mean gap under 3.5x the pooled within-class spread)
    the whole frame is one region and the full mask is returned.
    """

    r, g, b = false_color(cube)
    lum = (r.values + g.values + b.values) / 3.0
    thr = otsu_threshold(lum)

    above = lum > thr
    below = ~above
    if not above.any() or not below.any():
        return Mask(bits=np.ones_like(above))

    gap = abs(float(lum[above].mean()) - float(lum[below].mean()))
    if gap < 3.5 * _pooled_spread(lum[above], lum[below]):
        return Mask(bits=np.ones_like(above))  # unimodal frame: single region

    def touches_border(m: np.ndarray) -> bool:
        return bool(m[0, :].any() or m[-1, :].any() or m[:, 0].any() or m[:, -1].any())

    if not touches_border(above):
        fg = above
    elif not touches_border(below):
        fg = below
    else:
        fg = above  # ambiguous: the brighter side

    labels = connected_components(Mask(bits=fg))
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    largest = int(np.argmax(sizes))  # ties -> smaller id = first encountered
    return fill_holes(Mask(bits=labels == largest))


def save_mask_csv(mask: Mask, path: str | Path) -> None:
    """Write the true pixels as (x, y) rows."""

    ys, xs = np.nonzero(mask.bits)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        for x, y in zip(xs, ys):
            writer.writerow([int(x), int(y)])
