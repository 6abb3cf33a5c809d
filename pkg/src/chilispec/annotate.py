"""Unsupervised pixel labeling of mixed samples.

Ground chili is nearly black around 450-550 nm, so in the 500 nm band of
a mixed sample the bright pixels belong to the adulterant.  Clustering
the ROI intensities at 500 nm with k=2 therefore separates chili from
adulterant without any labeled data: the low-intensity cluster is chili,
the high one adulterant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .cube import Domain, HyperCube, band_at
from .segment import Mask, _pooled_spread

__all__ = [
    "Label",
    "LabelSource",
    "LabelMap",
    "KmeansResult",
    "farthest_point_init",
    "kmeans",
    "annotate_mixture",
]

ANNOTATION_WAVELENGTH_NM = 500.0


class Label(enum.IntEnum):
    BACKGROUND = 0
    CHILI = 1
    ADULTERANT = 2


class LabelSource(enum.Enum):
    CLUSTERED = "clustered"
    GROUND_TRUTH = "ground_truth"


@dataclass
class LabelMap:
    """Per-pixel semantic labels with provenance."""

    labels: np.ndarray  # (height, width) of Label values
    source: LabelSource

    def __post_init__(self) -> None:
        lab = np.asarray(self.labels, dtype=np.uint8)
        if lab.ndim != 2:
            raise ValueError("label map must be 2-D (height, width)")
        if not np.isin(lab, [int(v) for v in Label]).all():
            raise ValueError("label map holds values outside the Label enum")
        self.labels = lab

    @property
    def height(self) -> int:
        return int(self.labels.shape[0])

    @property
    def width(self) -> int:
        return int(self.labels.shape[1])


@dataclass
class KmeansResult:
    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    iterations: int


def farthest_point_init(points: np.ndarray, k: int) -> np.ndarray:
    """Deterministic farthest-point seeding for 1-D k-means.

    The first centroid is the point farthest from the mean; each next one
    maximizes the distance to its nearest already-chosen centroid.  Ties
    break to the first index.
    """

    p = np.asarray(points, dtype=np.float64).ravel()
    if k < 1:
        raise ValueError("k must be >= 1")
    if np.unique(p).size < k:
        raise ValueError(f"need at least {k} distinct values, got {np.unique(p).size}")
    centroids = [p[int(np.argmax(np.abs(p - p.mean())))]]
    while len(centroids) < k:
        dist = np.min(np.abs(p[:, None] - np.array(centroids)[None, :]), axis=1)
        centroids.append(p[int(np.argmax(dist))])
    return np.array(centroids)


def kmeans(
    points: np.ndarray,
    k: int,
    max_iter: int = 300,
    tol: float = 1e-8,
) -> KmeansResult:
    """Lloyd iterations on scalars from farthest-point initialization.

    Raises if the within-cluster SSE ever increases between iterations
    (it cannot, up to float round-off).
    """

    p = np.asarray(points, dtype=np.float64).ravel()
    centroids = farthest_point_init(p, k)

    def assign(c: np.ndarray) -> np.ndarray:
        return np.argmin(np.abs(p[:, None] - c[None, :]), axis=1)

    def sse(c: np.ndarray, a: np.ndarray) -> float:
        return float(((p - c[a]) ** 2).sum())

    assignments = assign(centroids)
    inertia = sse(centroids, assignments)
    iterations = 0
    for _ in range(max_iter):
        new_centroids = centroids.copy()
        for j in range(k):
            sel = assignments == j
            if sel.any():
                new_centroids[j] = p[sel].mean()
        iterations += 1
        assignments = assign(new_centroids)
        new_inertia = sse(new_centroids, assignments)
        if new_inertia > inertia + 1e-12 * max(inertia, 1.0):
            raise RuntimeError(
                f"k-means inertia increased: {inertia} -> {new_inertia}"
            )
        moved = float(np.max(np.abs(new_centroids - centroids)))
        centroids, inertia = new_centroids, new_inertia
        if moved < tol:
            break
    return KmeansResult(
        centroids=centroids,
        assignments=assignments,
        inertia=inertia,
        iterations=iterations,
    )


def annotate_mixture(
    cube: HyperCube,
    roi: Mask,
    chili_reference: float | None = None,
) -> LabelMap:
    """Label ROI pixels chili/adulterant by 2-means on the 500 nm band.

    The lower-intensity cluster is chili, the higher adulterant; pixels
    outside the ROI are background.  A pure sample has no second mode, so
    when the two centroids are closer than max(5% of the ROI intensity
    range, 3.5x the pooled within-cluster spread) the whole ROI gets one
    label: chili by default, or - when ``chili_reference`` (expected
    chili intensity at 500 nm) is given - adulterant if the global
    centroid exceeds that reference by more than 0.075, half the minimum
    chili/adulterant contrast in the 450-550 nm range.
    """

    if cube.domain is not Domain.REFLECTANCE:
        raise ValueError("annotation expects a reflectance-domain cube")
    if (roi.height, roi.width) != (cube.height, cube.width):
        raise ValueError("ROI mask extent does not match the cube")
    if not roi.bits.any():
        raise ValueError("ROI is empty")

    band = band_at(cube, ANNOTATION_WAVELENGTH_NM)
    intensities = band.values[roi.bits]
    spread = float(intensities.max() - intensities.min())
    if spread == 0:
        raise ValueError("all ROI intensities equal at 500 nm; cannot cluster")

    result = kmeans(intensities, k=2, max_iter=300, tol=1e-6 * spread)
    order = np.argsort(result.centroids)
    low, high = result.centroids[order[0]], result.centroids[order[1]]

    sel0 = result.assignments == 0
    if sel0.all() or not sel0.any():
        within_std = float("inf")  # one cluster empty: definitionally unimodal
    else:
        within_std = _pooled_spread(intensities[sel0], intensities[~sel0])

    labels = np.full((cube.height, cube.width), int(Label.BACKGROUND), dtype=np.uint8)
    gap = float(high - low)
    if gap < max(0.05 * spread, 3.5 * within_std):
        # degenerate unimodal ROI: one class for the whole sample
        centroid = float(intensities.mean())
        if chili_reference is not None and centroid - chili_reference > 0.075:
            labels[roi.bits] = int(Label.ADULTERANT)
        else:
            labels[roi.bits] = int(Label.CHILI)
        return LabelMap(labels=labels, source=LabelSource.CLUSTERED)

    chili_cluster = int(order[0])
    roi_labels = np.where(
        result.assignments == chili_cluster, int(Label.CHILI), int(Label.ADULTERANT)
    )
    labels[roi.bits] = roi_labels
    return LabelMap(labels=labels, source=LabelSource.CLUSTERED)
