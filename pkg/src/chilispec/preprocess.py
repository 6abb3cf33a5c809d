"""Spectral pre-treatments: Savitzky-Golay smoothing, SNV and MSC.

All functions accept a single spectrum (1-D) or a stack of spectra with
bands on the last axis, and return arrays of the same shape.  The usual
pairing in this pipeline is SG first, then one scatter correction:
MSC for pure samples (against the training mean), SNV for adulterated
ones so chili and adulterant spectra are standardized independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import savgol_filter

__all__ = ["SavGolSpec", "savgol", "snv", "MscReference", "msc_fit", "msc_apply"]


@dataclass(frozen=True)
class SavGolSpec:
    """Window length (odd) and polynomial order of the SG filter."""

    window: int = 11
    polyorder: int = 3

    def __post_init__(self) -> None:
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and positive, got {self.window}")
        if not 0 <= self.polyorder < self.window:
            raise ValueError(
                f"polyorder must satisfy 0 <= polyorder < window, got {self.polyorder}"
            )


def savgol(values: np.ndarray, spec: SavGolSpec = SavGolSpec()) -> np.ndarray:
    """Least-squares polynomial smoothing along the band axis.

    Edges are handled by fitting the same-degree polynomial to the
    first/last window and evaluating it at the edge positions, which
    preserves exact reproduction of polynomials up to ``polyorder``
    across the whole spectrum.
    """

    v = np.asarray(values, dtype=np.float64)
    if v.shape[-1] < spec.window:
        raise ValueError(
            f"spectrum length {v.shape[-1]} shorter than SG window {spec.window}"
        )
    return savgol_filter(v, spec.window, spec.polyorder, axis=-1, mode="interp")


def snv(values: np.ndarray) -> np.ndarray:
    """Standard normal variate: per spectrum, subtract mean, divide by sample std."""

    v = np.asarray(values, dtype=np.float64)
    if v.shape[-1] < 2:
        raise ValueError("SNV needs at least 2 bands")
    mean = v.mean(axis=-1, keepdims=True)
    std = v.std(axis=-1, ddof=1, keepdims=True)
    if np.any(std == 0):
        raise ValueError("SNV undefined for a constant spectrum (zero variance)")
    return (v - mean) / std


@dataclass
class MscReference:
    """Mean spectrum of a training set, the regression target of MSC."""

    mean_spectrum: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.mean_spectrum, dtype=np.float64)
        if m.ndim != 1 or m.size < 2:
            raise ValueError("MSC reference must be a 1-D spectrum with >= 2 bands")
        if not np.all(np.isfinite(m)):
            raise ValueError("MSC reference must be finite")
        if m.std() == 0:
            raise ValueError("MSC reference must have nonzero variance across bands")
        self.mean_spectrum = m


def msc_fit(spectra: np.ndarray) -> MscReference:
    """Build the MSC reference as the per-band arithmetic mean."""

    s = np.asarray(spectra, dtype=np.float64)
    if s.ndim != 2:
        raise ValueError("msc_fit expects a 2-D (n_spectra, bands) array")
    if s.shape[0] < 2:
        raise ValueError(f"msc_fit needs at least 2 spectra, got {s.shape[0]}")
    return MscReference(mean_spectrum=s.mean(axis=0))


def msc_apply(values: np.ndarray, ref: MscReference) -> np.ndarray:
    """Invert the per-spectrum affine distortion fitted against the reference.

    Each spectrum ``s`` is regressed as ``s ~ a + b * ref`` by ordinary
    least squares over bands; the corrected spectrum is ``(s - a) / b``.
    """

    v = np.asarray(values, dtype=np.float64)
    r = ref.mean_spectrum
    if v.shape[-1] != r.size:
        raise ValueError(
            f"spectrum length {v.shape[-1]} does not match reference length {r.size}"
        )
    rc = r - r.mean()
    denom = float(rc @ rc)
    slope = (v - v.mean(axis=-1, keepdims=True)) @ rc / denom
    if np.any(np.abs(slope) < 1e-12):
        raise ValueError(
            "MSC regression slope ~ 0: spectrum uncorrelated with the reference"
        )
    intercept = v.mean(axis=-1) - slope * r.mean()
    return (v - intercept[..., None]) / slope[..., None]
