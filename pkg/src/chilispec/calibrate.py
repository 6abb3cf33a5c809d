"""Empirical line method: raw radiance DN to reflectance.

Per band, reflectance is the linear rescaling ``R = (Rr - B) / (W - B)``
where ``W`` is the white-target spectrum and ``B`` the closed-shutter
dark spectrum.  Output is intentionally not clamped: values above 1 or
below 0 carry information (specular highlights, noise, reference error)
and clamping would destroy the per-band linearity.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cube import Domain, HyperCube, Spectrum

__all__ = [
    "DegenerateReferenceError",
    "ReferencePair",
    "reference_from_region",
    "elm_reflectance",
    "load_reference_csv",
    "save_reference_csv",
]


class DegenerateReferenceError(ValueError):
    """White reference does not exceed the dark reference at some band."""


@dataclass
class ReferencePair:
    """White and dark reference spectra on a common wavelength axis."""

    white: Spectrum
    dark: Spectrum

    def __post_init__(self) -> None:
        if not np.array_equal(self.white.wavelengths, self.dark.wavelengths):
            raise ValueError("white and dark references must share a wavelength axis")
        bad = np.nonzero(self.white.values <= self.dark.values)[0]
        if bad.size:
            b = int(bad[0])
            raise DegenerateReferenceError(
                f"white <= dark at band {b} ({self.white.wavelengths[b]:g} nm): "
                f"W={self.white.values[b]:g}, B={self.dark.values[b]:g}"
            )


def reference_from_region(cube: HyperCube, mask: np.ndarray) -> Spectrum:
    """Per-band mean spectrum over the masked pixels."""

    m = np.asarray(mask, dtype=bool)
    if m.shape != (cube.height, cube.width):
        raise ValueError(
            f"mask shape {m.shape} does not match cube extent "
            f"({cube.height}, {cube.width})"
        )
    if not m.any():
        raise ValueError("reference region is empty")
    values = cube.values[:, m].mean(axis=1)
    return Spectrum(values=values, wavelengths=cube.wavelengths)


def elm_reflectance(raw: HyperCube, refs: ReferencePair) -> HyperCube:
    """Calibrate a radiance cube to reflectance via the empirical line method."""

    if raw.domain is not Domain.RADIANCE_DN:
        raise ValueError("elm_reflectance expects a radiance-domain cube")
    if not np.array_equal(refs.white.wavelengths, raw.wavelengths):
        raise ValueError("reference wavelength axis does not match the cube")
    w = refs.white.values
    b = refs.dark.values
    scale = w - b  # > 0 by ReferencePair invariant
    refl = (raw.values - b[:, None, None]) / scale[:, None, None]
    return HyperCube(values=refl, wavelengths=raw.wavelengths, domain=Domain.REFLECTANCE)


def load_reference_csv(path: str | Path) -> Spectrum:
    """Read a two-column (wavelength_nm, value) reference CSV."""

    wavelengths: list[float] = []
    values: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"empty reference CSV: {path}")
        for row in reader:
            if not row:
                continue
            wavelengths.append(float(row[0]))
            values.append(float(row[1]))
    if not wavelengths:
        raise ValueError(f"reference CSV holds no data rows: {path}")
    return Spectrum(values=np.array(values), wavelengths=np.array(wavelengths))


def save_reference_csv(spectrum: Spectrum, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["wavelength_nm", "value"])
        for w, v in zip(spectrum.wavelengths, spectrum.values):
            writer.writerow([repr(float(w)), repr(float(v))])
