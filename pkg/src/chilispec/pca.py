"""Principal component analysis over pixel spectra, with broken-stick selection.

The covariance is the sample covariance (1/(n-1)) of the mean-centered
spectra; components are ordered by descending eigenvalue with a fixed
sign convention (the largest-magnitude loading entry of each component
is positive) so results are reproducible bit for bit.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "PcaModel",
    "fit_pca",
    "broken_stick_count",
    "project",
    "reconstruct",
    "save_pca",
    "load_pca",
]


@dataclass
class PcaModel:
    mean: np.ndarray          # (bands,)
    loadings: np.ndarray      # (n_components, bands), orthonormal rows
    eigenvalues: np.ndarray   # (n_components,), descending, >= 0
    explained_ratio: np.ndarray

    @property
    def n_components(self) -> int:
        return int(self.loadings.shape[0])

    @property
    def bands(self) -> int:
        return int(self.loadings.shape[1])


def fit_pca(spectra: np.ndarray) -> PcaModel:
    """Eigendecomposition of the spectra's covariance; keeps all components."""

    x = np.asarray(spectra, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("fit_pca expects a 2-D (n_spectra, bands) array")
    if x.shape[0] < 2:
        raise ValueError(f"fit_pca needs at least 2 spectra, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise ValueError("fit_pca requires finite values")

    mean = x.mean(axis=0)
    xc = x - mean
    cov = (xc.T @ xc) / (x.shape[0] - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.maximum(eigvals[order], 0.0)
    loadings = eigvecs[:, order].T

    # deterministic sign: largest-|entry| of each component positive
    idx = np.argmax(np.abs(loadings), axis=1)
    signs = np.sign(loadings[np.arange(loadings.shape[0]), idx])
    signs[signs == 0] = 1.0
    loadings = loadings * signs[:, None]

    trace = float(eigvals.sum())
    ratio = eigvals / trace if trace > 0 else np.zeros_like(eigvals)
    return PcaModel(
        mean=mean, loadings=loadings, eigenvalues=eigvals, explained_ratio=ratio
    )


def broken_stick_count(eigenvalues: np.ndarray) -> int:
    """Number of leading components whose variance ratio beats the broken stick.

    With p eigenvalues the expected length of the k-th longest piece of a
    randomly broken unit stick is ``b_k = (1/p) * sum_{i=k..p} 1/i``; the
    count is the longest prefix with ratio > b_k, and at least 1.
    """

    ev = np.asarray(eigenvalues, dtype=np.float64)
    if ev.size < 1:
        raise ValueError("need at least one eigenvalue")
    total = float(ev.sum())
    if total <= 0:
        raise ValueError("broken-stick selection undefined for all-zero eigenvalues")
    p = ev.size
    ratios = ev / total
    inv = 1.0 / np.arange(1, p + 1)
    sticks = np.cumsum(inv[::-1])[::-1] / p  # b_k for k = 1..p
    count = 0
    for k in range(p):
        if ratios[k] > sticks[k]:
            count += 1
        else:
            break
    return max(count, 1)


def project(model: PcaModel, spectra: np.ndarray, m: int) -> np.ndarray:
    """Scores of the first ``m`` components: (spectra - mean) @ loadings[:m].T."""

    x = np.asarray(spectra, dtype=np.float64)
    if not 1 <= m <= model.n_components:
        raise ValueError(f"m must be in [1, {model.n_components}], got {m}")
    if x.shape[-1] != model.bands:
        raise ValueError(
            f"spectra have {x.shape[-1]} bands, model expects {model.bands}"
        )
    return (x - model.mean) @ model.loadings[:m].T


def reconstruct(model: PcaModel, scores: np.ndarray) -> np.ndarray:
    """Inverse of :func:`project` for the number of score columns given."""

    s = np.asarray(scores, dtype=np.float64)
    m = s.shape[-1]
    if m > model.n_components:
        raise ValueError(f"scores have {m} columns, model holds {model.n_components}")
    return s @ model.loadings[:m] + model.mean


def save_pca(model: PcaModel, directory: str | Path, wavelengths: np.ndarray | None = None) -> None:
    """Persist the model as a CSV bundle: mean.csv, loadings.csv, eigenvalues.csv."""

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    wl = (
        np.asarray(wavelengths, dtype=np.float64)
        if wavelengths is not None
        else np.arange(model.bands, dtype=np.float64)
    )
    with open(d / "mean.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["wavelength_nm", "value"])
        for w, v in zip(wl, model.mean):
            writer.writerow([repr(float(w)), repr(float(v))])
    with open(d / "loadings.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["component"] + [f"b{i}" for i in range(model.bands)])
        for i, row in enumerate(model.loadings):
            writer.writerow([i] + [repr(float(v)) for v in row])
    with open(d / "eigenvalues.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["eigenvalue", "explained_ratio"])
        for ev, er in zip(model.eigenvalues, model.explained_ratio):
            writer.writerow([repr(float(ev)), repr(float(er))])


def load_pca(directory: str | Path) -> tuple[PcaModel, np.ndarray]:
    """Load a CSV bundle; returns the model and the stored wavelength axis."""

    d = Path(directory)
    with open(d / "mean.csv", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    wl = np.array([float(r[0]) for r in rows])
    mean = np.array([float(r[1]) for r in rows])
    with open(d / "loadings.csv", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    loadings = np.array([[float(v) for v in r[1:]] for r in rows])
    with open(d / "eigenvalues.csv", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    eigenvalues = np.array([float(r[0]) for r in rows])
    ratio = np.array([float(r[1]) for r in rows])
    model = PcaModel(
        mean=mean, loadings=loadings, eigenvalues=eigenvalues, explained_ratio=ratio
    )
    return model, wl
