"""End-to-end purity detector: preprocessing + PCA + one-class SVM bundle.

Training pools ROI pixel spectra from one or more calibrated pure-chili
cubes, smooths them, fits the scatter-correction reference and the PCA
on the corrected spectra, and trains the one-class model on the leading
scores.  Scoring applies the model's own training preprocessing to
everything it classifies.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import ocsvm, pca
from .cube import HyperCube
from .preprocess import MscReference, SavGolSpec, msc_apply, msc_fit, savgol
from .segment import Mask

__all__ = ["ComponentsPolicy", "PolicyKind", "Detector", "subsample_rows"]


class PolicyKind(enum.Enum):
    FIXED = "fixed"
    BROKEN_STICK = "broken_stick"
    MAX2_BROKEN_STICK = "max2_broken_stick"


@dataclass(frozen=True)
class ComponentsPolicy:
    """How many principal components feed the classifier."""

    kind: PolicyKind = PolicyKind.MAX2_BROKEN_STICK
    fixed: int | None = None

    def __post_init__(self) -> None:
        if self.kind is PolicyKind.FIXED and (self.fixed is None or self.fixed < 1):
            raise ValueError("fixed policy needs a component count >= 1")

    def resolve(self, model: pca.PcaModel) -> int:
        if self.kind is PolicyKind.FIXED:
            if self.fixed > model.n_components:
                raise ValueError(
                    f"requested {self.fixed} components, model holds {model.n_components}"
                )
            return int(self.fixed)
        count = pca.broken_stick_count(model.eigenvalues)
        if self.kind is PolicyKind.BROKEN_STICK:
            return count
        return min(max(2, count), model.n_components)


def subsample_rows(n_rows: int, limit: int, seed: int) -> np.ndarray:
    """Deterministic subsample of row indices (sorted), at most ``limit``."""

    if n_rows <= limit:
        return np.arange(n_rows)
    # keyed decimation: rank rows by a counter-based hash, keep the smallest
    from .synth import _stream_key, _uniform

    u = _uniform(_stream_key(seed, "train-subsample"), np.arange(n_rows, dtype=np.uint64))
    keep = np.argsort(u, kind="stable")[:limit]
    return np.sort(keep)


@dataclass
class Detector:
    """Trained purity model; immutable once fitted."""

    savgol_spec: SavGolSpec
    msc_ref: MscReference
    pca_model: pca.PcaModel
    n_components: int
    svm: ocsvm.OcsvmModel
    wavelengths: np.ndarray

    @classmethod
    def fit(
        cls,
        spectra: np.ndarray,
        wavelengths: np.ndarray,
        nu: float,
        kernel: ocsvm.KernelSpec,
        savgol_spec: SavGolSpec = SavGolSpec(),
        policy: ComponentsPolicy = ComponentsPolicy(),
        tol: float = 1e-6,
    ) -> "Detector":
        smooth = savgol(spectra, savgol_spec)
        ref = msc_fit(smooth)
        corrected = msc_apply(smooth, ref)
        pca_model = pca.fit_pca(corrected)
        m = policy.resolve(pca_model)
        scores = pca.project(pca_model, corrected, m)
        svm = ocsvm.train(scores, nu, kernel, tol=tol)
        return cls(
            savgol_spec=savgol_spec,
            msc_ref=ref,
            pca_model=pca_model,
            n_components=m,
            svm=svm,
            wavelengths=np.asarray(wavelengths, dtype=np.float64),
        )

    def preprocess(self, spectra: np.ndarray) -> np.ndarray:
        return msc_apply(savgol(spectra, self.savgol_spec), self.msc_ref)

    def scores(self, spectra: np.ndarray) -> np.ndarray:
        return pca.project(self.pca_model, self.preprocess(spectra), self.n_components)

    def decision_values(self, spectra: np.ndarray) -> np.ndarray:
        return ocsvm.decide(self.svm, self.scores(spectra))

    def score_cube(self, cube: HyperCube, roi: Mask) -> np.ndarray:
        """Decision values for every ROI pixel, in raster order of the mask."""

        if cube.bands != self.wavelengths.size or not np.allclose(
            cube.wavelengths, self.wavelengths
        ):
            raise ValueError(
                "cube wavelength axis does not match the model; calibrate "
                "(band-slice) the cube the same way as the training data"
            )
        spectra = cube.values[:, roi.bits].T
        return self.decision_values(spectra)

    # -- persistence --------------------------------------------------------

    def save(self, directory: str | Path) -> None:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        pca.save_pca(self.pca_model, d, wavelengths=self.wavelengths)
        ocsvm.save_model(self.svm, d)
        with open(d / "msc_reference.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["wavelength_nm", "value"])
            for w, v in zip(self.wavelengths, self.msc_ref.mean_spectrum):
                writer.writerow([repr(float(w)), repr(float(v))])
        with open(d / "pipeline.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["key", "value"])
            writer.writerow(["savgol_window", self.savgol_spec.window])
            writer.writerow(["savgol_polyorder", self.savgol_spec.polyorder])
            writer.writerow(["n_components", self.n_components])

    @classmethod
    def load(cls, directory: str | Path) -> "Detector":
        d = Path(directory)
        pca_model, wl = pca.load_pca(d)
        svm = ocsvm.load_model(d)
        with open(d / "msc_reference.csv", newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        ref = MscReference(mean_spectrum=np.array([float(r[1]) for r in rows]))
        with open(d / "pipeline.csv", newline="") as fh:
            meta = {k: v for k, v in list(csv.reader(fh))[1:]}
        return cls(
            savgol_spec=SavGolSpec(
                window=int(meta["savgol_window"]),
                polyorder=int(meta["savgol_polyorder"]),
            ),
            msc_ref=ref,
            pca_model=pca_model,
            n_components=int(meta["n_components"]),
            svm=svm,
            wavelengths=wl,
        )
