"""Hyperspectral screening of ground red chili for adulterants.

Pipeline: reflectance calibration (empirical line method), ROI
segmentation, Savitzky-Golay / SNV / MSC spectral pre-treatments,
unsupervised pixel annotation by 2-means clustering of the 500 nm band,
PCA reduction with broken-stick component selection, and a one-class
nu-SVM trained on pure chili that flags any foreign material.
"""

from .annotate import Label, LabelMap, LabelSource, annotate_mixture, kmeans
from .calibrate import ReferencePair, elm_reflectance, reference_from_region
from .cube import (
    BandImage,
    Domain,
    HyperCube,
    Spectrum,
    band_at,
    load_cube,
    pixel_spectrum,
    save_cube,
    slice_bands,
)
from .detector import ComponentsPolicy, Detector, PolicyKind
from .ocsvm import KernelKind, KernelSpec, OcsvmModel, accuracy, decide, grid_search, train
from .pca import PcaModel, broken_stick_count, fit_pca, project
from .preprocess import MscReference, SavGolSpec, msc_apply, msc_fit, savgol, snv
from .segment import Mask, connected_components, extract_roi, false_color, otsu_threshold
from .synth import (
    EndmemberSpectrum,
    Material,
    SceneSpec,
    gen_endmembers,
    gen_scene,
    quantize_dn,
    reference_pair,
)

__version__ = "0.1.0"
