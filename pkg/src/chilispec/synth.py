"""Deterministic synthetic hypercube generator with ground truth.

Scenes emulate a powder sample in a petri dish scanned by a VNIR line
camera: a disk of granular material against a dark box, a 10x10 white
calibration patch in the corner, halogen-shaped illumination whose blue
end is weak (which is why the first bands of real acquisitions get
discarded), and additive reflectance noise.  Every value is a pure
function of the scene spec and seed.

Randomness comes from a counter-based 64-bit generator so scenes are
bit-identical across platforms and parallel over pixels.  The generator
is the SplitMix64 finalizer applied to ``key + GOLDEN * counter``::

    GOLDEN = 0x9E3779B97F4A7C15
    z  = key + GOLDEN * counter            (mod 2**64)
    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9 (mod 2**64)
    z ^= z >> 27;  z *= 0x94D049BB133111EB (mod 2**64)
    z ^= z >> 31

where ``key`` is itself the finalizer applied to ``seed XOR stream-salt``.
Uniform doubles take the top 53 bits; normals are Box-Muller pairs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .annotate import Label, LabelMap, LabelSource
from .calibrate import ReferencePair
from .cube import Domain, HyperCube, Spectrum

__all__ = [
    "Material",
    "DENSITY_FACTOR",
    "EndmemberSpectrum",
    "SceneSpec",
    "default_wavelengths",
    "illumination",
    "variation_basis",
    "gen_endmembers",
    "area_fraction",
    "gen_ground_truth",
    "gen_scene",
    "reference_pair",
    "quantize_dn",
]


# ---------------------------------------------------------------------------
# counter-based RNG

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _stream_key(seed: int, salt: str) -> np.uint64:
    mask = 0xFFFFFFFFFFFFFFFF
    h = seed & mask
    for ch in salt.encode("ascii"):
        z = ((h ^ ch) * int(_GOLDEN)) & mask
        z = ((z ^ (z >> 30)) * int(_MIX1)) & mask
        z = ((z ^ (z >> 27)) * int(_MIX2)) & mask
        h = z ^ (z >> 31)
    return np.uint64(h)


def _uniform(key: np.uint64, counters: np.ndarray) -> np.ndarray:
    """Uniform doubles in [0, 1) at the given counters."""

    c = np.asarray(counters, dtype=np.uint64)
    bits = _mix64(key + _GOLDEN * c)
    return (bits >> np.uint64(11)).astype(np.float64) * (2.0**-53)


def _normal(key: np.uint64, counters: np.ndarray) -> np.ndarray:
    """Standard normals (Box-Muller) at the given counters."""

    c = np.asarray(counters, dtype=np.uint64)
    u1 = _uniform(key, c * np.uint64(2))
    u2 = _uniform(key, c * np.uint64(2) + np.uint64(1))
    u1 = (u1 * (1.0 - 2.0**-53)) + 2.0**-53  # keep log() finite
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def _clipped_normal(key: np.uint64, counters: np.ndarray, limit: float) -> np.ndarray:
    return np.clip(_normal(key, counters), -limit, limit)


# ---------------------------------------------------------------------------
# materials and endmembers

class Material(enum.Enum):
    RED_CHILI = "red_chili"
    RICE_BRAN = "rice_bran"
    WHEAT_BRAN = "wheat_bran"
    SAW_DUST = "saw_dust"


_MATERIAL_ORDER = [
    Material.RED_CHILI,
    Material.RICE_BRAN,
    Material.WHEAT_BRAN,
    Material.SAW_DUST,
]

# bulk-volume factors: grams of adulterant occupy 1/factor the volume of
# the same weight of chili, so light materials cover more area per gram
DENSITY_FACTOR = {
    Material.RED_CHILI: 1.0,
    Material.RICE_BRAN: 0.8,
    Material.WHEAT_BRAN: 0.75,
    Material.SAW_DUST: 0.5,
}

N_BANDS = 224
WAVELENGTH_MIN_NM = 400.0
WAVELENGTH_MAX_NM = 1000.0

BACKGROUND_REFLECTANCE = 0.02
WHITE_PATCH_REFLECTANCE = 1.0
WHITE_PATCH_ORIGIN = 2
WHITE_PATCH_SIZE = 10
ROI_RADIUS_FRACTION = 0.38
MIN_SCENE_SIDE = 50  # smaller frames cannot hold the ROI disk plus the patch

DARK_DN = 500.0
FULL_SCALE_DN = 40000.0

# sample-to-sample (between-scene) and pixel-to-pixel (within-scene) spread
# of the two latent composition factors, in score units of the variation basis
SCENE_LATENT_SIGMA = 1.2
PIXEL_LATENT_SIGMA = 0.15
SCATTER_SIGMA = 0.05  # multiplicative scatter of the powder surface
OFFSET_SIGMA = 0.01   # additive baseline scatter

GRAIN_JITTER = 0.35
BLEND_MARGIN_PX = 0.4

# where each adulterant's spectrum should land in the composition plane
# after scatter correction against the chili mean, in units of the
# variation basis; directions span more than 180 degrees so no single
# half-space (and no odd polynomial) can reject all three at once
_SCORE_TARGET = {
    Material.RICE_BRAN: (4.8, 0.0),      # ~0 degrees
    Material.WHEAT_BRAN: (-3.1, -3.1),   # ~225 degrees
    Material.SAW_DUST: (-0.9, 4.6),      # ~101 degrees
}


@dataclass
class EndmemberSpectrum:
    """Pure-material reflectance over the working wavelength axis."""

    material: Material
    reflectance: Spectrum


@dataclass(frozen=True)
class SceneSpec:
    """Geometry, composition and noise of one synthetic sample scene."""

    width: int = 128
    height: int = 128
    adulterant: Material = Material.SAW_DUST
    fraction: float = 0.0
    grain_px: float = 6.0
    noise_sigma: float = 0.004
    seed: int = 0
    material: Material = Material.RED_CHILI  # base powder of the sample

    def __post_init__(self) -> None:
        if min(self.width, self.height) < MIN_SCENE_SIDE:
            raise ValueError(
                f"scene must be at least {MIN_SCENE_SIDE} px on a side to hold "
                f"the ROI disk and calibration patch"
            )
        steps = self.fraction * 50.0
        if not (0.0 <= self.fraction <= 0.30) or abs(steps - round(steps)) > 1e-9:
            raise ValueError(
                f"fraction must lie on the grid 0.00, 0.02, ..., 0.30; got {self.fraction}"
            )
        if self.grain_px < 1:
            raise ValueError(f"grain_px must be >= 1, got {self.grain_px}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.adulterant is Material.RED_CHILI:
            raise ValueError("the adulterant cannot be red chili")


def default_wavelengths() -> np.ndarray:
    return np.linspace(WAVELENGTH_MIN_NM, WAVELENGTH_MAX_NM, N_BANDS)


def illumination(wavelengths: np.ndarray) -> np.ndarray:
    """Halogen-shaped relative intensity: 0.1 at 400 nm rising to 1.0 at 700 nm."""

    w = np.asarray(wavelengths, dtype=np.float64)
    return np.clip(0.1 + 0.9 * (w - 400.0) / 300.0, 0.1, 1.0)


def _bump(w: np.ndarray, center: float, sigma: float) -> np.ndarray:
    return np.exp(-0.5 * ((w - center) / sigma) ** 2)


def variation_basis(wavelengths: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal composition-plane basis: two NIR bumps, zero below 620 nm.

    The bumps are orthogonalized (within their NIR support) against the
    constant vector and the chili base curve, so a least-squares affine
    fit against the chili mean is blind to them: scatter correction then
    passes composition variation through untouched, and the 450-550 nm
    contrast that drives annotation stays exactly as constructed.
    """

    w = np.asarray(wavelengths, dtype=np.float64)
    support = w >= 620.0
    basis = []
    anchors = [
        np.where(support, 1.0, 0.0),
        np.where(support, _base_curve(Material.RED_CHILI, w), 0.0),
    ]
    for center in (720.0, 920.0):
        g = np.where(support, _bump(w, center, 90.0), 0.0)
        for a in anchors + basis:
            g = g - (g @ a) / (a @ a) * a
        basis.append(g / np.linalg.norm(g))
    return basis[0], basis[1]


def _base_curve(material: Material, w: np.ndarray) -> np.ndarray:
    if material is Material.RED_CHILI:
        return 0.08 + 0.50 * _bump(w, 850.0, 140.0) + 0.15 * _bump(w, 650.0, 60.0)
    if material is Material.RICE_BRAN:
        return 0.32 + 0.22 * _bump(w, 760.0, 240.0)
    if material is Material.WHEAT_BRAN:
        return 0.30 + 0.28 * _bump(w, 790.0, 200.0)
    return 0.26 + 0.22 * _bump(w, 820.0, 230.0)  # saw dust


def gen_endmembers(
    seed: int, wavelengths: np.ndarray | None = None
) -> dict[Material, EndmemberSpectrum]:
    """Four smooth reflectance curves satisfying the material constraints.

    Chili is the darkest over 450-550 nm by a wide margin and rises past
    600 nm.  Each adulterant carries a composition-plane displacement
    solved so that, after an affine fit against the chili curve (what
    scatter correction does), its spectrum projects onto the variation
    basis at the fixed target of ``_SCORE_TARGET``.  Amplitudes get a
    +-1% seeded jitter, so spectra are deterministic per seed while the
    constraints hold for every seed.
    """

    w = default_wavelengths() if wavelengths is None else np.asarray(wavelengths, float)
    g1, g2 = variation_basis(w)
    chili = _base_curve(Material.RED_CHILI, w)
    chili_proj = np.array([chili @ g1, chili @ g2])
    chili_c = chili - chili.mean()
    var_chili = float(chili_c @ chili_c)

    key = _stream_key(seed, "endmember-jitter")
    out: dict[Material, EndmemberSpectrum] = {}
    for mi, material in enumerate(_MATERIAL_ORDER):
        jitter = 1.0 + 0.01 * (2.0 * _uniform(key, np.array([mi])) - 1.0)[0]
        base = _base_curve(material, w) * jitter
        refl = base
        if material is not Material.RED_CHILI:
            # affine fit of the base curve against chili: s ~ a + b*chili
            b = float((base - base.mean()) @ chili_c) / var_chili
            a = float(base.mean()) - b * chili.mean()
            corrected = (base - a) / b
            resid = np.array([corrected @ g1, corrected @ g2]) - chili_proj
            p, q = b * (np.asarray(_SCORE_TARGET[material]) - resid)
            refl = base + p * g1 + q * g2
        if refl.min() < 0.0 or refl.max() > 1.2:
            raise ValueError(
                f"{material.value} endmember out of [0, 1.2]: "
                f"[{refl.min():.3f}, {refl.max():.3f}]"
            )
        out[material] = EndmemberSpectrum(
            material=material, reflectance=Spectrum(values=refl, wavelengths=w)
        )
    return out


def area_fraction(spec: SceneSpec) -> float:
    """Weight fraction converted to expected area fraction via bulk volume."""

    f = spec.fraction
    if f == 0.0:
        return 0.0
    va = f / DENSITY_FACTOR[spec.adulterant]
    vb = (1.0 - f) / DENSITY_FACTOR[spec.material]
    return va / (va + vb)


# ---------------------------------------------------------------------------
# scene assembly

def _grain_fields(spec: SceneSpec) -> dict[str, np.ndarray]:
    """ROI mask, nearest / second-nearest grain materials and the blend band.

    Grains are the Voronoi cells of a jittered grid of centers; a pixel
    sits in the blend band when its two nearest centers carry different
    materials and the distance gap is under ``BLEND_MARGIN_PX``.
    """

    h_px, w_px, g = spec.height, spec.width, float(spec.grain_px)
    ncx = int(np.ceil(w_px / g)) + 2
    ncy = int(np.ceil(h_px / g)) + 2

    cell_counters = np.arange(ncx * ncy, dtype=np.uint64)
    jit_key = _stream_key(spec.seed, "grain-jitter")
    jx = (_uniform(jit_key, cell_counters * np.uint64(2)) - 0.5) * 2 * GRAIN_JITTER
    jy = (_uniform(jit_key, cell_counters * np.uint64(2) + np.uint64(1)) - 0.5) * 2 * GRAIN_JITTER
    cj, ci = np.meshgrid(np.arange(ncx) - 1, np.arange(ncy) - 1)
    centers_x = (cj + 0.5 + jx.reshape(ncy, ncx)) * g
    centers_y = (ci + 0.5 + jy.reshape(ncy, ncx)) * g

    mat_key = _stream_key(spec.seed, "grain-material")
    p_adult = area_fraction(spec)
    is_adult = _uniform(mat_key, cell_counters).reshape(ncy, ncx) < p_adult

    px = np.arange(w_px) + 0.5
    py = np.arange(h_px) + 0.5
    pcx, pcy = np.meshgrid(px, py)
    base_cj = np.clip((pcx // g).astype(int), 0, ncx - 3)
    base_ci = np.clip((pcy // g).astype(int), 0, ncy - 3)

    d2_stack = np.empty((9, h_px, w_px))
    adult_stack = np.empty((9, h_px, w_px), dtype=bool)
    for idx, (di, dj) in enumerate(
        [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)]
    ):
        ci_n = base_ci + di + 1  # +1: padded grid offset
        cj_n = base_cj + dj + 1
        d2_stack[idx] = (pcx - centers_x[ci_n, cj_n]) ** 2 + (
            pcy - centers_y[ci_n, cj_n]
        ) ** 2
        adult_stack[idx] = is_adult[ci_n, cj_n]

    order = np.argsort(d2_stack, axis=0, kind="stable")
    take = lambda arr, k: np.take_along_axis(arr, order[k][None], axis=0)[0]
    d1 = np.sqrt(take(d2_stack, 0))
    d2 = np.sqrt(take(d2_stack, 1))
    adult1 = take(adult_stack, 0)
    adult2 = take(adult_stack, 1)

    blend = (adult1 != adult2) & ((d2 - d1) < BLEND_MARGIN_PX)

    cx, cy = (w_px - 1) / 2.0, (h_px - 1) / 2.0
    radius = ROI_RADIUS_FRACTION * min(w_px, h_px)
    xs, ys = np.meshgrid(np.arange(w_px), np.arange(h_px))
    roi = (xs - cx) ** 2 + (ys - cy) ** 2 <= radius**2

    patch = np.zeros((h_px, w_px), dtype=bool)
    lo, hi = WHITE_PATCH_ORIGIN, WHITE_PATCH_ORIGIN + WHITE_PATCH_SIZE
    patch[lo:hi, lo:hi] = True
    if (patch & roi).any():
        raise ValueError("ROI disk overlaps the calibration patch; frame too small")

    return {
        "roi": roi,
        "patch": patch,
        "adult1": adult1,
        "adult2": adult2,
        "blend": blend,
    }


def _labels_from_fields(spec: SceneSpec, fields: dict[str, np.ndarray]) -> LabelMap:
    labels = np.full((spec.height, spec.width), int(Label.BACKGROUND), dtype=np.uint8)
    roi = fields["roi"]
    base_is_chili = spec.material is Material.RED_CHILI
    adult1 = fields["adult1"]
    chili_px = roi & ~adult1 if base_is_chili else np.zeros_like(roi)
    labels[roi] = int(Label.ADULTERANT)
    labels[chili_px] = int(Label.CHILI)
    return LabelMap(labels=labels, source=LabelSource.GROUND_TRUTH)


def gen_ground_truth(spec: SceneSpec) -> LabelMap:
    """Ground-truth labels only (no spectra); cheap even for large scenes."""

    return _labels_from_fields(spec, _grain_fields(spec))


def gen_scene(
    spec: SceneSpec, endmembers: dict[Material, EndmemberSpectrum]
) -> tuple[HyperCube, LabelMap]:
    """Emit the radiance-DN cube and ground-truth labels for one scene.

    DN values are float (quantize with :func:`quantize_dn` before saving);
    calibrating the emitted cube with :func:`reference_pair` recovers the
    underlying reflectance field to within the additive noise.
    """

    wl = endmembers[Material.RED_CHILI].reflectance.wavelengths
    nb = wl.size
    g1, g2 = variation_basis(wl)
    fields = _grain_fields(spec)
    roi, patch = fields["roi"], fields["patch"]
    h_px, w_px = spec.height, spec.width

    refl = np.full((nb, h_px, w_px), BACKGROUND_REFLECTANCE)
    refl[:, patch] = WHITE_PATCH_REFLECTANCE

    base = endmembers[spec.material].reflectance.values
    adult = endmembers[spec.adulterant].reflectance.values
    adult1 = fields["adult1"][roi]
    adult2 = fields["adult2"][roi]
    blend = fields["blend"][roi]
    e = np.where(adult1[:, None], adult[None, :], base[None, :])
    e_second = np.where(adult2[:, None], adult[None, :], base[None, :])
    e = np.where(blend[:, None], 0.5 * (e + e_second), e)

    # sample-to-sample and grain-to-grain composition latents belong to the
    # chili fraction of each pixel; adulterants stay anchored at their
    # score targets regardless of which chili batch they contaminate
    base_is_chili = spec.material is Material.RED_CHILI
    chili1 = (~adult1) & base_is_chili
    chili2 = (~adult2) & base_is_chili
    w_chili = np.where(
        blend, 0.5 * chili1 + 0.5 * chili2, chili1.astype(np.float64)
    )

    mean_key = _stream_key(spec.seed, "scene-mean")
    m_u, m_v = SCENE_LATENT_SIGMA * _clipped_normal(mean_key, np.arange(2), 2.0)

    pix = (np.nonzero(roi.ravel())[0]).astype(np.uint64)
    w_u = PIXEL_LATENT_SIGMA * _clipped_normal(_stream_key(spec.seed, "latent-u"), pix, 3.0)
    w_v = PIXEL_LATENT_SIGMA * _clipped_normal(_stream_key(spec.seed, "latent-v"), pix, 3.0)
    a = 1.0 + SCATTER_SIGMA * _clipped_normal(_stream_key(spec.seed, "scatter-gain"), pix, 3.0)
    b = OFFSET_SIGMA * _clipped_normal(_stream_key(spec.seed, "scatter-offset"), pix, 3.0)

    u = w_chili * (m_u + w_u)
    v = w_chili * (m_v + w_v)
    spectra = e + u[:, None] * g1 + v[:, None] * g2
    spectra = a[:, None] * spectra + b[:, None]
    refl[:, roi] = spectra.T

    if spec.noise_sigma > 0:
        noise_key = _stream_key(spec.seed, "sensor-noise")
        counters = np.arange(nb * h_px * w_px, dtype=np.uint64)
        noise = _normal(noise_key, counters).reshape(nb, h_px, w_px)
        refl = refl + spec.noise_sigma * noise

    dn = DARK_DN + FULL_SCALE_DN * illumination(wl)[:, None, None] * refl
    cube = HyperCube(values=dn, wavelengths=wl, domain=Domain.RADIANCE_DN)
    return cube, _labels_from_fields(spec, fields)


def reference_pair(wavelengths: np.ndarray) -> ReferencePair:
    """The generator's exact white/dark reference spectra in DN units."""

    wl = np.asarray(wavelengths, dtype=np.float64)
    white = DARK_DN + FULL_SCALE_DN * illumination(wl) * WHITE_PATCH_REFLECTANCE
    dark = np.full_like(wl, DARK_DN)
    return ReferencePair(
        white=Spectrum(values=white, wavelengths=wl),
        dark=Spectrum(values=dark, wavelengths=wl),
    )


def quantize_dn(cube: HyperCube) -> HyperCube:
    """Round DN to integers and clip to the uint16 range for disk storage."""

    if cube.domain is not Domain.RADIANCE_DN:
        raise ValueError("quantize_dn applies to radiance-domain cubes")
    values = np.clip(np.round(cube.values), 0.0, 65535.0)
    return HyperCube(values=values, wavelengths=cube.wavelengths, domain=cube.domain)
