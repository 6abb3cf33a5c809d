"""Hyperspectral data cube: in-memory model and ENVI-style file pair I/O.

A cube is a stack of narrow-band images with axes ``(band, y, x)``,
band-sequential (BSQ) in memory and on disk.  The on-disk format is a
two-file pair: a plain-text ``<name>.hdr`` describing the geometry and
wavelength axis, and a raw little-endian ``<name>.raw`` payload
(row-major within each band).  Reflectance cubes are stored as float32
(header ``data type = 4``), raw radiance digital numbers as uint16
(``data type = 12``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Domain",
    "Spectrum",
    "BandImage",
    "HyperCube",
    "load_cube",
    "save_cube",
    "band_at",
    "slice_bands",
    "pixel_spectrum",
]


class Domain(enum.Enum):
    """Radiometric domain of the cube values."""

    RADIANCE_DN = "radiance_dn"
    REFLECTANCE = "reflectance"


_DTYPE_CODE = {Domain.REFLECTANCE: 4, Domain.RADIANCE_DN: 12}
_DOMAIN_BY_CODE = {4: Domain.REFLECTANCE, 12: Domain.RADIANCE_DN}
_NUMPY_DTYPE = {4: "<f4", 12: "<u2"}


def _check_wavelengths(wavelengths: np.ndarray) -> np.ndarray:
    w = np.asarray(wavelengths, dtype=np.float64)
    if w.ndim != 1 or w.size < 1:
        raise ValueError("wavelength axis must be a non-empty 1-D array")
    if not np.all(np.isfinite(w)):
        raise ValueError("wavelength axis must be finite")
    if w.size > 1 and not np.all(np.diff(w) > 0):
        raise ValueError("wavelength axis must be strictly increasing")
    return w


@dataclass
class Spectrum:
    """Per-band values of a single pixel (or reference target)."""

    values: np.ndarray
    wavelengths: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        self.wavelengths = _check_wavelengths(self.wavelengths)
        if self.values.shape != self.wavelengths.shape:
            raise ValueError(
                f"values length {self.values.shape} does not match "
                f"wavelength axis {self.wavelengths.shape}"
            )

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass
class BandImage:
    """One spectral band as a 2-D image."""

    values: np.ndarray  # (height, width)
    wavelength: float

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("band image values must be 2-D (height, width)")
        self.wavelength = float(self.wavelength)

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        return int(self.values.shape[1])


@dataclass
class HyperCube:
    """3-D spectral image with a shared wavelength axis.

    ``values`` has shape ``(bands, height, width)``.  Cubes are treated as
    immutable after construction (arrays are marked read-only); every
    operation in this package builds a new cube instead of mutating.
    """

    values: np.ndarray
    wavelengths: np.ndarray
    domain: Domain

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 3:
            raise ValueError("cube values must be 3-D (bands, height, width)")
        if min(v.shape) < 1:
            raise ValueError("cube dimensions must all be >= 1")
        w = _check_wavelengths(self.wavelengths)
        if w.size != v.shape[0]:
            raise ValueError(
                f"wavelength axis length {w.size} does not match band count {v.shape[0]}"
            )
        if not isinstance(self.domain, Domain):
            raise TypeError("domain must be a Domain enum value")
        v.setflags(write=False)
        w.setflags(write=False)
        self.values = v
        self.wavelengths = w

    @property
    def bands(self) -> int:
        return int(self.values.shape[0])

    @property
    def height(self) -> int:
        return int(self.values.shape[1])

    @property
    def width(self) -> int:
        return int(self.values.shape[2])


def _pair_paths(path: str | Path) -> tuple[Path, Path]:
    """Resolve ``<name>``, ``<name>.hdr`` or ``<name>.raw`` to the file pair."""

    p = Path(path)
    if p.suffix in (".hdr", ".raw"):
        p = p.with_suffix("")
    return p.with_suffix(".hdr"), p.with_suffix(".raw")


def save_cube(cube: HyperCube, path: str | Path) -> None:
    """Write the header/payload pair for ``cube`` at ``path``.

    Radiance cubes must hold integral digital numbers in [0, 65535];
    reflectance values are cast to float32.
    """

    hdr_path, raw_path = _pair_paths(path)
    code = _DTYPE_CODE[cube.domain]
    if cube.domain is Domain.RADIANCE_DN:
        v = cube.values
        if not np.all((v >= 0) & (v <= 65535)):
            raise ValueError("radiance DN values must lie in [0, 65535]")
        if not np.all(v == np.round(v)):
            raise ValueError(
                "radiance DN values must be integral; quantize before saving"
            )
    payload = np.ascontiguousarray(cube.values).astype(_NUMPY_DTYPE[code])

    lines = [
        "ENVI",
        f"samples = {cube.width}",
        f"lines = {cube.height}",
        f"bands = {cube.bands}",
        "interleave = bsq",
        f"data type = {code}",
        "byte order = 0",
        "wavelength = { " + ", ".join(repr(float(w)) for w in cube.wavelengths) + " }",
    ]
    hdr_path.write_text("\n".join(lines) + "\n", encoding="ascii")
    payload.tofile(raw_path)


def _parse_header(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    pending_key: str | None = None
    pending_val: list[str] = []
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if pending_key is not None:
            pending_val.append(line)
            if "}" in line:
                entries[pending_key] = " ".join(pending_val)
                pending_key, pending_val = None, []
            continue
        if not line or "=" not in line:
            continue  # magic line, comments, unknown directives
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if "{" in value and "}" not in value:
            pending_key, pending_val = key, [value]
        else:
            entries[key] = value
    if pending_key is not None:
        raise ValueError(f"unterminated '{{' block for header key {pending_key!r}")
    return entries


def load_cube(path: str | Path) -> HyperCube:
    """Read a cube from its header/payload pair.

    Unknown header keys are ignored.  The payload size must match the
    declared geometry exactly.
    """

    hdr_path, raw_path = _pair_paths(path)
    if not hdr_path.exists():
        raise FileNotFoundError(f"missing header file: {hdr_path}")
    if not raw_path.exists():
        raise FileNotFoundError(f"missing payload file: {raw_path}")
    entries = _parse_header(hdr_path.read_text(encoding="ascii"))

    for key in ("samples", "lines", "bands", "data type", "wavelength"):
        if key not in entries:
            raise ValueError(f"malformed header: missing key {key!r}")
    try:
        width = int(entries["samples"])
        height = int(entries["lines"])
        bands = int(entries["bands"])
        code = int(entries["data type"])
    except ValueError as exc:
        raise ValueError(f"malformed header: {exc}") from exc
    if entries.get("interleave", "bsq").lower() != "bsq":
        raise ValueError(f"unsupported interleave {entries['interleave']!r}; only bsq")
    if int(entries.get("byte order", "0")) != 0:
        raise ValueError("only little-endian payloads (byte order = 0) are supported")
    if code not in _DOMAIN_BY_CODE:
        raise ValueError(f"unsupported data type code {code}; expected 4 or 12")

    wl_text = entries["wavelength"].strip()
    if not (wl_text.startswith("{") and wl_text.endswith("}")):
        raise ValueError("malformed header: wavelength list must be brace-delimited")
    try:
        wavelengths = np.array(
            [float(tok) for tok in wl_text[1:-1].replace(",", " ").split()],
            dtype=np.float64,
        )
    except ValueError as exc:
        raise ValueError(f"malformed header: bad wavelength entry ({exc})") from exc
    if wavelengths.size != bands:
        raise ValueError(
            f"header declares {bands} bands but lists {wavelengths.size} wavelengths"
        )

    raw = np.fromfile(raw_path, dtype=_NUMPY_DTYPE[code])
    expected = width * height * bands
    if raw.size != expected:
        raise ValueError(
            f"payload size mismatch: header implies {expected} values, "
            f"file holds {raw.size}"
        )
    values = raw.astype(np.float64).reshape(bands, height, width)
    return HyperCube(values=values, wavelengths=wavelengths, domain=_DOMAIN_BY_CODE[code])


def band_at(cube: HyperCube, target: float) -> BandImage:
    """Return the band whose wavelength is nearest ``target`` (nm).

    Ties break toward the lower wavelength.  ``target`` must lie within
    the cube's wavelength span.
    """

    w = cube.wavelengths
    if not (w[0] <= target <= w[-1]):
        raise ValueError(
            f"target {target} nm outside wavelength span [{w[0]}, {w[-1]}] nm"
        )
    idx = int(np.argmin(np.abs(w - target)))  # argmin takes the first = lower wavelength
    return BandImage(values=cube.values[idx], wavelength=float(w[idx]))


def slice_bands(cube: HyperCube, drop_leading: int) -> HyperCube:
    """Drop the first ``drop_leading`` bands (low-SNR blue end)."""

    if not 0 <= drop_leading < cube.bands:
        raise ValueError(
            f"drop_leading must be in [0, {cube.bands - 1}], got {drop_leading}"
        )
    return HyperCube(
        values=cube.values[drop_leading:].copy(),
        wavelengths=cube.wavelengths[drop_leading:].copy(),
        domain=cube.domain,
    )


def pixel_spectrum(cube: HyperCube, x: int, y: int) -> Spectrum:
    """Spectrum of the pixel at column ``x``, row ``y``."""

    if not (0 <= x < cube.width and 0 <= y < cube.height):
        raise IndexError(
            f"pixel ({x}, {y}) outside cube extent {cube.width}x{cube.height}"
        )
    return Spectrum(values=cube.values[:, y, x].copy(), wavelengths=cube.wavelengths)
