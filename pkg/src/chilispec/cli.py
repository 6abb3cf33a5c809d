"""Command-line pipeline: generate | calibrate | segment | preprocess |
annotate | pca | train | predict | gridsearch | report.

Exit codes: 0 success, 1 runtime failure, 2 configuration error.  Every
subcommand is deterministic: identical config and seed give byte-identical
output files.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import ConfigError, DEFAULTS, format_config, load_config

_LABEL_TO_GRAY = {2: 0, 1: 255, 0: 128}  # adulterant black, chili white, background gray


# ---------------------------------------------------------------------------
# small helpers (heavy imports stay inside functions so --threads can cap
# the BLAS pools before numpy loads)

def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require(value: str, field: str) -> str:
    if not value:
        raise ConfigError(f"missing required input: {field}")
    return value


def _parse_float(text: str, field: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"{field} must be a number, got {text!r}") from exc


def _parse_float_list(text: str, field: str) -> list[float]:
    items = [t for t in text.replace(" ", "").split(",") if t]
    if not items:
        raise ConfigError(f"{field} must be a non-empty comma list")
    return [_parse_float(t, field) for t in items]


def _cube_list(text: str, field: str) -> list[Path]:
    paths = [Path(t) for t in text.split(",") if t.strip()]
    if not paths:
        raise ConfigError(f"missing required input: {field}")
    return paths


def _load_cube_checked(path: Path):
    from .cube import load_cube

    if not Path(path).with_suffix(".hdr").exists() and not str(path).endswith(
        (".hdr", ".raw")
    ):
        pass  # load_cube reports precisely
    return load_cube(path)


def _load_reflectance(path: Path):
    from .cube import Domain

    cube = _load_cube_checked(path)
    if cube.domain is not Domain.REFLECTANCE:
        raise ConfigError(
            f"{path} is a radiance cube; run `chilispec calibrate` first"
        )
    return cube


def _get_roi(cfg, cube):
    from .pnm import read_pbm
    from .segment import Mask, extract_roi

    roi_path = cfg["paths"]["roi"]
    if roi_path:
        bits = read_pbm(roi_path)
        if bits.shape != (cube.height, cube.width):
            raise ConfigError(
                f"ROI mask {roi_path} extent {bits.shape} does not match the cube"
            )
        return Mask(bits=bits)
    return extract_roi(cube)


def _material(name: str, field: str):
    from .synth import Material

    try:
        return Material(name)
    except ValueError as exc:
        valid = ", ".join(m.value for m in Material)
        raise ConfigError(f"{field} must be one of {valid}; got {name!r}") from exc


def _kernel_spec(cfg):
    from .ocsvm import KernelKind, KernelSpec

    svm = cfg["svm"]
    try:
        kind = KernelKind(svm["kernel"])
    except ValueError as exc:
        raise ConfigError(f"svm.kernel must be linear|polynomial|rbf, got {svm['kernel']!r}") from exc
    try:
        if kind is KernelKind.LINEAR:
            return KernelSpec(kind=kind)
        if kind is KernelKind.POLYNOMIAL:
            return KernelSpec(
                kind=kind,
                gamma=_parse_float(svm["gamma"], "svm.gamma"),
                degree=int(svm["degree"]),
                coef0=_parse_float(svm["coef0"], "svm.coef0"),
            )
        return KernelSpec(kind=kind, gamma=_parse_float(svm["gamma"], "svm.gamma"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _nu(cfg) -> float:
    nu = _parse_float(cfg["svm"]["nu"], "svm.nu")
    if not 0.0 < nu < 1.0:
        raise ConfigError(f"svm.nu must lie strictly between 0 and 1, got {nu}")
    return nu


def _components_policy(cfg):
    from .detector import ComponentsPolicy, PolicyKind

    text = cfg["pca"]["components"]
    if text == "broken_stick":
        return ComponentsPolicy(kind=PolicyKind.BROKEN_STICK)
    if text == "max2_broken_stick":
        return ComponentsPolicy(kind=PolicyKind.MAX2_BROKEN_STICK)
    if text.startswith("fixed:"):
        try:
            return ComponentsPolicy(kind=PolicyKind.FIXED, fixed=int(text[6:]))
        except ValueError as exc:
            raise ConfigError(f"pca.components: {exc}") from exc
    raise ConfigError(
        f"pca.components must be fixed:<m>, broken_stick or max2_broken_stick; got {text!r}"
    )


def _savgol_spec(cfg):
    from .preprocess import SavGolSpec

    try:
        return SavGolSpec(
            window=int(cfg["preprocess"]["savgol_window"]),
            polyorder=int(cfg["preprocess"]["savgol_polyorder"]),
        )
    except ValueError as exc:
        raise ConfigError(f"preprocess.savgol: {exc}") from exc


def _save_labelmap(labelmap, out_base: Path) -> None:
    import numpy as np

    from .annotate import Label
    from .fileio import write_csv
    from .pnm import write_pgm

    gray = np.zeros(labelmap.labels.shape, dtype=np.uint8)
    for value, shade in _LABEL_TO_GRAY.items():
        gray[labelmap.labels == value] = shade
    write_pgm(out_base.with_suffix(".pgm"), gray)
    names = {int(Label.BACKGROUND): "background", int(Label.CHILI): "chili",
             int(Label.ADULTERANT): "adulterant"}
    ys, xs = np.nonzero(np.ones_like(labelmap.labels, dtype=bool))
    write_csv(
        out_base.with_suffix(".csv"),
        ["x", "y", "label"],
        (
            (int(x), int(y), names[int(labelmap.labels[y, x])])
            for y, x in zip(ys, xs)
            if labelmap.labels[y, x] != int(Label.BACKGROUND)
        ),
    )


def _train_spectra(cfg, seed: int):
    """Pooled, deterministically subsampled ROI spectra of the training cubes."""

    import numpy as np

    from .detector import subsample_rows

    listed = cfg["paths"]["cubes"] or cfg["paths"]["cube"]
    paths = _cube_list(listed, "paths.cubes")
    parts = []
    wavelengths = None
    for path in paths:
        cube = _load_reflectance(path)
        if wavelengths is None:
            wavelengths = cube.wavelengths
        elif not np.array_equal(wavelengths, cube.wavelengths):
            raise ConfigError(f"training cubes disagree on the wavelength axis: {path}")
        roi = _get_roi(cfg, cube)
        parts.append(cube.values[:, roi.bits].T)
    spectra = np.vstack(parts)
    limit = int(cfg["svm"]["max_train_pixels"])
    if limit < 2:
        raise ConfigError(f"svm.max_train_pixels must be >= 2, got {limit}")
    return spectra[subsample_rows(spectra.shape[0], limit, seed)], wavelengths


def _fit_detector(cfg, seed: int):
    from .detector import Detector

    spectra, wavelengths = _train_spectra(cfg, seed)
    return Detector.fit(
        spectra,
        wavelengths,
        nu=_nu(cfg),
        kernel=_kernel_spec(cfg),
        savgol_spec=_savgol_spec(cfg),
        policy=_components_policy(cfg),
        tol=_parse_float(cfg["svm"]["tol"], "svm.tol"),
    )


def _eval_score_sets(cfg, det):
    """Named evaluation sets from the gridsearch config, as PCA scores."""

    sets: dict[str, tuple] = {}
    for key, expected in (("inlier_cubes", "inlier"), ("outlier_cubes", "outlier")):
        listed = cfg["gridsearch"][key]
        if not listed:
            continue
        for path in _cube_list(listed, f"gridsearch.{key}"):
            cube = _load_reflectance(path)
            roi = _get_roi(cfg, cube)
            scores = det.scores(cube.values[:, roi.bits].T)
            sets[Path(path).stem] = (scores, expected)
    if not sets:
        raise ConfigError(
            "gridsearch needs at least one of gridsearch.inlier_cubes / outlier_cubes"
        )
    return sets


# ---------------------------------------------------------------------------
# subcommands

def cmd_generate(cfg, args) -> int:
    from .calibrate import save_reference_csv
    from .cube import save_cube
    from .synth import (
        SceneSpec,
        gen_endmembers,
        gen_scene,
        quantize_dn,
        reference_pair,
    )

    scene = cfg["scene"]
    try:
        spec = SceneSpec(
            width=int(scene["width"]),
            height=int(scene["height"]),
            material=_material(scene["material"], "scene.material"),
            adulterant=_material(scene["adulterant"], "scene.adulterant"),
            fraction=_parse_float(scene["fraction"], "scene.fraction"),
            grain_px=_parse_float(scene["grain_px"], "scene.grain_px"),
            noise_sigma=_parse_float(scene["noise_sigma"], "scene.noise_sigma"),
            seed=int(scene["seed"]) if args.seed is None else args.seed,
        )
    except ValueError as exc:
        raise ConfigError(f"scene: {exc}") from exc

    out = _out_dir(args)
    name = cfg["paths"]["name"]
    endmembers = gen_endmembers(spec.seed)
    cube, truth = gen_scene(spec, endmembers)
    save_cube(quantize_dn(cube), out / name)
    _save_labelmap(truth, out / f"{name}_gt")
    refs = reference_pair(cube.wavelengths)
    save_reference_csv(refs.white, out / f"{name}_white.csv")
    save_reference_csv(refs.dark, out / f"{name}_dark.csv")
    print(f"wrote {name}.hdr/.raw, ground truth and references to {out}")
    return 0


def cmd_calibrate(cfg, args) -> int:
    import numpy as np

    from .calibrate import ReferencePair, load_reference_csv, reference_from_region
    from .cube import Domain, Spectrum, save_cube, slice_bands

    cube_path = Path(_require(cfg["paths"]["cube"], "paths.cube"))
    raw = _load_cube_checked(cube_path)
    if raw.domain is not Domain.RADIANCE_DN:
        raise ConfigError(f"{cube_path} is already a reflectance cube")
    drop = int(cfg["calibrate"]["drop_leading"])
    raw = slice_bands(raw, drop)

    def reference(which: str, csv_flag: str | None, region_flag: str | None) -> Spectrum:
        if region_flag:
            try:
                x0, y0, x1, y1 = (int(t) for t in region_flag.split(","))
            except ValueError as exc:
                raise ConfigError(f"--{which}-region must be x0,y0,x1,y1") from exc
            mask = np.zeros((raw.height, raw.width), dtype=bool)
            mask[y0:y1, x0:x1] = True
            return reference_from_region(raw, mask)
        path = _require(
            csv_flag or cfg["paths"][which], f"paths.{which} (or --{which}-region)"
        )
        spectrum = load_reference_csv(path)
        if spectrum.values.size == raw.bands + drop:
            spectrum = Spectrum(
                values=spectrum.values[drop:], wavelengths=spectrum.wavelengths[drop:]
            )
        return spectrum

    refs = ReferencePair(
        white=reference("white", args.white_region),
        dark=reference("dark", args.dark_region),
    )
    from .calibrate import elm_reflectance

    refl = elm_reflectance(raw, refs)
    out = _out_dir(args)
    save_cube(refl, out / f"{cube_path.stem}_refl")
    print(f"wrote {cube_path.stem}_refl.hdr/.raw to {out}")
    return 0


def cmd_segment(cfg, args) -> int:
    from .pnm import write_pbm
    from .segment import extract_roi, save_mask_csv

    cube_path = Path(_require(cfg["paths"]["cube"], "paths.cube"))
    cube = _load_reflectance(cube_path)
    roi = extract_roi(cube)
    out = _out_dir(args)
    write_pbm(out / f"{cube_path.stem}_roi.pbm", roi.bits)
    save_mask_csv(roi, out / f"{cube_path.stem}_roi.csv")
    print(f"ROI: {roi.count()} of {roi.width * roi.height} pixels")
    return 0


def cmd_preprocess(cfg, args) -> int:
    import numpy as np

    from .cube import HyperCube, save_cube
    from .preprocess import MscReference, msc_apply, savgol, snv

    cube_path = Path(_require(cfg["paths"]["cube"], "paths.cube"))
    cube = _load_reflectance(cube_path)
    if args.savgol:
        try:
            window, order = (int(t) for t in args.savgol.split(","))
        except ValueError as exc:
            raise ConfigError("--savgol must be window,order") from exc
        cfg["preprocess"]["savgol_window"] = str(window)
        cfg["preprocess"]["savgol_polyorder"] = str(order)
    spec = _savgol_spec(cfg)

    scatter = cfg["preprocess"]["scatter"]
    if args.snv:
        scatter = "snv"
    if args.msc:
        scatter = "msc"
    if scatter not in ("snv", "msc", "none"):
        raise ConfigError(f"preprocess.scatter must be snv|msc|none, got {scatter!r}")

    flat = cube.values.reshape(cube.bands, -1).T
    flat = savgol(flat, spec)
    if scatter == "snv":
        flat = snv(flat)
    elif scatter == "msc":
        if args.msc:
            from .calibrate import load_reference_csv

            ref = MscReference(mean_spectrum=load_reference_csv(args.msc).values)
        else:
            from .preprocess import msc_fit

            ref = msc_fit(flat)
        flat = msc_apply(flat, ref)
    processed = HyperCube(
        values=flat.T.reshape(cube.values.shape),
        wavelengths=cube.wavelengths,
        domain=cube.domain,
    )
    out = _out_dir(args)
    save_cube(processed, out / f"{cube_path.stem}_pre")
    print(f"wrote {cube_path.stem}_pre.hdr/.raw (savgol + {scatter}) to {out}")
    return 0


def cmd_annotate(cfg, args) -> int:
    from .annotate import annotate_mixture

    cube_path = Path(_require(cfg["paths"]["cube"], "paths.cube"))
    cube = _load_reflectance(cube_path)
    roi = _get_roi(cfg, cube)
    labels = annotate_mixture(cube, roi, chili_reference=args.chili_ref)
    out = _out_dir(args)
    _save_labelmap(labels, out / f"{cube_path.stem}_labels")
    import numpy as np

    n_adult = int((labels.labels == 2).sum())
    n_roi = int((labels.labels != 0).sum())
    print(f"annotated {n_roi} ROI pixels; adulterant share {n_adult / n_roi:.4f}")
    return 0


def cmd_pca(cfg, args) -> int:
    from . import pca as pca_mod
    from .fileio import write_csv
    from .preprocess import msc_apply, msc_fit, savgol

    seed = args.seed if args.seed is not None else 0
    spectra, wavelengths = _train_spectra(cfg, seed)
    smooth = savgol(spectra, _savgol_spec(cfg))
    ref = msc_fit(smooth)
    corrected = msc_apply(smooth, ref)
    model = pca_mod.fit_pca(corrected)
    m = _components_policy(cfg).resolve(model)
    scores = pca_mod.project(model, corrected, m)

    out = _out_dir(args)
    pca_mod.save_pca(model, out, wavelengths=wavelengths)
    write_csv(
        out / "pca_scores.csv",
        [f"pc{i + 1}" for i in range(m)],
        ([float(v) for v in row] for row in scores),
    )
    kept = ", ".join(f"{r:.4f}" for r in model.explained_ratio[:m])
    print(f"kept {m} components (explained ratios: {kept})")
    return 0


def cmd_train(cfg, args) -> int:
    from .fileio import write_csv

    seed = args.seed if args.seed is not None else 0
    det = _fit_detector(cfg, seed)
    out = _out_dir(args)
    model_dir = out / cfg["paths"]["model_dir"]
    det.save(model_dir)
    sv_fraction = det.svm.alphas.size / det.svm.n_train
    write_csv(
        model_dir / "training_summary.csv",
        ["key", "value"],
        [
            ("kernel", det.svm.kernel.kind.value),
            ("gamma", "" if det.svm.kernel.gamma is None else repr(det.svm.kernel.gamma)),
            ("nu", repr(det.svm.nu)),
            ("n_train", det.svm.n_train),
            ("sv_count", det.svm.alphas.size),
            ("sv_fraction", repr(sv_fraction)),
            ("n_components", det.n_components),
            ("rho", repr(det.svm.rho)),
        ],
    )
    print(
        f"trained on {det.svm.n_train} pixels; {det.svm.alphas.size} support vectors "
        f"(fraction {sv_fraction:.3f}); model in {model_dir}"
    )
    return 0


def cmd_predict(cfg, args) -> int:
    import numpy as np

    from .detector import Detector
    from .fileio import write_csv
    from .pnm import write_pgm

    model_dir = Path(args.model or _require(cfg["paths"]["model_dir"], "paths.model_dir"))
    if not model_dir.exists():
        raise ConfigError(f"model directory not found: {model_dir}")
    det = Detector.load(model_dir)
    cube_path = Path(_require(cfg["paths"]["cube"], "paths.cube"))
    cube = _load_reflectance(cube_path)
    roi = _get_roi(cfg, cube)
    scores = det.score_cube(cube, roi)
    inlier = scores >= 0
    inlier_fraction = float(inlier.mean())
    threshold = _parse_float(cfg["predict"]["verdict_threshold"], "predict.verdict_threshold")
    verdict = "Pure" if inlier_fraction >= threshold else "Adulterated"

    out = _out_dir(args)
    gray = np.full((cube.height, cube.width), 128, dtype=np.uint8)
    ys, xs = np.nonzero(roi.bits)
    gray[ys, xs] = np.where(inlier, 255, 0)
    write_pgm(out / f"{cube_path.stem}_inliers.pgm", gray)
    write_csv(
        out / f"{cube_path.stem}_scores.csv",
        ["x", "y", "score", "inlier"],
        (
            (int(x), int(y), float(s), int(c))
            for x, y, s, c in zip(xs, ys, scores, inlier)
        ),
    )
    write_csv(
        out / f"{cube_path.stem}_verdict.csv",
        ["cube", "inlier_fraction", "verdict"],
        [(cube_path.stem, inlier_fraction, verdict)],
    )
    print(f"verdict={verdict} inlier_fraction={inlier_fraction:.4f}")
    return 0


def cmd_gridsearch(cfg, args) -> int:
    from .fileio import write_csv
    from .ocsvm import grid_search

    seed = args.seed if args.seed is not None else 0
    det = _fit_detector(cfg, seed)
    train_scores = det.scores(_train_spectra(cfg, seed)[0])
    eval_sets = _eval_score_sets(cfg, det)
    report = grid_search(
        train_scores,
        eval_sets,
        gammas=_parse_float_list(cfg["gridsearch"]["gammas"], "gridsearch.gammas"),
        nus=_parse_float_list(cfg["gridsearch"]["nus"], "gridsearch.nus"),
        kind=det.svm.kernel.kind,
        degree=int(cfg["svm"]["degree"]),
        coef0=_parse_float(cfg["svm"]["coef0"], "svm.coef0"),
        tol=_parse_float(cfg["svm"]["tol"], "svm.tol"),
    )
    out = _out_dir(args)
    set_names = list(eval_sets)
    write_csv(
        out / "gridsearch.csv",
        ["gamma", "nu", *[f"acc_{n}" for n in set_names], "criterion", "error"],
        (
            (
                c.gamma,
                c.nu,
                *[c.accuracies.get(n, float("nan")) for n in set_names],
                c.criterion,
                c.error or "",
            )
            for c in report.cells
        ),
    )
    print(f"best gamma={report.best_gamma} nu={report.best_nu}")
    return 0


def cmd_report(cfg, args) -> int:
    from .annotate import annotate_mixture
    from .fileio import write_csv
    from .ocsvm import nu_sweep
    from .report import plot_nu_sweep, plot_scores

    seed = args.seed if args.seed is not None else 0
    det = _fit_detector(cfg, seed)
    train_scores = det.scores(_train_spectra(cfg, seed)[0])
    eval_sets = _eval_score_sets(cfg, det)

    out = _out_dir(args)
    nus = _parse_float_list(cfg["report"]["nus"], "report.nus")
    rows = nu_sweep(train_scores, eval_sets, det.svm.kernel, nus)
    write_csv(out / "nu_sweep.csv", ["nu", "min_accuracy", "sv_fraction"], rows)
    plot_nu_sweep(rows, out / "nu_sweep.png")

    score_sets = {"training": train_scores}
    score_sets.update({name: scores for name, (scores, _) in eval_sets.items()})
    write_csv(
        out / "pca_scores.csv",
        ["set", "pc1", "pc2"],
        (
            (name, float(r[0]), float(r[1]) if r.shape[0] > 1 else 0.0)
            for name, scores in score_sets.items()
            for r in scores
        ),
    )
    plot_scores(score_sets, out / "pca_scores.png")

    for key in ("inlier_cubes", "outlier_cubes"):
        listed = cfg["gridsearch"][key]
        if not listed:
            continue
        for path in _cube_list(listed, f"gridsearch.{key}"):
            cube = _load_reflectance(path)
            roi = _get_roi(cfg, cube)
            labels = annotate_mixture(cube, roi)
            _save_labelmap(labels, out / f"{Path(path).stem}_labels")
    print(f"report written to {out}")
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="key=value config file with [sections]")
    shared.add_argument("--out", default=".", help="output directory")
    shared.add_argument("--seed", type=int, default=None, help="override the RNG seed")
    shared.add_argument("--threads", type=int, default=None, help="cap BLAS thread pools")
    shared.add_argument(
        "--print-config", action="store_true", help="print the effective config and exit"
    )

    parser = argparse.ArgumentParser(
        prog="chilispec",
        description="Hyperspectral screening of ground red chili for adulterants",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str):
        p = sub.add_parser(name, parents=[shared], help=help_text)
        p.set_defaults(func=func)
        return p

    add("generate", cmd_generate, "write a synthetic radiance scene with ground truth")

    p = add("calibrate", cmd_calibrate, "band-slice and convert radiance DN to reflectance")
    p.add_argument("--cube", help="input radiance cube (.hdr/.raw pair)")
    p.add_argument("--white", help="white reference CSV")
    p.add_argument("--dark", help="dark reference CSV")
    p.add_argument("--white-region", help="extract white reference from x0,y0,x1,y1")
    p.add_argument("--dark-region", help="extract dark reference from x0,y0,x1,y1")

    p = add("segment", cmd_segment, "extract the sample ROI mask")
    p.add_argument("--cube", help="input reflectance cube")

    p = add("preprocess", cmd_preprocess, "Savitzky-Golay plus scatter correction")
    p.add_argument("--cube", help="input reflectance cube")
    p.add_argument("--savgol", help="window,order (default 11,3)")
    p.add_argument("--snv", action="store_true", help="standard normal variate")
    p.add_argument("--msc", metavar="REF.CSV", help="multiplicative scatter correction")

    p = add("annotate", cmd_annotate, "k-means chili/adulterant pixel labels at 500 nm")
    p.add_argument("--cube", help="input reflectance cube")
    p.add_argument("--chili-ref", type=float, default=None,
                   help="expected chili intensity at 500 nm for pure samples")

    p = add("pca", cmd_pca, "fit PCA on preprocessed ROI spectra and emit scores")
    p.add_argument("--cube", action="append", default=[], help="training cube (repeatable)")

    p = add("train", cmd_train, "train the one-class purity model on pure chili")
    p.add_argument("--cube", action="append", default=[], help="training cube (repeatable)")

    p = add("predict", cmd_predict, "classify a cube's ROI pixels against a model")
    p.add_argument("--model", help="model directory written by train")
    p.add_argument("--cube", help="input reflectance cube")

    p = add("gridsearch", cmd_gridsearch, "grid search over (gamma, nu)")
    p.add_argument("--cube", action="append", default=[], help="training cube (repeatable)")

    p = add("report", cmd_report, "nu sweep, score plots and label maps")
    p.add_argument("--cube", action="append", default=[], help="training cube (repeatable)")

    return parser


def _merge_flags(cfg, args) -> None:
    cube_flag = getattr(args, "cube", None)
    if isinstance(cube_flag, str) and cube_flag:
        cfg["paths"]["cube"] = cube_flag
    elif isinstance(cube_flag, list) and cube_flag:
        cfg["paths"]["cubes"] = ",".join(cube_flag)
        cfg["paths"]["cube"] = cube_flag[0]


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.threads is not None:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    try:
        cfg = load_config(args.config)
        _merge_flags(cfg, args)
        if args.print_config:
            print(format_config(cfg), end="")
            return 0
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
