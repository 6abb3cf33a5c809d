"""Pipeline configuration: plain-text key=value files with section headers.

All defaults are embedded here; a config file overrides individual keys
and command-line flags override both.  ``chilispec <cmd> --print-config``
prints the effective configuration.
"""

from __future__ import annotations

import configparser
from pathlib import Path

__all__ = ["ConfigError", "DEFAULTS", "load_config", "format_config"]


class ConfigError(Exception):
    """Invalid or inconsistent configuration (CLI exit code 2)."""


DEFAULTS: dict[str, dict[str, str]] = {
    "paths": {
        "cube": "",          # input cube for single-cube commands
        "cubes": "",         # comma list of training cubes (train/pca/gridsearch/report)
        "white": "",         # white reference CSV
        "dark": "",          # dark reference CSV
        "roi": "",           # precomputed ROI mask (PBM); empty = extract
        "model_dir": "model",
        "name": "scene",     # basename for generated outputs
    },
    "scene": {
        "width": "128",
        "height": "128",
        "material": "red_chili",
        "adulterant": "saw_dust",
        "fraction": "0.0",
        "grain_px": "6.0",
        "noise_sigma": "0.004",
        "seed": "0",
    },
    "calibrate": {
        "drop_leading": "15",
    },
    "preprocess": {
        "savgol_window": "11",
        "savgol_polyorder": "3",
        "scatter": "snv",    # snv | msc | none (standalone preprocess command)
    },
    "pca": {
        "components": "max2_broken_stick",  # fixed:<m> | broken_stick | max2_broken_stick
    },
    "svm": {
        "kernel": "rbf",     # linear | polynomial | rbf
        "gamma": "0.1",
        "degree": "3",
        "coef0": "0.0",
        "nu": "0.1",
        "tol": "1e-6",
        "max_train_pixels": "2000",
    },
    "gridsearch": {
        "gammas": "0.1,1.0,10.0",
        "nus": "0.1,0.3,0.5",
        "inlier_cubes": "",  # comma list of cubes whose pixels should be inliers
        "outlier_cubes": "", # comma list of cubes whose pixels should be outliers
    },
    "predict": {
        "verdict_threshold": "0.95",
    },
    "report": {
        "nus": "0.01,0.02,0.05,0.1,0.3,0.5,0.7,0.9",
    },
}


def load_config(path: str | Path | None) -> dict[str, dict[str, str]]:
    """Defaults overlaid with the file's sections; unknown keys rejected."""

    cfg = {section: dict(values) for section, values in DEFAULTS.items()}
    if path is None:
        return cfg
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(p.read_text(encoding="utf-8"), source=str(p))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    for section in parser.sections():
        if section not in cfg:
            raise ConfigError(f"unknown config section [{section}]")
        for key, value in parser.items(section):
            if key not in cfg[section]:
                raise ConfigError(f"unknown config key '{key}' in [{section}]")
            cfg[section][key] = value
    return cfg


def format_config(cfg: dict[str, dict[str, str]]) -> str:
    lines: list[str] = []
    for section, values in cfg.items():
        lines.append(f"[{section}]")
        for key, value in values.items():
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)
