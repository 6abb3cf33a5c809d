"""One-class nu-SVM: kernels, dual solver, decision function, grid search.

The detector separates the training class from the origin in feature
space with maximal margin.  In the normalized dual solved here,

    min_a  1/2 a' Q a    s.t.  sum(a) = 1,  0 <= a_i <= 1/(nu * n),

with Q the kernel Gram matrix.  nu upper-bounds the fraction of margin
errors and lower-bounds the fraction of support vectors.  The solver is
sequential minimal optimization: it repeatedly picks the maximally
KKT-violating pair of coefficients and moves them along the feasible
segment (the equality constraint keeps the sum fixed), updating the
gradient incrementally, until the maximal violation drops under ``tol``.
"""

from __future__ import annotations

import csv
import enum
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

__all__ = [
    "KernelKind",
    "KernelSpec",
    "OcsvmModel",
    "ConvergenceError",
    "kernel_eval",
    "kernel_matrix",
    "train",
    "decide",
    "accuracy",
    "GridCell",
    "GridSearchReport",
    "grid_search",
    "nu_sweep",
    "save_model",
    "load_model",
]


class KernelKind(enum.Enum):
    LINEAR = "linear"
    POLYNOMIAL = "polynomial"
    RBF = "rbf"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus the parameters that family requires."""

    kind: KernelKind
    gamma: float | None = None
    degree: int | None = None
    coef0: float = 0.0

    def __post_init__(self) -> None:
        if self.kind is KernelKind.LINEAR:
            if self.gamma is not None or self.degree is not None:
                raise ValueError("linear kernel takes no gamma or degree")
            return
        if self.gamma is None or not self.gamma > 0:
            raise ValueError(f"{self.kind.value} kernel requires gamma > 0")
        if self.kind is KernelKind.POLYNOMIAL:
            if self.degree is None or self.degree < 1 or int(self.degree) != self.degree:
                raise ValueError("polynomial kernel requires integer degree >= 1")
        elif self.degree is not None:
            raise ValueError("rbf kernel takes no degree")


def kernel_eval(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> float:
    """Kernel value for a single pair of points."""

    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(kernel_matrix(spec, a[None, :], b[None, :])[0, 0])


def kernel_matrix(spec: KernelSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Gram matrix k(A_i, B_j) of shape (len(A), len(B))."""

    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    if spec.kind is KernelKind.LINEAR:
        return A @ B.T
    if spec.kind is KernelKind.POLYNOMIAL:
        return (spec.gamma * (A @ B.T) + spec.coef0) ** int(spec.degree)
    d2 = (
        (A * A).sum(axis=1)[:, None]
        + (B * B).sum(axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-spec.gamma * d2)


@dataclass
class OcsvmModel:
    """Trained one-class model: support vectors, dual coefficients, offset."""

    support_vectors: np.ndarray  # (n_sv, dim)
    alphas: np.ndarray           # (n_sv,), each in (0, 1/(nu*n_train)]
    rho: float
    nu: float
    kernel: KernelSpec
    n_train: int

    def __post_init__(self) -> None:
        a = np.asarray(self.alphas, dtype=np.float64)
        if abs(float(a.sum()) - 1.0) > 1e-8:
            raise ValueError(f"dual coefficients must sum to 1, got {a.sum()!r}")
        bound = 1.0 / (self.nu * self.n_train)
        if np.any(a <= 0) or np.any(a > bound + 1e-10):
            raise ValueError("dual coefficients must lie in (0, 1/(nu*n_train)]")

    @property
    def bound(self) -> float:
        return 1.0 / (self.nu * self.n_train)


class ConvergenceError(RuntimeError):
    """The pairwise solver did not reach the tolerance within its update cap."""


def train(
    points: np.ndarray,
    nu: float,
    kernel: KernelSpec,
    tol: float = 1e-6,
    max_updates: int = 10**6,
) -> OcsvmModel:
    """Solve the one-class dual by maximal-violating-pair SMO.

    The gradient ``G = Q a`` is maintained incrementally; the violating
    pair is the coefficient with the smallest gradient among those that
    can grow and the largest among those that can shrink.  rho is
    recovered as the mean decision value over unbounded support vectors
    (midpoint of the bounded ones' extremes if none are unbounded).
    """

    x = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n = x.shape[0]
    if n < 2:
        raise ValueError(f"training needs at least 2 points, got {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("training points must be finite")
    if not 0.0 < nu < 1.0:
        raise ValueError(f"nu must lie in (0, 1), got {nu}")
    if nu * n < 1.0:
        warnings.warn(
            f"nu*n = {nu * n:.3g} < 1: the box bound exceeds 1 and is vacuous",
            stacklevel=2,
        )

    C = 1.0 / (nu * n)
    Q = kernel_matrix(kernel, x, x)
    alpha = np.full(n, 1.0 / n)
    np.minimum(alpha, C, out=alpha)  # guard nu*n < 1 (C > 1/n is the normal case)
    alpha *= 1.0 / alpha.sum()
    G = Q @ alpha

    for _ in range(max_updates):
        can_grow = alpha < C
        can_shrink = alpha > 0.0
        g_up = np.where(can_grow, G, np.inf)
        g_down = np.where(can_shrink, G, -np.inf)
        i = int(np.argmin(g_up))
        j = int(np.argmax(g_down))
        violation = G[j] - G[i]
        if violation < tol:
            break
        curvature = Q[i, i] + Q[j, j] - 2.0 * Q[i, j]
        if curvature <= 1e-15:
            curvature = 1e-15
        step = violation / curvature
        room_i = C - alpha[i]
        room_j = alpha[j]
        step = min(step, room_i, room_j)
        # hit the box exactly so bounded coefficients are exactly 0 or C
        if step == room_i:
            alpha[i] = C
        else:
            alpha[i] += step
        if step == room_j:
            alpha[j] = 0.0
        else:
            alpha[j] -= step
        G += step * (Q[:, i] - Q[:, j])
    else:
        raise ConvergenceError(
            f"pairwise solver exceeded {max_updates} updates "
            f"(last KKT violation {violation:.3e}, tol {tol:.3e})"
        )

    decision = Q @ alpha  # recompute: the incremental gradient drifts slightly
    sv = alpha > 0.0
    unbounded = sv & (alpha < C - 1e-10)
    if unbounded.any():
        rho = float(decision[unbounded].mean())
    else:
        # no free coefficients: any rho in the KKT interval
        # [max decision at the upper bound, min decision at zero] is optimal
        lo = float(decision[sv].max())
        hi = float(decision[~sv].min()) if (~sv).any() else lo
        rho = 0.5 * (lo + hi)
    return OcsvmModel(
        support_vectors=x[sv].copy(),
        alphas=alpha[sv].copy(),
        rho=rho,
        nu=nu,
        kernel=kernel,
        n_train=n,
    )


def decide(model: OcsvmModel, points: np.ndarray) -> np.ndarray | float:
    """Signed decision score(s); a point is an inlier iff its score >= 0."""

    p = np.asarray(points, dtype=np.float64)
    single = p.ndim == 1
    k = kernel_matrix(model.kernel, model.support_vectors, np.atleast_2d(p))
    scores = model.alphas @ k - model.rho
    return float(scores[0]) if single else scores


def accuracy(model: OcsvmModel, points: np.ndarray, expected: str) -> float:
    """Fraction of points classified on the ``expected`` side ('inlier'/'outlier')."""

    if expected not in ("inlier", "outlier"):
        raise ValueError(f"expected must be 'inlier' or 'outlier', got {expected!r}")
    p = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if p.shape[0] == 0:
        raise ValueError("accuracy undefined for an empty point set")
    scores = decide(model, p)
    inlier = scores >= 0
    return float(inlier.mean() if expected == "inlier" else (~inlier).mean())


@dataclass
class GridCell:
    gamma: float
    nu: float
    accuracies: dict[str, float] = field(default_factory=dict)
    criterion: float = float("nan")
    error: str | None = None


@dataclass
class GridSearchReport:
    """Full grid with the best (gamma, nu) under the min-accuracy criterion."""

    cells: list[GridCell]
    best_gamma: float
    best_nu: float
    criterion: str = "minimum accuracy across evaluation sets"


def _make_spec(kind: KernelKind, gamma: float, degree: int, coef0: float) -> KernelSpec:
    if kind is KernelKind.LINEAR:
        return KernelSpec(kind=kind)
    if kind is KernelKind.POLYNOMIAL:
        return KernelSpec(kind=kind, gamma=gamma, degree=degree, coef0=coef0)
    return KernelSpec(kind=kind, gamma=gamma)


def grid_search(
    train_points: np.ndarray,
    eval_sets: dict[str, tuple[np.ndarray, str]],
    gammas: list[float],
    nus: list[float],
    kind: KernelKind,
    degree: int = 3,
    coef0: float = 0.0,
    tol: float = 1e-6,
) -> GridSearchReport:
    """Train one model per (gamma, nu) cell and rank by worst-set accuracy.

    ``eval_sets`` maps a set name to (points, expected side).  Cells whose
    training fails are recorded with the error and excluded from ``best``.
    Ties prefer the smaller gamma, then the smaller nu.  For the linear
    kernel the gamma axis collapses to a single column stored as 0.0.
    """

    if not gammas or not nus:
        raise ValueError("gamma and nu grids must be non-empty")
    if not eval_sets:
        raise ValueError("grid search needs at least one evaluation set")
    grid_gammas = [0.0] if kind is KernelKind.LINEAR else list(gammas)

    cells: list[GridCell] = []
    for gamma in grid_gammas:
        for nu in nus:
            cell = GridCell(gamma=float(gamma), nu=float(nu))
            try:
                spec = _make_spec(kind, gamma, degree, coef0)
                model = train(train_points, nu, spec, tol=tol)
                for name, (pts, expected) in eval_sets.items():
                    cell.accuracies[name] = accuracy(model, pts, expected)
                cell.criterion = min(cell.accuracies.values())
            except (ValueError, ConvergenceError) as exc:
                cell.error = str(exc)
            cells.append(cell)

    valid = [c for c in cells if c.error is None]
    if not valid:
        raise RuntimeError("every grid cell failed to train")
    best = min(valid, key=lambda c: (-c.criterion, c.gamma, c.nu))
    return GridSearchReport(cells=cells, best_gamma=best.gamma, best_nu=best.nu)


def nu_sweep(
    train_points: np.ndarray,
    eval_sets: dict[str, tuple[np.ndarray, str]],
    kernel: KernelSpec,
    nus: list[float],
) -> list[tuple[float, float, float]]:
    """Rows of (nu, min accuracy across sets, SV fraction) for plotting."""

    rows: list[tuple[float, float, float]] = []
    for nu in nus:
        model = train(train_points, float(nu), kernel)
        crit = min(accuracy(model, pts, exp) for pts, exp in eval_sets.values())
        sv_fraction = model.alphas.size / model.n_train
        rows.append((float(nu), crit, sv_fraction))
    return rows


def save_model(model: OcsvmModel, directory: str | Path) -> None:
    """Persist the model as a CSV bundle: svs.csv, alphas.csv, meta.csv."""

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    dim = model.support_vectors.shape[1]
    with open(d / "svs.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(dim)])
        for row in model.support_vectors:
            writer.writerow([repr(float(v)) for v in row])
    with open(d / "alphas.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha"])
        for a in model.alphas:
            writer.writerow([repr(float(a))])
    meta = {
        "kernel": model.kernel.kind.value,
        "gamma": "" if model.kernel.gamma is None else repr(float(model.kernel.gamma)),
        "degree": "" if model.kernel.degree is None else str(int(model.kernel.degree)),
        "coef0": repr(float(model.kernel.coef0)),
        "nu": repr(float(model.nu)),
        "rho": repr(float(model.rho)),
        "n_train": str(model.n_train),
    }
    with open(d / "meta.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "value"])
        for k, v in meta.items():
            writer.writerow([k, v])


def load_model(directory: str | Path) -> OcsvmModel:
    d = Path(directory)
    with open(d / "svs.csv", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    svs = np.array([[float(v) for v in r] for r in rows])
    with open(d / "alphas.csv", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    alphas = np.array([float(r[0]) for r in rows])
    with open(d / "meta.csv", newline="") as fh:
        meta = {k: v for k, v in list(csv.reader(fh))[1:]}
    kind = KernelKind(meta["kernel"])
    spec = _make_spec(
        kind,
        float(meta["gamma"]) if meta["gamma"] else 0.0,
        int(meta["degree"]) if meta["degree"] else 3,
        float(meta["coef0"]),
    )
    return OcsvmModel(
        support_vectors=svs,
        alphas=alphas,
        rho=float(meta["rho"]),
        nu=float(meta["nu"]),
        kernel=spec,
        n_train=int(meta["n_train"]),
    )
