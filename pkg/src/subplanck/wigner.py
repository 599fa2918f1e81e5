"""Wigner functions of cat states on rectangular phase-space grids.

Grid coordinates are ``x = Re(beta)`` and ``p = Im(beta)`` with hbar = 1, so
the vacuum is ``(2/pi) exp(-2|beta|^2)`` and a unit-norm state integrates to
one over ``dx dp``.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .states import CatStateSpec, Convention, component_phasors, norm_squared

__all__ = [
    "CoverageWarning",
    "InsufficientResolution",
    "GridGeometry",
    "WignerGrid",
    "cross_wigner",
    "wigner_values",
    "wigner_cat",
    "quadrature_norm",
    "central_tile_spacing",
    "sign_changes",
]


class CoverageWarning(UserWarning):
    """The grid window misses part of the state's phase-space support."""


class InsufficientResolution(ValueError):
    """Too few resolved sign changes to measure a tile spacing."""


@dataclass(frozen=True)
class GridGeometry:
    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    np: int

    def __post_init__(self):
        for name in ("nx", "np"):
            value = getattr(self, name)
            if int(value) != value or value < 2:
                raise ValueError(f"{name} must be an integer >= 2, got {value!r}")
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValueError("grid ranges must have positive width")

    @classmethod
    def square(cls, half_width: float, points: int) -> "GridGeometry":
        return cls(-half_width, half_width, -half_width, half_width, points, points)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, int(self.nx))

    @property
    def p(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, int(self.np))


@dataclass
class WignerGrid:
    """Samples ``values[i, j] = W(x[i] + 1j * p[j])``."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray
    expected_norm: float = 1.0
    norm_tol: float = 1e-3
    label: str = ""
    covered: bool = field(default=True)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.x), len(self.p)):
            raise ValueError(f"values shape {self.values.shape} does not match grid {len(self.x)}x{len(self.p)}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Wigner samples must be finite")

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    def to_csv(self) -> str:
        """Long format, one ``x,p,W`` row per sample, x-major."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.label:
            buf.write(f"# {self.label}\n")
        writer.writerow(["x", "p", "W"])
        for i, xv in enumerate(self.x):
            for j, pv in enumerate(self.p):
                writer.writerow([repr(float(xv)), repr(float(pv)), repr(float(self.values[i, j]))])
        return buf.getvalue()

    def to_matrix_text(self) -> str:
        """Plain whitespace-separated matrix, one row per ``x`` sample."""
        buf = io.StringIO()
        header = f"x {self.x[0]!r} {self.x[-1]!r} {len(self.x)} p {self.p[0]!r} {self.p[-1]!r} {len(self.p)}"
        np.savetxt(buf, self.values, fmt="%.17g", header=header)
        return buf.getvalue()


def cross_wigner(beta, a: complex, b: complex) -> np.ndarray:
    """Wigner function of the operator ``|a><b|`` at ``beta``.

    ``(2/pi) exp(-2i Im(beta a^*)) <b|2 beta - a>``, written so the Gaussian
    magnitude ``exp(-|2 beta - a - b|^2 / 2)`` never overflows.
    """
    beta = np.asarray(beta, dtype=complex)
    shifted = 2.0 * beta - a
    mag = np.exp(-0.5 * np.abs(shifted - b) ** 2)
    phase = (np.conj(b) * shifted).imag - 2.0 * (beta * np.conj(a)).imag
    return (2.0 / math.pi) * mag * np.exp(1j * phase)


def _norm_factor(spec: CatStateSpec) -> float:
    if spec.convention is Convention.TRUE_NORMALIZED:
        return 1.0 / norm_squared(spec)
    return 1.0


def wigner_values(spec: CatStateSpec, beta, paired: bool = True) -> np.ndarray:
    """``W(beta)`` for the cat state; complex when ``paired`` is False.

    Unpaired evaluation sums every ``(j, k)`` term as is and keeps the
    imaginary residue so realness can be checked. Paired evaluation folds
    ``(k, j)`` into ``(j, k)`` as a conjugate and returns real values.
    """
    beta = np.asarray(beta, dtype=complex)
    points = component_phasors(spec) * spec.alpha.value
    w = spec.weights
    n = spec.n
    scale = _norm_factor(spec) / n
    if not paired:
        total = np.zeros(beta.shape, dtype=complex)
        for j in range(n):
            for k in range(n):
                total += w[j] * np.conj(w[k]) * cross_wigner(beta, points[j], points[k])
        return scale * total
    total = np.zeros(beta.shape, dtype=float)
    for j in range(n):
        total += (abs(w[j]) ** 2) * cross_wigner(beta, points[j], points[j]).real
        for k in range(j + 1, n):
            total += 2.0 * (w[j] * np.conj(w[k]) * cross_wigner(beta, points[j], points[k])).real
    return scale * total


def wigner_cat(spec: CatStateSpec, geometry: GridGeometry, norm_tol: float = 1e-3) -> WignerGrid:
    """Evaluate the Wigner function of ``spec`` on ``geometry``.

    Warns with ``CoverageWarning`` when the window does not reach
    ``|alpha| + 4`` in both quadratures.
    """
    x, p = geometry.x, geometry.p
    reach = spec.alpha.abs + 4.0
    covered = min(-geometry.x_min, geometry.x_max, -geometry.p_min, geometry.p_max) >= reach
    if not covered:
        warnings.warn(
            f"grid [{geometry.x_min}, {geometry.x_max}] x [{geometry.p_min}, {geometry.p_max}] "
            f"does not cover +/-{reach:g}; the quadrature norm will be short",
            CoverageWarning,
            stacklevel=2,
        )
    beta = x[:, None] + 1j * p[None, :]
    values = wigner_values(spec, beta)
    expected = 1.0 if spec.convention is Convention.TRUE_NORMALIZED else norm_squared(spec)
    label = f"n={spec.n} alpha={spec.alpha.value} convention={spec.convention.value}"
    return WignerGrid(x, p, values, expected, norm_tol, label, covered)


def quadrature_norm(grid: WignerGrid) -> float:
    """``sum(values) dx dp``."""
    return math.fsum(grid.values.ravel().tolist()) * grid.dx * grid.dp


def sign_changes(coords: np.ndarray, values: np.ndarray, rel_floor: float = 1e-3) -> np.ndarray:
    """Linearly interpolated zero crossings of ``values``.

    Samples within ``rel_floor * max|values|`` of zero count as zero, so a
    curve that only touches zero (up to tiny perturbations) has no crossing.
    """
    coords = np.asarray(coords, dtype=float)
    values = np.asarray(values, dtype=float)
    floor = rel_floor * float(np.max(np.abs(values), initial=0.0))
    keep = np.abs(values) > floor
    idx = np.flatnonzero(keep)
    if len(idx) < 2:
        return np.empty(0)
    signs = np.sign(values[idx])
    flips = np.flatnonzero(signs[1:] != signs[:-1])
    lo, hi = idx[flips], idx[flips + 1]
    x0, x1 = coords[lo], coords[hi]
    y0, y1 = values[lo], values[hi]
    return x0 - y0 * (x1 - x0) / (y1 - y0)


def central_tile_spacing(grid: WignerGrid, axis: str = "x", window: float = 1.0, min_points: int = 8) -> float:
    """Mean distance between consecutive sign changes of W through the origin.

    ``axis="x"`` follows the row ``p = 0``; ``axis="p"`` the column ``x = 0``.
    Only ``|coordinate| < window`` is used. Raises ``InsufficientResolution``
    with fewer than three crossings or fewer than ``min_points`` samples
    per lobe.
    """
    if axis == "x":
        coords = grid.x
        line = grid.values[:, int(np.argmin(np.abs(grid.p)))]
        step = grid.dx
    elif axis == "p":
        coords = grid.p
        line = grid.values[int(np.argmin(np.abs(grid.x))), :]
        step = grid.dp
    else:
        raise ValueError(f"axis must be 'x' or 'p', got {axis!r}")
    inside = np.abs(coords) < window
    crossings = sign_changes(coords[inside], line[inside])
    if len(crossings) < 3:
        raise InsufficientResolution(
            f"found {len(crossings)} sign changes along {axis} within |{axis}| < {window}; need at least 3"
        )
    gaps = np.diff(crossings)
    if np.min(gaps) < min_points * abs(step):
        raise InsufficientResolution(
            f"lobes of width {np.min(gaps):.3g} are sampled by fewer than {min_points} points (step {abs(step):.3g})"
        )
    return float(np.mean(gaps))
