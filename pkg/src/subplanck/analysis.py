"""Figure curves, convergence metrics and the ring-source coherence mapping."""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .overlap import ALL, OFF_DIAGONAL, overlap_asymptotic, overlap_exact
from .specfun import bessel_j0
from .states import CatStateSpec, ComplexAmplitude, Convention, Displacement

__all__ = [
    "CurveSeries",
    "VczParams",
    "thread_count",
    "offdiag_curve",
    "convergence_curve",
    "bessel_reference",
    "first_zero",
    "threshold_crossing",
    "sup_deviation",
    "l2_deviation",
    "vcz_coherence",
    "vcz_correspondence_report",
]

PERPENDICULAR = math.pi / 2


def thread_count() -> int:
    """Worker threads from ``SUBPLANCK_THREADS`` (unset or 0 means one per CPU)."""
    raw = os.environ.get("SUBPLANCK_THREADS", "0").strip() or "0"
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"SUBPLANCK_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError("SUBPLANCK_THREADS must be >= 0")
    return value or (os.cpu_count() or 1)


def _ordered_map(fn: Callable, items: Sequence) -> list:
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass
class CurveSeries:
    label: str
    x: np.ndarray
    y: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if len(self.x) > 1 and not np.all(np.diff(self.x) > 0):
            raise ValueError("x must be strictly increasing")
        if not np.all(np.isfinite(self.y)):
            raise ValueError(f"non-finite values in series {self.label!r}")

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist()))

    def header(self) -> str:
        fields = " ".join(f"{k}={v}" for k, v in self.metadata.items())
        return f"# {self.label} {fields}".rstrip()

    def to_csv(self, x_name: str = "x", y_name: str = "y") -> str:
        buf = io.StringIO()
        buf.write(self.header() + "\n")
        buf.write(f"{x_name},{y_name}\n")
        for xv, yv in zip(self.x.tolist(), self.y.tolist()):
            buf.write(f"{xv!r},{yv!r}\n")
        return buf.getvalue()


def _anchor(alpha_mag: float, alpha_phase: float = 0.0) -> ComplexAmplitude:
    if not alpha_mag > 0:
        raise ValueError(f"|alpha| must be positive, got {alpha_mag!r}")
    return ComplexAmplitude.from_polar(alpha_mag, alpha_phase)


def offdiag_curve(
    alpha_mag: float,
    delta_mag: float = 0.2,
    n_values: Iterable[int] = range(1, 41),
    theta: float = PERPENDICULAR,
    alpha_phase: float = 0.0,
) -> CurveSeries:
    """``|off-diagonal part of <cat|D(delta)|cat>|`` against ``n``.

    ``theta`` is the angle of ``delta`` relative to ``alpha``; the default
    is perpendicular.
    """
    n_values = [int(n) for n in n_values]
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly ascending")
    alpha = _anchor(alpha_mag, alpha_phase)
    delta = Displacement.from_polar(delta_mag, alpha_phase + theta)

    def point(n: int) -> float:
        return abs(overlap_exact(CatStateSpec(n, alpha), delta, OFF_DIAGONAL).value)

    ys = _ordered_map(point, n_values)
    meta = {"alpha": alpha_mag, "delta": delta_mag, "theta": theta, "mask": "offdiagonal", "tier": "exact"}
    return CurveSeries(f"offdiag alpha={alpha_mag:g}", n_values, ys, meta)


def convergence_curve(
    alpha_mag: float,
    n: int,
    delta_grid: Sequence[float],
    part: str = "real",
    theta: float = PERPENDICULAR,
    alpha_phase: float = 0.0,
    convention: Convention = Convention.PAPER_PREFACTOR,
) -> tuple[CurveSeries, CurveSeries]:
    """Exact overlap along a displacement sweep, with the ``J0`` reference.

    ``part`` selects ``"real"`` or ``"abs"`` of the complex overlap.
    Returns ``(exact, reference)`` on the same ``|delta|`` grid.
    """
    if part not in ("real", "abs"):
        raise ValueError(f"part must be 'real' or 'abs', got {part!r}")
    grid = np.asarray(delta_grid, dtype=float)
    spec = CatStateSpec(n, _anchor(alpha_mag, alpha_phase), convention=convention)

    def point(d: float) -> float:
        value = overlap_exact(spec, Displacement.from_polar(d, alpha_phase + theta), ALL).value
        return value.real if part == "real" else abs(value)

    ys = _ordered_map(point, grid.tolist())
    meta = {"n": n, "alpha": alpha_mag, "theta": theta, "tier": "exact", "part": part}
    return CurveSeries(f"exact n={n}", grid, ys, meta), bessel_reference(alpha_mag, grid)


def bessel_reference(alpha_mag: float, delta_grid: Sequence[float]) -> CurveSeries:
    grid = np.asarray(delta_grid, dtype=float)
    ys = [overlap_asymptotic(alpha_mag, d).real for d in grid.tolist()]
    return CurveSeries("J0(2|alpha||delta|)", grid, ys, {"alpha": alpha_mag, "tier": "asymptotic"})


def first_zero(series: CurveSeries) -> float | None:
    """Linearly interpolated first sign change, or ``None`` if the curve never changes sign.

    A sample that is exactly zero counts as the crossing itself.
    """
    x, y = series.x, series.y
    for i in range(len(y)):
        if y[i] == 0.0:
            return float(x[i])
        if i + 1 < len(y) and (y[i] > 0) != (y[i + 1] > 0) and y[i + 1] != 0.0:
            return float(x[i] - y[i] * (x[i + 1] - x[i]) / (y[i + 1] - y[i]))
    return None


def threshold_crossing(series: CurveSeries, level: float) -> float | None:
    """First ``x`` whose ``y`` exceeds ``level``."""
    above = np.flatnonzero(series.y > level)
    return float(series.x[above[0]]) if len(above) else None


def _aligned(a: CurveSeries, b: CurveSeries) -> np.ndarray:
    if a.x.shape != b.x.shape or not np.array_equal(a.x, b.x):
        raise ValueError("series must share the same x grid")
    return a.y - b.y


def sup_deviation(a: CurveSeries, b: CurveSeries) -> float:
    return float(np.max(np.abs(_aligned(a, b))))


def l2_deviation(a: CurveSeries, b: CurveSeries) -> float:
    """Root-mean-square difference over the shared grid."""
    diff = _aligned(a, b)
    return float(np.sqrt(np.mean(diff**2)))


@dataclass(frozen=True)
class VczParams:
    """Ring source of radius ``r0`` seen at distance ``R``; ``separation`` between the two points."""

    r0: float
    R: float
    wavelength: float
    separation: float

    def __post_init__(self):
        if not (self.r0 > 0 and self.R > 0 and self.wavelength > 0):
            raise ValueError("r0, R and wavelength must be positive")
        if self.separation < 0:
            raise ValueError("separation must be non-negative")


def vcz_coherence(params: VczParams) -> float:
    """Degree of coherence ``J0(2 pi r0 s / (lambda R))`` behind a thin ring."""
    return bessel_j0(2.0 * math.pi * params.r0 * params.separation / (params.wavelength * params.R))


def vcz_correspondence_report(
    alpha_mag: float, wavelength: float, separations: Sequence[float]
) -> tuple[CurveSeries, CurveSeries]:
    """Large-``n`` overlap next to the ring-source coherence on one axis.

    The overlap side uses ``[a, a^dagger] = pi / lambda``: both amplitudes are
    rescaled by ``sqrt(pi / lambda)`` before ``J0(2|alpha||delta|)`` is taken.
    The coherence side maps ``r0 = |alpha|``, ``separation = |delta|``, ``R = 1``.
    """
    if not wavelength > 0:
        raise ValueError("wavelength must be positive")
    grid = np.asarray(separations, dtype=float)
    scale = math.sqrt(math.pi / wavelength)
    quantum = [overlap_asymptotic(alpha_mag * scale, s * scale).real for s in grid.tolist()]
    optical = [vcz_coherence(VczParams(alpha_mag, 1.0, wavelength, s)) for s in grid.tolist()]
    meta = {"alpha": alpha_mag, "lambda": wavelength, "R": 1}
    return (
        CurveSeries("overlap asymptotic", grid, quantum, dict(meta, tier="asymptotic")),
        CurveSeries("ring coherence", grid, optical, dict(meta, tier="vcz")),
    )
