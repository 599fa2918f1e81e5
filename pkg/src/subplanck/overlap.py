"""Overlap of a cat state with its displaced copy, ``<cat| D(delta) |cat>``.

Tiers, from exact to asymptotic:

* ``overlap_exact`` -- the full double sum over component pairs ``(j, k)``.
* ``overlap_exact_polar`` -- the same sum written with ``r = |alpha||delta|``
  and ``theta = arg(delta) - arg(alpha)``; an independent code path.
* ``overlap_band`` -- every pair treated as if ``j ~ k`` (raw, unnormalized).
* ``overlap_diagonal`` -- only ``j = k`` pairs, optionally without envelope.
* ``overlap_asymptotic`` -- the ``n -> infinity`` limit ``J0(2 |alpha||delta|)``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import bessel_j0
from .states import (
    CatStateSpec,
    Convention,
    Displacement,
    as_amplitude,
    as_displacement,
    component_phasors,
)

__all__ = [
    "MaskKind",
    "SumMask",
    "ALL",
    "DIAGONAL",
    "OFF_DIAGONAL",
    "Tier",
    "OverlapResult",
    "pair_terms",
    "overlap_exact",
    "overlap_exact_polar",
    "overlap_band",
    "overlap_diagonal",
    "overlap_asymptotic",
    "cat2_perp_intensity",
    "cat2_rotated_intensity",
    "cat2_phased_spec",
    "cat2_phased_intensity",
    "rotated_pair_spec",
]


class MaskKind(enum.Enum):
    ALL = "all"
    DIAGONAL = "diagonal"
    OFF_DIAGONAL = "offdiagonal"
    BAND = "band"


@dataclass(frozen=True)
class SumMask:
    """Selects ``(j, k)`` pairs by circular index distance ``min(|j-k|, n-|j-k|)``.

    ``BAND`` keeps pairs with distance ``<= width``.
    """

    kind: MaskKind = MaskKind.ALL
    width: int | None = None

    def __post_init__(self):
        kind = MaskKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is MaskKind.BAND:
            if self.width is None or int(self.width) != self.width or self.width < 0:
                raise ValueError(f"band width must be a non-negative integer, got {self.width!r}")
            object.__setattr__(self, "width", int(self.width))
        elif self.width is not None:
            raise ValueError(f"width only applies to band masks, not {kind.value}")

    @classmethod
    def band(cls, width: int) -> "SumMask":
        return cls(MaskKind.BAND, width)

    @classmethod
    def parse(cls, text: str) -> "SumMask":
        """Parse ``all``, ``diagonal``, ``offdiagonal`` or ``band:<w>``."""
        text = text.strip().lower()
        if text.startswith("band"):
            _, _, width = text.partition(":")
            try:
                return cls.band(int(width))
            except ValueError:
                raise ValueError(f"bad band mask {text!r}, expected band:<width>") from None
        return cls(MaskKind(text))

    def __str__(self):
        if self.kind is MaskKind.BAND:
            return f"band:{self.width}"
        return self.kind.value

    def check(self, n: int) -> None:
        if self.kind is MaskKind.BAND and self.width > n:
            raise ValueError(f"band width {self.width} exceeds n = {n}")

    def matrix(self, n: int) -> np.ndarray:
        """Boolean ``n x n`` selection matrix."""
        self.check(n)
        idx = np.arange(n)
        gap = np.abs(idx[:, None] - idx[None, :])
        dist = np.minimum(gap, n - gap)
        if self.kind is MaskKind.ALL:
            return np.ones((n, n), dtype=bool)
        if self.kind is MaskKind.DIAGONAL:
            return dist == 0
        if self.kind is MaskKind.OFF_DIAGONAL:
            return dist != 0
        return dist <= self.width


ALL = SumMask(MaskKind.ALL)
DIAGONAL = SumMask(MaskKind.DIAGONAL)
OFF_DIAGONAL = SumMask(MaskKind.OFF_DIAGONAL)


class Tier(enum.Enum):
    EXACT_CARTESIAN = "exact"
    EXACT_POLAR = "polar"
    BAND_APPROX = "band"
    DIAGONAL_APPROX = "diagonal"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class OverlapResult:
    value: complex
    tier: Tier
    mask: SumMask = field(default=ALL)

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)

    @property
    def real(self) -> float:
        return complex(self.value).real


def _wrap(phase):
    """Reduce angles to [-pi, pi], odd-symmetric so that ``_wrap(-x) == -_wrap(x)``."""
    phase = np.asarray(phase, dtype=float)
    mag = np.abs(phase)
    reduced = np.where(mag > np.pi, mag - 2.0 * np.pi * np.round(mag / (2.0 * np.pi)), mag)
    return np.sign(phase) * reduced


def _ordered_sum(values: np.ndarray) -> complex:
    """Row-major, correctly rounded sum of a complex array."""
    flat = np.ravel(values)
    return complex(math.fsum(flat.real.tolist()), math.fsum(flat.imag.tolist()))


def pair_terms(spec: CatStateSpec, delta) -> np.ndarray:
    """``n x n`` matrix of ``(1/n) conj(c_j) c_k <alpha_j| D(delta) |alpha_k>``.

    Uses ``D(delta)|beta> = exp(i Im(delta beta^*)) |beta + delta>`` and the
    coherent-state inner product, giving for the pair ``(j, k)``

        exp(i Im(delta alpha^* (u_j^* + u_k^*)) + i |alpha|^2 Im(u_j^* u_k))
        * exp(-|delta + alpha (u_k - u_j)|^2 / 2)

    with ``u_j = exp(i phi_j)``.
    """
    d = as_displacement(delta).value
    a = spec.alpha.value
    u = component_phasors(spec)
    uj = u[:, None]
    uk = u[None, :]
    phase = (d * a.conjugate() * (uj.conjugate() + uk.conjugate())).imag
    phase = phase + abs(a) ** 2 * (uj.conjugate() * uk).imag
    gauss = np.abs(d + a * (uk - uj)) ** 2
    phase = _wrap(phase)
    terms = np.exp(-0.5 * gauss) * (np.cos(phase) + 1j * np.sin(phase))
    w = spec.weights
    terms = terms * (w.conjugate()[:, None] * w[None, :])
    return terms / spec.n


def _normalize(spec: CatStateSpec, value: complex, norm_sq: float) -> complex:
    if spec.convention is Convention.TRUE_NORMALIZED:
        return value / norm_sq
    return value


def overlap_exact(spec: CatStateSpec, delta, mask: SumMask = ALL) -> OverlapResult:
    """Exact ``<cat| D(delta) |cat>`` restricted to the pairs selected by ``mask``.

    Terms are accumulated row-major (``j`` then ``k``) with a correctly
    rounded sum, so results are bit-stable and independent of ``n``.
    """
    mask.check(spec.n)
    terms = pair_terms(spec, delta)
    value = _ordered_sum(terms[mask.matrix(spec.n)])
    if spec.convention is Convention.TRUE_NORMALIZED:
        norm_sq = _ordered_sum(pair_terms(spec, 0.0)).real
        value = _normalize(spec, value, norm_sq)
    return OverlapResult(value, Tier.EXACT_CARTESIAN, mask)


def _polar_terms(spec: CatStateSpec, delta: Displacement) -> np.ndarray:
    n = spec.n
    r = delta.r(spec.alpha)
    theta = delta.theta(spec.alpha)
    a2 = spec.alpha.abs ** 2
    j = np.arange(1, n + 1)[:, None]
    k = np.arange(1, n + 1)[None, :]
    diff = j - k
    half_diff = np.pi * diff / n
    tilt = np.sin(theta - np.pi * (j + k) / n)
    # ring separation 1 - cos(2x) written as 2 sin^2(x) to avoid cancellation
    sep = 2.0 * np.sin(half_diff) ** 2
    phase = 2.0 * r * np.cos(half_diff) * tilt + a2 * np.sin(2.0 * half_diff)
    gauss = delta.abs ** 2 + 2.0 * a2 * sep + 4.0 * r * np.sin(half_diff) * tilt
    phase = _wrap(phase)
    return np.exp(-0.5 * gauss) * (np.cos(phase) + 1j * np.sin(phase)) / n


def overlap_exact_polar(spec: CatStateSpec, delta, mask: SumMask = ALL) -> OverlapResult:
    """Exact overlap through the ``(r, theta)`` parametrization.

    The ``(j, k)`` entry here equals the ``(k, j)`` entry of ``pair_terms``;
    since every mask is symmetric the selected sums agree.
    """
    if not spec.is_uniform:
        raise ValueError("the polar form only covers the uniform cat (default angles, unit weights)")
    mask.check(spec.n)
    delta = as_displacement(delta)
    terms = _polar_terms(spec, delta)
    value = _ordered_sum(terms[mask.matrix(spec.n)])
    if spec.convention is Convention.TRUE_NORMALIZED:
        norm_sq = _ordered_sum(_polar_terms(spec, Displacement(0.0))).real
        value = _normalize(spec, value, norm_sq)
    return OverlapResult(value, Tier.EXACT_POLAR, mask)


def _require_uniform(spec: CatStateSpec, what: str) -> None:
    if not spec.is_uniform:
        raise ValueError(f"{what} is only defined for the uniform cat")


def overlap_band(spec: CatStateSpec, delta) -> OverlapResult:
    """Raw ``j ~ k`` form: ``exp(-|delta|^2/2)/n * sum_{j,k} cos(2r sin(theta - pi(j+k)/n))``.

    The small-separation simplification is applied to every pair, including
    distant ones where it does not hold, so the value is not an overlap:
    at ``delta = 0`` it equals ``n``. It is only meaningful as a shape
    near ``delta = 0`` for large ``|alpha|``.
    """
    _require_uniform(spec, "the band approximation")
    delta = as_displacement(delta)
    n = spec.n
    r = delta.r(spec.alpha)
    theta = delta.theta(spec.alpha)
    j = np.arange(1, n + 1)[:, None]
    k = np.arange(1, n + 1)[None, :]
    arg = _wrap(2.0 * r * np.sin(_wrap(theta - np.pi * (j + k) / n)))
    total = math.fsum(np.cos(arg).ravel().tolist())
    value = math.exp(-0.5 * delta.abs ** 2) * total / n
    return OverlapResult(complex(value), Tier.BAND_APPROX, SumMask.band(n))


def overlap_diagonal(spec: CatStateSpec, delta, envelope: bool = False) -> OverlapResult:
    """Diagonal-pairs overlap ``(1/n) sum_j cos(2r sin(theta - 2 pi j/n))``.

    With ``envelope=True`` the factor ``exp(-|delta|^2/2)`` is kept.
    """
    _require_uniform(spec, "the diagonal approximation")
    delta = as_displacement(delta)
    n = spec.n
    r = delta.r(spec.alpha)
    theta = delta.theta(spec.alpha)
    j = np.arange(1, n + 1)
    cosines = np.cos(_wrap(2.0 * r * np.sin(_wrap(theta - 2.0 * np.pi * j / n))))
    value = math.fsum(cosines.tolist()) / n
    if n % 2 == 0:
        half = 2.0 * math.fsum(cosines[: n // 2].tolist()) / n
        # opposite components contribute equal cosines
        assert abs(half - value) <= 1e-12 * max(1.0, abs(value)), (half, value)
    if envelope:
        value *= math.exp(-0.5 * delta.abs ** 2)
    return OverlapResult(complex(value), Tier.DIAGONAL_APPROX, DIAGONAL)


def overlap_asymptotic(alpha, delta) -> OverlapResult:
    """Large-``n`` limit ``J0(2 |alpha| |delta|)``."""
    x = 2.0 * as_amplitude(alpha).abs * as_displacement(delta).abs
    return OverlapResult(complex(bessel_j0(x)), Tier.ASYMPTOTIC, ALL)


def cat2_perp_intensity(alpha, delta) -> float:
    """``cos^2(2 |alpha| delta_perp)`` for the two-component cat."""
    alpha = as_amplitude(alpha)
    perp = as_displacement(delta).perp(alpha)
    return math.cos(2.0 * alpha.abs * perp) ** 2


def cat2_rotated_intensity(alpha, phi: float, delta) -> float:
    """Fringe intensity of the pair ``|alpha>, |alpha e^{i phi}>``.

    ``cos^2(2|alpha| sin(phi/2) (delta_perp sin(phi/2) + delta_par cos(phi/2)))``
    """
    alpha = as_amplitude(alpha)
    delta = as_displacement(delta)
    s, c = math.sin(phi / 2.0), math.cos(phi / 2.0)
    arg = 2.0 * alpha.abs * s * (delta.perp(alpha) * s + delta.par(alpha) * c)
    return math.cos(arg) ** 2


def rotated_pair_spec(alpha, phi: float, convention: Convention = Convention.PAPER_PREFACTOR) -> CatStateSpec:
    """Two components at ``alpha`` and ``alpha e^{i phi}``."""
    return CatStateSpec(2, as_amplitude(alpha), convention=convention, angles=(0.0, float(phi)))


def cat2_phased_spec(alpha, phi: float) -> CatStateSpec:
    """``|alpha> + e^{i phi} |-alpha>``, exactly normalized.

    Index ``j = 1`` is the component at ``-alpha``, ``j = 2`` the anchor.
    """
    return CatStateSpec(
        2, as_amplitude(alpha), coeffs=(cmath.exp(1j * phi), 1.0), convention=Convention.TRUE_NORMALIZED
    )


def cat2_phased_intensity(alpha, phi: float, delta) -> float:
    """``|<cat| D(delta) |cat>|^2`` for the relative-phase pair, computed exactly."""
    return abs(overlap_exact(cat2_phased_spec(alpha, phi), delta).value) ** 2


# for diagnostics and tests: the pair-term magnitudes are bounded by 1/n
def max_term_modulus(spec: CatStateSpec, delta) -> float:
    return float(np.max(np.abs(pair_terms(spec, delta))))

