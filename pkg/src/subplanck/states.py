"""Cat states built from coherent states placed on a circle in phase space.

Convention: ``[a, a^dagger] = 1`` and ``D(beta) = exp(beta a^dagger - beta^* a)``.
A state is ``(1/sqrt(n)) * sum_j c_j |exp(i phi_j) alpha>`` where by default
``phi_j = 2 pi j / n`` for ``j = 1..n`` and every ``c_j = 1``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "ComplexAmplitude",
    "Convention",
    "CatStateSpec",
    "Displacement",
    "as_amplitude",
    "as_displacement",
    "root_of_unity",
    "component_positions",
    "component_phasors",
    "norm_squared",
    "true_norm",
]

UNIT_MODULUS_TOL = 1e-12


@dataclass(frozen=True)
class ComplexAmplitude:
    """A point in phase space, in dimensionless quadrature units."""

    re: float
    im: float = 0.0

    def __post_init__(self):
        re, im = float(self.re), float(self.im)
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValueError(f"amplitude must be finite, got {re!r} + {im!r}i")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @classmethod
    def from_polar(cls, magnitude: float, phase: float = 0.0) -> "ComplexAmplitude":
        z = cmath.rect(magnitude, phase)
        return cls(z.real, z.imag)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def abs(self) -> float:
        return math.hypot(self.re, self.im)

    @property
    def arg(self) -> float:
        """Phase in (-pi, pi]."""
        phase = math.atan2(self.im, self.re)
        return math.pi if phase == -math.pi else phase

    def __complex__(self) -> complex:
        return self.value

    def __abs__(self) -> float:
        return self.abs


AmplitudeLike = Union[ComplexAmplitude, complex, float, int]


def as_amplitude(z: AmplitudeLike) -> ComplexAmplitude:
    if isinstance(z, ComplexAmplitude):
        return z
    if isinstance(z, Displacement):
        return z.delta
    z = complex(z)
    return ComplexAmplitude(z.real, z.imag)


class Convention(enum.Enum):
    """Normalization of the superposition.

    ``PAPER_PREFACTOR`` keeps the bare ``1/sqrt(n)`` weight, which is only
    approximately unit norm because distinct coherent states overlap.
    ``TRUE_NORMALIZED`` divides by the exact norm.
    """

    PAPER_PREFACTOR = "paper"
    TRUE_NORMALIZED = "true"


@dataclass(frozen=True)
class CatStateSpec:
    """Superposition of ``n`` coherent states on a circle of radius ``|alpha|``.

    Parameters
    ----------
    n : int
        Number of coherent components, ``n >= 1``.
    alpha : ComplexAmplitude or complex
        Anchor amplitude. Component ``j`` sits at ``exp(i phi_j) * alpha``.
    coeffs : sequence of complex, optional
        Unit-modulus weights ``c_j``, one per component. Default all ones.
    convention : Convention
        How the state is normalized.
    angles : sequence of float, optional
        Override for the component angles ``phi_j``. Default ``2 pi j / n``.
        Used for pairs that are not diametrically opposite.
    """

    n: int
    alpha: ComplexAmplitude
    coeffs: tuple[complex, ...] | None = None
    convention: Convention = Convention.PAPER_PREFACTOR
    angles: tuple[float, ...] | None = None

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "alpha", as_amplitude(self.alpha))
        if not isinstance(self.convention, Convention):
            object.__setattr__(self, "convention", Convention(self.convention))
        if self.coeffs is not None:
            coeffs = tuple(complex(c) for c in self.coeffs)
            if len(coeffs) != self.n:
                raise ValueError(f"expected {self.n} coefficients, got {len(coeffs)}")
            for c in coeffs:
                if not (cmath.isfinite(c) and abs(abs(c) - 1.0) <= UNIT_MODULUS_TOL):
                    raise ValueError(f"coefficients must have unit modulus, got {c!r}")
            object.__setattr__(self, "coeffs", coeffs)
        if self.angles is not None:
            angles = tuple(float(a) for a in self.angles)
            if len(angles) != self.n:
                raise ValueError(f"expected {self.n} angles, got {len(angles)}")
            if not all(math.isfinite(a) for a in angles):
                raise ValueError("angles must be finite")
            object.__setattr__(self, "angles", angles)

    @property
    def is_uniform(self) -> bool:
        """True for the plain circular cat: default angles, all weights one."""
        return self.angles is None and (self.coeffs is None or all(c == 1 for c in self.coeffs))

    @property
    def weights(self) -> np.ndarray:
        if self.coeffs is None:
            return np.ones(self.n, dtype=complex)
        return np.array(self.coeffs, dtype=complex)

    def with_convention(self, convention: Convention) -> "CatStateSpec":
        return CatStateSpec(self.n, self.alpha, self.coeffs, convention, self.angles)

    def rotated(self, angle: float) -> "CatStateSpec":
        """Same state with the anchor rotated by ``angle``."""
        alpha = ComplexAmplitude.from_polar(self.alpha.abs, self.alpha.arg + angle)
        return CatStateSpec(self.n, alpha, self.coeffs, self.convention, self.angles)


@dataclass(frozen=True)
class Displacement:
    """Phase-space shift ``delta`` with components measured against an anchor."""

    delta: ComplexAmplitude

    def __post_init__(self):
        object.__setattr__(self, "delta", as_amplitude(self.delta))

    @classmethod
    def from_polar(cls, magnitude: float, phase: float = 0.0) -> "Displacement":
        return cls(ComplexAmplitude.from_polar(magnitude, phase))

    @classmethod
    def from_components(cls, alpha: AmplitudeLike, perp: float, par: float = 0.0) -> "Displacement":
        """Build ``delta`` from its parts perpendicular and parallel to ``alpha``."""
        alpha = as_amplitude(alpha)
        direction = cmath.exp(1j * alpha.arg)
        return cls(as_amplitude(direction * complex(par, perp)))

    @property
    def value(self) -> complex:
        return self.delta.value

    @property
    def abs(self) -> float:
        return self.delta.abs

    def r(self, alpha: AmplitudeLike) -> float:
        return as_amplitude(alpha).abs * self.delta.abs

    def theta(self, alpha: AmplitudeLike) -> float:
        return self.delta.arg - as_amplitude(alpha).arg

    def perp(self, alpha: AmplitudeLike) -> float:
        return self.delta.abs * math.sin(self.theta(alpha))

    def par(self, alpha: AmplitudeLike) -> float:
        return self.delta.abs * math.cos(self.theta(alpha))

    def __complex__(self) -> complex:
        return self.value


def as_displacement(delta: Union[Displacement, AmplitudeLike]) -> Displacement:
    if isinstance(delta, Displacement):
        return delta
    return Displacement(as_amplitude(delta))


def root_of_unity(m: int, n: int) -> complex:
    """``exp(2 pi i m / n)`` with the index reduced exactly before any trig.

    Multiples of a quarter turn come out exact, so ``m = n`` gives ``1+0j``
    and the values for ``m`` and ``-m`` are exact conjugates.
    """
    m = int(m) % n
    if 2 * m > n:
        return root_of_unity(n - m, n).conjugate()
    if 4 * m == n:
        return 1j
    if 2 * m == n:
        return -1 + 0j
    if m == 0:
        return 1 + 0j
    if 4 * m > n:
        # reflect through the imaginary axis: angle pi - x keeps the argument small
        z = root_of_unity(n - 2 * m, 2 * n)
        return complex(-z.real, z.imag)
    angle = 2.0 * math.pi * m / n
    return complex(math.cos(angle), math.sin(angle))


def component_phasors(spec: CatStateSpec) -> np.ndarray:
    """Unit phasors ``exp(i phi_j)`` in index order ``j = 1..n``."""
    if spec.angles is not None:
        return np.exp(1j * np.asarray(spec.angles))
    return np.array([root_of_unity(j, spec.n) for j in range(1, spec.n + 1)])


def component_positions(spec: CatStateSpec) -> list[ComplexAmplitude]:
    """Coherent amplitudes of the components, ``j = 1..n`` in order."""
    alpha = spec.alpha.value
    return [as_amplitude(u * alpha) for u in component_phasors(spec)]


def coherent_inner(bra: complex, ket: complex) -> complex:
    """``<bra|ket>`` for two coherent states."""
    return cmath.exp(-0.5 * abs(bra) ** 2 - 0.5 * abs(ket) ** 2 + bra.conjugate() * ket)


def norm_squared(spec: CatStateSpec) -> float:
    """Squared norm of the superposition with the bare ``1/sqrt(n)`` weight."""
    alpha = spec.alpha.value
    points = component_phasors(spec) * alpha
    w = spec.weights
    # pair (j, k) and (k, j) are conjugates, so only the real part survives
    terms = [
        (w[j].conjugate() * w[k] * coherent_inner(points[j], points[k])).real
        for j in range(spec.n)
        for k in range(spec.n)
    ]
    return math.fsum(terms) / spec.n


def true_norm(spec: CatStateSpec) -> float:
    """Exact norm of ``(1/sqrt(n)) sum_j c_j |alpha_j>``."""
    return math.sqrt(norm_squared(spec))
