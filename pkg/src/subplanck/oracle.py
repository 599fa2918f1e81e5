"""Brute-force reference path in a truncated number (Fock) basis.

Every state is built explicitly as a vector of ``n_max + 1`` amplitudes and
carries a bound on the probability lost to truncation, so comparisons
against the closed forms can use principled tolerances.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .states import (
    CatStateSpec,
    Convention,
    as_amplitude,
    as_displacement,
    coherent_inner,
    component_phasors,
    norm_squared,
)

__all__ = [
    "DEFAULT_TAIL_THRESHOLD",
    "TruncationError",
    "FockVector",
    "recommended_n_max",
    "annihilation_matrix",
    "coherent_fock",
    "displacement_matrix",
    "displacement_matrix_expm",
    "displace_fock",
    "cat_fock",
    "overlap_fock_oracle",
    "displaced_pair_overlap",
    "displaced_components",
    "superposition_inner",
    "displaced_pair_overlap_closed",
    "wigner_fock",
]

DEFAULT_TAIL_THRESHOLD = 1e-12
_PATH_AGREEMENT = 1e-10


class TruncationError(ValueError):
    """The number basis is too small for the requested state."""


@dataclass(frozen=True)
class FockVector:
    coeffs: np.ndarray
    tail_bound: float

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: "FockVector") -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.coeffs, other.coeffs))

    def error_bound(self, other: "FockVector") -> float:
        """Bound on ``|<self|other> - <self_exact|other_exact>|`` from the truncation tails."""
        a, b = self.tail_bound, other.tail_bound
        return math.sqrt(a) + math.sqrt(b) + math.sqrt(a * b)


def recommended_n_max(alpha_mag: float) -> int:
    """Truncation leaving a Poisson tail well below 1e-12 for ``|alpha|``."""
    return math.ceil(alpha_mag**2 + 8.0 * alpha_mag + 16.0)


@functools.lru_cache(maxsize=16)
def annihilation_matrix(n_max: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)
    a.setflags(write=False)
    return a


def coherent_fock(alpha, n_max: int, threshold: float = DEFAULT_TAIL_THRESHOLD) -> FockVector:
    """Number-basis amplitudes ``exp(-|alpha|^2/2) alpha^m / sqrt(m!)``.

    Built by the running recurrence ``c_m = c_{m-1} alpha / sqrt(m)``.
    Raises ``TruncationError`` if the discarded probability exceeds ``threshold``.
    """
    alpha = as_amplitude(alpha).value
    coeffs = np.empty(n_max + 1, dtype=complex)
    coeffs[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for m in range(1, n_max + 1):
        coeffs[m] = coeffs[m - 1] * alpha / math.sqrt(m)
    tail = max(0.0, 1.0 - math.fsum(np.abs(coeffs) ** 2))
    if tail > threshold:
        raise TruncationError(
            f"n_max={n_max} leaves probability {tail:.3g} above threshold {threshold:.3g} "
            f"for |alpha|={abs(alpha):.4g}; use n_max >= {recommended_n_max(abs(alpha))}"
        )
    return FockVector(coeffs, tail)


@functools.lru_cache(maxsize=64)
def _displacement_matrix_cached(delta: complex, n_max: int) -> np.ndarray:
    size = n_max + 1
    if delta == 0:
        d = np.eye(size, dtype=complex)
        d.setflags(write=False)
        return d
    x = abs(delta) ** 2
    offsets = np.arange(size, dtype=float)
    # f[k, s] = sqrt(k!/(k+s)!) L_k^(s)(x) |delta|^s exp(-x/2), i.e. |<k+s|D|k>|
    # up to sign, advanced in k by the normalized Laguerre recurrence
    f = np.zeros((size, size))
    f[0] = np.exp(offsets * math.log(abs(delta)) - 0.5 * x - 0.5 * gammaln(offsets + 1.0))
    if size > 1:
        f[1] = (1.0 + offsets - x) * f[0] / np.sqrt(1.0 + offsets)
    for k in range(1, size - 1):
        f[k + 1] = (
            (2 * k + 1 + offsets - x) * f[k] - np.sqrt(k * (k + offsets)) * f[k - 1]
        ) / np.sqrt((k + 1) * (k + 1 + offsets))
    d = np.zeros((size, size), dtype=complex)
    phase = np.exp(1j * offsets * cmath.phase(delta))
    for s in range(size):
        k = np.arange(size - s)
        d[k + s, k] = phase[s] * f[k, s]
    # <m|D|k> = (-1)^(m+k) conj(<k|D|m>) fills the upper triangle
    m, k = np.triu_indices(size, 1)
    d[m, k] = np.where((m + k) % 2 == 0, 1.0, -1.0) * d[k, m].conjugate()
    d.setflags(write=False)
    return d


def displacement_matrix(delta, n_max: int) -> np.ndarray:
    """Exact matrix elements ``<m| D(delta) |k>`` for ``m, k <= n_max``.

    For ``m >= k`` the element is
    ``sqrt(k!/m!) delta^(m-k) exp(-|delta|^2/2) L_k^(m-k)(|delta|^2)``;
    no truncation enters, unlike the matrix exponential.
    """
    return _displacement_matrix_cached(complex(as_amplitude(delta).value), int(n_max))


def displacement_matrix_expm(delta, n_max: int) -> np.ndarray:
    """``expm(delta a^dagger - delta^* a)`` with the truncated ladder operators.

    Deviates from the exact elements near the cutoff only.
    """
    delta = complex(as_amplitude(delta).value)
    a = annihilation_matrix(n_max)
    return expm(delta * a.T - delta.conjugate() * a)


def displace_fock(
    state: FockVector, delta, threshold: float = DEFAULT_TAIL_THRESHOLD, cross_check: bool = True
) -> FockVector:
    """Apply ``D(delta)``.

    The norm lost to truncation is the probability pushed past ``n_max``;
    it is added to the tail bound and must stay below ``threshold``. With
    ``cross_check`` the matrix-exponential construction must agree to 1e-10.
    """
    delta = as_displacement(delta).value
    if delta == 0:
        return state
    out = displacement_matrix(delta, state.n_max) @ state.coeffs
    leaked = max(0.0, state.norm**2 - float(np.vdot(out, out).real))
    tail = state.tail_bound + leaked
    if tail > threshold:
        raise TruncationError(
            f"displacement by {delta:.4g} needs more headroom than n_max={state.n_max} "
            f"(tail {tail:.3g} > {threshold:.3g})"
        )
    if cross_check:
        alt = displacement_matrix_expm(delta, state.n_max) @ state.coeffs
        gap = float(np.max(np.abs(alt - out)))
        if gap > _PATH_AGREEMENT:
            raise TruncationError(f"displacement constructions disagree by {gap:.3g}")
    return FockVector(out, tail)


def cat_fock(spec: CatStateSpec, n_max: int, threshold: float = DEFAULT_TAIL_THRESHOLD) -> FockVector:
    """``(1/sqrt(n)) sum_j c_j |alpha_j>`` in the number basis, normalized per convention."""
    alpha = spec.alpha.value
    weights = spec.weights
    coeffs = np.zeros(n_max + 1, dtype=complex)
    tail_amp = 0.0
    for c, u in zip(weights, component_phasors(spec)):
        comp = coherent_fock(u * alpha, n_max, threshold)
        coeffs += c * comp.coeffs
        tail_amp += math.sqrt(comp.tail_bound)
    coeffs /= math.sqrt(spec.n)
    tail = tail_amp**2 / spec.n
    if spec.convention is Convention.TRUE_NORMALIZED:
        norm = float(np.linalg.norm(coeffs))
        coeffs /= norm
        tail /= norm**2
    return FockVector(coeffs, tail)


def overlap_fock_oracle(
    spec: CatStateSpec, delta, n_max: int, threshold: float = DEFAULT_TAIL_THRESHOLD
) -> complex:
    """``<cat| D(delta) |cat>`` from explicit number-basis vectors."""
    cat = cat_fock(spec, n_max, threshold)
    return cat.inner(displace_fock(cat, delta, threshold))


def displaced_pair_overlap(
    spec: CatStateSpec, delta_bra, delta_ket, n_max: int, threshold: float = DEFAULT_TAIL_THRESHOLD
) -> complex:
    """``<cat| D(delta_bra)^dagger D(delta_ket) |cat>`` with both sides displaced separately."""
    cat = cat_fock(spec, n_max, threshold)
    return displace_fock(cat, delta_bra, threshold).inner(displace_fock(cat, delta_ket, threshold))


def wigner_fock(state: FockVector, beta, threshold: float = DEFAULT_TAIL_THRESHOLD) -> float:
    """Wigner function ``(2/pi) <psi| D(beta) P D(beta)^dagger |psi>`` with parity ``P``."""
    shifted = displace_fock(state, -as_amplitude(beta).value, threshold, cross_check=False)
    parity = np.where(np.arange(state.n_max + 1) % 2 == 0, 1.0, -1.0)
    return 2.0 / math.pi * float(np.sum(parity * np.abs(shifted.coeffs) ** 2))


def displaced_components(spec: CatStateSpec, delta) -> tuple[np.ndarray, np.ndarray]:
    """Positions and weights of ``D(delta)|cat>`` as a coherent superposition.

    ``D(delta)|beta> = exp(i Im(delta beta^*)) |beta + delta>``; weights carry
    the ``1/sqrt(n)`` prefactor and, for exact normalization, the norm.
    """
    d = as_displacement(delta).value
    points = component_phasors(spec) * spec.alpha.value
    weights = spec.weights / math.sqrt(spec.n)
    if spec.convention is Convention.TRUE_NORMALIZED:
        weights = weights / math.sqrt(norm_squared(spec))
    phases = np.exp(1j * (d * points.conjugate()).imag)
    return points + d, weights * phases


def superposition_inner(bra: tuple[np.ndarray, np.ndarray], ket: tuple[np.ndarray, np.ndarray]) -> complex:
    """``<bra|ket>`` for two finite coherent superpositions ``(positions, weights)``."""
    bra_pts, bra_w = bra
    ket_pts, ket_w = ket
    terms = [
        (np.conj(wb) * wk * coherent_inner(complex(b), complex(k)))
        for b, wb in zip(bra_pts, bra_w)
        for k, wk in zip(ket_pts, ket_w)
    ]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def displaced_pair_overlap_closed(spec: CatStateSpec, delta_bra, delta_ket) -> complex:
    """``<cat| D(delta_bra)^dagger D(delta_ket) |cat>`` from coherent-state inner products."""
    return superposition_inner(displaced_components(spec, delta_bra), displaced_components(spec, delta_ket))
