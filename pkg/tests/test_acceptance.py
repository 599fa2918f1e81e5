"""End-to-end acceptance checks; each logs one PASS/FAIL line in the terminal summary."""

import math
import time

import numpy as np
import pytest

from subplanck.analysis import (
    convergence_curve,
    first_zero,
    offdiag_curve,
    sup_deviation,
    threshold_crossing,
)
from subplanck.oracle import displaced_pair_overlap_closed, overlap_fock_oracle
from subplanck.overlap import cat2_perp_intensity, overlap_diagonal, overlap_exact, pair_terms
from subplanck.specfun import bessel_j0, j0_first_root, sensitivity_delta
from subplanck.states import CatStateSpec, ComplexAmplitude, Convention, Displacement
from subplanck.wigner import GridGeometry, central_tile_spacing, quadrature_norm, wigner_cat

from .conftest import bisect, j0_series_float

TRUE = Convention.TRUE_NORMALIZED
SEED = 20261017


def random_amplitude(rng, lo, hi):
    return ComplexAmplitude.from_polar(rng.uniform(lo, hi), rng.uniform(-math.pi, math.pi))


def test_oracle_equivalence(acceptance_log):
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        spec = CatStateSpec(int(rng.integers(1, 7)), random_amplitude(rng, 0.2, 3.0), convention=TRUE)
        delta = Displacement(random_amplitude(rng, 0.0, 0.5).value)
        gap = abs(overlap_exact(spec, delta).value - overlap_fock_oracle(spec, delta, 128))
        worst = max(worst, gap)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 30
    acceptance_log("1 oracle equivalence", ok, f"max gap {worst:.2e} over 200 cases in {elapsed:.1f}s")
    assert worst <= 1e-9
    assert elapsed < 30


def test_pair_fringe_reproduction(acceptance_log):
    alpha = ComplexAmplitude(10.0, 0.0)
    spec = CatStateSpec(2, alpha)
    diag_gap = 0.0
    exact_gap = 0.0
    envelope_gap = 0.0
    for d_perp in np.linspace(0.0, 0.4, 81):
        delta = Displacement(1j * float(d_perp))
        target = math.cos(20 * d_perp) ** 2
        assert cat2_perp_intensity(alpha, delta) == pytest.approx(target, abs=1e-15)
        diag = overlap_diagonal(spec, delta).value.real ** 2
        exact = abs(overlap_exact(spec, delta).value) ** 2
        kept = overlap_diagonal(spec, delta, envelope=True).value.real ** 2
        envelope = math.exp(-(d_perp**2))
        diag_gap = max(diag_gap, abs(diag - target))
        exact_gap = max(exact_gap, abs(exact / envelope - target))
        envelope_gap = max(envelope_gap, abs(exact - kept))
    ok = diag_gap <= 1e-12 and exact_gap <= 1e-6 and envelope_gap <= 1e-6
    detail = f"diagonal {diag_gap:.1e}, exact without envelope {exact_gap:.1e}, exact vs enveloped diagonal {envelope_gap:.1e}"
    acceptance_log("2 pair fringe", ok, detail)
    assert ok


def test_bessel_convergence(acceptance_log):
    start = time.perf_counter()
    grid = np.linspace(0.0, 0.4, 401)
    deviations = {}
    curves = {}
    for n in (4, 6, 8, 16):
        exact, reference = convergence_curve(10.0, n, grid)
        deviations[n] = sup_deviation(exact, reference)
        curves[n] = exact
    zero = first_zero(curves[16])
    target = sensitivity_delta(10.0)
    elapsed = time.perf_counter() - start
    values = list(deviations.values())
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    near = zero is not None and abs(zero - target) <= 0.02 * target
    ok = decreasing and near and elapsed < 10
    sups = ", ".join(f"n={n}: {v:.4f}" for n, v in deviations.items())
    acceptance_log("3 Bessel convergence", ok, f"sup dev {sups}; n=16 zero {zero:.6f} vs {target:.6f}; {elapsed:.1f}s")
    assert ok


def test_offdiagonal_onset(acceptance_log):
    start = time.perf_counter()
    parts = []
    ok = True
    for alpha in (4.0, 10.0, 20.0):
        series = offdiag_curve(alpha, 0.2, range(1, int(4 * alpha) + 1))
        flat = float(np.max(series.y[series.x <= alpha]))
        n_star = threshold_crossing(series, 1e-3)
        ratio = n_star / alpha if n_star is not None else float("nan")
        ok = ok and flat < 1e-6 and 1.5 <= ratio <= 3.0
        parts.append(f"alpha={alpha:g}: max up to n=alpha {flat:.1e}, n*/alpha {ratio:.2f}")
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 20
    acceptance_log("4 off-diagonal onset", ok, "; ".join(parts) + f"; {elapsed:.1f}s")
    assert ok


def test_bessel_quality(acceptance_log):
    z = 2 * math.pi * np.arange(512) / 512
    worst = 0.0
    for x in np.arange(0.0, 20.0 + 1e-9, 0.5):
        trapezoid = float(np.mean(np.cos(x * np.sin(z))))
        worst = max(worst, abs(bessel_j0(float(x)) - trapezoid))
    root_gap = abs(j0_first_root() - bisect(j0_series_float, 2.0, 3.0))
    ok = worst <= 1e-10 and root_gap <= 1e-12
    acceptance_log("5 J0 quality", ok, f"max trapezoid gap {worst:.1e}, first root gap {root_gap:.1e}")
    assert ok


def test_term_bound(acceptance_log):
    rng = np.random.default_rng(SEED + 6)
    excess = -math.inf
    equality_breaks = 0
    checked = 0
    for n in range(1, 9):
        cases = [(random_amplitude(rng, 0.0, 10.0), random_amplitude(rng, 0.0, 0.5).value) for _ in range(25)]
        # plus configurations where displacement and anchor commute
        cases += [(ComplexAmplitude(3.0, 0.0), 0.0), (ComplexAmplitude(0.0, 0.0), 0.3 - 0.2j)]
        for alpha, d in cases:
            spec = CatStateSpec(n, alpha)
            terms = np.abs(pair_terms(spec, d))
            a = alpha.value
            phasors = np.exp(2j * math.pi * np.arange(1, n + 1) / n)
            gauss = np.exp(-0.5 * np.abs(d + a * (phasors[None, :] - phasors[:, None])) ** 2)
            excess = max(excess, float(np.max(terms)) - 1 / n)
            at_bound = terms >= 1 / n - 1e-12
            equality_breaks += int(np.count_nonzero(at_bound & (gauss < 1 - 1e-12)))
            checked += terms.size
    ok = excess <= 1e-12 and equality_breaks == 0
    acceptance_log("6 per-term bound", ok, f"{checked} terms, max excess over 1/n {excess:.1e}, equality without unit Gaussian: {equality_breaks}")
    assert ok


def compass(alpha_mag):
    return CatStateSpec(4, ComplexAmplitude.from_polar(alpha_mag, math.pi / 4), convention=TRUE)


@pytest.mark.filterwarnings("ignore::subplanck.wigner.CoverageWarning")
def test_sub_planck_tiles(acceptance_log):
    start = time.perf_counter()
    central = GridGeometry.square(1.2, 321)
    spacing = {a: central_tile_spacing(wigner_cat(compass(a), central)) for a in (3.0, 6.0)}
    norms = {a: quadrature_norm(wigner_cat(compass(a), GridGeometry.square(a + 4.0, 321))) for a in (3.0, 6.0)}
    elapsed = time.perf_counter() - start
    ratio = spacing[3.0] / spacing[6.0]
    ok = abs(ratio - 2.0) <= 0.1 and all(abs(v - 1) <= 1e-3 for v in norms.values()) and elapsed < 60
    detail = (
        f"spacing {spacing[3.0]:.4f} / {spacing[6.0]:.4f} = {ratio:.3f}; "
        f"norms {norms[3.0]:.6f}, {norms[6.0]:.6f}; {elapsed:.1f}s"
    )
    acceptance_log("7 Wigner tiles", ok, detail)
    assert ok


def test_phase_covariance(acceptance_log):
    rng = np.random.default_rng(SEED + 8)
    worst = 0.0
    for _ in range(50):
        spec = CatStateSpec(int(rng.integers(1, 7)), random_amplitude(rng, 0.2, 3.0), convention=TRUE)
        d1 = random_amplitude(rng, 0.0, 0.5).value
        d2 = random_amplitude(rng, 0.0, 0.5).value
        two_sided = displaced_pair_overlap_closed(spec, d2, d1)
        single = overlap_exact(spec, d1 - d2).value
        worst = max(worst, abs(abs(two_sided) - abs(single)))
    ok = worst <= 1e-12
    acceptance_log("8 phase covariance", ok, f"max modulus gap {worst:.1e} over 50 pairs")
    assert ok
