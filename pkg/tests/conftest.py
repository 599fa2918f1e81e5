import cmath
import math

import numpy as np
import pytest

ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance_log(request):
    """Record one pass/fail line per acceptance criterion."""
    records = request.config.stash[ACCEPTANCE_KEY]

    def log(name, ok, detail):
        records.append((name, bool(ok), detail))
        return ok

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    records = config.stash.get(ACCEPTANCE_KEY, [])
    if not records:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in records:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


def j0_series_float(x, terms=60):
    """Plain float power series for J0, adequate for x <= 5."""
    total = []
    term = 1.0
    q = -(x * x) / 4.0
    for m in range(terms):
        if m:
            term *= q / (m * m)
        total.append(term)
    return math.fsum(total)


def bisect(fn, lo, hi, tol=1e-15):
    f_lo = fn(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = fn(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def reference_overlap_loop(n, alpha, delta, coeffs=None, angles=None):
    """Term-by-term <cat|D(delta)|cat> from coherent-state algebra, with the bare 1/sqrt(n) weight."""
    coeffs = coeffs or [1.0] * n
    if angles is None:
        angles = [2 * math.pi * j / n for j in range(1, n + 1)]
    points = [cmath.exp(1j * a) * alpha for a in angles]
    total = 0j
    for cj, aj in zip(coeffs, points):
        for ck, ak in zip(coeffs, points):
            shifted = ak + delta
            ket_phase = cmath.exp(1j * (delta * ak.conjugate()).imag)
            inner = cmath.exp(-0.5 * abs(aj) ** 2 - 0.5 * abs(shifted) ** 2 + aj.conjugate() * shifted)
            total += cj.conjugate() * ck * ket_phase * inner
    return total / n


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)
