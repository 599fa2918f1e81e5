"""Overlap functions of generalized cat states and their Bessel-function limit."""

from .analysis import (
    CurveSeries,
    VczParams,
    convergence_curve,
    first_zero,
    offdiag_curve,
    vcz_coherence,
    vcz_correspondence_report,
)
from .oracle import FockVector, coherent_fock, displace_fock, overlap_fock_oracle
from .overlap import (
    ALL,
    DIAGONAL,
    OFF_DIAGONAL,
    OverlapResult,
    SumMask,
    Tier,
    cat2_perp_intensity,
    cat2_phased_intensity,
    cat2_rotated_intensity,
    overlap_asymptotic,
    overlap_band,
    overlap_diagonal,
    overlap_exact,
    overlap_exact_polar,
)
from .specfun import bessel_j0, j0_first_root, sensitivity_delta
from .states import (
    CatStateSpec,
    ComplexAmplitude,
    Convention,
    Displacement,
    component_positions,
    true_norm,
)
from .wigner import GridGeometry, WignerGrid, central_tile_spacing, quadrature_norm, wigner_cat

__version__ = "0.1.0"
