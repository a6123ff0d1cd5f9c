# Density divergences on [0, 1]
from .common import BasisFamily, CoefficientVector, DomainMap, basis_eval
from .divergence import (
    DivergenceEstimate,
    cs_divergence_exact,
    cs_p_divergence_exact,
    divergence_gap,
    estimate_coefficients,
    estimate_divergence,
)
from .models import (
    DensityModel,
    Linear,
    Tabulated,
    TruncatedNormal,
    Uniform,
    exact_coefficients,
    l2_inner,
    l2_norm_squared,
)

__all__ = [
    "BasisFamily",
    "CoefficientVector",
    "DensityModel",
    "DivergenceEstimate",
    "DomainMap",
    "Linear",
    "Tabulated",
    "TruncatedNormal",
    "Uniform",
    "basis_eval",
    "cs_divergence_exact",
    "cs_p_divergence_exact",
    "divergence_gap",
    "estimate_coefficients",
    "estimate_divergence",
    "exact_coefficients",
    "l2_inner",
    "l2_norm_squared",
]
