"""Spectral stability toolkit for plane Couette flow."""

import os

# small dense kernels dominate this package; threaded BLAS loses badly on
# them under container CPU throttling, so default to one thread unless the
# user has chosen otherwise (must happen before the BLAS library loads)
os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")

from .grid import Grid, chebyshev_nodes, diff_matrix, quadrature_weights, \
    wavenumbers, dealias_mask  # noqa: E402
from .fields import VelocityField, random_solenoidal_field, zero_field  # noqa: E402
from .norms import NormKind, l2_norm, m_norm, j2_seminorm, h_tilde_norms, \
    hk_norm, sup_norm, field_norm  # noqa: E402
from .operators import WavenumberOperator, build_operator, apply_L, \
    eigenvalues, reconstruct_velocity, Spectrum  # noqa: E402
from .resolvent import ResolventSample, ScalingFit, SearchConfig, \
    resolvent_norm, sup_resolvent, scaling_sweep, empirical_constant, \
    default_k_set  # noqa: E402

__version__ = "0.1.0"
