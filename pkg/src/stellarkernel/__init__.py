"""Closed-form continuous-variable quantum kernels from stellar feature maps."""

from .closedforms import (
    displaced_fock_inner,
    displaced_fock_kernel,
    displaced_fock_kernel_laguerre,
    fourier_radial,
    kernel_integral,
    radial_poly_coeffs,
    table_reference_kernel,
)
from .engine import inner_product, kernel, qudit_inner, seed
from .exceptions import *  # noqa: F401,F403
from .stellar import (
    FockVector,
    StellarFunction,
    coherent,
    encode_cat_truncated,
    encode_displaced_fock,
    encode_qudit,
    fock_coefficients,
    normalize,
    vacuum,
)

__version__ = "0.1.0"
