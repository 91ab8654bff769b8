"""Exact non-Archimedean analysis on Q_p^n: Vladimirov-Taibleson operator,
inversion through the unramified extension, and the Kelvin transform."""

from .errors import (
    DivergenceError,
    DomainError,
    PadicKelvinError,
    PrecisionError,
    PreconditionError,
    ResourceError,
)
from .extension import (
    ExtElement,
    ExtensionContext,
    ResidueElement,
    ext_abs,
    ext_invert,
    ext_mul,
    find_irreducible,
    get_context,
    iso_U,
    iso_U_inv,
    residue_invert,
)
from .kelvin import (
    InversionMap,
    RadialRegion,
    image_ball,
    invert_point,
    kelvin_covariance_residual,
    kelvin_transform,
    verify_harmonicity,
    verify_kelvin_identity,
    verify_riesz_inversion_chain,
)
from .operators import (
    PiecewiseRadialFunction,
    RadialTail,
    dl_gamma_apply_at,
    riesz_apply_at,
    vt_apply_at,
    vt_image,
)
from .oracle import shell_sum_oracle
from .padic import PAdic, from_rational, padic_add, padic_invert, padic_mul
from .schwartz import Ball, TestFunction, canonicalize, evaluate, integrate, make_point
from .spectral import (
    Character,
    fourier_transform,
    inverse_fourier_transform,
    make_eigenfunction,
    sobolev_inner,
    vt_spectral_at,
)
from .symbolic import S, SymbolicScalar, geometric_tail, scalar_c, scalar_d

__version__ = "0.1.0"
