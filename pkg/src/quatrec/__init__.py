"""Right-sided quaternion Fourier transform, limiting operators, and
recovery of bandlimited quaternion signals with missing regions."""
from .dqft import DqftPlan, qft_forward, qft_inverse, qft_naive
from .errors import DegenerateSignalError, NotBandlimitedError, QuatRecError, ShapeError, SpecError
from .limiting import (
    LimitingPair,
    compose_FWST,
    compose_STFW,
    freq_limit,
    hs_norm,
    hs_norm_bruteforce,
    kernel_disc,
    kernel_eval,
    kernel_rect_sinc,
    op_norm_estimate,
    space_limit,
)
from .quaternion import Quaternion, conj, modulus, mul
from .recovery import (
    RecoveryProblem,
    RecoveryReport,
    error_bound_c,
    recover,
    simulate_received,
    uniqueness_certificate,
)
from .signal import Mask, MaskSpec, QSignal2D, apply_mask, inner_product, l2_norm, mask_from_spec
from .uncertainty import ConcentrationReport, check_uncertainty, concentration, corollary_support

__version__ = "0.1.0"
