"""phasekit: phases of matrices and MIMO LTI systems.

Sectorial decompositions and numerical-range classification, Takagi and
real-congruence factorizations of complex symmetric matrices, indented
frequency responses, small gain / small phase feedback certificates, and
constructive destabilizer synthesis for symmetric plants.
"""

from .errors import PhasekitError
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    hermitian_eig,
    numeric_rank,
    psd_sqrt,
    svd,
)
from .numrange import (
    SectorialClass,
    Sectoriality,
    SupportProfile,
    ZeroLocation,
    boundary_points,
    classify,
    support_function,
    support_profile,
    zero_location,
)
from .phasecore import (
    PhaseSector,
    SectorialDecomposition,
    matrix_small_gain_check,
    matrix_small_phase_check,
    phases,
    quasi_sectorial_decompose,
    sectorial_decompose,
    semi_sectorial_decompose,
)
from .symmetric import (
    RealCongruenceDecomposition,
    TakagiFactorization,
    ThompsonBlock,
    block_zero_location,
    build_block,
    real_congruence_decompose,
    takagi,
    verify_block_identities,
)
from .lti import (
    GridSpec,
    IndentedContour,
    PhaseResponse,
    StateSpace,
    build_contour,
    gain_response,
    hinf_norm,
    is_lyapunov_stable,
    is_stable,
    minreal,
    phase_response,
    phi_inf_sector,
    poles,
    residue_at,
    ss_block_diag,
    structural_checks,
    tf,
)
from .feedback import (
    Certificate,
    DestabilizerReport,
    GainEnvelope,
    PhaseEnvelope,
    Verdict,
    certify_small_gain,
    certify_small_phase,
    design_scalar_interpolator,
    envelope_membership,
    interconnect,
    is_feedback_stable,
    synthesize_destabilizer_gain_symmetric,
    synthesize_destabilizer_inner,
    synthesize_destabilizer_symmetric,
    trivial_phase_interpolation,
)

__version__ = "0.1.0"
