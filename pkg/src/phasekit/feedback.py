"""Feedback stability certificates and constructive destabilizers.

G#H is the 2m x 2m closed loop of the negative feedback pair (G, H).
Certificates run the small gain / small phase sufficient conditions on
refined frequency grids. The synthesizers make the converse direction
constructive: when a phase (gain) condition fails at some omega0 they
build a symmetric uncertainty inside the phase (gain) envelope whose
loop is singular at j*omega0, reusing the real-congruence factorization
of the complex symmetric sample G(j*omega0).
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    AssumptionViolatedAtInfinity,
    ConditionHolds,
    EnvelopeViolated,
    IllPosed,
    NotInner,
    NotFrequencyWiseSemiSectorial,
    NotPSD,
    NotStable,
    NotSymmetric,
    SynthesisFailed,
    TargetOutsideEnvelope,
)
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_square_matrix,
    herm_part,
    spectral_norm,
    svd,
)
from .numrange import _wrap_principal
from .phasecore import fit_interval_mod_2pi, phases
from .symmetric import real_congruence_decompose, takagi
from .lti import (
    DEFAULT_GRID,
    GridSpec,
    StateSpace,
    _gain_grid,
    build_contour,
    is_lyapunov_stable,
    is_stable,
    minreal,
    phase_response,
    poles,
    structural_checks,
    tf,
)

_TWO_PI = 2.0 * math.pi
_ANGLE_TOL = 1e-8


# ----------------------------------------------------------------------
# envelopes


@dataclass(frozen=True)
class PhaseEnvelope:
    """Frequency-dependent phase bounds [alpha(w), beta(w)].

    Breakpoints are (omega, alpha, beta) with omega = inf allowed once at
    the end; interpolation is linear in log omega between finite positive
    breakpoints and constant beyond them, with omega = 0 and omega = inf
    taking their explicit values when present.
    """

    breakpoints: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if not self.breakpoints:
            raise ValueError("envelope needs at least one breakpoint")
        prev = -1.0
        for w, a, b in self.breakpoints:
            if not (w >= 0.0):
                raise ValueError("breakpoint frequencies must be >= 0")
            if w <= prev:
                raise ValueError("breakpoint frequencies must be strictly increasing")
            if not (0.0 <= b - a < _TWO_PI):
                raise ValueError(f"need 0 <= beta - alpha < 2*pi at omega = {w}")
            prev = w

    @staticmethod
    def constant(alpha: float, beta: float) -> "PhaseEnvelope":
        return PhaseEnvelope(breakpoints=((0.0, alpha, beta),))

    def bounds(self, w: float) -> tuple[float, float]:
        pts = self.breakpoints
        if math.isinf(w):
            return pts[-1][1], pts[-1][2]
        finite = [p for p in pts if not math.isinf(p[0])]
        if not finite:
            return pts[-1][1], pts[-1][2]
        if w <= finite[0][0]:
            return finite[0][1], finite[0][2]
        if w >= finite[-1][0]:
            return finite[-1][1], finite[-1][2]
        for (w1, a1, b1), (w2, a2, b2) in zip(finite, finite[1:]):
            if w1 <= w <= w2:
                if w1 <= 0.0:
                    frac = 0.0 if w <= w1 else 1.0  # no log interp down to 0
                    if w < w2:
                        frac = (w - w1) / (w2 - w1)
                else:
                    frac = math.log(w / w1) / math.log(w2 / w1)
                return a1 + frac * (a2 - a1), b1 + frac * (b2 - b1)
        return finite[-1][1], finite[-1][2]

    def alpha(self, w: float) -> float:
        return self.bounds(w)[0]

    def beta(self, w: float) -> float:
        return self.bounds(w)[1]


@dataclass(frozen=True)
class GainEnvelope:
    """Gain bound gamma(w): a positive constant or |w(j omega)| of a
    scalar stable rational weight."""

    constant: float | None = None
    weight: StateSpace | None = None

    def __post_init__(self):
        if (self.constant is None) == (self.weight is None):
            raise ValueError("provide exactly one of constant or weight")
        if self.constant is not None and not self.constant > 0.0:
            raise ValueError("constant gain bound must be positive")
        if self.weight is not None and self.weight.n_io != 1:
            raise ValueError("weight must be scalar")

    def gamma(self, w: float) -> float:
        if self.constant is not None:
            return self.constant
        if math.isinf(w):
            return abs(float(self.weight.d[0, 0]))
        return abs(complex(self.weight(1j * w)[0, 0]))


class Verdict(enum.Enum):
    CERTIFIED_STABLE = "certified-stable"
    CONDITION_VIOLATED = "condition-violated"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    margin: tuple[tuple[float, float], ...] = ()
    violation_omega: float | None = None
    violation_data: dict | None = None
    reason: str | None = None


# ----------------------------------------------------------------------
# interconnection


def interconnect(g: StateSpace, h: StateSpace,
                 tol: ToleranceConfig = DEFAULT_TOL) -> StateSpace:
    """State-space realization of the 2m x 2m closed loop G#H.

    Rows map (u1, u2) to (y1, y2) with y2 = (I+GH)^{-1} (G u1 + u2) and
    y1 = u1 - H y2.
    """
    if g.n_io != h.n_io:
        raise ValueError("G and H must have matching I/O dimension")
    m = g.n_io
    loop = np.eye(m) + g.d @ h.d
    if np.linalg.cond(loop) >= 1.0 / tol.rank_tol:
        raise IllPosed("I + D_G D_H is numerically singular")
    di = np.linalg.inv(loop)
    ng, nh = g.n_states, h.n_states
    y2_xg = di @ g.c
    y2_xh = -di @ g.d @ h.c
    y2_u1 = di @ g.d
    y2_u2 = di
    y1_xg = -h.d @ y2_xg
    y1_xh = -h.c - h.d @ y2_xh
    y1_u1 = np.eye(m) - h.d @ y2_u1
    y1_u2 = -h.d @ y2_u2
    a = np.zeros((ng + nh, ng + nh))
    a[:ng, :ng] = g.a + g.b @ y1_xg
    a[:ng, ng:] = g.b @ y1_xh
    a[ng:, :ng] = h.b @ y2_xg
    a[ng:, ng:] = h.a + h.b @ y2_xh
    b = np.block([[g.b @ y1_u1, g.b @ y1_u2], [h.b @ y2_u1, h.b @ y2_u2]])
    c = np.block([[y1_xg, y1_xh], [y2_xg, y2_xh]])
    d = np.block([[y1_u1, y1_u2], [y2_u1, y2_u2]])
    return StateSpace(a=a, b=b, c=c, d=d)


def is_feedback_stable(g: StateSpace, h: StateSpace,
                       tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """G#H in RH-infinity: all trimmed closed-loop poles strictly in the LHP."""
    return is_stable(interconnect(g, h, tol), tol)


# ----------------------------------------------------------------------
# certificates


def certify_small_gain(g: StateSpace, h: StateSpace, grid: GridSpec = DEFAULT_GRID,
                       tol: ToleranceConfig = DEFAULT_TOL) -> Certificate:
    """Small gain certificate: sigma(G) sigma(H) < 1 on the refined grid."""
    if not (is_stable(g, tol) and is_stable(h, tol)):
        raise NotStable("small gain certification needs two stable systems")
    ws = np.unique(np.concatenate([_gain_grid(g, grid, tol), _gain_grid(h, grid, tol)]))

    def product(w: float) -> float:
        return spectral_norm(g(1j * w)) * spectral_norm(h(1j * w))

    margins = [(float(w), 1.0 - product(w)) for w in ws]
    margins.append((math.inf, 1.0 - spectral_norm(g.d) * spectral_norm(h.d)))
    vals = [mv for _, mv in margins[:-1]]
    k = int(np.argmin(vals))
    lo = ws[max(k - 1, 0)]
    hi = ws[min(k + 1, ws.size - 1)]
    if hi > lo:
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        x1, x2 = b - invphi * (b - a), a + invphi * (b - a)
        f1, f2 = product(x1), product(x2)
        for _ in range(60):
            if f1 > f2:
                b, x2, f2 = x2, x1, f1
                x1 = b - invphi * (b - a)
                f1 = product(x1)
            else:
                a, x1, f1 = x1, x2, f2
                x2 = a + invphi * (b - a)
                f2 = product(x2)
        w_ref = (a + b) / 2.0
        margins.append((float(w_ref), 1.0 - product(w_ref)))
    margins.sort(key=lambda p: p[0])
    for w, mv in margins:
        if mv <= 0.0:
            return Certificate(Verdict.CONDITION_VIOLATED, margin=tuple(margins),
                               violation_omega=w,
                               violation_data={"product": 1.0 - mv})
    return Certificate(Verdict.CERTIFIED_STABLE, margin=tuple(margins))


def _axis_sector_table(g: StateSpace, base_ws: np.ndarray, grid: GridSpec,
                       tol: ToleranceConfig):
    """Phase response of g with base_ws merged into its contour's axis grid;
    returns (response, dict omega -> (phi_low, phi_high) for axis samples)."""
    contour = build_contour(g, grid=grid, tol=tol, include_omegas=base_ws)
    resp = phase_response(g, contour=contour, grid=grid, tol=tol)
    table = {}
    for s in resp.samples:
        if s.kind == "axis" and not s.empty:
            table[round(s.omega, 12)] = (s.phi_low, s.phi_high)
    return resp, table


def certify_small_phase(g: StateSpace, h: StateSpace, grid: GridSpec = DEFAULT_GRID,
                        tol: ToleranceConfig = DEFAULT_TOL) -> Certificate:
    """Small phase certificate on a merged axis grid.

    Needs one loop component strictly stable and frequency-wise
    semi-sectorial and the other Lyapunov stable and frequency-wise
    quasi-sectorial; the roles are interchangeable and resolved here.
    Verdict INAPPLICABLE reports the failed precondition instead of
    raising.
    """
    g_lyap, h_lyap = is_lyapunov_stable(g, tol), is_lyapunov_stable(h, tol)
    if not (g_lyap and h_lyap):
        return Certificate(Verdict.INAPPLICABLE,
                           reason="both components need Lyapunov stability")
    if not is_stable(h, tol):
        if is_stable(g, tol):
            g, h = h, g
        else:
            return Certificate(Verdict.INAPPLICABLE,
                               reason="one component must be strictly stable")
    base = np.unique(np.concatenate([_gain_grid(minreal(g, tol), grid, tol),
                                     _gain_grid(minreal(h, tol), grid, tol)]))
    try:
        resp_g, tab_g = _axis_sector_table(g, base, grid, tol)
        resp_h, tab_h = _axis_sector_table(h, base, grid, tol)
    except NotFrequencyWiseSemiSectorial as exc:
        return Certificate(Verdict.INAPPLICABLE, reason=str(exc))
    spread_g = max((s.phi_high - s.phi_low) for s in resp_g.samples if not s.empty)
    if spread_g >= math.pi - 1e-12:
        return Certificate(Verdict.INAPPLICABLE,
                           reason="relaxed-role component is not frequency-wise "
                                  "quasi-sectorial (phase spread reaches pi)")
    margins = []
    violation = None
    for w in sorted(set(tab_g) & set(tab_h)):
        gl, gh = tab_g[w]
        hl, hh = tab_h[w]
        margin = min(math.pi - (gh + hh), (gl + hl) + math.pi)
        margins.append((w, margin))
        if margin <= 0.0 and violation is None:
            violation = (w, {"phi_high_sum": gh + hh, "phi_low_sum": gl + hl})
    # omega = inf endpoint, skipping empty phase sets
    try:
        sec_g = phases(g.d, tol=tol) if spectral_norm(g.d) > 0 else None
        sec_h = phases(h.d, tol=tol) if spectral_norm(h.d) > 0 else None
        if sec_g is not None and sec_h is not None:
            margin = min(math.pi - (sec_g.phi_max + sec_h.phi_max),
                         (sec_g.phi_min + sec_h.phi_min) + math.pi)
            margins.append((math.inf, margin))
            if margin <= 0.0 and violation is None:
                violation = (math.inf, {"phi_high_sum": sec_g.phi_max + sec_h.phi_max,
                                        "phi_low_sum": sec_g.phi_min + sec_h.phi_min})
    except Exception:
        return Certificate(Verdict.INAPPLICABLE,
                           reason="feedthrough term is not semi-sectorial")
    if violation is not None:
        return Certificate(Verdict.CONDITION_VIOLATED, margin=tuple(margins),
                           violation_omega=violation[0], violation_data=violation[1])
    return Certificate(Verdict.CERTIFIED_STABLE, margin=tuple(margins))


# ----------------------------------------------------------------------
# envelope membership


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    worst_slack: float
    offending_omega: float | None = None
    symmetric_ok: bool = True
    reason: str | None = None


def envelope_membership(h: StateSpace, env: PhaseEnvelope,
                        symmetric_required: bool = False,
                        grid: GridSpec = DEFAULT_GRID,
                        tol: ToleranceConfig = DEFAULT_TOL) -> MembershipResult:
    """Membership of h in C[alpha, beta] (or C_s with the symmetry flag).

    Containment is modulo 2*pi: a sample belongs when some 2*pi-translate
    of its phase interval fits in [alpha(w), beta(w)], the envelope being
    evaluated at the detour's center frequency on arcs.
    """
    if not is_stable(h, tol):
        return MembershipResult(member=False, worst_slack=-math.inf,
                                reason="system is not stable")
    symmetric_ok = True
    if symmetric_required:
        symmetric_ok = structural_checks(h, grid, tol).symmetric
    try:
        resp = phase_response(h, grid=grid, tol=tol)
    except NotFrequencyWiseSemiSectorial as exc:
        return MembershipResult(member=False, worst_slack=-math.inf,
                                symmetric_ok=symmetric_ok, reason=str(exc))
    worst, w_bad = math.inf, None
    for s in resp.samples:
        if s.empty:
            continue
        a, b = env.bounds(s.omega)
        slack = fit_interval_mod_2pi(s.phi_low, s.phi_high, a, b)
        if slack < worst:
            worst, w_bad = slack, s.omega
    member = symmetric_ok and worst >= -_ANGLE_TOL
    return MembershipResult(member=member, worst_slack=worst,
                            offending_omega=None if member else w_bad,
                            symmetric_ok=symmetric_ok)


# ----------------------------------------------------------------------
# scalar phase interpolator


def _biquad_phase(bn, an, bd, ad, ws):
    """Phase of g (s^2 + an s + bn) / (s^2 + ad s + bd) on the positive axis."""
    num = (bn - ws ** 2) + 1j * an * ws
    den = (bd - ws ** 2) + 1j * ad * ws
    return np.angle(num) - np.angle(den)


def _env_check_grid(env: PhaseEnvelope, omega0: float) -> np.ndarray:
    pts = [w for w, _, _ in env.breakpoints if 0.0 < w < math.inf]
    if not math.isinf(omega0) and omega0 > 0:
        pts.append(omega0)
    anchor = max(pts) if pts else 1.0
    lo = min(pts) if pts else 1.0
    ws = np.geomspace(min(lo, anchor) * 1e-4, max(anchor, 1.0) * 1e4, 160)
    return np.unique(np.concatenate([ws, np.asarray(pts, dtype=float)])) if pts else ws


def _scalar_env_ok(phase_vals, ws, env: PhaseEnvelope) -> bool:
    for w, ph in zip(ws, phase_vals):
        a, b = env.bounds(float(w))
        if fit_interval_mod_2pi(ph, ph, a, b) < -_ANGLE_TOL:
            return False
    return True


def design_scalar_interpolator(omega0: float, target: complex, env: PhaseEnvelope,
                               grid: GridSpec = DEFAULT_GRID,
                               tol: ToleranceConfig = DEFAULT_TOL) -> StateSpace:
    """Stable scalar interpolator of at most second order.

    Finite omega0: target is unit modulus; h(j omega0) = target within 1e-9,
    h(0) > 0, and the phase of h stays inside the envelope at every grid
    frequency (verified through the lti machinery, not assumed). omega0 =
    inf: target is real nonzero and h(inf) = target exactly; negative
    targets use a first-order all-pass section.

    The searched family is the positive-coefficient biquad
    g (s^2 + a1 s + b1)/(s^2 + a2 s + b2) with numerator/denominator
    arguments psi +- theta/2 at j omega0, psi on a 64-point grid and the
    argument radius over 16 octaves; theta = +-pi falls back to the
    second-order all-pass (s^2 - a s + w0^2)/(s^2 + a s + w0^2).
    """
    check_ws = _env_check_grid(env, omega0)

    def finish(h: StateSpace) -> StateSpace:
        memb = envelope_membership(h, env, symmetric_required=False, grid=grid, tol=tol)
        if not memb.member:
            raise EnvelopeViolated(
                f"interpolator leaves the envelope near omega = {memb.offending_omega}")
        return h

    if math.isinf(omega0):
        t0 = complex(target)
        if abs(t0.imag) > 1e-12 or t0.real == 0.0:
            raise ValueError("omega = inf interpolation target must be real nonzero")
        t0 = t0.real
        ph = 0.0 if t0 > 0 else math.pi
        a_inf, b_inf = env.bounds(math.inf)
        if fit_interval_mod_2pi(ph, ph, a_inf, b_inf) < -_ANGLE_TOL:
            raise TargetOutsideEnvelope("target phase outside envelope at infinity")
        if t0 > 0:
            return finish(StateSpace.static([[t0]]))
        scale = max((w for w, _, _ in env.breakpoints if 0.0 < w < math.inf),
                    default=1.0)
        for k in range(-8, 9):
            c = scale * (2.0 ** k)
            h = tf([-abs(t0), abs(t0) * c], [1.0, c])
            ph_vals = np.angle((c - 1j * check_ws) / (c + 1j * check_ws))
            if _scalar_env_ok(ph_vals, check_ws, env):
                try:
                    return finish(h)
                except EnvelopeViolated:
                    continue
        raise EnvelopeViolated("no all-pass corner frequency fits the envelope")

    if not omega0 > 0:
        raise ValueError("finite interpolation frequency must be positive")
    t_c = complex(target)
    if abs(abs(t_c) - 1.0) > 1e-9:
        raise ValueError("finite-frequency target must have unit modulus")
    theta = math.atan2(t_c.imag, t_c.real)
    a0, b0 = env.bounds(omega0)
    if fit_interval_mod_2pi(theta, theta, a0, b0) < -_ANGLE_TOL:
        raise TargetOutsideEnvelope(
            f"target phase {theta:.6g} outside [{a0:.6g}, {b0:.6g}] at omega0")
    if abs(theta) <= 1e-11:
        return finish(StateSpace.static([[1.0]]))
    if math.pi - abs(theta) <= 1e-11:
        # second-order all-pass: exact -1 at the resonance
        b = omega0 ** 2
        for k in range(-8, 9):
            a = omega0 * (2.0 ** k)
            ph_vals = _biquad_phase(b, -a, b, a, check_ws)
            if _scalar_env_ok(ph_vals, check_ws, env):
                try:
                    return finish(tf([1.0, -a, b], [1.0, a, b]))
                except EnvelopeViolated:
                    continue
        raise EnvelopeViolated("no all-pass damping fits the envelope")

    psi_lo, psi_hi = abs(theta) / 2.0, math.pi - abs(theta) / 2.0
    psis = np.linspace(psi_lo, psi_hi, 66)[1:-1]
    psis = psis[np.argsort(np.abs(psis - math.pi / 2.0))]  # balanced first
    for psi in psis:
        th_n, th_d = psi + theta / 2.0, psi - theta / 2.0
        for k in range(-8, 8):
            rho = (omega0 ** 2) * (2.0 ** k)
            params = []
            ok = True
            for th in (th_n, th_d):
                r = rho
                if math.cos(th) < 0.0:
                    bound = 0.9 * omega0 ** 2 / (-math.cos(th))
                    r = min(r, bound)
                bb = omega0 ** 2 + r * math.cos(th)
                aa = r * math.sin(th) / omega0
                if bb <= 0.0 or aa <= 0.0:
                    ok = False
                    break
                params.append((aa, bb))
            if not ok:
                continue
            (a1, b1), (a2, b2) = params
            num0 = (b1 - omega0 ** 2) + 1j * a1 * omega0
            den0 = (b2 - omega0 ** 2) + 1j * a2 * omega0
            gain = abs(den0) / abs(num0)
            ph_vals = _biquad_phase(b1, a1, b2, a2, check_ws)
            if not _scalar_env_ok(ph_vals, check_ws, env):
                continue
            h = tf([gain, gain * a1, gain * b1], [1.0, a2, b2])
            val = complex(h(1j * omega0)[0, 0])
            if abs(val - t_c) > 1e-9:
                continue
            try:
                return finish(h)
            except EnvelopeViolated:
                continue
    raise EnvelopeViolated("no biquad parameters pass envelope verification")


# ----------------------------------------------------------------------
# destabilizer synthesis


@dataclass(frozen=True)
class DestabilizerReport:
    """Constructed uncertainty plus recomputed evidence.

    All evidence numbers are recomputed from the returned H, never copied
    from synthesis intermediates. For violations at omega = inf the loop
    becomes ill-posed (I + G(inf) H(inf) singular), reported through
    ill_posed_at_infinity instead of a closed-loop pole.
    """

    h: StateSpace
    case: str
    omega0: float | None
    target: complex | None = None
    membership: MembershipResult | None = None
    sigma_min: float | None = None
    closed_loop_pole: complex | None = None
    pole_distance: float | None = None
    ill_posed_at_infinity: bool = False
    gain_profile: tuple[tuple[float, float, float], ...] = ()


def _phase_excess(sample_lo: float, sample_hi: float, w: float,
                  env: PhaseEnvelope) -> float:
    a, b = env.bounds(w)
    return -fit_interval_mod_2pi(sample_lo, sample_hi, -math.pi - a, math.pi - b)


def _closed_loop_evidence(g: StateSpace, h: StateSpace, omega0: float,
                          tol: ToleranceConfig):
    cl = interconnect(g, h, tol)
    cl_poles = poles(cl, tol)
    if not cl_poles:
        return None, None
    target = 1j * omega0
    best = min(cl_poles, key=lambda p: abs(p.value - target))
    return best.value, abs(best.value - target)


def _sector_at(g: StateSpace, w: float, gamma_hint, tol):
    from .phasecore import sector_with_rotation_hint
    sector, _ = sector_with_rotation_hint(g(1j * w), 0.0, gamma_hint, tol)
    return sector


def synthesize_destabilizer_symmetric(g: StateSpace, env: PhaseEnvelope,
                                      grid: GridSpec = DEFAULT_GRID,
                                      tol: ToleranceConfig = DEFAULT_TOL) -> DestabilizerReport:
    """Symmetric H in C_s[alpha, beta] destabilizing G when the small phase
    condition Phi(G(jw)) inside (-pi - alpha, pi - beta) fails.

    Unstable G returns H = 0. A violation at omega = inf uses the worst
    real eigenvalue of G(inf) and h(inf) = -1/lambda; a finite violation
    uses the real-congruence factorization of G(j omega0) and a scalar
    interpolator hitting e^{j (pi - phi1)}, placed on the offending
    coordinate through the real T.
    """
    checks = structural_checks(g, grid, tol)
    if not checks.symmetric:
        raise NotSymmetric("destabilizer synthesis needs a symmetric plant")
    if not is_stable(g, tol):
        h0 = StateSpace.static(np.zeros((g.n_io, g.n_io)))
        pole, dist = None, None
        cl_poles = poles(interconnect(g, h0, tol), tol)
        if cl_poles:
            worst = max(cl_poles, key=lambda p: p.value.real)
            pole = worst.value
        memb = envelope_membership(h0, env, symmetric_required=True, grid=grid, tol=tol)
        return DestabilizerReport(h=h0, case="unstable-plant", omega0=None,
                                  membership=memb, closed_loop_pole=pole,
                                  pole_distance=dist)
    resp = phase_response(g, grid=grid, tol=tol)
    usable = [s for s in resp.samples if s.kind in ("axis", "inf") and not s.empty]
    if not usable:
        raise ConditionHolds("plant has an empty phase response")
    excesses = [_phase_excess(s.phi_low, s.phi_high, s.omega, env) for s in usable]
    k = int(np.argmax(excesses))
    best_s, best_e = usable[k], excesses[k]
    # refine the violation frequency between the neighbouring axis samples
    if not math.isinf(best_s.omega):
        axis = [s for s in usable if not math.isinf(s.omega)]
        j = axis.index(best_s)
        lo = axis[j - 1].omega if j > 0 else best_s.omega * 0.5
        hi = axis[j + 1].omega if j + 1 < len(axis) else best_s.omega * 2.0
        gamma_hint = best_s.gamma

        def excess_at(w: float) -> float:
            sec = _sector_at(g, w, gamma_hint, tol)
            return _phase_excess(sec.phi_min, sec.phi_max, w, env)

        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        x1, x2 = b - invphi * (b - a), a + invphi * (b - a)
        f1, f2 = excess_at(x1), excess_at(x2)
        for _ in range(90):
            if f1 < f2:
                a, x1, f1 = x1, x2, f2
                x2 = a + invphi * (b - a)
                f2 = excess_at(x2)
            else:
                b, x2, f2 = x2, x1, f1
                x1 = b - invphi * (b - a)
                f1 = excess_at(x1)
        w_ref = (a + b) / 2.0
        e_ref = excess_at(w_ref)
        if e_ref >= best_e:
            best_e = e_ref
            omega0 = w_ref
        else:
            omega0 = best_s.omega
    else:
        omega0 = math.inf
    if best_e < -_ANGLE_TOL:
        raise ConditionHolds("small phase condition holds at every grid frequency")

    if math.isinf(omega0):
        d_sym = (g.d + g.d.T) / 2.0
        lam_all, vecs = np.linalg.eigh(d_sym)
        a_inf, b_inf = env.bounds(math.inf)
        best = None
        for i, lam in enumerate(lam_all):
            if abs(lam) <= tol.rank_tol * max(1.0, abs(lam_all).max()):
                continue
            ph = 0.0 if lam > 0 else math.pi
            exc = -fit_interval_mod_2pi(ph, ph, -math.pi - a_inf, math.pi - b_inf)
            key = (exc, abs(lam))
            if best is None or key > best[0]:
                best = (key, lam)
        if best is None or best[0][0] < -_ANGLE_TOL:
            raise SynthesisFailed("no eigenvalue of G(inf) violates the envelope")
        lam = best[1]
        target = -1.0 / lam
        h_scalar = design_scalar_interpolator(math.inf, target, env, grid, tol)
        h_sys = _scalar_times_structure(h_scalar, np.eye(g.n_io))
        gw = g.d.astype(complex)
        hw = h_sys.d.astype(complex)
        smin = float(np.linalg.svd(np.eye(g.n_io) + gw @ hw, compute_uv=False)[-1])
        memb = envelope_membership(h_sys, env, symmetric_required=True, grid=grid, tol=tol)
        ill = False
        try:
            interconnect(g, h_sys, tol)
        except IllPosed:
            ill = True
        return DestabilizerReport(h=h_sys, case="infinity", omega0=math.inf,
                                  target=complex(target), membership=memb,
                                  sigma_min=smin, ill_posed_at_infinity=ill)

    mat = g(1j * omega0)
    dec = real_congruence_decompose(mat, tol)
    if dec.e_block_count:
        raise SynthesisFailed(
            "plant sample is only semi-sectorial at the violation frequency")
    if dec.d_phases.size == 0:
        raise SynthesisFailed("plant sample vanishes at the violation frequency")
    a0, b0 = env.bounds(omega0)
    lo, hi = float(dec.d_phases[-1]), float(dec.d_phases[0])
    left, right = -math.pi - a0, math.pi - b0
    k_base = round(((left + right) / 2.0 - (lo + hi) / 2.0) / _TWO_PI)
    best_k, best_slack = k_base, -math.inf
    for kk in (k_base - 1, k_base, k_base + 1):
        shift = _TWO_PI * kk
        slack = min(lo + shift - left, right - hi - shift)
        if slack > best_slack:
            best_k, best_slack = kk, slack
    shift = _TWO_PI * best_k
    up_violation = (hi + shift) - right
    low_violation = left - (lo + shift)
    pos = 0 if up_violation >= low_violation else dec.d_phases.size - 1
    phi1 = float(dec.d_phases[pos])
    target = cmath.exp(1j * (math.pi - phi1))
    theta_t = _wrap_principal(math.pi - phi1)
    if abs(abs(theta_t) - math.pi) < 1e-12:
        theta_t = math.pi
    h_scalar = design_scalar_interpolator(omega0, cmath.exp(1j * theta_t), env, grid, tol)
    coord = dec.kernel_dim + pos
    p_vec = np.linalg.solve(dec.t, np.eye(dec.n)[:, coord])
    h_sys = _scalar_times_structure(h_scalar, np.outer(p_vec, p_vec))
    gw = g(1j * omega0)
    hw = h_sys(1j * omega0)
    smin = float(np.linalg.svd(np.eye(g.n_io) + gw @ hw, compute_uv=False)[-1])
    memb = envelope_membership(h_sys, env, symmetric_required=True, grid=grid, tol=tol)
    pole, dist = _closed_loop_evidence(g, h_sys, omega0, tol)
    return DestabilizerReport(h=h_sys, case="finite", omega0=float(omega0),
                              target=target, membership=memb, sigma_min=smin,
                              closed_loop_pole=pole, pole_distance=dist)


def _scalar_times_structure(h_scalar: StateSpace, struct: np.ndarray) -> StateSpace:
    """Realize h(s) * P for a scalar h and a constant real matrix P."""
    struct = np.asarray(struct, dtype=float)
    m = struct.shape[0]
    # P = sum_k u_k v_k^T via SVD keeps the state count at rank * order
    u, s, vh = np.linalg.svd(struct)
    r = int(np.count_nonzero(s > 1e-14 * max(s[0], 1e-300))) if s.size else 0
    if r == 0:
        return StateSpace.static(np.zeros((m, m)))
    n_h = h_scalar.n_states
    a_blocks, b_rows, c_cols = [], [], []
    for k in range(r):
        uk = (u[:, k] * s[k]).reshape(m, 1)
        vk = vh[k, :].reshape(1, m)
        a_blocks.append(h_scalar.a)
        b_rows.append(h_scalar.b @ vk)
        c_cols.append(uk @ h_scalar.c)
    a = scipy.linalg.block_diag(*a_blocks) if n_h else np.zeros((0, 0))
    b = np.vstack(b_rows) if n_h else np.zeros((0, m))
    c = np.hstack(c_cols) if n_h else np.zeros((m, 0))
    d = float(h_scalar.d[0, 0]) * struct
    return StateSpace(a=a, b=b, c=c, d=d)


def synthesize_destabilizer_gain_symmetric(g: StateSpace, env: GainEnvelope,
                                           grid: GridSpec = DEFAULT_GRID,
                                           tol: ToleranceConfig = DEFAULT_TOL) -> DestabilizerReport:
    """Symmetric H in B_s[gamma] destabilizing G when the small gain
    condition sigma(G(jw)) < 1/gamma(w) fails.

    Built from the Takagi vector of G(j omega0): rank-one
    H = -(1/sigma1) w(s) w(s)^T with first-order all-pass entries matching
    conj(u1) at omega0, so sigma(H(jw)) = 1/sigma1 at every frequency.
    Real violation frequencies (0 or inf) use a real eigenvector instead.
    SynthesisFailed reports any frequency where that constant magnitude
    exceeds gamma.
    """
    if not is_stable(g, tol):
        raise NotStable("gain synthesis needs a stable plant")
    if not structural_checks(g, grid, tol).symmetric:
        raise NotSymmetric("gain synthesis needs a symmetric plant")
    ws = list(_gain_grid(minreal(g, tol), grid, tol)) + [math.inf]

    def sig(w: float) -> float:
        return spectral_norm(g.d) if math.isinf(w) else spectral_norm(g(1j * w))

    excesses = [sig(w) * env.gamma(w) - 1.0 for w in ws]
    k = int(np.argmax(excesses))
    if excesses[k] < 0.0:
        raise ConditionHolds("small gain condition holds at every grid frequency")
    omega0 = ws[k]

    m = g.n_io
    if math.isinf(omega0) or omega0 == 0.0:
        mat = g.d if math.isinf(omega0) else np.real(g(0.0 + 0.0j))
        mat = (mat + mat.T) / 2.0
        lam, vec = np.linalg.eigh(mat)
        idx = int(np.argmax(np.abs(lam)))
        lam0 = lam[idx]
        v = vec[:, idx]
        h_sys = StateSpace.static(-(1.0 / lam0) * np.outer(v, v))
        case = "gain-static"
    else:
        tak = takagi(g(1j * omega0), tol)
        sigma1 = float(tak.sigma[0])
        u1 = tak.u[:, 0]
        entries = []
        for ui in u1:
            mag = abs(ui)
            psi = _wrap_principal(-math.atan2(ui.imag, ui.real))
            if mag <= 1e-14:
                entries.append(StateSpace.static([[0.0]]))
            elif abs(psi) <= 1e-12:
                entries.append(StateSpace.static([[mag]]))
            elif abs(abs(psi) - math.pi) <= 1e-12:
                entries.append(StateSpace.static([[-mag]]))
            elif psi < 0:
                c = omega0 / math.tan(-psi / 2.0)
                entries.append(tf([-mag, mag * c], [1.0, c]))
            else:
                c = omega0 / math.tan((math.pi - psi) / 2.0)
                entries.append(tf([mag, -mag * c], [1.0, c]))
        col = _stack_column(entries)
        h_sys = _rank_one_product(col, -1.0 / sigma1)
        case = "gain-dynamic"

    profile = []
    worst = None
    for w in ws:
        sh = spectral_norm(h_sys.d) if math.isinf(w) else spectral_norm(h_sys(1j * w))
        gw = env.gamma(w)
        profile.append((w, sh, gw))
        if sh > gw * (1.0 + 1e-9):
            worst = w
            break
    if worst is not None:
        raise SynthesisFailed(
            f"constant-magnitude construction exceeds gamma at omega = {worst}")
    w_eval = omega0
    gw = g.d.astype(complex) if math.isinf(w_eval) else g(1j * w_eval)
    hw = h_sys.d.astype(complex) if math.isinf(w_eval) else h_sys(1j * w_eval)
    smin = float(np.linalg.svd(np.eye(m) + gw @ hw, compute_uv=False)[-1])
    pole = dist = None
    ill = False
    if math.isinf(w_eval):
        try:
            interconnect(g, h_sys, tol)
        except IllPosed:
            ill = True
    else:
        try:
            pole, dist = _closed_loop_evidence(g, h_sys, w_eval, tol)
        except IllPosed:
            ill = True
    return DestabilizerReport(h=h_sys, case=case, omega0=float(omega0),
                              sigma_min=smin, closed_loop_pole=pole,
                              pole_distance=dist, ill_posed_at_infinity=ill,
                              gain_profile=tuple(profile))


@dataclass(frozen=True)
class _ColumnSystem:
    """Non-square m x 1 transfer column; internal helper only."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __call__(self, s: complex) -> np.ndarray:
        n = self.a.shape[0]
        if n == 0:
            return self.d.astype(complex)
        x = np.linalg.solve(s * np.eye(n) - self.a, self.b.astype(complex))
        return self.c @ x + self.d


def _stack_column(entries: list[StateSpace]) -> _ColumnSystem:
    """Column vector system w(s): scalar entries stacked vertically."""
    m = len(entries)
    a = scipy.linalg.block_diag(*[e.a for e in entries])
    b = np.vstack([e.b for e in entries])
    n_total = a.shape[0]
    c = np.zeros((m, n_total))
    off = 0
    for i, e in enumerate(entries):
        c[i, off:off + e.n_states] = e.c[0]
        off += e.n_states
    d = np.vstack([e.d for e in entries])
    return _ColumnSystem(a=np.asarray(a, float), b=np.asarray(b, float),
                         c=c, d=np.asarray(d, float))


def _rank_one_product(col: "_ColumnSystem", scale: float) -> StateSpace:
    """Square realization of scale * w(s) w(s)^T from the column system w."""
    m = col.d.shape[0]
    row_a, row_b, row_c, row_d = col.a.T, col.c.T, col.b.T, col.d.T
    n1, n2 = row_a.shape[0], col.a.shape[0]
    a = np.zeros((n1 + n2, n1 + n2))
    a[:n1, :n1] = row_a
    a[n1:, n1:] = col.a
    a[n1:, :n1] = col.b @ row_c
    b = np.vstack([row_b, col.b @ row_d])
    c = np.hstack([scale * (col.d @ row_c), scale * col.c])
    d = scale * (col.d @ row_d)
    return StateSpace(a=a, b=b, c=c, d=d)


def synthesize_destabilizer_inner(g: StateSpace, env: PhaseEnvelope,
                                  grid: GridSpec = DEFAULT_GRID,
                                  tol: ToleranceConfig = DEFAULT_TOL) -> DestabilizerReport:
    """Destabilizer H = h(s) I for a stable inner frequency-wise sectorial G.

    Requires Phi(G(inf)) inside the envelope interval at infinity; the
    violation then sits at a finite positive frequency where G(j omega0)
    is unitary, and the scalar interpolator hits e^{j (pi - phi1)} on the
    offending eigenvalue phase.
    """
    if not is_stable(g, tol):
        raise NotStable("inner-plant synthesis needs a stable plant")
    checks = structural_checks(g, grid, tol)
    if not checks.inner:
        raise NotInner("plant fails the all-pass identity on the axis")
    a_inf, b_inf = env.bounds(math.inf)
    try:
        sec_inf = phases(g.d, tol=tol) if spectral_norm(g.d) > 0 else None
    except Exception as exc:
        raise AssumptionViolatedAtInfinity(
            "feedthrough term has no phase sector") from exc
    if sec_inf is not None:
        slack = fit_interval_mod_2pi(sec_inf.phi_min, sec_inf.phi_max,
                                     -math.pi - a_inf, math.pi - b_inf)
        if slack <= 0.0:
            raise AssumptionViolatedAtInfinity(
                "Phi(G(inf)) violates the envelope interval at infinity")
    resp = phase_response(g, grid=grid, tol=tol)
    usable = [s for s in resp.samples
              if s.kind == "axis" and not s.empty and 0.0 < s.omega < math.inf]
    if not usable:
        raise ConditionHolds("no finite positive frequencies to scan")
    excesses = [_phase_excess(s.phi_low, s.phi_high, s.omega, env) for s in usable]
    k = int(np.argmax(excesses))
    best_s, best_e = usable[k], excesses[k]
    gamma_hint = best_s.gamma
    j = k
    lo = usable[j - 1].omega if j > 0 else best_s.omega * 0.5
    hi = usable[j + 1].omega if j + 1 < len(usable) else best_s.omega * 2.0

    def excess_at(w: float) -> float:
        sec = _sector_at(g, w, gamma_hint, tol)
        return _phase_excess(sec.phi_min, sec.phi_max, w, env)

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1, x2 = b - invphi * (b - a), a + invphi * (b - a)
    f1, f2 = excess_at(x1), excess_at(x2)
    for _ in range(90):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = excess_at(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = excess_at(x1)
    w_ref = (a + b) / 2.0
    if excess_at(w_ref) >= best_e:
        omega0 = w_ref
        best_e = excess_at(w_ref)
    else:
        omega0 = best_s.omega
    if best_e < -_ANGLE_TOL:
        raise ConditionHolds("small phase condition holds at every scanned frequency")
    mat = g(1j * omega0)
    unit_res = spectral_norm(mat.conj().T @ mat - np.eye(g.n_io))
    if unit_res > 1e-8:
        raise SynthesisFailed(
            f"G(j omega0) deviates from unitary by {unit_res:.3e}")
    sec = _sector_at(g, omega0, gamma_hint, tol)
    a0, b0 = env.bounds(omega0)
    lo_p, hi_p = sec.phi_min, sec.phi_max
    left, right = -math.pi - a0, math.pi - b0
    k_base = round(((left + right) / 2.0 - (lo_p + hi_p) / 2.0) / _TWO_PI)
    best_k, best_slack = k_base, -math.inf
    for kk in (k_base - 1, k_base, k_base + 1):
        shift = _TWO_PI * kk
        slack = min(lo_p + shift - left, right - hi_p - shift)
        if slack > best_slack:
            best_k, best_slack = kk, slack
    shift = _TWO_PI * best_k
    up_violation = (hi_p + shift) - right
    low_violation = left - (lo_p + shift)
    phi1 = hi_p if up_violation >= low_violation else lo_p
    theta_t = _wrap_principal(math.pi - phi1)
    h_scalar = design_scalar_interpolator(omega0, cmath.exp(1j * theta_t), env, grid, tol)
    h_sys = _scalar_times_structure(h_scalar, np.eye(g.n_io))
    gw = g(1j * omega0)
    hw = h_sys(1j * omega0)
    smin = float(np.linalg.svd(np.eye(g.n_io) + gw @ hw, compute_uv=False)[-1])
    memb = envelope_membership(h_sys, env, symmetric_required=False, grid=grid, tol=tol)
    pole, dist = _closed_loop_evidence(g, h_sys, omega0, tol)
    return DestabilizerReport(h=h_sys, case="inner", omega0=float(omega0),
                              target=cmath.exp(1j * theta_t), membership=memb,
                              sigma_min=smin, closed_loop_pole=pole,
                              pole_distance=dist)


def trivial_phase_interpolation(z0, omega0: float, eps: float,
                                tol: ToleranceConfig = DEFAULT_TOL) -> StateSpace | None:
    """The two solvable phase interpolation cases; None otherwise.

    Real PSD Z0: the constant Z(s) = Z0 works. Z0 = I: the constant
    identity works. Any other complex PSD matrix returns None; this
    operation never guesses at the open general problem.
    """
    z0 = as_square_matrix(z0)
    scale = max(spectral_norm(z0), 1e-300)
    if spectral_norm(z0 - z0.conj().T) > tol.psd_tol * scale:
        raise NotPSD("interpolation data must be Hermitian PSD")
    w = np.linalg.eigvalsh(herm_part(z0))
    if w[0] < -tol.psd_tol * scale:
        raise NotPSD("interpolation data must be positive semi-definite")
    if spectral_norm(np.imag(z0)) <= tol.psd_tol * (1.0 + scale):
        return StateSpace.static((np.real(z0) + np.real(z0).T) / 2.0)
    if spectral_norm(z0 - np.eye(z0.shape[0])) <= tol.psd_tol * (1.0 + scale):
        return StateSpace.static(np.eye(z0.shape[0]))
    return None
