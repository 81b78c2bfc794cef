"""Real-rational MIMO LTI systems and their frequency-domain analysis.

Systems are square (m inputs, m outputs) state-space models with real
matrices. The phase response is an interval-valued function along the
indented imaginary axis: right half-circle detours of radius epsilon at
imaginary-axis poles and finite imaginary-axis zeros, and a large detour
at infinity when the feedthrough term is singular. The branch of the
phase center gamma is tracked continuously along that contour.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .errors import (
    NoConvergence,
    NotAccretiveAtStart,
    NotFrequencyWiseSemiSectorial,
    NotLyapunovStable,
    NotSemiSimple,
    NotStable,
    PhaseContinuityError,
    PoleProximity,
)
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_real_matrix,
    numeric_rank,
    spectral_norm,
)
from .numrange import Sectoriality, classify
from .phasecore import PhaseSector, sector_with_rotation_hint

_STRENGTH = {
    Sectoriality.SECTORIAL: 3,
    Sectoriality.QUASI_SECTORIAL: 2,
    Sectoriality.SEMI_SECTORIAL: 1,
    Sectoriality.INDEFINITE: 0,
}

# relative detour radius; the infinity arc sits at scale / _EPS_REL so the
# limiting phases at omega -> inf are resolved to ~1e-8
_EPS_REL = 1e-8
_AXIS_BAND_REL = 1e-8


@dataclass(frozen=True)
class StateSpace:
    """Square real-rational system x' = Ax + Bu, y = Cx + Du."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        a = as_real_matrix(self.a)
        b = as_real_matrix(self.b)
        c = as_real_matrix(self.c)
        d = as_real_matrix(self.d)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("A must be square")
        m = d.shape[0]
        if d.shape != (m, m) or m < 1:
            raise ValueError("D must be square with m >= 1 (square systems only)")
        if b.shape != (n, m) or c.shape != (m, n):
            raise ValueError(f"B/C dimensions inconsistent: A {a.shape}, B {b.shape}, "
                             f"C {c.shape}, D {d.shape}")
        for name, arr in (("a", a), ("b", b), ("c", c), ("d", d)):
            object.__setattr__(self, name, arr)

    @property
    def n_states(self) -> int:
        return self.a.shape[0]

    @property
    def n_io(self) -> int:
        return self.d.shape[0]

    def __call__(self, s: complex) -> np.ndarray:
        """Transfer matrix value C (sI - A)^{-1} B + D."""
        if self.n_states == 0:
            return self.d.astype(complex)
        mat = s * np.eye(self.n_states) - self.a
        try:
            x = np.linalg.solve(mat, self.b.astype(complex))
        except np.linalg.LinAlgError as exc:
            raise PoleProximity(f"sI - A is singular at s = {s}") from exc
        return self.c @ x + self.d

    @staticmethod
    def static(d) -> "StateSpace":
        d = as_real_matrix(d)
        m = d.shape[0]
        return StateSpace(a=np.zeros((0, 0)), b=np.zeros((0, m)),
                          c=np.zeros((m, 0)), d=d)


def tf(num, den) -> StateSpace:
    """SISO transfer function (descending polynomial coefficients) to
    controllable canonical state space. Requires a proper ratio."""
    num = np.atleast_1d(np.asarray(num, dtype=float))
    den = np.atleast_1d(np.asarray(den, dtype=float))
    den = np.trim_zeros(den, "f")
    if den.size == 0:
        raise ValueError("denominator is zero")
    num = np.trim_zeros(num, "f")
    if num.size == 0:
        num = np.zeros(1)
    if num.size > den.size:
        raise ValueError("improper transfer function")
    num = num / den[0]
    den = den / den[0]
    n = den.size - 1
    if n == 0:
        return StateSpace.static([[num[-1] if num.size else 0.0]])
    num_full = np.concatenate([np.zeros(den.size - num.size), num])
    d0 = num_full[0]
    rem = num_full[1:] - d0 * den[1:]
    a = np.zeros((n, n))
    a[:-1, 1:] = np.eye(n - 1)
    a[-1, :] = -den[1:][::-1]
    b = np.zeros((n, 1))
    b[-1, 0] = 1.0
    c = rem[::-1].reshape(1, n)
    return StateSpace(a=a, b=b, c=c, d=np.array([[d0]]))


def ss_block_diag(*systems: StateSpace) -> StateSpace:
    """Diagonal concatenation diag(G1, ..., Gk)."""
    if not systems:
        raise ValueError("need at least one system")
    a = scipy.linalg.block_diag(*[g.a for g in systems])
    b = scipy.linalg.block_diag(*[g.b for g in systems])
    c = scipy.linalg.block_diag(*[g.c for g in systems])
    d = scipy.linalg.block_diag(*[g.d for g in systems])
    return StateSpace(a=a, b=b, c=c, d=d)


def ss_transpose(g: StateSpace) -> StateSpace:
    """Realization of G(s)^T."""
    return StateSpace(a=g.a.T, b=g.c.T, c=g.b.T, d=g.d.T)


def ss_series(g2: StateSpace, g1: StateSpace) -> StateSpace:
    """Realization of G2(s) G1(s) (u -> G1 -> G2 -> y)."""
    if g1.n_io != g2.n_io:
        # allow rectangular chaining through b/c shapes
        pass
    n1, n2 = g1.n_states, g2.n_states
    a = np.zeros((n1 + n2, n1 + n2))
    a[:n1, :n1] = g1.a
    a[n1:, n1:] = g2.a
    a[n1:, :n1] = g2.b @ g1.c
    b = np.vstack([g1.b, g2.b @ g1.d])
    c = np.hstack([g2.d @ g1.c, g2.c])
    d = g2.d @ g1.d
    return StateSpace(a=a, b=b, c=c, d=d)


def ss_scale(g: StateSpace, k: float) -> StateSpace:
    return StateSpace(a=g.a, b=g.b, c=k * g.c, d=k * g.d)


def _orth_cols(m: np.ndarray, tol_rel: float) -> np.ndarray:
    """Orthonormal basis of the column space."""
    if m.size == 0:
        return np.zeros((m.shape[0], 0))
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m.shape[0], 0))
    r = int(np.count_nonzero(s > tol_rel * s[0]))
    return u[:, :r]


def _reachable_basis(a: np.ndarray, b: np.ndarray, tol_rel: float) -> np.ndarray:
    n = a.shape[0]
    basis = _orth_cols(b, tol_rel)
    for _ in range(n):
        if basis.shape[1] in (0, n):
            break
        grown = _orth_cols(np.hstack([basis, a @ basis]), tol_rel)
        if grown.shape[1] == basis.shape[1]:
            break
        basis = grown
    return basis


def minreal(g: StateSpace, tol: ToleranceConfig = DEFAULT_TOL) -> StateSpace:
    """Remove unreachable and unobservable states (rank-based staircase)."""
    if g.n_states == 0:
        return g
    v = _reachable_basis(g.a, g.b, tol.rank_tol)
    a = v.T @ g.a @ v
    b = v.T @ g.b
    c = g.c @ v
    w = _reachable_basis(a.T, c.T, tol.rank_tol)
    a = w.T @ a @ w
    b = w.T @ b
    c = c @ w
    return StateSpace(a=a, b=b, c=c, d=g.d)


@dataclass(frozen=True)
class Pole:
    value: complex
    multiplicity: int
    semi_simple: bool


def _eig_scale(a: np.ndarray) -> float:
    if a.size == 0:
        return 1.0
    return max(1.0, spectral_norm(a))


def _cluster(values: np.ndarray, radius: float) -> list[np.ndarray]:
    """Group eigenvalues within `radius` of each other (union by chaining)."""
    order = np.argsort(values.real + 1e-9 * values.imag)
    groups: list[list[int]] = []
    for idx in order:
        placed = False
        for grp in groups:
            if any(abs(values[idx] - values[j]) <= radius for j in grp):
                grp.append(int(idx))
                placed = True
                break
        if not placed:
            groups.append([int(idx)])
    return [np.array(g) for g in groups]


def _schur_cluster_block(a: np.ndarray, center: complex, radius: float):
    """Leading Schur block for eigenvalues within `radius` of `center`.

    Returns (t11, t12, t22, q, k)."""
    t, q, sdim = scipy.linalg.schur(
        a.astype(complex), output="complex",
        sort=lambda x: bool(abs(x - center) <= radius))
    k = int(sdim)
    return t[:k, :k], t[:k, k:], t[k:, k:], q, k


def poles(g: StateSpace, tol: ToleranceConfig = DEFAULT_TOL) -> list[Pole]:
    """Poles of the transfer matrix (eigenvalues of the trimmed realization)
    with multiplicities and semi-simplicity flags."""
    gm = minreal(g, tol)
    if gm.n_states == 0:
        return []
    vals = np.linalg.eigvals(gm.a)
    scale = _eig_scale(gm.a)
    radius = 1e-6 * scale
    out = []
    for grp in _cluster(vals, radius):
        center = complex(np.mean(vals[grp]))
        k = grp.size
        semi = True
        if k > 1:
            t11, _, _, _, kk = _schur_cluster_block(gm.a, center, radius)
            mean = complex(np.trace(t11)) / max(kk, 1)
            semi = spectral_norm(t11 - mean * np.eye(kk)) <= 1e-6 * scale
        out.append(Pole(value=center, multiplicity=k, semi_simple=semi))
    return sorted(out, key=lambda p: (p.value.real, p.value.imag))


def is_lyapunov_stable(g: StateSpace, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Poles in the closed left half plane; imaginary-axis poles semi-simple."""
    gm = minreal(g, tol)
    band = _AXIS_BAND_REL * _eig_scale(gm.a)
    for p in poles(gm, tol):
        if p.value.real > band:
            return False
        if abs(p.value.real) <= band and not p.semi_simple:
            return False
    return True


def is_stable(g: StateSpace, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Strict Hurwitz stability of the trimmed realization."""
    gm = minreal(g, tol)
    band = _AXIS_BAND_REL * _eig_scale(gm.a)
    return all(p.value.real < -band for p in poles(gm, tol))


def residue_at(g: StateSpace, omega0: float, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Residue lim_{s -> j w0} (s - j w0) G(s) via the spectral projector.

    Requires the pole at j*omega0 (if any) to be semi-simple; returns the
    zero matrix when j*omega0 is not a pole.
    """
    gm = minreal(g, tol)
    m = gm.n_io
    if gm.n_states == 0:
        return np.zeros((m, m), dtype=complex)
    target = 1j * omega0
    scale = _eig_scale(gm.a)
    radius = 1e-6 * scale
    vals = np.linalg.eigvals(gm.a)
    if not np.any(np.abs(vals - target) <= radius):
        return np.zeros((m, m), dtype=complex)
    t11, t12, t22, q, k = _schur_cluster_block(gm.a, target, radius)
    mean = complex(np.trace(t11)) / k
    if spectral_norm(t11 - mean * np.eye(k)) > 1e-6 * scale:
        raise NotSemiSimple(f"pole near j*{omega0} has nontrivial Jordan structure")
    n = gm.n_states
    proj_t = np.zeros((n, n), dtype=complex)
    proj_t[:k, :k] = np.eye(k)
    if k < n:
        r = scipy.linalg.solve_sylvester(t11, -t22, t12)
        proj_t[:k, k:] = r
    proj = q @ proj_t @ q.conj().T
    return gm.c @ proj @ gm.b


def imaginary_axis_zeros(g: StateSpace, tol: ToleranceConfig = DEFAULT_TOL) -> list[float]:
    """Frequencies (>= 0) of finite transmission zeros on the imaginary axis.

    Zeros are the finite generalized eigenvalues of the system pencil
    [[A, B], [C, D]] - s [[I, 0], [0, 0]].
    """
    gm = minreal(g, tol)
    n, m = gm.n_states, gm.n_io
    if n == 0:
        return []
    m1 = np.block([[gm.a, gm.b], [gm.c, gm.d]])
    m2 = np.zeros_like(m1)
    m2[:n, :n] = np.eye(n)
    try:
        vals = scipy.linalg.eig(m1, m2, right=False)
    except (np.linalg.LinAlgError, ValueError):
        return []
    vals = vals[np.isfinite(vals)]
    band = _AXIS_BAND_REL * _eig_scale(gm.a)
    freqs = sorted({round(abs(v.imag), 12) for v in vals if abs(v.real) <= band})
    return [float(f) for f in freqs]


# ----------------------------------------------------------------------
# indented contour


@dataclass(frozen=True)
class GridSpec:
    """Density controls for contour and frequency grids."""

    axis_points: int = 240
    arc_points: int = 24
    omega_min_factor: float = 1e-3
    omega_max_factor: float = 1e3
    max_refine_depth: int = 24
    gamma_jump: float = math.pi / 2.0


DEFAULT_GRID = GridSpec()


@dataclass(frozen=True)
class ContourPoint:
    """One sample of the indented contour.

    kind 'axis': s = j*omega. kind 'arc': s = j*center + radius*e^{j*theta}
    (center 0 and the infinity arc use s = radius*e^{j*theta}).
    kind 'inf': the exact omega = inf sample, evaluated at D.
    """

    s: complex
    kind: str
    omega: float
    theta: float | None = None
    segment: int = -1
    param: float = 0.0


@dataclass(frozen=True)
class IndentedContour:
    points: tuple[ContourPoint, ...]
    epsilon: float
    segments: tuple[tuple, ...] = field(default=(), repr=False)

    def midpoint(self, p1: ContourPoint, p2: ContourPoint) -> ContourPoint | None:
        """Point halfway between two adjacent samples of the same segment."""
        if p1.segment != p2.segment or p1.segment < 0:
            return None
        seg = self.segments[p1.segment]
        if seg[0] == "axis":
            w1, w2 = p1.param, p2.param
            if w1 > 0 and w2 > 0:
                w = math.sqrt(w1 * w2)
            else:
                w = (w1 + w2) / 2.0
            if w in (w1, w2):
                return None
            return ContourPoint(s=1j * w, kind="axis", omega=w,
                                segment=p1.segment, param=w)
        if seg[0] == "arc":
            _, center, radius = seg
            th = (p1.param + p2.param) / 2.0
            if th in (p1.param, p2.param):
                return None
            s = 1j * center + radius * cmath.exp(1j * th)
            return ContourPoint(s=s, kind="arc", omega=center, theta=th,
                                segment=p1.segment, param=th)
        return None


def _log_points(lo: float, hi: float, count: int) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    if lo <= 0.0:
        inner = np.geomspace(max(hi * 1e-9, 1e-30), hi, max(count - 1, 2))
        return np.concatenate([[0.0], inner])
    return np.geomspace(lo, hi, max(count, 2))


def build_contour(g: StateSpace, epsilon: float | None = None,
                  grid: GridSpec = DEFAULT_GRID,
                  tol: ToleranceConfig = DEFAULT_TOL,
                  include_omegas=()) -> IndentedContour:
    """Upper half of the indented imaginary axis for G.

    Detours at imaginary-axis poles and finite imaginary-axis zeros, a
    large arc at infinity when G(inf) = D is rank deficient, and the exact
    omega = inf sample otherwise. Requires Lyapunov stability.
    Frequencies in include_omegas are merged into the axis grid (those
    falling inside a detour are dropped).
    """
    gm = minreal(g, tol)
    if not is_lyapunov_stable(gm, tol):
        raise NotLyapunovStable("contour phase analysis needs Lyapunov stability")
    m = gm.n_io
    scale = _eig_scale(gm.a)
    eps = epsilon if epsilon is not None else _EPS_REL * scale
    band = _AXIS_BAND_REL * scale
    natural = np.abs(np.linalg.eigvals(gm.a)) if gm.n_states else np.array([])
    pole_ws = sorted({round(abs(p.value.imag), 12) for p in poles(gm, tol)
                      if abs(p.value.real) <= band})
    zero_ws = imaginary_axis_zeros(gm, tol)
    centers = sorted(set(pole_ws) | set(zero_ws))
    merged = []
    for w in centers:
        if merged and w - merged[-1] <= 4 * eps:
            continue
        merged.append(w)
    centers = merged
    inf_zero = numeric_rank(gm.d, tol) < m

    positive = [f for f in natural if f > band] + [w for w in centers if w > 0]
    w_lo = grid.omega_min_factor * (min(positive) if positive else 1.0)
    w_hi = grid.omega_max_factor * (max(positive) if positive else 1.0)
    w_hi = max(w_hi, (max(centers) if centers else 0.0) * 10 + 1.0)
    r_inf = scale / _EPS_REL
    w_end = r_inf if inf_zero else w_hi

    segments: list[tuple] = []
    points: list[ContourPoint] = []

    def add_arc(center: float, radius: float, th_from: float, th_to: float):
        seg_id = len(segments)
        segments.append(("arc", center, radius))
        for th in np.linspace(th_from, th_to, grid.arc_points):
            s = 1j * center + radius * cmath.exp(1j * th)
            points.append(ContourPoint(s=s, kind="arc", omega=center, theta=float(th),
                                       segment=seg_id, param=float(th)))

    extra = np.asarray(sorted(set(float(w) for w in include_omegas)), dtype=float)

    def add_axis(lo: float, hi: float, count: int):
        if hi < lo:
            return
        seg_id = len(segments)
        segments.append(("axis", lo, hi))
        ws = _log_points(lo, hi, count)
        if extra.size:
            inside = extra[(extra >= lo) & (extra <= hi)]
            ws = np.unique(np.concatenate([ws, inside]))
        for w in ws:
            points.append(ContourPoint(s=1j * w, kind="axis", omega=float(w),
                                       segment=seg_id, param=float(w)))

    start_at_origin_arc = bool(centers) and centers[0] <= 4 * eps
    interior = [w for w in centers if w > 4 * eps]
    # share of axis points per decade of total span
    spans = []
    cursor = eps if start_at_origin_arc else 0.0
    for w0 in interior:
        spans.append((cursor, w0 - eps))
        cursor = w0 + eps
    spans.append((cursor, w_end))
    decades = [math.log10(max(hi, 1e-12) / max(lo, w_lo * 1e-3, 1e-12)) if hi > lo else 0.0
               for lo, hi in spans]
    total_dec = sum(max(d, 0.3) for d in decades)

    if start_at_origin_arc:
        add_arc(0.0, eps, 0.0, math.pi / 2.0)
    for idx, ((lo, hi), dec) in enumerate(zip(spans, decades)):
        count = max(8, int(round(grid.axis_points * max(dec, 0.3) / max(total_dec, 0.3))))
        add_axis(lo, hi, count)
        if idx < len(interior):
            add_arc(interior[idx], eps, -math.pi / 2.0, math.pi / 2.0)
    if inf_zero:
        add_arc(0.0, r_inf, math.pi / 2.0, 0.0)
    else:
        seg_id = len(segments)
        segments.append(("inf",))
        points.append(ContourPoint(s=complex(math.inf), kind="inf", omega=math.inf,
                                   segment=seg_id, param=0.0))
    return IndentedContour(points=tuple(points), epsilon=eps, segments=tuple(segments))


# ----------------------------------------------------------------------
# responses


@dataclass(frozen=True)
class PhaseSample:
    kind: str
    omega: float
    theta: float | None
    s: complex
    phi_low: float
    phi_high: float
    gamma: float
    empty: bool = False


@dataclass(frozen=True)
class PhaseResponse:
    samples: tuple[PhaseSample, ...]
    continuous: bool = True


@dataclass(frozen=True)
class GainResponse:
    samples: tuple[tuple[float, float], ...]


def _value_at(g: StateSpace, point: ContourPoint) -> np.ndarray:
    if point.kind == "inf":
        return g.d.astype(complex)
    return g(point.s)


def phase_response(g: StateSpace, contour: IndentedContour | None = None,
                   grid: GridSpec = DEFAULT_GRID,
                   tol: ToleranceConfig = DEFAULT_TOL) -> PhaseResponse:
    """Interval-valued phase response along the indented contour.

    Each sample carries [phi_low, phi_high] and the tracked phase center
    gamma; the branch starts at the principal value of the (accretive)
    first sample and is continued by nearest-translate hints, bisecting
    the contour wherever gamma jumps by more than gamma_jump.
    """
    gm = minreal(g, tol)
    if contour is None:
        contour = build_contour(gm, grid=grid, tol=tol)
    band = _AXIS_BAND_REL * _eig_scale(gm.a)
    for p in poles(gm, tol):
        if abs(p.value.real) <= band:
            res = residue_at(gm, p.value.imag, tol)
            if not classify(res, tol).semi_sectorial:
                raise NotFrequencyWiseSemiSectorial(
                    f"residue at j*{p.value.imag:.6g} is not semi-sectorial")

    first = contour.points[0]
    m0 = _value_at(gm, first)
    h0 = (m0 + m0.conj().T) / 2.0
    scale0 = spectral_norm(m0)
    if scale0 > 0 and np.linalg.eigvalsh(h0)[0] < -tol.psd_tol * scale0:
        raise NotAccretiveAtStart(
            "response start point is not accretive; normalize G first")

    samples: list[PhaseSample] = []
    state = {"gamma": None, "t": 0.0}

    def compute(point: ContourPoint):
        mat = _value_at(gm, point)
        try:
            sector, t_used = sector_with_rotation_hint(mat, state["t"], state["gamma"], tol)
        except Exception as exc:
            raise NotFrequencyWiseSemiSectorial(
                f"sample at s = {point.s:.6g} is not semi-sectorial") from exc
        return sector, t_used

    def emit(point: ContourPoint, sector: PhaseSector, t_used: float):
        if sector.phases.size:
            state["gamma"] = sector.gamma
        state["t"] = t_used
        samples.append(PhaseSample(kind=point.kind, omega=point.omega,
                                   theta=point.theta, s=point.s,
                                   phi_low=sector.phi_min, phi_high=sector.phi_max,
                                   gamma=sector.gamma,
                                   empty=sector.phases.size == 0))

    def advance(left: ContourPoint, right: ContourPoint, depth: int):
        sector, t_used = compute(right)
        gamma_ref = state["gamma"]
        if (not sector.phases.size) or gamma_ref is None \
                or abs(sector.gamma - gamma_ref) <= grid.gamma_jump:
            emit(right, sector, t_used)
            return
        if depth >= grid.max_refine_depth:
            raise PhaseContinuityError(
                f"gamma jump {abs(sector.gamma - gamma_ref):.3f} rad at "
                f"s = {right.s:.6g} not resolved at max refinement depth")
        mid = contour.midpoint(left, right)
        if mid is None:
            raise PhaseContinuityError(
                f"gamma jump at segment boundary near s = {right.s:.6g}")
        advance(left, mid, depth + 1)
        advance(mid, right, depth + 1)

    sector, t_used = compute(first)
    emit(first, sector, t_used)
    for prev, point in zip(contour.points, contour.points[1:]):
        advance(prev, point, 0)
    return PhaseResponse(samples=tuple(samples), continuous=True)


def phi_inf_sector(g: StateSpace, grid: GridSpec = DEFAULT_GRID,
                   tol: ToleranceConfig = DEFAULT_TOL,
                   response: PhaseResponse | None = None) -> tuple[float, float]:
    """[phi_low, phi_high] extremes of the phase response over the contour."""
    if response is None:
        response = phase_response(g, grid=grid, tol=tol)
    lows = [s.phi_low for s in response.samples if not s.empty]
    highs = [s.phi_high for s in response.samples if not s.empty]
    if not lows:
        return 0.0, 0.0
    return min(lows), max(highs)


def _gain_grid(g: StateSpace, grid: GridSpec, tol: ToleranceConfig) -> np.ndarray:
    gm = minreal(g, tol)
    natural = np.abs(np.linalg.eigvals(gm.a)) if gm.n_states else np.array([])
    positive = natural[natural > 0]
    w_lo = grid.omega_min_factor * (positive.min() if positive.size else 1.0)
    w_hi = grid.omega_max_factor * (natural.max() if natural.size else 1.0)
    return np.concatenate([[0.0], np.geomspace(max(w_lo, 1e-12), max(w_hi, 1.0),
                                               grid.axis_points)])


def gain_response(g: StateSpace, grid: GridSpec = DEFAULT_GRID,
                  tol: ToleranceConfig = DEFAULT_TOL) -> GainResponse:
    """sigma_max(G(j omega)) on a log grid including omega = 0 and inf."""
    if not is_stable(g, tol):
        raise NotStable("gain response needs a strictly stable system")
    ws = _gain_grid(g, grid, tol)
    samples = [(float(w), spectral_norm(g(1j * w))) for w in ws]
    samples.append((math.inf, spectral_norm(g.d)))
    return GainResponse(samples=tuple(samples))


def hinf_norm(g: StateSpace, grid: GridSpec = DEFAULT_GRID,
              tol: ToleranceConfig = DEFAULT_TOL) -> tuple[float, float]:
    """H-infinity norm and its argmax frequency via adaptive grid refinement.

    Returns (norm, omega_peak); omega_peak is inf when the peak sits at D.
    """
    if not is_stable(g, tol):
        raise NotStable("the H-infinity norm needs a strictly stable system")
    ws = _gain_grid(g, grid, tol)
    vals = np.array([spectral_norm(g(1j * w)) for w in ws])
    d_gain = spectral_norm(g.d)
    k = int(np.argmax(vals))

    def f(w):
        return spectral_norm(g(1j * w))

    lo = ws[k - 1] if k > 0 else ws[0]
    hi = ws[k + 1] if k + 1 < ws.size else ws[-1] * 10.0
    a, b = lo, hi
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1, x2 = b - invphi * (b - a), a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(200):
        if abs(b - a) <= 1e-9 * max(1.0, abs(b)):
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
    w_peak = (a + b) / 2.0
    peak = f(w_peak)
    best = max(vals[k], peak)
    w_best = float(w_peak if peak >= vals[k] else ws[k])
    if d_gain > best:
        return float(d_gain), math.inf
    return float(best), w_best


@dataclass(frozen=True)
class StructuralReport:
    symmetric: bool
    inner: bool
    frequency_wise_class: Sectoriality | None


def structural_checks(g: StateSpace, grid: GridSpec = DEFAULT_GRID,
                      tol: ToleranceConfig = DEFAULT_TOL) -> StructuralReport:
    """Symmetry G = G^T, innerness G^T(-s) G(s) = I, and the weakest
    frequency-wise sectoriality class over contour samples and residues."""
    rng = np.random.default_rng(20240901)
    symmetric = True
    scale = _eig_scale(g.a)
    for _ in range(32):
        s = complex(scale * (0.1 + rng.random()), scale * rng.standard_normal())
        val = g(s)
        if spectral_norm(val - val.T) > 1e-8 * (1.0 + spectral_norm(val)):
            symmetric = False
            break
    inner = True
    for w in np.geomspace(1e-3 * scale, 1e3 * scale, 48):
        gw = g(1j * w)
        if spectral_norm(g(-1j * w).T @ gw - np.eye(g.n_io)) > 1e-7 * (1.0 + spectral_norm(gw) ** 2):
            inner = False
            break
    fw_class: Sectoriality | None = None
    if is_lyapunov_stable(g, tol):
        weakest = Sectoriality.SECTORIAL
        contour = build_contour(g, grid=replace(grid, axis_points=min(grid.axis_points, 120)),
                                tol=tol)
        for point in contour.points:
            tag = classify(_value_at(g, point), tol).tag
            if _STRENGTH[tag] < _STRENGTH[weakest]:
                weakest = tag
            if weakest is Sectoriality.INDEFINITE:
                break
        gm = minreal(g, tol)
        band = _AXIS_BAND_REL * _eig_scale(gm.a)
        for p in poles(gm, tol):
            if abs(p.value.real) <= band:
                tag = classify(residue_at(gm, p.value.imag, tol), tol).tag
                if _STRENGTH[tag] < _STRENGTH[weakest]:
                    weakest = tag
        fw_class = weakest
    return StructuralReport(symmetric=symmetric, inner=inner,
                            frequency_wise_class=fw_class)
