"""Numerical range geometry.

The numerical range W(C) = { x^H C x : |x| = 1 } is described through its
support function p(t) = lambda_max of the Hermitian part of e^{-jt} C.
Classification into sectorial / quasi-sectorial / semi-sectorial /
indefinite, the subtended angle delta(C) and the supporting half-plane
normal theta0 all derive from that one scalar function of the angle.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_square_matrix,
    herm_part,
    spectral_norm,
    svd,
)

_TWO_PI = 2.0 * math.pi
# bisection depth for locating support-sign transition angles; deep enough
# that midpoint angles are accurate to ~1e-12 rad from a 512-point base grid
_BISECT_ITERS = 48
_GOLDEN_ITERS = 80
_BASE_GRID = 512


class Sectoriality(enum.Enum):
    SECTORIAL = "sectorial"
    QUASI_SECTORIAL = "quasi-sectorial"
    SEMI_SECTORIAL = "semi-sectorial"
    INDEFINITE = "indefinite"


class ZeroLocation(enum.Enum):
    OUTSIDE = "outside"
    BOUNDARY = "boundary"
    INTERIOR = "interior"


@dataclass(frozen=True)
class SupportProfile:
    """Support function p(t) sampled on a uniform angle grid of >= 256 points."""

    angles: np.ndarray
    values: np.ndarray
    refinement_depth: int

    def __post_init__(self):
        if self.angles.size < 256:
            raise ValueError("support profile needs at least 256 base points")


@dataclass(frozen=True)
class SectorialClass:
    """Classification result.

    delta is the angle subtended at 0 by the supporting rays (present when
    it is at most pi); theta0 is the normal of the supporting half plane.
    on_tolerance_band marks matrices whose support minimum falls inside the
    +-psd_tol band, where boundary vs interior is decided by convention.
    """

    tag: Sectoriality
    delta: float | None = None
    theta0: float | None = None
    on_tolerance_band: bool = False

    @property
    def semi_sectorial(self) -> bool:
        return self.tag is not Sectoriality.INDEFINITE


def _wrap_principal(angle: float) -> float:
    """Wrap to [-pi, pi)."""
    return (angle + math.pi) % _TWO_PI - math.pi


def _min_max_eig(c: np.ndarray, t: float):
    w = np.linalg.eigvalsh(herm_part(np.exp(-1j * t) * c))
    return w[0], w[-1]


def _rho(c: np.ndarray, t: float) -> float:
    """Smallest eigenvalue of the Hermitian part of the rotated matrix.

    rho(t) = -p(t + pi); rho(t) > 0 exactly at the strictly accretive
    rotations, and the set {rho >= 0} is an arc of length pi - delta(C).
    """
    return _min_max_eig(c, t)[0]


def _golden_max(f, a: float, b: float, iters: int = _GOLDEN_ITERS):
    """Golden-section maximizer for a unimodal function on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
    xm = (a + b) / 2.0
    return xm, f(xm)


def _rotation_analysis(c: np.ndarray, band: float, base: int = _BASE_GRID):
    """Locate the best accretive rotation and the tolerance arc.

    Returns (t_star, m_star, t_lo, t_hi) where m_star = max_t rho(t) is
    attained at t_star and [t_lo, t_hi] is the arc {rho >= -band} around
    t_star (t_lo <= t_star <= t_hi in unwrapped coordinates). The arc is
    empty only when m_star < -band.
    """
    grid = np.linspace(0.0, _TWO_PI, base, endpoint=False)
    rho_grid = np.array([_rho(c, t) for t in grid])
    k = int(np.argmax(rho_grid))
    step = _TWO_PI / base
    t_star, m_star = _golden_max(lambda t: _rho(c, t), grid[k] - step, grid[k] + step)
    if rho_grid[k] > m_star:
        t_star, m_star = grid[k], rho_grid[k]
    if m_star < -band:
        return t_star, m_star, None, None

    def inside(t):
        return _rho(c, t) >= -band

    def edge(t_in, t_out):
        for _ in range(_BISECT_ITERS):
            t_mid = (t_in + t_out) / 2.0
            if inside(t_mid):
                t_in = t_mid
            else:
                t_out = t_mid
        return t_in

    # walk the grid outward from t_star in both directions to bracket the arc
    def bracket(direction):
        t_prev = t_star
        for i in range(1, base + 1):
            t = t_star + direction * i * step
            if not inside(t):
                return edge(t_prev, t)
            t_prev = t
        return None  # rho >= -band on the whole circle

    t_hi = bracket(+1.0)
    t_lo = bracket(-1.0)
    if t_hi is None or t_lo is None:
        # whole circle admissible: degenerate (near-zero matrix relative to band)
        return t_star, m_star, t_star - math.pi, t_star + math.pi
    return t_star, m_star, t_lo, t_hi


def support_function(c, t: float, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest eigenvalue of the Hermitian part of e^{-jt} C.

    This is the support function of W(C) in direction t: the maximum of
    Re(e^{-jt} x^H C x) over unit vectors x.
    """
    c = as_square_matrix(c)
    return _min_max_eig(c, float(t))[1]


def support_profile(c, base: int = _BASE_GRID) -> SupportProfile:
    """Sample the support function on a uniform grid of ``base`` angles."""
    c = as_square_matrix(c)
    angles = np.linspace(0.0, _TWO_PI, base, endpoint=False)
    values = np.array([_min_max_eig(c, t)[1] for t in angles])
    return SupportProfile(angles=angles, values=values, refinement_depth=0)


def boundary_points(c, samples: int = 512) -> np.ndarray:
    """Boundary samples of W(C): one point x^H C x per grid angle.

    x is the top eigenvector of the Hermitian part of the rotated matrix,
    so every output lies in W(C) and their hull approximates it from inside.
    """
    c = as_square_matrix(c)
    if samples < 8:
        raise ValueError("need at least 8 samples")
    pts = np.empty(samples, dtype=complex)
    for i, t in enumerate(np.linspace(0.0, _TWO_PI, samples, endpoint=False)):
        _, v = np.linalg.eigh(herm_part(np.exp(-1j * t) * c))
        x = v[:, -1]
        pts[i] = x.conj() @ c @ x
    return pts


def _kernel_orthogonal_and_range_sectorial(c, band, tol):
    """Quasi-sectorial structure test: ker C = ker C^H and the range
    compression is sectorial. Returns (ok, rank)."""
    u, s, vh = svd(c)
    if s[0] <= 0.0:
        return True, 0
    r = int(np.count_nonzero(s > tol.rank_tol * s[0]))
    n = c.shape[0]
    if r < n:
        # left-kernel vectors must annihilate C on the right as well
        left_kernel = u[:, r:]
        if spectral_norm(c @ left_kernel) > max(100 * tol.rank_tol, tol.psd_tol) * s[0]:
            return False, r
    if r == 0:
        return True, 0
    range_basis = u[:, :r]
    comp = range_basis.conj().T @ c @ range_basis
    _, m_star, _, _ = _rotation_analysis(comp, band, base=256)
    return m_star > band, r


def classify(c, tol: ToleranceConfig = DEFAULT_TOL) -> SectorialClass:
    """Classify W(C) relative to the origin.

    Sectorial: some rotation makes the Hermitian part strictly positive
    definite (0 strictly outside W). Indefinite: no rotation brings the
    smallest eigenvalue above -psd_tol*|C| (0 interior). The boundary band
    splits into quasi-sectorial (orthogonal kernel, sectorial compression)
    and semi-sectorial. The zero matrix is quasi-sectorial by convention.
    """
    c = as_square_matrix(c)
    scale = spectral_norm(c)
    if scale == 0.0:
        return SectorialClass(Sectoriality.QUASI_SECTORIAL, delta=0.0, theta0=0.0)
    band = tol.psd_tol * scale
    t_star, m_star, t_lo, t_hi = _rotation_analysis(c, band)
    if m_star < -band:
        return SectorialClass(Sectoriality.INDEFINITE)
    delta = max(math.pi - (t_hi - t_lo), 0.0)
    on_band = abs(m_star) <= band
    if m_star > band:
        theta0 = _wrap_principal(t_star)
        return SectorialClass(Sectoriality.SECTORIAL, delta=delta, theta0=theta0,
                              on_tolerance_band=on_band)
    theta0 = _wrap_principal((t_lo + t_hi) / 2.0)
    quasi, _ = _kernel_orthogonal_and_range_sectorial(c, band, tol)
    tag = Sectoriality.QUASI_SECTORIAL if quasi else Sectoriality.SEMI_SECTORIAL
    return SectorialClass(tag, delta=delta, theta0=theta0, on_tolerance_band=True)


def zero_location(c, tol: ToleranceConfig = DEFAULT_TOL) -> ZeroLocation:
    """Locate the origin relative to W(C), with a +-psd_tol*|C| boundary band."""
    c = as_square_matrix(c)
    scale = spectral_norm(c)
    if scale == 0.0:
        return ZeroLocation.BOUNDARY
    band = tol.psd_tol * scale
    _, m_star, _, _ = _rotation_analysis(c, band)
    if m_star > band:
        return ZeroLocation.OUTSIDE
    if m_star < -band:
        return ZeroLocation.INTERIOR
    return ZeroLocation.BOUNDARY
