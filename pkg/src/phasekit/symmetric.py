"""Factorizations special to complex symmetric matrices.

Complex symmetric C = C^T splits into real symmetric parts C = Re C + j Im C,
so simultaneous real congruence of that pair is available. The two central
results implemented here: the Autonne-Takagi factorization C = U Sigma U^T,
and the real-congruence generalized sectorial decomposition
C = T^T blkdiag(0, D, E) T with T real, valid exactly for the complex
symmetric semi-sectorial matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidParam, NotSemiSectorial, NotSymmetric
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_square_matrix,
    spectral_norm,
    svd,
)
from .numrange import Sectoriality, ZeroLocation, classify, zero_location
from .phasecore import E_TILDE, SectorialDecomposition, _pencil_reduce, assemble_core

# singular values closer than this (relative) are treated as one subspace
_CLUSTER_GAP = 1e-8


def _check_symmetric(c: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    scale = spectral_norm(c)
    if spectral_norm(c - c.T) > tol.psd_tol * max(scale, 1.0e-300):
        raise NotSymmetric("matrix is not complex symmetric within tolerance")
    return (c + c.T) / 2.0


@dataclass(frozen=True)
class TakagiFactorization:
    """C = U Sigma U^T with U unitary and Sigma the singular values."""

    u: np.ndarray
    sigma: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.u @ np.diag(self.sigma) @ self.u.T


def takagi(c, tol: ToleranceConfig = DEFAULT_TOL) -> TakagiFactorization:
    """Autonne-Takagi factorization of a complex symmetric matrix.

    Computed from the SVD C = U diag(s) V^H: per cluster of (numerically)
    equal singular values, Z = U^T V is symmetric unitary and a symmetric
    square root Q of Z turns the left factor into the Takagi U as U conj(Q).
    Zero clusters take Q = I since their columns never touch C.
    """
    c = _check_symmetric(as_square_matrix(c), tol)
    u, s, vh = svd(c)
    v = vh.conj().T
    n = c.shape[0]
    top = s[0] if s.size else 0.0
    blocks = []
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and s[start] - s[stop] < _CLUSTER_GAP * max(top, 1e-300):
            stop += 1
        idx = slice(start, stop)
        if top == 0.0 or s[start] <= tol.rank_tol * top:
            blocks.append(np.eye(stop - start, dtype=complex))
        else:
            z = u[:, idx].T @ v[:, idx]
            z = (z + z.T) / 2.0
            blocks.append(scipy.linalg.sqrtm(z).astype(complex))
        start = stop
    q = scipy.linalg.block_diag(*blocks)
    return TakagiFactorization(u=u @ q.conj(), sigma=s.copy())


# ----------------------------------------------------------------------
# Thompson canonical blocks


@dataclass(frozen=True)
class ThompsonBlock:
    """Canonical direct summand of a real symmetric pencil.

    kind K: size k, anti-diagonal 1 with -j on the adjacent anti-diagonal.
    kind L: size l, anti-diagonal a - j with 1 below.
    kind M: size 2m - 1, block [[0, J], [J^T, 0]] with bidiagonal J.
    kind N: size 2n, block anti-diagonal R = [[b, a-j], [a-j, -b]] with
            S = [[0, 1], [1, 0]] below; requires b != 0.
    delta multiplies K and L kinds by -1 when negative.
    """

    kind: str
    size: int
    a: float = 0.0
    b: float = 1.0
    delta: int = 1

    def __post_init__(self):
        if self.kind not in ("K", "L", "M", "N"):
            raise InvalidParam(f"unknown block kind {self.kind!r}")
        if self.size < 1:
            raise InvalidParam("size parameter must be >= 1")
        if self.delta not in (-1, 1):
            raise InvalidParam("delta must be +1 or -1")
        if self.kind == "N" and self.b == 0.0:
            raise InvalidParam("N blocks require b != 0")


def build_block(spec: ThompsonBlock) -> np.ndarray:
    """Materialize a canonical block as a complex symmetric matrix."""
    kind, k = spec.kind, spec.size
    if kind == "K":
        out = np.zeros((k, k), dtype=complex)
        for i in range(k):
            for j in range(k):
                if i + j == k - 1:
                    out[i, j] = 1.0
                elif i + j == k:
                    out[i, j] = -1.0j
        return spec.delta * out
    if kind == "L":
        out = np.zeros((k, k), dtype=complex)
        for i in range(k):
            for j in range(k):
                if i + j == k - 1:
                    out[i, j] = spec.a - 1.0j
                elif i + j == k:
                    out[i, j] = 1.0
        return spec.delta * out
    if kind == "M":
        m = spec.size
        dim = 2 * m - 1
        out = np.zeros((dim, dim), dtype=complex)
        jmat = np.zeros((m, m - 1), dtype=complex)
        for i in range(m - 1):
            jmat[i, i] = -1.0j
            jmat[i + 1, i] = 1.0
        out[:m, m:] = jmat
        out[m:, :m] = jmat.T
        return out
    # kind == "N": 2n x 2n built from 2x2 tiles R and S
    nblk = spec.size
    rmat = np.array([[spec.b, spec.a - 1.0j], [spec.a - 1.0j, -spec.b]])
    smat = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    out = np.zeros((2 * nblk, 2 * nblk), dtype=complex)
    for i in range(nblk):
        j = nblk - 1 - i
        out[2 * i:2 * i + 2, 2 * j:2 * j + 2] = rmat
        if j + 1 < nblk:
            out[2 * i:2 * i + 2, 2 * (j + 1):2 * (j + 1) + 2] = smat
            out[2 * (j + 1):2 * (j + 1) + 2, 2 * i:2 * i + 2] = smat.T
    return out


def block_zero_location(spec: ThompsonBlock,
                        tol: ToleranceConfig = DEFAULT_TOL) -> ZeroLocation:
    """Origin location for a canonical block's numerical range."""
    return zero_location(build_block(spec), tol)


# ----------------------------------------------------------------------
# real-congruence generalized sectorial decomposition


@dataclass(frozen=True)
class RealCongruenceDecomposition:
    """C = T^T blkdiag(0, D, E) T with nonsingular real T."""

    t: np.ndarray
    kernel_dim: int
    d_phases: np.ndarray
    e_block_count: int
    theta0: float

    @property
    def n(self) -> int:
        return self.t.shape[0]

    @property
    def rank(self) -> int:
        return self.n - self.kernel_dim

    def core(self) -> np.ndarray:
        return assemble_core(self.n, self.kernel_dim, self.d_phases,
                             self.e_block_count, self.theta0)

    def reconstruct(self) -> np.ndarray:
        return self.t.T @ self.core() @ self.t

    def phase_multiset(self) -> np.ndarray:
        extra = []
        for _ in range(self.e_block_count):
            extra.extend((self.theta0 + math.pi / 2.0, self.theta0 - math.pi / 2.0))
        return np.sort(np.concatenate([self.d_phases, extra]))[::-1].copy()


def real_congruence_decompose(c, tol: ToleranceConfig = DEFAULT_TOL) -> RealCongruenceDecomposition:
    """Generalized sectorial decomposition with a REAL transformation.

    Requires complex symmetry (asymmetric semi-sectorial inputs are
    refused) and a semi-sectorial numerical range. The rotated matrix
    e^{-j theta0} C has real symmetric real/imaginary parts, and the
    simultaneous congruence reduction of that pair stays real throughout.
    """
    c = as_square_matrix(c)
    c = _check_symmetric(c, tol)
    cls = classify(c, tol)
    if not cls.semi_sectorial:
        raise NotSemiSectorial("0 is interior to the numerical range")
    n = c.shape[0]
    if spectral_norm(c) == 0.0:
        return RealCongruenceDecomposition(t=np.eye(n), kernel_dim=n,
                                           d_phases=np.zeros(0),
                                           e_block_count=0, theta0=0.0)
    theta0 = cls.theta0
    a = np.exp(-1j * theta0) * c
    re_part = np.ascontiguousarray((a.real + a.real.T) / 2.0)
    im_part = np.ascontiguousarray((a.imag + a.imag.T) / 2.0)
    h_band = tol.psd_tol * spectral_norm(a)
    t, z, psis, e_cnt = _pencil_reduce(re_part, im_part, h_band)
    if np.iscomplexobj(t):
        raise AssertionError("real congruence reduction produced a complex T")
    return RealCongruenceDecomposition(t=t, kernel_dim=z,
                                       d_phases=theta0 + psis,
                                       e_block_count=e_cnt, theta0=theta0)


def to_complex_decomposition(dec: RealCongruenceDecomposition) -> SectorialDecomposition:
    """View a real-congruence result through the complex-congruence type."""
    return SectorialDecomposition(t=dec.t.astype(complex), kernel_dim=dec.kernel_dim,
                                  d_phases=dec.d_phases,
                                  e_block_count=dec.e_block_count,
                                  theta0=dec.theta0)


# ----------------------------------------------------------------------
# canonical 2x2 reduction identities

T_K = np.array([[1.0, 0.0], [0.0, -1.0]])


def t_l_matrix(a: float) -> np.ndarray:
    return np.array([[a * a + 1.0, a / 2.0], [0.0, 1.0]]) / math.sqrt(a * a + 1.0)


@dataclass(frozen=True)
class BlockIdentityReport:
    """Residuals of the K2 and L2(a) reductions to the E-tilde block."""

    k2_residual: float
    l2_residuals: tuple[tuple[float, float], ...]

    @property
    def max_residual(self) -> float:
        worst = self.k2_residual
        for _, res in self.l2_residuals:
            worst = max(worst, res)
        return worst


def verify_block_identities(a_values=(-3.0, -1.0, 0.0, 0.5, 2.0, 10.0)) -> BlockIdentityReport:
    """Check K2 = -j T_K^T E~ T_K and L2(a) = (1+aj) T_L(a)^T E~ T_L(a).

    Returns the max entrywise residual per identity over the given grid
    of a values.
    """
    k2 = build_block(ThompsonBlock("K", 2))
    k2_res = float(np.max(np.abs(k2 - (-1.0j) * T_K.T @ E_TILDE @ T_K)))
    l2_res = []
    for a in a_values:
        l2 = build_block(ThompsonBlock("L", 2, a=a))
        tl = t_l_matrix(a)
        res = float(np.max(np.abs(l2 - (1.0 + a * 1.0j) * tl.T @ E_TILDE @ tl)))
        l2_res.append((float(a), res))
    return BlockIdentityReport(k2_residual=k2_res, l2_residuals=tuple(l2_res))
