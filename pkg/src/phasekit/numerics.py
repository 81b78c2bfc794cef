"""Dense linear-algebra kernels with a single, explicit tolerance policy.

Every factorization used elsewhere in the package funnels through this
module so rank, PSD and reconstruction cutoffs live in one place.
All operations are pure functions; nothing here holds mutable state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotHermitian, NotPSD

_TINY = 1e-300


@dataclass(frozen=True)
class ToleranceConfig:
    """Relative cutoffs used by the whole package.

    rank_tol : singular values below ``rank_tol * sigma_max`` count as zero
    psd_tol  : slack for eigenvalue nonnegativity / symmetry checks
    recon_tol: bound on factorization reconstruction residuals
    """

    rank_tol: float = 1e-10
    psd_tol: float = 1e-10
    recon_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_tol", "psd_tol", "recon_tol"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.rank_tol >= 1.0:
            raise ValueError("rank_tol must be below 1")


DEFAULT_TOL = ToleranceConfig()


def as_square_matrix(m) -> np.ndarray:
    """Validate and return a square complex matrix with finite entries."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"expected a square matrix of size >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def as_real_matrix(m) -> np.ndarray:
    """Validate and return a real matrix with finite entries."""
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def spectral_norm(m) -> float:
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def herm_part(m: np.ndarray) -> np.ndarray:
    """Hermitian part (M + M^H) / 2."""
    return (m + m.conj().T) / 2.0


def skew_part(m: np.ndarray) -> np.ndarray:
    """Hermitian matrix K with M = H + jK."""
    return (m - m.conj().T) / 2.0j


def hermitian_eig(m, tol: ToleranceConfig = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted descending
    and ``m = V diag(w) V^H``. Raises NotHermitian when the symmetry check
    ``|m - m^H| <= psd_tol * |m|`` fails.
    """
    m = as_square_matrix(m)
    scale = spectral_norm(m)
    if spectral_norm(m - m.conj().T) > tol.psd_tol * max(scale, _TINY):
        raise NotHermitian("matrix is not Hermitian within psd_tol")
    try:
        w, v = np.linalg.eigh(herm_part(m))
    except np.linalg.LinAlgError as exc:
        raise NoConvergence("hermitian eigensolver failed") from exc
    return w[::-1].copy(), v[:, ::-1].copy()


def svd(m):
    """Full SVD ``m = U diag(s) Vh`` with singular values descending."""
    m = as_square_matrix(m)
    try:
        u, s, vh = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence("SVD failed to converge") from exc
    return u, s, vh


def numeric_rank(m, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Count of singular values above ``rank_tol * sigma_max``; 0 for the zero matrix."""
    _, s, _ = svd(m)
    if s.size == 0 or s[0] <= _TINY:
        return 0
    return int(np.count_nonzero(s > tol.rank_tol * s[0]))


def psd_sqrt(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-psd_tol * |m|, 0)`` are treated as rounding noise and
    clipped to zero; anything lower raises NotPSD.
    """
    m = as_square_matrix(m)
    w, v = hermitian_eig(m, tol)
    scale = max(spectral_norm(m), _TINY)
    if w[-1] < -tol.psd_tol * scale:
        raise NotPSD(f"matrix has eigenvalue {w[-1]:.3e} below -psd_tol*|m|")
    root = np.sqrt(np.clip(w, 0.0, None))
    return v @ np.diag(root) @ v.conj().T
