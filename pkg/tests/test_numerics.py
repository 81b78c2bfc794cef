import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasekit.errors import NotHermitian, NotPSD
from phasekit.numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    hermitian_eig,
    numeric_rank,
    psd_sqrt,
    spectral_norm,
    svd,
)

from conftest import rand_complex, rand_unitary


def test_tolerance_validation():
    with pytest.raises(ValueError):
        ToleranceConfig(rank_tol=0.0)
    with pytest.raises(ValueError):
        ToleranceConfig(rank_tol=2.0)
    with pytest.raises(ValueError):
        ToleranceConfig(psd_tol=-1e-3)


@given(st.floats(min_value=1e-14, max_value=0.5),
       st.floats(min_value=1e-14, max_value=10.0),
       st.floats(min_value=1e-14, max_value=10.0))
@settings(max_examples=25, deadline=None)
def test_tolerance_accepts_positive(rank_tol, psd_tol, recon_tol):
    cfg = ToleranceConfig(rank_tol=rank_tol, psd_tol=psd_tol, recon_tol=recon_tol)
    assert cfg.rank_tol == rank_tol


def test_hermitian_eig_diagonal():
    w, v = hermitian_eig(np.diag([1.0, 3.0]))
    assert np.allclose(w, [3.0, 1.0])
    assert np.allclose(np.abs(v), [[0, 1], [1, 0]])


def test_hermitian_eig_swap():
    w, _ = hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(w, [1.0, -1.0])


def test_hermitian_eig_rejects_asymmetric():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_hermitian_eig_residual(rng):
    m = rand_complex(rng, 6)
    m = m + m.conj().T
    w, v = hermitian_eig(m)
    assert spectral_norm(v @ np.diag(w) @ v.conj().T - m) <= 1e-12 * spectral_norm(m)
    assert spectral_norm(v.conj().T @ v - np.eye(6)) <= 1e-12


def test_svd_identity():
    _, s, _ = svd(np.eye(3))
    assert np.allclose(s, 1.0)


def test_svd_nilpotent():
    _, s, _ = svd(np.array([[0.0, 2.0], [0.0, 0.0]]))
    assert np.allclose(s, [2.0, 0.0])


def test_svd_residual(rng):
    m = rand_complex(rng, 5)
    u, s, vh = svd(m)
    assert spectral_norm(u @ np.diag(s) @ vh - m) <= 1e-12 * spectral_norm(m)


def test_numeric_rank():
    assert numeric_rank(np.diag([1.0, 0.0])) == 1
    assert numeric_rank(np.array([[1.0, 2.0], [0.0, 1.0]])) == 2
    assert numeric_rank(np.diag([1.0, 1e-15])) == 1
    assert numeric_rank(np.zeros((3, 3))) == 0


def test_numeric_rank_unitary_invariance(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        m = rand_complex(rng, n)
        m[:, -1] = m[:, 0]  # force rank deficiency
        r = numeric_rank(m)
        u1, u2 = rand_unitary(rng, n), rand_unitary(rng, n)
        assert numeric_rank(u1 @ m @ u2) == r


def test_psd_sqrt_examples():
    assert np.allclose(psd_sqrt(np.eye(2)), np.eye(2))
    assert np.allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NotPSD):
        psd_sqrt(np.diag([1.0, -1.0]))


def test_psd_sqrt_residual(rng):
    m = rand_complex(rng, 4)
    m = m @ m.conj().T
    s = psd_sqrt(m)
    assert spectral_norm(s @ s - m) <= 1e-10 * spectral_norm(m)


def test_factorization_roundtrip_suite(rng):
    """Reconstruction residuals stay below recon_tol on 1000 random draws."""
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        m = rand_complex(rng, n)
        scale = max(spectral_norm(m), 1e-300)
        u, s, vh = svd(m)
        assert spectral_norm(u @ np.diag(s) @ vh - m) <= DEFAULT_TOL.recon_tol * scale
        h = m + m.conj().T
        w, v = hermitian_eig(h)
        hs = max(spectral_norm(h), 1e-300)
        assert spectral_norm(v @ np.diag(w) @ v.conj().T - h) <= DEFAULT_TOL.recon_tol * hs
        p = m @ m.conj().T
        r = psd_sqrt(p)
        ps = max(spectral_norm(p), 1e-300)
        assert spectral_norm(r @ r - p) <= DEFAULT_TOL.recon_tol * ps
