"""Shared fixtures and random-instance builders for the test suite."""
import math

import numpy as np
import pytest

from phasekit.lti import StateSpace
from phasekit.phasecore import assemble_core


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def rand_complex(rng, n, m=None):
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / math.sqrt(2)


def rand_unitary(rng, n):
    q, r = np.linalg.qr(rand_complex(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def rand_real_transform(rng, n, cond=100.0):
    """Real nonsingular matrix with condition number <= cond."""
    u = rand_orthogonal(rng, n)
    v = rand_orthogonal(rng, n)
    sv = np.exp(rng.uniform(0.0, math.log(cond), n))
    sv = sv / sv.min()
    return u @ np.diag(sv) @ v


def rand_complex_transform(rng, n, cond=100.0):
    u = rand_unitary(rng, n)
    v = rand_unitary(rng, n)
    sv = np.exp(rng.uniform(0.0, math.log(cond), n))
    sv = sv / sv.min()
    return u @ np.diag(sv) @ v


def rand_sectorial(rng, n, spread=2.5, cond=50.0):
    """Random sectorial matrix with known phase multiset; returns (C, phases)."""
    theta0 = rng.uniform(-math.pi, math.pi)
    half = min(spread, math.pi - 0.05) / 2.0
    phis = np.sort(rng.uniform(theta0 - half, theta0 + half, n))[::-1]
    t = rand_complex_transform(rng, n, cond)
    return t.conj().T @ np.diag(np.exp(1j * phis)) @ t, phis


def assemble_semi_sectorial(rng, n, kernel_dim, m, e_count, theta0=None,
                            real_t=False, cond=100.0, phase_margin=0.05):
    """C = T^* blkdiag(0, D, E) T with known structure.

    Returns (C, T, theta0, d_phases). Phases stay phase_margin away from
    theta0 +- pi/2 so structural indices are unambiguous.
    """
    assert kernel_dim + m + 2 * e_count == n
    if theta0 is None:
        theta0 = rng.uniform(-math.pi + 0.1, math.pi - 0.1)
    half = math.pi / 2.0 - phase_margin
    d_phases = np.sort(rng.uniform(theta0 - half, theta0 + half, m))[::-1]
    core = assemble_core(n, kernel_dim, d_phases, e_count, theta0)
    if real_t:
        t = rand_real_transform(rng, n, cond)
        return t.T @ core @ t, t, theta0, d_phases
    t = rand_complex_transform(rng, n, cond)
    return t.conj().T @ core @ t, t, theta0, d_phases


def rand_stable_ss(rng, m=1, n=3, margin=0.5):
    """Random strictly stable square system."""
    a = rng.standard_normal((n, n))
    if n:
        shift = max(np.linalg.eigvals(a).real.max(), 0.0) + margin + rng.uniform(0, 1)
        a = a - shift * np.eye(n)
    b = rng.standard_normal((n, m))
    c = rng.standard_normal((m, n))
    d = 0.3 * rng.standard_normal((m, m))
    return StateSpace(a=a, b=b, c=c, d=d)


def rand_positive_real_ss(rng, m=2, modes=3):
    """Stable symmetric system with strictly accretive frequency response:
    D0 + sum_k c_k v_k v_k^T / (s + a_k) with c_k, a_k > 0 and D0 > 0."""
    d0 = rng.standard_normal((m, m))
    d0 = d0 @ d0.T / m + (0.2 + rng.uniform(0, 1)) * np.eye(m)
    a_blocks, b_blocks, c_blocks = [], [], []
    for _ in range(modes):
        ak = rng.uniform(0.2, 4.0)
        ck = rng.uniform(0.2, 2.0)
        v = rng.standard_normal(m)
        v = v / np.linalg.norm(v)
        a_blocks.append(-ak)
        b_blocks.append(v.reshape(1, m))
        c_blocks.append(ck * v.reshape(m, 1))
    a = np.diag(a_blocks)
    b = np.vstack(b_blocks)
    c = np.hstack(c_blocks)
    return StateSpace(a=a, b=b, c=c, d=d0)
