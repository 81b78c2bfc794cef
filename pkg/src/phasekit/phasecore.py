"""Phases of matrices via sectorial decompositions.

A sectorial matrix factors as C = T^H D T with D diagonal unitary; the
phases of C are the arguments of the diagonal of D. Quasi-sectorial
matrices add an orthogonal kernel block, and semi-sectorial matrices add
2x2 blocks E = e^{j theta0} [[0, -j], [-j, 1]] that carry pairs of
boundary phases theta0 +- pi/2.

The reductions here act on the Hermitian pair (H, K) of the rotated
matrix e^{-j theta0} C = H + jK by simultaneous congruence. When H and K
are real (complex symmetric input, used by the `symmetric` module) every
transformation stays real, which is exactly what makes the real-congruence
factorization work.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidSector,
    NotQuasiSectorial,
    NotSectorial,
    NotSemiSectorial,
)
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_square_matrix,
    herm_part,
    skew_part,
    spectral_norm,
    svd,
)
from .numrange import (
    Sectoriality,
    _rotation_analysis,
    _wrap_principal,
    classify,
)

_TWO_PI = 2.0 * math.pi
# relative cutoff separating structural zeros from genuine skew content in
# the reduced pencil; sits far above congruence rounding noise at desk scale
_PENCIL_CUT = 1e-7

E_TILDE = np.array([[0.0, -1.0j], [-1.0j, 1.0]])


@dataclass(frozen=True)
class PhaseSector:
    """Ordered phase list with its branch data.

    phases are descending; gamma is the midpoint of the extreme phases and
    fixes the 2*pi branch; delta is the spread phi_max - phi_min.
    """

    phases: np.ndarray
    gamma: float
    delta: float

    @property
    def phi_max(self) -> float:
        return float(self.phases[0]) if self.phases.size else self.gamma

    @property
    def phi_min(self) -> float:
        return float(self.phases[-1]) if self.phases.size else self.gamma


@dataclass(frozen=True)
class SectorialDecomposition:
    """Congruence factorization C = T^H blkdiag(0, D, E) T.

    d_phases holds the arguments of the diagonal unitary D (descending,
    inside [theta0 - pi/2, theta0 + pi/2]); e_block_count copies of
    e^{j theta0} [[0,-j],[-j,1]] follow. T is complex in general; the
    symmetric module produces a real T with the same layout.
    """

    t: np.ndarray
    kernel_dim: int
    d_phases: np.ndarray
    e_block_count: int
    theta0: float
    hermitian_transpose: bool = field(default=True, repr=False)

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
        th = self.t.conj().T if self.hermitian_transpose else self.t.T
        return th @ self.core() @ self.t

    def phase_multiset(self) -> np.ndarray:
        """All phases: D entries plus theta0 +- pi/2 per E block, descending."""
        extra = []
        for _ in range(self.e_block_count):
            extra.extend((self.theta0 + math.pi / 2.0, self.theta0 - math.pi / 2.0))
        return np.sort(np.concatenate([self.d_phases, extra]))[::-1].copy()


def assemble_core(n, kernel_dim, d_phases, e_block_count, theta0) -> np.ndarray:
    """Middle factor blkdiag(0_{n-r}, diag(e^{j phi}), E) of the decomposition."""
    d_phases = np.asarray(d_phases, dtype=float)
    m = d_phases.size
    if kernel_dim + m + 2 * e_block_count != n:
        raise ValueError("block sizes do not add up to n")
    core = np.zeros((n, n), dtype=complex)
    off = kernel_dim
    core[off:off + m, off:off + m] = np.diag(np.exp(1j * d_phases))
    off += m
    for _ in range(e_block_count):
        core[off:off + 2, off:off + 2] = np.exp(1j * theta0) * E_TILDE
        off += 2
    return core


def _sector_from_multiset(phis: np.ndarray, hint: float | None) -> PhaseSector:
    """Fix the 2*pi branch: principal gamma in [-pi, pi), or nearest the hint."""
    if phis.size == 0:
        gamma = 0.0 if hint is None else _TWO_PI * round(hint / _TWO_PI)
        return PhaseSector(phases=phis.copy(), gamma=gamma, delta=0.0)
    phis = np.sort(np.asarray(phis, dtype=float))[::-1]
    g_raw = (phis[0] + phis[-1]) / 2.0
    if hint is None:
        shift = _wrap_principal(g_raw) - g_raw
    else:
        shift = _TWO_PI * round((hint - g_raw) / _TWO_PI)
    return PhaseSector(phases=phis + shift, gamma=g_raw + shift,
                       delta=float(phis[0] - phis[-1]))


def fit_interval_mod_2pi(lo: float, hi: float, left: float, right: float) -> float:
    """Best slack of a 2*pi-translate of [lo, hi] inside (left, right).

    Returns max over integers k of min(lo + 2*pi*k - left, right - hi - 2*pi*k);
    positive means some translate fits strictly inside.
    """
    if hi < lo:
        lo, hi = hi, lo
    k_base = round(((left + right) / 2.0 - (lo + hi) / 2.0) / _TWO_PI)
    best = -math.inf
    for k in (k_base - 1, k_base, k_base + 1):
        shift = _TWO_PI * k
        best = max(best, min(lo + shift - left, right - hi - shift))
    return best


# ----------------------------------------------------------------------
# decompositions


def _accretive_diagonalize(h: np.ndarray, k: np.ndarray, h_floor: float):
    """Factor H + jK = T^H diag(e^{j psi}) T for H positive definite.

    With M = H^{-1/2} K H^{-1/2} = Q diag(lam) Q^H the phases are
    psi_i = atan(lam_i) and T = diag((1+lam^2)^{1/4}) Q^H H^{1/2}.
    """
    w, v = np.linalg.eigh(h)
    if w[0] <= h_floor:
        raise NotSectorial("Hermitian part is not positive definite")
    sqrt_w = np.sqrt(w)
    h_half = v @ np.diag(sqrt_w) @ v.conj().T
    h_inv_half = v @ np.diag(1.0 / sqrt_w) @ v.conj().T
    mm = herm_part(h_inv_half @ k @ h_inv_half)
    lam, q = np.linalg.eigh(mm)
    lam, q = lam[::-1], q[:, ::-1]
    t = np.diag((1.0 + lam ** 2) ** 0.25) @ q.conj().T @ h_half
    return np.arctan(lam), t


def sectorial_decompose(c, tol: ToleranceConfig = DEFAULT_TOL) -> SectorialDecomposition:
    """Sectorial decomposition C = T^H D T, D diagonal unitary.

    Requires 0 strictly outside W(C). The rotation theta0 is the angle of
    best accretivity; phases end up inside (theta0 - pi/2, theta0 + pi/2).
    """
    c = as_square_matrix(c)
    cls = classify(c, tol)
    if cls.tag is not Sectoriality.SECTORIAL:
        raise NotSectorial(f"classification is {cls.tag.value}")
    theta0 = cls.theta0
    a = np.exp(-1j * theta0) * c
    psis, t = _accretive_diagonalize(herm_part(a), skew_part(a), 0.0)
    return SectorialDecomposition(t=t, kernel_dim=0, d_phases=theta0 + psis,
                                  e_block_count=0, theta0=theta0)


def quasi_sectorial_decompose(c, tol: ToleranceConfig = DEFAULT_TOL) -> SectorialDecomposition:
    """Split C = U^H blkdiag(0, C_s) U with C_s sectorial, then decompose C_s.

    Requires orthogonal range/kernel and a sectorial range compression; the
    zero matrix degenerates to an all-kernel decomposition.
    """
    c = as_square_matrix(c)
    cls = classify(c, tol)
    if cls.tag not in (Sectoriality.SECTORIAL, Sectoriality.QUASI_SECTORIAL):
        raise NotQuasiSectorial(f"classification is {cls.tag.value}")
    n = c.shape[0]
    u, s, vh = svd(c)
    if s[0] == 0.0:
        return SectorialDecomposition(t=np.eye(n, dtype=complex), kernel_dim=n,
                                      d_phases=np.zeros(0), e_block_count=0,
                                      theta0=0.0)
    r = int(np.count_nonzero(s > tol.rank_tol * s[0]))
    if r == n:
        dec = sectorial_decompose(c, tol)
        return dec
    kernel = vh.conj().T[:, r:]
    rng = u[:, :r]
    if spectral_norm(c @ u[:, r:]) > max(100 * tol.rank_tol, tol.psd_tol) * s[0]:
        raise NotQuasiSectorial("kernel and co-kernel are not aligned")
    basis, _ = np.linalg.qr(np.concatenate([kernel, rng], axis=1))
    comp = basis[:, n - r:].conj().T @ c @ basis[:, n - r:]
    try:
        dec_s = sectorial_decompose(comp, tol)
    except NotSectorial as exc:
        raise NotQuasiSectorial("range compression is not sectorial") from exc
    t = np.zeros((n, n), dtype=complex)
    t[:n - r, :] = basis[:, :n - r].conj().T
    t[n - r:, :] = dec_s.t @ basis[:, n - r:].conj().T
    return SectorialDecomposition(t=t, kernel_dim=n - r, d_phases=dec_s.d_phases,
                                  e_block_count=0, theta0=dec_s.theta0)


def _householder_to_e1(w: np.ndarray) -> np.ndarray:
    """Unitary Q (Hermitian reflector) with Q w = c e_1, |c| = |w|.

    Real input produces a real orthogonal reflector.
    """
    k = w.shape[0]
    eye = np.eye(k, dtype=w.dtype)
    norm_w = np.linalg.norm(w)
    if norm_w == 0.0:
        return eye
    phase = w[0] / abs(w[0]) if abs(w[0]) > 0 else 1.0
    v = w.astype(w.dtype).copy()
    v[0] += phase * norm_w
    vn2 = np.real(np.vdot(v, v))
    if vn2 <= 0.0:
        return eye
    return eye - 2.0 * np.outer(v, v.conj()) / vn2


def _pencil_reduce(hmat: np.ndarray, kmat: np.ndarray, h_band: float):
    """Simultaneous congruence reduction of the Hermitian pair (H, K), H >= 0.

    Produces nonsingular T with H + jK = T^H blkdiag(0_z, diag(e^{j psi}),
    Etilde x e) T, psi descending in [-pi/2, pi/2]. Real symmetric inputs
    keep T real. Raises NotSemiSectorial if the structure does not close
    (H indefinite beyond the band, or kernel couplings without range
    partners).

    Steps: congruence-normalize H to blkdiag(I_p, 0); diagonalize the
    skew content on the H-kernel; use nonzero kernel diagonals as pivots
    (phases +- pi/2); pair coupled kernel directions with range directions
    into Etilde blocks, largest coupling first; diagonalize the remaining
    accretive range block.
    """
    n = hmat.shape[0]
    real_mode = not (np.iscomplexobj(hmat) or np.iscomplexobj(kmat))
    dtype = float if real_mode else complex
    w_acc = np.eye(n, dtype=dtype)
    kk = kmat.astype(dtype).copy()

    # H -> blkdiag(I_p, 0)
    wh, vh = np.linalg.eigh(hmat)
    wh, vh = wh[::-1].copy(), vh[:, ::-1].copy()
    if wh[-1] < -h_band:
        raise NotSemiSectorial("Hermitian part of the rotated matrix is indefinite")
    p = int(np.count_nonzero(wh > h_band))
    scal = np.ones(n)
    scal[:p] = 1.0 / np.sqrt(wh[:p])
    s_tr = vh * scal[None, :]
    kk = s_tr.conj().T @ kk @ s_tr
    kk = (kk + kk.conj().T) / 2.0
    w_acc = w_acc @ s_tr
    q = n - p

    # diagonalize the kernel-block skew content
    if q > 0:
        mu, q2 = np.linalg.eigh(kk[p:, p:])
        emb = np.eye(n, dtype=dtype)
        emb[p:, p:] = q2
        kk = emb.conj().T @ kk @ emb
        kk = (kk + kk.conj().T) / 2.0
        w_acc = w_acc @ emb

    cut = _PENCIL_CUT * max(1.0, spectral_norm(kk))
    mu_phases: dict[int, float] = {}
    kernel_idx = list(range(p, n))
    for g in sorted(kernel_idx, key=lambda i: -abs(kk[i, i].real)):
        mu = kk[g, g].real
        if abs(mu) <= cut:
            continue
        emb = np.eye(n, dtype=dtype)
        emb[g, g] = 1.0 / math.sqrt(abs(mu))
        kk = emb.conj().T @ kk @ emb
        w_acc = w_acc @ emb
        sign = 1.0 if mu > 0 else -1.0
        u = kk[:, g] / kk[g, g]
        u[g] = 0.0
        elim = np.eye(n, dtype=dtype)
        elim[g, :] -= u.conj()
        kk = elim.conj().T @ kk @ elim
        w_acc = w_acc @ elim
        kk[g, :] = 0.0
        kk[:, g] = 0.0
        kk[g, g] = sign
        mu_phases[g] = sign * math.pi / 2.0

    active_range = [i for i in range(p)]
    active_kernel = [i for i in kernel_idx if i not in mu_phases]
    pairs: list[tuple[int, int]] = []
    while active_kernel and active_range:
        norms = [np.linalg.norm(kk[active_range, i]) for i in active_kernel]
        pos = int(np.argmax(norms))
        if norms[pos] <= cut:
            break
        i = active_kernel[pos]
        w_vec = kk[active_range, i]
        refl = _householder_to_e1(w_vec)
        emb = np.eye(n, dtype=dtype)
        emb[np.ix_(active_range, active_range)] = refl
        kk = emb.conj().T @ kk @ emb
        w_acc = w_acc @ emb
        k0 = active_range[0]
        coupling = kk[k0, i]
        emb = np.eye(n, dtype=dtype)
        emb[i, i] = -1.0 / coupling
        kk = emb.conj().T @ kk @ emb
        w_acc = w_acc @ emb  # coupling at (k0, i) is now exactly -1
        elim = np.eye(n, dtype=dtype)
        for l in range(n):
            if l in (i, k0):
                continue
            if kk[k0, l] != 0.0:
                elim[i, l] = kk[k0, l]
        kk = elim.conj().T @ kk @ elim
        w_acc = w_acc @ elim
        kappa = kk[k0, k0].real
        if kappa != 0.0:
            emb = np.eye(n, dtype=dtype)
            emb[i, k0] = kappa / 2.0
            kk = emb.conj().T @ kk @ emb
            w_acc = w_acc @ emb
        for idx in (i, k0):
            kk[idx, :] = 0.0
            kk[:, idx] = 0.0
        kk[k0, i] = kk[i, k0] = -1.0
        pairs.append((i, k0))
        active_range.pop(0)
        active_kernel.remove(i)

    if active_kernel:
        worst = max(np.linalg.norm(kk[:, i]) for i in active_kernel)
        leftover = math.hypot(worst, 0.0)
        if leftover > cut and not active_range:
            raise NotSemiSectorial("kernel couplings left without range partners")

    range_phases: dict[int, float] = {}
    if active_range:
        sub = kk[np.ix_(active_range, active_range)]
        sub = (sub + sub.conj().T) / 2.0
        lam, qr = np.linalg.eigh(sub)
        emb = np.eye(n, dtype=dtype)
        emb[np.ix_(active_range, active_range)] = qr * (1.0 + lam ** 2) ** -0.25
        w_acc = w_acc @ emb
        for pos, idx in enumerate(active_range):
            range_phases[idx] = math.atan(lam[pos])

    zero_coords = list(active_kernel)
    d_entries = sorted(
        list(mu_phases.items()) + list(range_phases.items()),
        key=lambda item: (-item[1], item[0]),
    )
    order = zero_coords + [idx for idx, _ in d_entries]
    for i, k0 in pairs:
        order.extend((i, k0))
    perm = np.zeros((n, n), dtype=dtype)
    for new_pos, old_pos in enumerate(order):
        perm[old_pos, new_pos] = 1.0
    w_acc = w_acc @ perm
    t = np.linalg.inv(w_acc)
    psis = np.array([phi for _, phi in d_entries], dtype=float)
    return t, len(zero_coords), psis, len(pairs)


def semi_sectorial_decompose(c, tol: ToleranceConfig = DEFAULT_TOL) -> SectorialDecomposition:
    """Generalized sectorial decomposition C = T^H blkdiag(0, D, E) T.

    Valid for sectorial, quasi-sectorial and semi-sectorial C. theta0 is
    the supporting half-plane normal from classification; the rotated
    matrix e^{-j theta0} C has PSD Hermitian part and is reduced by
    `_pencil_reduce`.
    """
    c = as_square_matrix(c)
    cls = classify(c, tol)
    if not cls.semi_sectorial:
        raise NotSemiSectorial("0 is interior to the numerical range")
    if spectral_norm(c) == 0.0:
        n = c.shape[0]
        return SectorialDecomposition(t=np.eye(n, dtype=complex), kernel_dim=n,
                                      d_phases=np.zeros(0), e_block_count=0,
                                      theta0=0.0)
    theta0 = cls.theta0
    a = np.exp(-1j * theta0) * c
    h_band = tol.psd_tol * spectral_norm(a)
    t, z, psis, e_cnt = _pencil_reduce(herm_part(a), skew_part(a), h_band)
    return SectorialDecomposition(t=t, kernel_dim=z, d_phases=theta0 + psis,
                                  e_block_count=e_cnt, theta0=theta0)


def phases(c, branch_center_hint: float | None = None,
           tol: ToleranceConfig = DEFAULT_TOL) -> PhaseSector:
    """Phase sector of a semi-sectorial matrix.

    Without a hint the phase center takes its principal value in [-pi, pi);
    with a hint the 2*pi-translate nearest the hint is chosen, which is what
    continuous frequency sweeps use.
    """
    dec = semi_sectorial_decompose(c, tol)
    return _sector_from_multiset(dec.phase_multiset(), branch_center_hint)


def sector_with_rotation_hint(m, t_hint: float = 0.0,
                              gamma_hint: float | None = None,
                              tol: ToleranceConfig = DEFAULT_TOL):
    """Phase sector with a warm-started rotation search.

    Fast path for frequency sweeps: if the previous rotation angle still
    makes the Hermitian part comfortably positive definite the phases come
    from one extra eigendecomposition; otherwise the full rotation search
    and decomposition machinery runs. Returns (sector, t_used).
    """
    m = as_square_matrix(m)
    scale = spectral_norm(m)
    if scale == 0.0:
        return _sector_from_multiset(np.zeros(0), gamma_hint), t_hint
    if m.shape[0] == 1:
        val = m[0, 0]
        phi = math.atan2(val.imag, val.real)
        return _sector_from_multiset(np.array([phi]), gamma_hint), phi
    band = tol.psd_tol * scale
    floor = max(band, 1e-9 * scale)
    a = np.exp(-1j * t_hint) * m
    h = herm_part(a)
    if np.linalg.eigvalsh(h)[0] > floor:
        psis, _ = _accretive_diagonalize(h, skew_part(a), 0.0)
        return _sector_from_multiset(t_hint + psis, gamma_hint), t_hint
    t_star, m_star, t_lo, t_hi = _rotation_analysis(m, band, base=192)
    if m_star < -band:
        raise NotSemiSectorial("no rotation makes the Hermitian part PSD")
    if m_star > floor:
        a = np.exp(-1j * t_star) * m
        psis, _ = _accretive_diagonalize(herm_part(a), skew_part(a), 0.0)
        return _sector_from_multiset(t_star + psis, gamma_hint), t_star
    theta0 = (t_lo + t_hi) / 2.0
    a = np.exp(-1j * theta0) * m
    _, z, psis, e_cnt = _pencil_reduce(herm_part(a), skew_part(a), band)
    dec_phases = list(theta0 + psis)
    for _ in range(e_cnt):
        dec_phases.extend((theta0 + math.pi / 2.0, theta0 - math.pi / 2.0))
    return _sector_from_multiset(np.array(dec_phases), gamma_hint), theta0


# ----------------------------------------------------------------------
# matrix small gain / small phase


@dataclass(frozen=True)
class MatrixCheck:
    """Outcome of a matrix-level robustness check; witness is a worst-case
    uncertainty making I + A B singular when the condition fails."""

    holds: bool
    witness: np.ndarray | None = None


def matrix_small_gain_check(a, gamma: float) -> MatrixCheck:
    """I + AB nonsingular for all |B| <= gamma iff sigma_max(A) < 1/gamma.

    On failure the returned witness B = -(1/sigma_1) v_1 u_1^H satisfies
    sigma_max(B) <= gamma and makes I + AB exactly singular.
    """
    a = as_square_matrix(a)
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    u, s, vh = svd(a)
    if s[0] < 1.0 / gamma:
        return MatrixCheck(holds=True)
    witness = -(1.0 / s[0]) * np.outer(vh[0].conj(), u[:, 0].conj())
    return MatrixCheck(holds=False, witness=witness)


def matrix_small_phase_check(a, alpha: float, beta: float,
                             tol: ToleranceConfig = DEFAULT_TOL) -> MatrixCheck:
    """Matrix small phase theorem check for quasi-sectorial A.

    I + AB is nonsingular for every semi-sectorial B with Phi(B) inside
    [alpha, beta] iff some 2*pi-translate of Phi(A) fits strictly inside
    (-pi - alpha, pi - beta). On failure the witness is
    e^{j(pi - phi)} T^{-1} S T^{-H} built from the offending phase phi and
    the quasi-sectorial decomposition A = T^H blkdiag(0, D) T.
    """
    a = as_square_matrix(a)
    width = beta - alpha
    if not (0.0 <= width < _TWO_PI):
        raise InvalidSector(f"need 0 <= beta - alpha < 2*pi, got {width}")
    dec = quasi_sectorial_decompose(a, tol)
    phis = dec.d_phases
    if phis.size == 0:
        return MatrixCheck(holds=True)
    left, right = -math.pi - alpha, math.pi - beta
    lo, hi = float(phis[-1]), float(phis[0])
    k_base = round(((left + right) / 2.0 - (lo + hi) / 2.0) / _TWO_PI)
    best_k, best_slack = k_base, -math.inf
    for k in (k_base - 1, k_base, k_base + 1):
        shift = _TWO_PI * k
        slack = min(lo + shift - left, right - hi - shift)
        if slack > best_slack:
            best_k, best_slack = k, slack
    if best_slack > 0.0:
        return MatrixCheck(holds=True)
    shift = _TWO_PI * best_k
    upper_violation = (hi + shift) - right
    lower_violation = left - (lo + shift)
    use_upper = upper_violation >= lower_violation
    pos = 0 if use_upper else dec.d_phases.size - 1
    phi1 = float(dec.d_phases[pos])
    coord = dec.kernel_dim + pos
    t_inv = np.linalg.inv(dec.t)
    sel = np.zeros((dec.n, dec.n))
    sel[coord, coord] = 1.0
    witness = np.exp(1j * (math.pi - phi1)) * (t_inv @ sel @ t_inv.conj().T)
    return MatrixCheck(holds=False, witness=witness)
