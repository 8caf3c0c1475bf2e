"""Discrete space-time Fourier analysis: X^{b,s} norms and estimate surveys.

Fields live on the time-space torus [0, T_w) x [0, 2*pi) sampled on an M x N
lattice. Time frequencies are the integers q in {-M/2,...,M/2-1} scaled by
2*pi/T_w; with T_w = 2*pi the lattice reproduces the (q, k) integer lattice
of the continuum T^2 exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, PeriodicField, TWO_PI, l2_norm
from .integrator import Trajectory, free_evolution
from .nonlinearity import g_full_coeffs, lambda2_coeffs

PLUS = "plus"    # weight <omega + k^2>  (X spaces)
MINUS = "minus"  # weight <omega - k^2>  (X-tilde spaces)


class DegenerateInputError(ValueError):
    """Raised when a ratio denominator vanishes."""


@dataclass(frozen=True)
class BourgainIndex:
    """Index pair (b, s) plus the sign variant of the dispersive weight."""

    b: float
    s: float
    variant: str = PLUS

    def __post_init__(self):
        if self.variant not in (PLUS, MINUS):
            raise ValueError(f"variant must be '{PLUS}' or '{MINUS}'")


# index presets for the multilinear estimate surveys:
#   "trilinear" -- inputs measured in X^{1/2,0}, output in X^{-7/16,0}
#   "lemma1"    -- inputs X^{3/8,-1/3}, output X^{-7/16,-1}
#   "lemma2"    -- inputs X^{7/16,-1/48}, output X^{-7/16,-1}
ESTIMATE_PRESETS = {
    "trilinear": (BourgainIndex(0.5, 0.0), BourgainIndex(-7 / 16, 0.0)),
    "lemma1": (BourgainIndex(3 / 8, -1 / 3), BourgainIndex(-7 / 16, -1.0)),
    "lemma2": (BourgainIndex(7 / 16, -1 / 48), BourgainIndex(-7 / 16, -1.0)),
}


class SpaceTimeField:
    """Immutable complex field on the M x N space-time lattice."""

    __slots__ = ("grid", "m_times", "time_window", "coeffs")

    def __init__(self, grid: GridSpec, m_times: int, coeffs: np.ndarray,
                 time_window: float = TWO_PI):
        if m_times < 4 or m_times % 2 != 0:
            raise ValueError(f"m_times must be even and >= 4, got {m_times}")
        if time_window <= 0:
            raise ValueError("time_window must be positive")
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (m_times, grid.n_modes):
            raise ValueError(
                f"expected coeffs of shape {(m_times, grid.n_modes)}, got {coeffs.shape}"
            )
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "m_times", m_times)
        object.__setattr__(self, "time_window", float(time_window))
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("SpaceTimeField is immutable")

    @property
    def q_modes(self) -> np.ndarray:
        m = self.m_times
        return np.arange(-(m // 2), m // 2)

    @property
    def omega(self) -> np.ndarray:
        """Physical time frequencies q * 2*pi/T_w."""
        return self.q_modes * (TWO_PI / self.time_window)

    def conj(self) -> "SpaceTimeField":
        """Conjugate field: coefficient (q,k) becomes conj(c(-q,-k))."""
        out = np.zeros_like(self.coeffs)
        out[1:, 1:] = np.conj(self.coeffs[1:, 1:][::-1, ::-1])
        return SpaceTimeField(self.grid, self.m_times, out, self.time_window)


def spacetime_from_values(grid: GridSpec, values: np.ndarray,
                          time_window: float = TWO_PI) -> SpaceTimeField:
    """Field from point values u(t_m, x_j), t_m = m*T_w/M, x_j = 2*pi*j/N."""
    values = np.asarray(values, dtype=complex)
    m, n = values.shape
    coeffs = np.fft.fftshift(np.fft.fft2(values)) / (m * n)
    return SpaceTimeField(grid, m, coeffs, time_window)


def spacetime_to_values(field: SpaceTimeField) -> np.ndarray:
    """Point values on the M x N collocation lattice."""
    m, n = field.coeffs.shape
    return np.fft.ifft2(np.fft.ifftshift(field.coeffs)) * (m * n)


def spacetime_from_trajectory(traj: Trajectory, time_window: float) -> SpaceTimeField:
    """Interpret M uniform trajectory samples over [0, T_w) as a time-periodic field.

    The trajectory must be sampled at t_m = m*T_w/M for m = 0..M-1.
    """
    m = len(traj.states)
    expected = np.arange(m) * time_window / m
    if not np.allclose(traj.times, expected, atol=1e-9):
        raise ValueError("trajectory samples do not tile [0, T_w) uniformly")
    values = np.stack([np.fft.ifft(np.fft.ifftshift(s.coeffs)) * s.grid.n_modes
                       for s in traj.states])
    return spacetime_from_values(traj.states[0].grid, values, time_window)


def _weights(field: SpaceTimeField, idx: BourgainIndex) -> np.ndarray:
    omega = field.omega[:, None]
    k = field.grid.modes[None, :].astype(float)
    sign = 1.0 if idx.variant == PLUS else -1.0
    disp = (1.0 + (omega + sign * k ** 2) ** 2) ** (idx.b / 2.0)
    sob = (1.0 + k ** 2) ** (idx.s / 2.0)
    return disp * sob


def xbs_norm(field: SpaceTimeField, idx: BourgainIndex) -> float:
    """Weighted l^2 norm ||<omega +- k^2>^b <k>^s c(q,k)||_{l2}."""
    return float(np.linalg.norm(_weights(field, idx) * field.coeffs))


def resonance_defect(k1: int, k2: int, k3: int, q1: int, q2: int, q3: int) -> int:
    """sigma - sigma1~ - sigma2 - sigma3 minus 2*(k1+k2)*(k1+k3); always 0.

    Exact integer arithmetic: sigma = q + k^2 with q = q1+q2+q3, k = k1+k2+k3,
    sigma1~ = q1 - k1^2, sigma_i = q_i + k_i^2.
    """
    k1, k2, k3, q1, q2, q3 = (int(x) for x in (k1, k2, k3, q1, q2, q3))
    k = k1 + k2 + k3
    q = q1 + q2 + q3
    sigma = q + k * k
    sigma1t = q1 - k1 * k1
    sigma2 = q2 + k2 * k2
    sigma3 = q3 + k3 * k3
    return (sigma - sigma1t - sigma2 - sigma3) - 2 * (k1 + k2) * (k1 + k3)


def spacetime_l4_norm(field: SpaceTimeField) -> float:
    """L^4 norm over the space-time torus via 2x-padded collocation quadrature.

    Exact for fields supported in the quarter band of both axes; wider
    support incurs a (documented) aliasing error in the 4th power.
    """
    m, n = field.coeffs.shape
    padded = np.zeros((2 * m, 2 * n), dtype=complex)
    padded[m // 2: m // 2 + m, n // 2: n // 2 + n] = field.coeffs
    vals = np.fft.ifft2(np.fft.ifftshift(padded)) * (4 * m * n)
    cell = (field.time_window / (2 * m)) * (TWO_PI / (2 * n))
    return float((cell * np.sum(np.abs(vals) ** 4)) ** 0.25)


def l4_ratio(field: SpaceTimeField) -> float:
    """Empirical constant in ||v||_{L4(T^2)} <= C ||v||_{X^{3/8,0}}."""
    denom = xbs_norm(field, BourgainIndex(3 / 8, 0.0))
    if denom == 0.0:
        raise DegenerateInputError("zero field has no L4/X ratio")
    return spacetime_l4_norm(field) / denom


def _to_time_slices(field: SpaceTimeField) -> np.ndarray:
    """Spatial coefficient arrays at the M time collocation points."""
    return np.fft.ifft(np.fft.ifftshift(field.coeffs, axes=0), axis=0) * field.m_times


def _from_time_slices(grid: GridSpec, slices: np.ndarray,
                      time_window: float) -> SpaceTimeField:
    coeffs = np.fft.fftshift(np.fft.fft(slices, axis=0), axes=0) / slices.shape[0]
    return SpaceTimeField(grid, slices.shape[0], coeffs, time_window)


def apply_lambda_slicewise(u: SpaceTimeField, v: SpaceTimeField, w: SpaceTimeField,
                           which: str) -> SpaceTimeField:
    """Apply Lambda1 or Lambda2 in the spatial variable at each time slice."""
    if which not in ("lambda1", "lambda2"):
        raise ValueError(f"which must be 'lambda1' or 'lambda2', got {which!r}")
    n = u.grid.n_modes
    su, sv, sw = (_to_time_slices(f) for f in (u, v, w))
    out = np.empty_like(su)
    for i in range(su.shape[0]):
        cu, cv, cw = su[i], sv[i], sw[i]
        lam2 = lambda2_coeffs(cu, cv, cw)
        if which == "lambda2":
            out[i] = lam2
        else:
            g = g_full_coeffs(cu, cv, cw, n)
            c_uv = np.sum(np.conj(cu) * cv)
            c_uw = np.sum(np.conj(cu) * cw)
            out[i] = g - c_uv * cw - c_uw * cv - lam2
    return _from_time_slices(u.grid, out, u.time_window)


def lambda_ratio(u: SpaceTimeField, v: SpaceTimeField, w: SpaceTimeField,
                 which: str, in_idx: BourgainIndex, out_idx: BourgainIndex) -> float:
    """Output norm of Lambda_i(u,v,w) divided by the product of input norms."""
    denom = xbs_norm(u, in_idx) * xbs_norm(v, in_idx) * xbs_norm(w, in_idx)
    if denom == 0.0:
        raise DegenerateInputError("zero input norm in lambda_ratio")
    out = apply_lambda_slicewise(u, v, w, which)
    return xbs_norm(out, out_idx) / denom


def zygmund_ratio(phi: PeriodicField, t_small: float, n_time: int = 129,
                  pad: int = 2) -> float:
    """Empirical constant in ||U(t)phi||_{L4(]-T,T[xT)} <= C T^{1/8} ||phi||_{L2}."""
    if not 0.0 < t_small < 1.0:
        raise ValueError("t_small must lie in (0, 1)")
    norm0 = l2_norm(phi)
    if norm0 == 0.0:
        raise DegenerateInputError("zero field in zygmund_ratio")
    n = phi.grid.n_modes
    times = np.linspace(-t_small, t_small, n_time)
    # spatial quadrature of |U(t)phi|^4 on a pad-refined grid, trapezoid in t
    space_int = np.empty(n_time)
    for i, t in enumerate(times):
        evolved = free_evolution(phi, t)
        padded = np.zeros(pad * n, dtype=complex)
        padded[(pad * n - n) // 2: (pad * n - n) // 2 + n] = evolved.coeffs
        vals = np.fft.ifft(np.fft.ifftshift(padded)) * (pad * n)
        space_int[i] = TWO_PI / (pad * n) * np.sum(np.abs(vals) ** 4)
    l4 = float(np.trapezoid(space_int, times) ** 0.25)
    return l4 / (t_small ** 0.125 * norm0)


def random_spacetime_field(grid: GridSpec, m_times: int, seed,
                           decay_b: float = 0.5, decay_s: float = 0.5,
                           time_window: float = TWO_PI,
                           variant: str = PLUS) -> SpaceTimeField:
    """Seeded random field with |c(q,k)| = <omega +- k^2>^-decay_b * <k>^-decay_s.

    Support is restricted to the quarter band in both axes so 4th powers are
    alias-free in the padded quadratures.
    """
    rng = np.random.default_rng(seed)
    n = grid.n_modes
    q = np.arange(-(m_times // 2), m_times // 2)
    omega = q * (TWO_PI / time_window)
    k = grid.modes.astype(float)
    sign = 1.0 if variant == PLUS else -1.0
    disp = (1.0 + (omega[:, None] + sign * k[None, :] ** 2) ** 2) ** (-decay_b / 2.0)
    sob = (1.0 + k[None, :] ** 2) ** (-decay_s / 2.0)
    phases = np.exp(2j * np.pi * rng.random((m_times, n)))
    coeffs = disp * sob * phases
    coeffs[np.abs(q) > m_times // 4, :] = 0.0
    coeffs[:, np.abs(grid.modes) > n // 4] = 0.0
    return SpaceTimeField(grid, m_times, coeffs, time_window)
