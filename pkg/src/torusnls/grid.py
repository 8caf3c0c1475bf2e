"""Spatial torus discretization, Fourier transforms and static norms.

The torus has circumference 2*pi and the forward transform carries the
1/(2*pi) normalization, so a coefficient array ``c`` represents

    phi(x) = sum_k c[k] * exp(i*k*x),   c[k] = (1/2pi) * int exp(-i*k*x) phi(x) dx.

Coefficients are stored in ascending mode order k = -N/2, ..., N/2-1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


class DimensionError(ValueError):
    """Raised when an array length does not match the grid."""


class ModeRangeError(ValueError):
    """Raised when a requested mode lies outside the retained band."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on the torus with N retained Fourier modes.

    Retained modes are k in {-N/2, ..., N/2 - 1}; collocation points are
    x_j = 2*pi*j/N.
    """

    n_modes: int

    def __post_init__(self):
        n = self.n_modes
        if not isinstance(n, (int, np.integer)):
            raise TypeError(f"n_modes must be an integer, got {n!r}")
        if n < 4 or n % 2 != 0:
            raise ValueError(f"n_modes must be even and >= 4, got {n}")

    @property
    def modes(self) -> np.ndarray:
        """Integer mode numbers in ascending order."""
        n = self.n_modes
        return np.arange(-(n // 2), n // 2)

    @property
    def points(self) -> np.ndarray:
        """Collocation points x_j = 2*pi*j/N."""
        return TWO_PI * np.arange(self.n_modes) / self.n_modes

    def index_of(self, k: int) -> int:
        """Array index of mode k; raises if k is outside the band."""
        n = self.n_modes
        if not -(n // 2) <= k < n // 2:
            raise ModeRangeError(f"mode {k} outside retained band [-{n//2}, {n//2})")
        return k + n // 2


@dataclass(frozen=True)
class SobolevIndex:
    """Sobolev exponent s with weight <k>^s = (1+k^2)^(s/2)."""

    s: float

    def weights(self, modes: np.ndarray) -> np.ndarray:
        return (1.0 + np.asarray(modes, dtype=float) ** 2) ** (self.s / 2.0)


class PeriodicField:
    """Immutable complex field on the torus, stored by Fourier coefficients."""

    __slots__ = ("grid", "coeffs")

    def __init__(self, grid: GridSpec, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (grid.n_modes,):
            raise DimensionError(
                f"expected {grid.n_modes} coefficients, got shape {coeffs.shape}"
            )
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("PeriodicField is immutable")

    def coeff(self, k: int) -> complex:
        """Coefficient of mode k."""
        return complex(self.coeffs[self.grid.index_of(k)])

    def __add__(self, other: "PeriodicField") -> "PeriodicField":
        _check_same_grid(self, other)
        return PeriodicField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "PeriodicField") -> "PeriodicField":
        _check_same_grid(self, other)
        return PeriodicField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "PeriodicField":
        return PeriodicField(self.grid, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "PeriodicField":
        return PeriodicField(self.grid, -self.coeffs)

    def conj(self) -> "PeriodicField":
        """Complex conjugate field: coefficient k becomes conj(c[-k])."""
        return PeriodicField(self.grid, reflect_conj(self.coeffs))

    def __repr__(self) -> str:
        return f"PeriodicField(N={self.grid.n_modes})"


def _check_same_grid(a: PeriodicField, b: PeriodicField) -> None:
    if a.grid.n_modes != b.grid.n_modes:
        raise DimensionError(
            f"grid mismatch: N={a.grid.n_modes} vs N={b.grid.n_modes}"
        )


def reflect_conj(coeffs: np.ndarray) -> np.ndarray:
    """Coefficients of the conjugate field: out[k] = conj(c[-k]).

    Mode -N/2 has no partner in the band; its reflection is dropped and the
    output mode -N/2 is set to zero.
    """
    n = coeffs.shape[-1]
    out = np.zeros_like(coeffs)
    out[..., 1:] = np.conj(coeffs[..., 1:][..., ::-1])
    # out[-N/2] stays zero; conj(c[N/2]) is outside the band
    return out


def to_spectral(grid: GridSpec, values) -> PeriodicField:
    """Field from point values at x_j, via the discrete forward transform."""
    values = np.asarray(values, dtype=complex)
    if values.shape != (grid.n_modes,):
        raise DimensionError(
            f"expected {grid.n_modes} point values, got shape {values.shape}"
        )
    coeffs = np.fft.fftshift(np.fft.fft(values)) / grid.n_modes
    return PeriodicField(grid, coeffs)


def to_physical(field: PeriodicField) -> np.ndarray:
    """Point values u(x_j) = sum_k c[k] exp(i*k*x_j)."""
    return np.fft.ifft(np.fft.ifftshift(field.coeffs)) * field.grid.n_modes


def l2_norm(field: PeriodicField) -> float:
    """L^2(T) norm: sqrt(2*pi * sum_k |c[k]|^2) (Parseval with the 1/2pi convention)."""
    return float(np.sqrt(TWO_PI * np.sum(np.abs(field.coeffs) ** 2)))


def hs_norm(field: PeriodicField, s) -> float:
    """H^s norm as the plain l^2 norm of <k>^s-weighted coefficients.

    Note the 2*pi convention gap: hs_norm(u, 0) == l2_norm(u)/sqrt(2*pi).
    """
    if not isinstance(s, SobolevIndex):
        s = SobolevIndex(float(s))
    w = s.weights(field.grid.modes)
    return float(np.sqrt(np.sum((w * np.abs(field.coeffs)) ** 2)))


def weak_pairing(field: PeriodicField, j: int) -> complex:
    """L^2 pairing (u, e^{ijx}) = 2*pi * c[j]."""
    return TWO_PI * field.coeff(j)


def lp_norm(field: PeriodicField, p: int = 4) -> float:
    """L^p(T) norm by collocation quadrature, p in {2, 4}.

    The p=4 quadrature is exact only for fields band-limited to |k| <= N/4;
    for wider support the 4th power aliases on the collocation grid.
    """
    if p not in (2, 4):
        raise ValueError(f"p must be 2 or 4, got {p}")
    vals = to_physical(field)
    n = field.grid.n_modes
    return float((TWO_PI / n * np.sum(np.abs(vals) ** p)) ** (1.0 / p))


def field_from_modes(grid: GridSpec, amplitudes: dict) -> PeriodicField:
    """Build a field from {mode: coefficient} pairs."""
    coeffs = np.zeros(grid.n_modes, dtype=complex)
    for k, a in amplitudes.items():
        coeffs[grid.index_of(int(k))] = a
    return PeriodicField(grid, coeffs)


def random_field(grid: GridSpec, seed, band: int | None = None,
                 decay: float = 2.0) -> PeriodicField:
    """Seeded random band-limited field with <k>^-decay amplitude profile."""
    n = grid.n_modes
    if band is None:
        band = n // 4
    rng = np.random.default_rng(seed)
    modes = grid.modes
    amp = (1.0 + modes.astype(float) ** 2) ** (-decay / 2.0)
    coeffs = amp * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    coeffs[np.abs(modes) > band] = 0.0
    return PeriodicField(grid, coeffs)
