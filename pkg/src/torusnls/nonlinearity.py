"""The trilinear operator g(u,v,w) = conj(u)*v*w and its resonant decomposition.

For the diagonal case u=v=w the exact identity

    g(u) = (1/pi)*||u||_{L2}^2 * u + Lambda1(u,u,u) + Lambda2(u,u,u)

splits |u|^2 u into the mass term, the non-resonant part Lambda1 (frequency
triples with (k1+k2)(k1+k3) != 0) and the diagonal part Lambda2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    GridSpec,
    PeriodicField,
    _check_same_grid,
    l2_norm,
    reflect_conj,
)


class BandError(ValueError):
    """Raised when a field violates the |k| <= N/4 support precondition."""


class OracleSizeError(ValueError):
    """Raised when the O(N^3) oracle is asked for a grid that is too large."""


def check_band(field: PeriodicField, band: int | None = None,
               rel_tol: float = 1e-9) -> None:
    """Raise BandError if spectral mass outside |k| <= band exceeds rel_tol."""
    n = field.grid.n_modes
    if band is None:
        band = n // 4
    outside = np.abs(field.grid.modes) > band
    total = np.linalg.norm(field.coeffs)
    if total == 0.0:
        return
    if np.linalg.norm(field.coeffs[outside]) > rel_tol * total:
        raise BandError(f"field has spectral support outside |k| <= {band}")


def _pad_to_physical(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Zero-pad ascending-order coefficients to a 2N grid and return point values."""
    padded = np.zeros(2 * n, dtype=complex)
    padded[n // 2: n // 2 + n] = coeffs
    return np.fft.ifft(np.fft.ifftshift(padded)) * (2 * n)


def _truncate_from_physical(values: np.ndarray, n: int) -> np.ndarray:
    """Transform 2N point values and keep the retained N-mode band."""
    chat = np.fft.fftshift(np.fft.fft(values)) / (2 * n)
    return chat[n // 2: n // 2 + n]


def g_full_coeffs(cu: np.ndarray, cv: np.ndarray, cw: np.ndarray,
                  n: int) -> np.ndarray:
    """Coefficients of conj(u)*v*w on the retained band, alias-free via 2x padding."""
    pu = _pad_to_physical(cu, n)
    pv = pu if cv is cu else _pad_to_physical(cv, n)
    pw = pu if cw is cu else (pv if cw is cv else _pad_to_physical(cw, n))
    return _truncate_from_physical(np.conj(pu) * pv * pw, n)


def g_full(u: PeriodicField, v: PeriodicField, w: PeriodicField,
           enforce_band: bool = True) -> PeriodicField:
    """g(u,v,w) = conj(u)*v*w, computed by zero-padded pointwise product.

    With 2x padding no aliased mode lands inside the retained band, so the
    returned coefficients are exact for any in-band inputs; the |k| <= N/4
    check guards the continuum interpretation (no product mode is truncated).
    """
    _check_same_grid(u, v)
    _check_same_grid(u, w)
    if enforce_band:
        for f in (u, v, w):
            check_band(f)
    n = u.grid.n_modes
    return PeriodicField(u.grid, g_full_coeffs(u.coeffs, v.coeffs, w.coeffs, n))


def resonant_part(u: PeriodicField) -> PeriodicField:
    """Mass term (1/pi)*||u||_{L2}^2 * u."""
    return (l2_norm(u) ** 2 / np.pi) * u


def lambda2_coeffs(cu: np.ndarray, cv: np.ndarray, cw: np.ndarray) -> np.ndarray:
    # Lambda2 = -sum_k conj(u^)(- k)... reduces to the elementwise formula
    # out[m] = -conj(cu[m]) * cv[m] * cw[m] (substitute m = -k in the sum).
    return -np.conj(cu) * cv * cw


def lambda2(u: PeriodicField, v: PeriodicField, w: PeriodicField) -> PeriodicField:
    """Diagonal resonant part of the triple convolution.

    Coefficient at mode m is -conj(u^(m)) * v^(m) * w^(m); this is the
    k2 = k3 = -k1 diagonal of the triple sum, taken with a minus sign.
    """
    _check_same_grid(u, v)
    _check_same_grid(u, w)
    return PeriodicField(u.grid, lambda2_coeffs(u.coeffs, v.coeffs, w.coeffs))


def lambda1(u: PeriodicField, v: PeriodicField, w: PeriodicField,
            enforce_band: bool = True) -> PeriodicField:
    """Non-resonant part over (k1+k2)(k1+k3) != 0, computed by subtraction.

    g = S1 + S2 + Lambda2 + Lambda1 where S1 = <u,v>_l2 * w and
    S2 = <u,w>_l2 * v collect the k2 = -k1 and k3 = -k1 planes (the doubly
    counted diagonal is exactly -Lambda2).
    """
    _check_same_grid(u, v)
    _check_same_grid(u, w)
    total = g_full(u, v, w, enforce_band=enforce_band)
    c_uv = np.sum(np.conj(u.coeffs) * v.coeffs)
    c_uw = np.sum(np.conj(u.coeffs) * w.coeffs)
    s12 = PeriodicField(u.grid, c_uv * w.coeffs + c_uw * v.coeffs)
    return total - s12 - lambda2(u, v, w)


@dataclass(frozen=True)
class TrilinearResult:
    """Diagonal decomposition g(u) = resonant + lambda1 + lambda2."""

    resonant: PeriodicField
    lambda1: PeriodicField
    lambda2: PeriodicField
    total: PeriodicField


def decompose(u: PeriodicField, enforce_band: bool = True) -> TrilinearResult:
    """Split |u|^2 u into mass term, Lambda1 and Lambda2 (diagonal case)."""
    total = g_full(u, u, u, enforce_band=enforce_band)
    res = resonant_part(u)
    lam2 = lambda2(u, u, u)
    lam1 = total - res - lam2
    return TrilinearResult(resonant=res, lambda1=lam1, lambda2=lam2, total=total)


def g_oracle(u: PeriodicField, v: PeriodicField, w: PeriodicField,
             mask=None) -> PeriodicField:
    """Direct O(N^3) triple sum over (k1,k2,k3), optionally masked.

    ``mask(k1, k2, k3)`` receives broadcast integer arrays and returns a
    boolean array selecting which triples contribute. Ground truth for the
    FFT path; limited to N <= 64.
    """
    _check_same_grid(u, v)
    _check_same_grid(u, w)
    n = u.grid.n_modes
    if n > 64:
        raise OracleSizeError(f"oracle limited to N <= 64, got N = {n}")
    modes = u.grid.modes
    ubar = reflect_conj(u.coeffs)  # ubar[i] = conj(u^(-k_i))
    k1 = modes[:, None, None]
    k2 = modes[None, :, None]
    k3 = modes[None, None, :]
    terms = ubar[:, None, None] * v.coeffs[None, :, None] * w.coeffs[None, None, :]
    if mask is not None:
        terms = np.where(mask(k1, k2, k3), terms, 0.0)
    out_mode = k1 + k2 + k3
    in_band = (out_mode >= -(n // 2)) & (out_mode < n // 2)
    out = np.zeros(n, dtype=complex)
    idx = (out_mode + n // 2)[in_band]
    np.add.at(out, idx, terms[in_band])
    return PeriodicField(u.grid, out)


def nonresonant_mask(k1, k2, k3):
    """Predicate (k1+k2)(k1+k3) != 0 selecting the Lambda1 triples."""
    return (k1 + k2) * (k1 + k3) != 0
