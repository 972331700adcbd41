"""Normal-incidence transfer coefficients of a homogeneous slab in vacuum.

All propagation phases are referenced to free propagation over the slab
thickness, i.e. an index-matched slab (n = 1) gives T = 1 and R = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_M_S, HBAR_C_EV_M
from .dielectric import DielectricResponse, FrequencyGrid
from .errors import LasingThreshold, NonConvergent

DEFAULT_LASING_GUARD = 1e-9


@dataclass(frozen=True)
class SlabGeometry:
    thickness: float  # m

    def __post_init__(self):
        if not (np.isfinite(self.thickness) and self.thickness > 0):
            raise ValueError("slab thickness must be finite and > 0")


@dataclass(frozen=True)
class SlabTransfer:
    """Per-sample internal reflectivity ``r``, transmission ``T``, reflection
    ``R`` and absorbed fraction ``loss`` (= 1 - |T|^2 - |R|^2, negative under
    gain).  Samples flagged in ``lasing`` carry NaN in T, R and loss."""

    grid: FrequencyGrid
    r: np.ndarray
    T: np.ndarray
    R: np.ndarray
    loss: np.ndarray
    lasing: np.ndarray

    @property
    def t_abs2(self):
        return np.abs(self.T) ** 2

    @property
    def r_abs2(self):
        return np.abs(self.R) ** 2


def _fresnel(n):
    return (1 - n) / (1 + n)


def internal_reflectivity(n, omega, L):
    n = np.asarray(n, dtype=complex)
    return _fresnel(n) * np.exp(1j * omega * n * L / C_M_S)


def _denominator(n, omega, L, lasing_guard):
    r = internal_reflectivity(n, omega, L)
    denom = 1 - r**2
    lasing = np.abs(denom) < lasing_guard
    return r, denom, lasing


def _raise_lasing(lasing):
    if np.any(lasing):
        count = int(np.count_nonzero(lasing))
        raise LasingThreshold(f"|1 - r^2| below lasing guard at {count} sample(s)")


def transmission(n, omega, L, lasing_guard=DEFAULT_LASING_GUARD):
    n = np.asarray(n, dtype=complex)
    r, denom, lasing = _denominator(n, omega, L, lasing_guard)
    _raise_lasing(lasing)
    return 4 * n / ((1 + n) ** 2 * denom) * np.exp(1j * omega * (n - 1) * L / C_M_S)


def reflection(n, omega, L, lasing_guard=DEFAULT_LASING_GUARD):
    n = np.asarray(n, dtype=complex)
    r, denom, lasing = _denominator(n, omega, L, lasing_guard)
    _raise_lasing(lasing)
    r0 = _fresnel(n)
    return r0 * (1 - np.exp(2j * omega * n * L / C_M_S)) / denom


def _decay_mean(a):
    # (1 - exp(-2a)) / (2a), the mean of exp(-2 a x / L) over the slab
    small = np.abs(a) < 1e-8
    a_safe = np.where(small, 1.0, a)
    return np.where(small, 1.0 - a, -np.expm1(-2 * a_safe) / (2 * a_safe))


def _absorbed(n, omega, L, denom):
    # (w/c) chi'' times the integral of |E|^2 over the slab for unit incident
    # amplitude, E = A exp(ikx) + B exp(-ikx) on 0 <= x <= L; equals
    # 1 - |T|^2 - |R|^2 by Poynting's theorem but without the cancellation.
    k = n * omega / C_M_S
    a = k.imag * L
    A = 2 / ((1 + n) * denom)
    B0 = -2 * _fresnel(n) / ((1 + n) * denom)     # B = B0 exp(2ikL)
    forward = np.abs(A) ** 2 * _decay_mean(a)
    backward = np.abs(B0) ** 2 * np.exp(-2 * a) * _decay_mean(a)
    cross = 2 * np.real(A * np.conj(B0 * np.exp(2j * k * L)) * np.exp(1j * k.real * L))
    cross = cross * np.sinc(k.real * L / np.pi)
    chi_im = 2 * n.real * n.imag
    return omega * L / C_M_S * chi_im * (forward + backward + cross)


def absorbed_fraction(n, omega, L, lasing_guard=DEFAULT_LASING_GUARD):
    """Fraction of the incident power dissipated in the slab; negative when
    the slab amplifies.  Same value as 1 - |T|^2 - |R|^2."""
    n = np.asarray(n, dtype=complex)
    r, denom, lasing = _denominator(n, omega, L, lasing_guard)
    _raise_lasing(lasing)
    return _absorbed(n, omega, L, denom)


def multiple_reflection_oracle(n, omega, L, bounces=50):
    """Sum the ray series for (T, R) up to ``bounces`` extra round trips.

    Independent of the closed forms: it is built from single-interface
    Fresnel amplitudes and one-pass propagation factors only.
    """
    n = np.asarray(n, dtype=complex)
    t_in = 2 / (1 + n)
    t_out = 2 * n / (1 + n)
    r_in = (n - 1) / (n + 1)          # inside, at either face
    r_front = (1 - n) / (1 + n)       # outside, at the entrance face
    one_pass = np.exp(1j * omega * n * L / C_M_S)
    ratio = r_in**2 * one_pass**2
    if np.any(np.abs(ratio) >= 1):
        raise NonConvergent("round-trip ratio has modulus >= 1")

    series = np.zeros(np.broadcast(n, omega).shape, dtype=complex)
    term = np.ones_like(series)
    for _ in range(bounces + 1):
        series = series + term
        term = term * ratio
    vacuum = np.exp(-1j * omega * L / C_M_S)
    T = t_in * t_out * one_pass * series * vacuum
    R = r_front + t_in * t_out * r_in * one_pass**2 * series
    return T, R


def transfer_arrays(n, omega, L, lasing_guard=DEFAULT_LASING_GUARD):
    """(r, T, R, loss, lasing) per sample, NaN-filled where the slab lases.

    Purely elementwise, so any partition of the samples gives the same
    values.
    """
    n = np.asarray(n, dtype=complex)
    r, denom, lasing = _denominator(n, omega, L, lasing_guard)
    safe = np.where(lasing, 1.0, denom)
    T = 4 * n / ((1 + n) ** 2 * safe) * np.exp(1j * omega * (n - 1) * L / C_M_S)
    R = _fresnel(n) * (1 - np.exp(2j * omega * n * L / C_M_S)) / safe
    loss = _absorbed(n, omega, L, safe)
    T[lasing] = np.nan
    R[lasing] = np.nan
    loss[lasing] = np.nan
    return r, T, R, loss, lasing


def slab_transfer(response: DielectricResponse, slab: SlabGeometry,
                  lasing_guard=DEFAULT_LASING_GUARD, allow_lasing=False) -> SlabTransfer:
    """Evaluate r, T, R and the absorbed fraction on the response's grid.

    With ``allow_lasing`` the offending samples are flagged and set to NaN
    instead of raising :class:`LasingThreshold`.
    """
    r, T, R, loss, lasing = transfer_arrays(response.n, response.grid.omega,
                                            slab.thickness, lasing_guard)
    if not allow_lasing:
        _raise_lasing_energies(lasing, response.grid)
    return SlabTransfer(response.grid, r, T, R, loss, lasing)


def _raise_lasing_energies(lasing, grid):
    if np.any(lasing):
        e = grid.energies[lasing]
        raise LasingThreshold(
            f"slab reaches lasing threshold at {e.size} sample(s), first at {e[0]!r} eV",
            energies=e,
        )


def resonance_spacing(n_re, L):
    """Energy spacing (eV) of adjacent transmission maxima for a
    non-dispersive index: one extra wavelength per round trip."""
    return np.pi * HBAR_C_EV_M / (L * n_re)


def resonance_order(energy, n_re, L):
    """Nearest integer order s and the residual E - E_s (eV) of the
    round-trip condition E_s = s * pi hbar c / (L n')."""
    spacing = resonance_spacing(n_re, L)
    s = np.rint(energy / spacing)
    return s, energy - s * spacing


def find_resonances(transfer: SlabTransfer, min_contrast=1e-12):
    """Energies of the local maxima of |T|^2, refined by a three-point
    parabola through log|T|^2.

    Maxima whose height exceeds both neighbours by less than ``min_contrast``
    (relative) are ignored, so a flat spectrum yields no resonances.
    """
    e = transfer.grid.energies
    y = transfer.t_abs2
    ok = np.isfinite(y) & (y > 0)
    peaks = []
    for k in range(1, e.size - 1):
        if not (ok[k - 1] and ok[k] and ok[k + 1]):
            continue
        if not (y[k] > y[k - 1] and y[k] >= y[k + 1]):
            continue
        if y[k] - max(y[k - 1], y[k + 1]) <= min_contrast * y[k]:
            continue
        peaks.append(_parabola_vertex(e[k - 1:k + 2], np.log(y[k - 1:k + 2])))
    return peaks


def _parabola_vertex(x, y):
    x0, x1, x2 = x
    y0, y1, y2 = y
    d01 = (y1 - y0) / (x1 - x0)
    d12 = (y2 - y1) / (x2 - x1)
    curv = (d12 - d01) / (x2 - x0)
    if curv >= 0:
        return float(x1)
    vertex = 0.5 * (x0 + x1) - d01 / (2 * curv)
    return float(np.clip(vertex, x0, x2))
