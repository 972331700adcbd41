"""Incoherent emission of the excited slab and the noise-operator normalization.

Spectra here are in vacuum-normalized units: the emitted intensity of a
sample is its total power loss 1 - |T|^2 - |R|^2 times the nonequilibrium
Bose occupation b.  Absorption (loss > 0) pairs with b > 0 above the
chemical potential and gain (loss < 0) with b < 0 below it, so the product
stays non-negative; at the crossover the product is replaced by its limit
loss'(E) * k_B T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_M_S, EPS0_F_M, HBAR_J_S, KB_EV_K
from .dielectric import DielectricResponse, FrequencyGrid
from .errors import (
    CrossoverSingularity,
    InconsistentGrids,
    InconsistentMedium,
    LasingThreshold,
    TransparentMedium,
)
from .slab import SlabTransfer

DEFAULT_CROSSOVER_WINDOW = 1e-6
TRANSPARENT_CHI_IM = 1e-15


@dataclass(frozen=True)
class EmissionState:
    temperature: float          # K
    chemical_potential: float = 0.0  # eV

    def __post_init__(self):
        if not (np.isfinite(self.temperature) and self.temperature > 0):
            raise ValueError("temperature must be > 0")
        if not (np.isfinite(self.chemical_potential) and self.chemical_potential >= 0):
            raise ValueError("chemical potential must be >= 0")

    @property
    def beta(self):
        """1 / (k_B T) in 1/eV."""
        return 1.0 / (KB_EV_K * self.temperature)


@dataclass(frozen=True)
class EmissionSpectrum:
    """``b`` is NaN where it is singular (E == mu exactly) or the sample lases;
    ``I`` is NaN only on lasing samples."""

    grid: FrequencyGrid
    b: np.ndarray
    I: np.ndarray
    regularized: np.ndarray


def bose_occupation(state: EmissionState, energy):
    """b = 1 / (exp(beta (E - mu)) - 1), negative below mu."""
    x = state.beta * (np.asarray(energy, dtype=float) - state.chemical_potential)
    if np.any(x == 0):
        raise CrossoverSingularity("b diverges at E == mu; use emission_intensity")
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(x)


def emission_intensity(state: EmissionState, transfer: SlabTransfer,
                       response: DielectricResponse,
                       crossover_window=DEFAULT_CROSSOVER_WINDOW,
                       allow_lasing=False) -> EmissionSpectrum:
    if transfer.grid != response.grid:
        raise InconsistentGrids("transfer and response are sampled on different grids")
    grid = response.grid
    e = grid.energies
    if np.any(transfer.lasing) and not allow_lasing:
        first = e[transfer.lasing][0]
        raise LasingThreshold(f"emission undefined: slab lases at {first!r} eV",
                              energies=e[transfer.lasing])

    mu = state.chemical_potential
    chi_im = response.chi.imag
    mismatch = chi_im * (e - mu) < 0
    if np.any(mismatch):
        k = int(np.argmax(mismatch))
        raise InconsistentMedium(
            f"chi'' = {chi_im[k]:.3g} at {e[k]!r} eV has the wrong sign for mu = {mu!r} eV "
            "(gain must lie below mu, absorption above)"
        )

    x = state.beta * (e - mu)
    regularized = np.abs(x) < crossover_window
    loss = transfer.loss
    b = np.full(e.shape, np.nan)
    nonzero = x != 0
    with np.errstate(over="ignore"):
        b[nonzero] = 1.0 / np.expm1(x[nonzero])
    with np.errstate(invalid="ignore"):
        I = loss * b
    for k in np.flatnonzero(regularized):
        lo, hi = max(k - 1, 0), min(k + 1, e.size - 1)
        slope = (loss[hi] - loss[lo]) / (e[hi] - e[lo])
        I[k] = slope / state.beta
    I[transfer.lasing] = np.nan
    b[transfer.lasing] = np.nan
    return EmissionSpectrum(grid, b, I, regularized & ~transfer.lasing)


def mode_overlap_integral(n, omega, L, parity=+1):
    """Integral over the slab of |exp(i n w x/c) +- exp(-i n w x/c)|^2."""
    n = np.asarray(n, dtype=complex)
    k_re = n.real * omega / C_M_S
    k_im = n.imag * omega / C_M_S
    a = k_im * L
    small = np.abs(a) < 1e-6
    a_safe = np.where(small, 1.0, a)
    sinhc = np.where(small, 1.0 + a**2 / 6.0, np.sinh(a_safe) / a_safe)
    return 2.0 * L * sinhc + parity * 2.0 * np.sin(k_re * L) / k_re


@dataclass(frozen=True)
class ModeNormalization:
    grid: FrequencyGrid
    N_plus: np.ndarray
    N_minus: np.ndarray
    sign: np.ndarray   # +1 absorbing, -1 amplifying


def quasiparticle_normalization(n, chi_im, omega, L):
    """Return (N_plus, N_minus, sign) so that the commutator of each
    quasiparticle operator with its adjoint equals ``sign`` (SI units)."""
    chi_im = np.asarray(chi_im, dtype=float)
    if np.any(np.abs(chi_im) < TRANSPARENT_CHI_IM):
        raise TransparentMedium("chi'' vanishes; quasiparticle normalization diverges")
    scale = 2.0 * EPS0_F_M * HBAR_J_S * omega**2 * np.abs(chi_im)
    n_plus = 1.0 / np.sqrt(scale * mode_overlap_integral(n, omega, L, +1))
    n_minus = 1.0 / np.sqrt(scale * mode_overlap_integral(n, omega, L, -1))
    return n_plus, n_minus, np.sign(chi_im)


def mode_normalization(response: DielectricResponse, L) -> ModeNormalization:
    p, m, s = quasiparticle_normalization(response.n, response.chi.imag,
                                          response.grid.omega, L)
    return ModeNormalization(response.grid, p, m, s)


def quasiparticle_commutator(norm, chi_im, omega, overlap):
    """[c, c^dagger] from a normalization constant and a mode overlap,
    using the local noise-current commutator 2 eps0 hbar w^2 chi''."""
    return norm**2 * 2.0 * EPS0_F_M * HBAR_J_S * omega**2 * chi_im * overlap
