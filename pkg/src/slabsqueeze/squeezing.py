"""Normally ordered squeezing spectrum behind the slab.

A narrowband squeezed vacuum centred on the carrier w0 enters from the left;
the right-hand input is vacuum and the detector sits on the right-hand face.
All spectra are in vacuum-normalized units (vacuum noise = 0, negative =
squeezed).  Per sample, with T = |T| exp(i theta):

    S(phi) = I + |T|^2 [sinh^2 r + sinh r cosh r cos(2 w0 L / c + phi + 2 theta)]

and the phase envelopes are I - |T|^2 (1 - e^-2r)/2 and I + |T|^2 (e^2r - 1)/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_M_S, HBAR_EV_S
from .emission import EmissionSpectrum
from .errors import InconsistentGrids, LasingThreshold, ZeroTransmission
from .slab import SlabTransfer


@dataclass(frozen=True)
class SqueezeInput:
    magnitude: float          # |xi|
    phase: float = 0.0        # phi_xi, rad
    carrier_energy: float = 1.0  # hbar w0, eV

    def __post_init__(self):
        if not (np.isfinite(self.magnitude) and self.magnitude >= 0):
            raise ValueError("squeeze magnitude must be finite and >= 0")
        if not np.isfinite(self.phase):
            raise ValueError("squeeze phase must be finite")
        object.__setattr__(self, "phase", float(np.mod(self.phase, 2 * np.pi)))
        if not (np.isfinite(self.carrier_energy) and self.carrier_energy > 0):
            raise ValueError("carrier energy must be > 0")

    @property
    def carrier_omega(self):
        return self.carrier_energy / HBAR_EV_S

    def with_phase(self, phase):
        return SqueezeInput(self.magnitude, phase, self.carrier_energy)


def input_envelopes(magnitude):
    """(min, max) noise of the bare squeezed input: -(1 - e^-2r)/2, (e^2r - 1)/2."""
    return 0.5 * np.expm1(-2 * magnitude), 0.5 * np.expm1(2 * magnitude)


@dataclass(frozen=True)
class SqueezingResult:
    grid: object
    S_at_phase: np.ndarray
    S_min: np.ndarray
    S_max: np.ndarray
    I_over_K: np.ndarray
    input_min: float
    input_max: float


def _carrier_phase(squeeze: SqueezeInput, L):
    return 2 * squeeze.carrier_omega * L / C_M_S


def _check(squeeze, transfer, emission):
    if transfer.grid != emission.grid:
        raise InconsistentGrids("transfer and emission are sampled on different grids")
    e = transfer.grid.energies
    if not (e[0] <= squeeze.carrier_energy <= e[-1]):
        raise ValueError(
            f"carrier energy {squeeze.carrier_energy!r} eV outside grid [{e[0]!r}, {e[-1]!r}]"
        )


def squeezing_at_phase(squeeze: SqueezeInput, T, I_over_K, L, phase=None):
    """S/K for given transmission samples at squeeze phase ``phase``
    (defaults to the input's own phase)."""
    r = squeeze.magnitude
    phi = squeeze.phase if phase is None else phase
    theta = np.angle(T)
    t2 = np.abs(T) ** 2
    mix = np.cos(_carrier_phase(squeeze, L) + phi + 2 * theta)
    return I_over_K + t2 * (np.sinh(r) ** 2 + np.sinh(r) * np.cosh(r) * mix)


def squeezing_spectrum(squeeze: SqueezeInput, transfer: SlabTransfer,
                       emission: EmissionSpectrum, L, allow_lasing=False) -> SqueezingResult:
    _check(squeeze, transfer, emission)
    if np.any(transfer.lasing) and not allow_lasing:
        raise LasingThreshold("squeezing spectrum undefined on lasing samples",
                              energies=transfer.grid.energies[transfer.lasing])
    t2 = transfer.t_abs2
    lo, hi = input_envelopes(squeeze.magnitude)
    I = emission.I
    return SqueezingResult(
        grid=transfer.grid,
        S_at_phase=squeezing_at_phase(squeeze, transfer.T, I, L),
        S_min=I + t2 * lo,
        S_max=I + t2 * hi,
        I_over_K=I,
        input_min=float(lo),
        input_max=float(hi),
    )


def envelope_phase(squeeze: SqueezeInput, transfer: SlabTransfer, L, sample):
    """Squeeze phase in [0, 2 pi) that minimises S at grid index ``sample``."""
    T = transfer.T[sample]
    if not np.abs(T) >= 1e-15:
        raise ZeroTransmission("phase is irrelevant where the slab transmits nothing")
    phi = np.pi - _carrier_phase(squeeze, L) - 2 * np.angle(T)
    return float(np.mod(phi, 2 * np.pi))


@dataclass(frozen=True)
class DegradationReport:
    squeezed: np.ndarray                 # bool per sample
    intervals: list                      # [(e_start, e_end), ...] contiguous squeezed runs
    minimum_energy: float
    minimum_value: float
    crossover_interval: tuple | None     # squeezed run containing mu, if any
    clustered_at_crossover: bool | None  # None unless a gain configuration

    @property
    def classical(self):
        return ~self.squeezed


def degradation_report(result: SqueezingResult, chemical_potential=None,
                       chi_im=None) -> DegradationReport:
    """Classify samples as squeezed (S_min < 0) or classical and collect the
    squeezed runs.  For a gain configuration (some chi'' < 0 and mu inside
    the grid) also check that every squeezed sample belongs to the run that
    contains mu."""
    e = result.grid.energies
    s_min = result.S_min
    valid = np.isfinite(s_min)
    squeezed = valid & (s_min < 0)

    intervals = []
    runs = []
    k = 0
    while k < e.size:
        if squeezed[k]:
            start = k
            while k + 1 < e.size and squeezed[k + 1]:
                k += 1
            runs.append((start, k))
            intervals.append((float(e[start]), float(e[k])))
        k += 1

    masked = np.where(valid, s_min, np.inf)
    kmin = int(np.argmin(masked))

    crossover = None
    clustered = None
    if chemical_potential is not None:
        mu = chemical_potential
        for start, stop in runs:
            if e[start] <= mu <= e[stop]:
                crossover = (float(e[start]), float(e[stop]))
                break
        gain = chi_im is not None and np.any(np.asarray(chi_im) < 0) and e[0] <= mu <= e[-1]
        if gain:
            if not runs:
                clustered = True
            else:
                clustered = crossover is not None and len(runs) == 1
    return DegradationReport(squeezed, intervals, float(e[kmin]), float(masked[kmin]),
                             crossover, clustered)
