"""Complex susceptibility models and the complex refractive index.

Energies are photon energies in eV everywhere outside this module's
``FrequencyGrid.omega``; that property is the single place where E is turned
into an angular frequency.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .constants import HBAR_EV_S
from .errors import BranchPointHit, MalformedTable, OutOfRange

TABLE_COLUMNS = ("energy_ev", "chi_re", "chi_im")


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing photon energies (eV)."""

    energies: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        if e.ndim != 1 or e.size < 2:
            raise ValueError("grid needs at least two energies")
        if not np.all(np.isfinite(e)) or np.any(e <= 0):
            raise ValueError("grid energies must be finite and positive")
        if np.any(np.diff(e) <= 0):
            raise ValueError("grid energies must be strictly increasing")
        e.setflags(write=False)
        object.__setattr__(self, "energies", e)

    @classmethod
    def linspace(cls, e_min, e_max, count):
        return cls(np.linspace(e_min, e_max, int(count)))

    @property
    def omega(self):
        """Angular frequency (rad/s) of every sample."""
        return self.energies / HBAR_EV_S

    def __len__(self):
        return self.energies.size

    def __eq__(self, other):
        if not isinstance(other, FrequencyGrid):
            return NotImplemented
        return np.array_equal(self.energies, other.energies)

    __hash__ = None


@dataclass(frozen=True)
class LorentzModel:
    """Single Lorentz oscillator, chi(E) = A / (E_x^2 - E^2 - i gamma E).

    ``linewidth`` is the full damping rate expressed as an energy (eV);
    ``strength`` is the numerator scale A in eV^2.  When ``strength`` is
    omitted it defaults to ``linewidth * resonance_energy``, which puts the
    peak of chi'' at 1.
    """

    resonance_energy: float
    linewidth: float
    strength: float | None = None

    def __post_init__(self):
        if not (np.isfinite(self.resonance_energy) and self.resonance_energy > 0):
            raise ValueError("resonance_energy must be > 0")
        if not (np.isfinite(self.linewidth) and self.linewidth > 0):
            raise ValueError("linewidth must be > 0")
        if self.strength is None:
            object.__setattr__(self, "strength", self.linewidth * self.resonance_energy)
        if not (np.isfinite(self.strength) and self.strength >= 0):
            raise ValueError("strength must be >= 0")


@dataclass(frozen=True)
class TabulatedSusceptibility:
    energies: np.ndarray
    chi_re: np.ndarray
    chi_im: np.ndarray

    def __post_init__(self):
        cols = [np.asarray(a, dtype=float) for a in (self.energies, self.chi_re, self.chi_im)]
        if cols[0].ndim != 1 or any(c.shape != cols[0].shape for c in cols):
            raise MalformedTable("table columns must be 1-D and of equal length")
        if cols[0].size < 2:
            raise MalformedTable("table needs at least two rows")
        if not all(np.all(np.isfinite(c)) for c in cols):
            raise MalformedTable("table contains non-finite values")
        if np.any(np.diff(cols[0]) <= 0):
            raise MalformedTable("table energies must be strictly increasing")
        for name, c in zip(("energies", "chi_re", "chi_im"), cols):
            c.setflags(write=False)
            object.__setattr__(self, name, c)

    @property
    def span(self):
        return float(self.energies[0]), float(self.energies[-1])


def load_susceptibility_table(path) -> TabulatedSusceptibility:
    """Read an ``energy_ev, chi_re, chi_im`` CSV file.

    Lines starting with ``#`` are ignored, as is a single header row naming
    the three columns.
    """
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cells = [c.strip() for c in next(csv.reader([line]))]
            if not rows and tuple(cells) == TABLE_COLUMNS:
                continue
            if len(cells) != 3:
                raise MalformedTable(f"{path}:{lineno}: expected 3 columns, got {len(cells)}")
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                raise MalformedTable(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise MalformedTable(f"{path}: no data rows")
    data = np.array(rows)
    return TabulatedSusceptibility(data[:, 0], data[:, 1], data[:, 2])


def lorentz_chi(model: LorentzModel, grid: FrequencyGrid) -> np.ndarray:
    e = grid.energies
    return model.strength / (model.resonance_energy**2 - e**2 - 1j * model.linewidth * e)


def tabulated_chi(table: TabulatedSusceptibility, grid: FrequencyGrid) -> np.ndarray:
    """Component-wise linear interpolation of the table onto the grid."""
    lo, hi = table.span
    e = grid.energies
    outside = (e < lo) | (e > hi)
    if np.any(outside):
        bad = e[outside]
        raise OutOfRange(
            f"{bad.size} grid energies outside table span [{lo}, {hi}] eV "
            f"(first: {bad[0]!r})"
        )
    re = np.interp(e, table.energies, table.chi_re)
    im = np.interp(e, table.energies, table.chi_im)
    return re + 1j * im


def refractive_index(chi, grid: FrequencyGrid | None = None, jump_threshold=None) -> np.ndarray:
    """n = sqrt(1 + chi), tracked continuously along the grid.

    The lowest-energy sample takes the principal root; each following sample
    takes whichever of the two roots lies closer to its predecessor.  ``grid``
    is only used for error messages.
    """
    eps = 1.0 + np.asarray(chi, dtype=complex)
    tiny = np.abs(eps) < 1e-14
    if np.any(tiny):
        k = int(np.argmax(tiny))
        where = f" at {grid.energies[k]!r} eV" if grid is not None else f" at sample {k}"
        raise BranchPointHit(f"1 + chi vanishes{where}")
    p = np.sqrt(eps)
    if p.ndim == 0:
        n = p
    else:
        # the nearer root keeps the sign iff Re(p_k conj(p_{k-1})) >= 0
        keep = np.real(p[1:] * np.conj(p[:-1])) >= 0
        signs = np.concatenate(([1.0], np.cumprod(np.where(keep, 1.0, -1.0))))
        n = p * signs
    bad = np.real(n) <= 0
    if np.any(bad):
        k = int(np.argmax(np.atleast_1d(bad)))
        where = f" at {grid.energies[k]!r} eV" if grid is not None else f" at sample {k}"
        raise BranchPointHit(f"continuous branch leaves Re n > 0{where}")
    if jump_threshold is not None and np.ndim(n) and n.size > 1:
        jumps = np.abs(np.diff(n))
        if np.max(jumps) >= jump_threshold:
            k = int(np.argmax(jumps))
            raise BranchPointHit(
                f"refractive index jumps by {jumps[k]:.3g} between samples {k} and {k + 1}"
            )
    return n


@dataclass(frozen=True)
class DielectricResponse:
    grid: FrequencyGrid
    chi: np.ndarray
    n: np.ndarray = field(repr=False)

    @classmethod
    def from_chi(cls, grid, chi, jump_threshold=None):
        chi = np.asarray(chi, dtype=complex)
        if chi.shape != grid.energies.shape:
            raise ValueError("chi must have one value per grid sample")
        return cls(grid, chi, refractive_index(chi, grid, jump_threshold))

    @classmethod
    def lorentz(cls, model, grid, jump_threshold=None):
        return cls.from_chi(grid, lorentz_chi(model, grid), jump_threshold)

    @classmethod
    def tabulated(cls, table, grid, jump_threshold=None):
        return cls.from_chi(grid, tabulated_chi(table, grid), jump_threshold)

    @property
    def max_step(self):
        return float(np.max(np.abs(np.diff(self.n))))


def kramers_kronig_real(energies, chi_im, targets=None):
    """Estimate chi' from chi'' sampled on ``energies`` by a principal-value
    Hilbert transform over the sampled span (trapezoid rule, singularity
    subtraction).  chi'' is assumed odd in E and chi' to vanish at infinity.

    ``targets`` are indices into ``energies``; all samples by default.
    """
    e = np.asarray(energies, dtype=float)
    g = np.asarray(chi_im, dtype=float)
    dg = np.gradient(g, e)
    a, b = e[0], e[-1]
    idx = np.arange(e.size) if targets is None else np.atleast_1d(targets)
    out = np.empty(idx.size)
    for j, k in enumerate(idx):
        e0 = e[k]
        with np.errstate(divide="ignore", invalid="ignore"):
            f = (g - g[k]) / (e - e0)
        f[k] = dg[k]
        pv = np.trapezoid(f, e)
        if k not in (0, e.size - 1):
            pv += g[k] * np.log((b - e0) / (e0 - a))
        mirror = np.trapezoid(g / (e + e0), e)
        out[j] = (pv + mirror) / np.pi
    return out
