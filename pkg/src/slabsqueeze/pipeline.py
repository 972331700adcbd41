"""Response -> transfer -> emission -> squeezing, plus CSV and plot output."""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig
from .dielectric import DielectricResponse, FrequencyGrid, lorentz_chi, tabulated_chi
from .emission import emission_intensity
from .errors import LasingThreshold
from .slab import SlabTransfer, transfer_arrays
from .squeezing import SqueezingResult, degradation_report, squeezing_spectrum

log = logging.getLogger(__name__)

COLUMNS = (
    "energy_ev", "chi_re", "chi_im", "n_re", "n_im", "t_abs2", "r_abs2",
    "b", "i_over_k", "s_at_phase", "s_min", "s_max", "flags",
)
NUMERIC = COLUMNS[:-1]
OK, LASING, CROSSOVER = "OK", "LASING", "CROSSOVER_REGULARIZED"
CHUNK = 1024


@dataclass
class SpectrumTable:
    columns: dict            # name -> float ndarray (NaN = empty field)
    flags: list
    footer: list             # "key: value" strings
    squeeze_magnitude: float = 0.0
    chemical_potential: float = 0.0
    response: DielectricResponse | None = None
    transfer: SlabTransfer | None = None
    squeezing: SqueezingResult | None = None
    report: object = None

    def __len__(self):
        return len(self.flags)

    def __getitem__(self, name):
        return self.columns[name]


def build_response(config: RunConfig) -> DielectricResponse:
    g = config.grid
    grid = FrequencyGrid.linspace(g.e_min, g.e_max, g.count)
    if config.medium.model == "lorentz":
        chi = lorentz_chi(config.medium.lorentz, grid)
    else:
        chi = tabulated_chi(config.medium.table, grid)
    return DielectricResponse.from_chi(grid, chi, config.thresholds.jump)


def compute_transfer(response, thickness, lasing_guard, workers=1) -> SlabTransfer:
    """Per-sample transfer coefficients, optionally shared across threads in
    fixed chunks and merged back in grid order."""
    n = response.n
    omega = response.grid.omega
    bounds = [(lo, min(lo + CHUNK, n.size)) for lo in range(0, n.size, CHUNK)]

    def work(span):
        lo, hi = span
        return transfer_arrays(n[lo:hi], omega[lo:hi], thickness, lasing_guard)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(span) for span in bounds]
    r, T, R, loss, lasing = (np.concatenate(cols) for cols in zip(*parts))
    return SlabTransfer(response.grid, r, T, R, loss, lasing)


def run_pipeline(config: RunConfig, workers=None) -> SpectrumTable:
    workers = config.workers if workers is None else workers
    response = build_response(config)
    grid = response.grid
    transfer = compute_transfer(response, config.thickness,
                                config.thresholds.lasing_guard, workers)
    if np.all(transfer.lasing):
        raise LasingThreshold("slab lases across the whole grid", energies=grid.energies)
    if np.any(transfer.lasing):
        log.warning("%d samples at or beyond the lasing threshold", int(transfer.lasing.sum()))

    emission = emission_intensity(config.emission, transfer, response,
                                  config.thresholds.crossover_window, allow_lasing=True)
    result = squeezing_spectrum(config.squeeze, transfer, emission, config.thickness,
                                allow_lasing=True)
    report = degradation_report(result, config.emission.chemical_potential, response.chi.imag)

    flags = [LASING if las else CROSSOVER if reg else OK
             for las, reg in zip(transfer.lasing, emission.regularized)]
    columns = {
        "energy_ev": grid.energies.copy(),
        "chi_re": response.chi.real.copy(),
        "chi_im": response.chi.imag.copy(),
        "n_re": response.n.real.copy(),
        "n_im": response.n.imag.copy(),
        "t_abs2": transfer.t_abs2,
        "r_abs2": transfer.r_abs2,
        "b": emission.b.copy(),
        "i_over_k": emission.I.copy(),
        "s_at_phase": result.S_at_phase,
        "s_min": result.S_min,
        "s_max": result.S_max,
    }
    return SpectrumTable(
        columns=columns,
        flags=flags,
        footer=_footer(report, result),
        squeeze_magnitude=config.squeeze.magnitude,
        chemical_potential=config.emission.chemical_potential,
        response=response,
        transfer=transfer,
        squeezing=result,
        report=report,
    )


def _footer(report, result):
    intervals = "; ".join(f"{a:.12e}..{b:.12e}" for a, b in report.intervals) or "none"
    lines = [
        f"squeezed_intervals_ev: {intervals}",
        f"minimum_s_min: {report.minimum_value:.12e} at {report.minimum_energy:.12e}",
        f"input_envelopes: {result.input_min:.12e} {result.input_max:.12e}",
    ]
    if report.crossover_interval is not None:
        a, b = report.crossover_interval
        lines.append(f"crossover_interval_ev: {a:.12e}..{b:.12e}")
    if report.clustered_at_crossover is not None:
        lines.append(f"squeezing_clustered_at_crossover: {str(report.clustered_at_crossover).lower()}")
    return lines


def _cell(value):
    return "" if not np.isfinite(value) else "%.12e" % value


def emit_csv(table: SpectrumTable, path):
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(",".join(COLUMNS) + "\n")
        cols = [table.columns[name] for name in NUMERIC]
        for k, flag in enumerate(table.flags):
            cells = [_cell(c[k]) for c in cols]
            fh.write(",".join(cells + [flag]) + "\n")
        for line in table.footer:
            fh.write(f"# {line}\n")
    return path


def read_csv(path) -> SpectrumTable:
    """Inverse of :func:`emit_csv` (numeric fields and flags, footer kept)."""
    rows, footer = [], []
    with Path(path).open(newline="") as fh:
        header = fh.readline().rstrip("\n").split(",")
        if tuple(header) != COLUMNS:
            raise ValueError(f"unexpected header {header}")
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                footer.append(line[1:].strip())
            elif line:
                rows.append(next(csv.reader([line])))
    columns = {
        name: np.array([float(r[i]) if r[i] else np.nan for r in rows])
        for i, name in enumerate(NUMERIC)
    }
    return SpectrumTable(columns, [r[-1] for r in rows], footer)


PLOT_TEMPLATE = '''\
"""Plot squeezing envelopes and chi'' from {csv_name}."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
INPUT_MIN = {input_min!r}
INPUT_MAX = {input_max!r}
MU = {mu!r}


def column(rows, name):
    return [float(r[name]) if r[name] else float("nan") for r in rows]


with open(HERE / "{csv_name}", newline="") as fh:
    rows = [r for r in csv.DictReader(line for line in fh if not line.startswith("#"))]

energy = column(rows, "energy_ev")
fig, (ax_s, ax_chi) = plt.subplots(2, 1, sharex=True, figsize=(6, 7))
ax_s.plot(energy, column(rows, "s_max"), color="0.6", label="max")
ax_s.plot(energy, column(rows, "s_min"), color="k", label="min")
ax_s.axhline(INPUT_MAX, ls="--", color="0.6", lw=0.8)
ax_s.axhline(INPUT_MIN, ls="--", color="k", lw=0.8)
ax_s.axhline(0.0, color="0.85", lw=0.5)
ax_s.set_ylabel("S_sq / K")
ax_s.legend()
ax_chi.plot(energy, column(rows, "chi_im"), color="k")
ax_chi.axhline(0.0, color="0.85", lw=0.5)
ax_chi.set_ylabel("Im chi")
ax_chi.set_xlabel("photon energy (eV)")
if MU is not None:
    for ax in (ax_s, ax_chi):
        ax.axvline(MU, color="r", lw=0.8)
    ax_chi.annotate("mu", xy=(MU, 0.0), xytext=(MU, 0.0), color="r")
fig.tight_layout()
fig.savefig(HERE / "{png_name}", dpi=150)
'''


def emit_plot_script(table: SpectrumTable, path, csv_name="spectrum.csv"):
    """Write a standalone matplotlib script next to the CSV it reads."""
    path = Path(path)
    e = table.columns["energy_ev"]
    chi_im = table.columns["chi_im"]
    mu = table.chemical_potential
    gain = mu > 0 and e[0] <= mu <= e[-1] and np.any(chi_im < 0)
    input_min = 0.5 * float(np.expm1(-2 * table.squeeze_magnitude))
    input_max = 0.5 * float(np.expm1(2 * table.squeeze_magnitude))
    text = PLOT_TEMPLATE.format(
        csv_name=csv_name,
        png_name=Path(csv_name).with_suffix(".png").name,
        input_min=input_min,
        input_max=input_max,
        mu=float(mu) if gain else None,
    )
    path.write_text(text)
    return path
