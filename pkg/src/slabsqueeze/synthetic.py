"""Synthetic single-crossover gain table for a highly excited semiconductor.

Stands in for a measured susceptibility of the excited medium: gain (chi'' < 0)
below the chemical potential, absorption above it, chi'' exactly linear
within ``linear_half_width`` of mu so the emission limit at the crossover is
two-sided continuous.
"""

import numpy as np

from .dielectric import TabulatedSusceptibility


def single_crossover_table(mu=1.49, background=12.0, slope=2.0, max_gain=0.006,
                           max_absorption=0.3, linear_half_width=0.002,
                           e_min=1.40, e_max=1.60, step=0.001):
    energies = np.round(np.arange(e_min, e_max + 0.5 * step, step), 9)
    x = energies - mu
    gain = -np.minimum(max_gain, slope * -x)
    edge = slope * linear_half_width
    rise = edge + (max_absorption - edge) * (x - linear_half_width) / 0.01
    absorption = np.where(x <= linear_half_width, slope * x, np.minimum(max_absorption, rise))
    chi_im = np.where(x < 0, gain, absorption)
    return TabulatedSusceptibility(energies, np.full_like(energies, background), chi_im)


def write_table(table, path):
    with open(path, "w") as fh:
        fh.write("# synthetic single-crossover susceptibility\n")
        fh.write("energy_ev,chi_re,chi_im\n")
        for e, re, im in zip(table.energies, table.chi_re, table.chi_im):
            fh.write(f"{e:.9f},{re:.12e},{im:.12e}\n")
