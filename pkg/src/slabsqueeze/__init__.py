"""Squeezed light through a dispersive, absorbing or amplifying slab."""

from .dielectric import (
    DielectricResponse,
    FrequencyGrid,
    LorentzModel,
    TabulatedSusceptibility,
    kramers_kronig_real,
    load_susceptibility_table,
    lorentz_chi,
    refractive_index,
    tabulated_chi,
)
from .emission import (
    EmissionSpectrum,
    EmissionState,
    ModeNormalization,
    bose_occupation,
    emission_intensity,
    mode_normalization,
    mode_overlap_integral,
    quasiparticle_normalization,
)
from .slab import (
    SlabGeometry,
    SlabTransfer,
    absorbed_fraction,
    find_resonances,
    internal_reflectivity,
    multiple_reflection_oracle,
    reflection,
    slab_transfer,
    transmission,
)
from .squeezing import (
    SqueezeInput,
    SqueezingResult,
    degradation_report,
    envelope_phase,
    squeezing_spectrum,
)

__version__ = "0.1.0"
