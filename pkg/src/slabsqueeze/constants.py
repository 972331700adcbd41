"""Physical constants shared by every module (CODATA 2018, eV-based where possible)."""

HBAR_EV_S = 6.582119569e-16     # eV s
HBAR_J_S = 1.054571817e-34      # J s
C_M_S = 2.99792458e8            # m / s
KB_EV_K = 8.617333262e-5        # eV / K
EPS0_F_M = 8.8541878128e-12     # F / m

HBAR_C_EV_M = HBAR_EV_S * C_M_S
