"""Physical constants in eV-second-tesla units.

Energies throughout the package are in eV (exchange couplings are a few
ueV), times in seconds, fields in tesla, so hbar and h are carried in
eV*s and the Bohr magneton in eV/T.
"""

HBAR_EV_S = 6.582119569e-16
"""Reduced Planck constant, eV*s."""

H_EV_S = 4.135667696e-15
"""Planck constant, eV*s."""

MU_B_EV_T = 5.7883818e-5
"""Bohr magneton, eV/T."""

MU_0 = 4e-7 * 3.141592653589793
"""Vacuum permeability, T*m/A (classical 4*pi*1e-7 value)."""
