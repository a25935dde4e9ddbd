"""Physical constants used by the junction-energy formulas.

2019 SI exact values (CODATA): h, e and k_B are defining constants, so
PHI0 = h/(2e) is exact as well.
"""

PLANCK_H = 6.62607015e-34  # J s
E_CHARGE = 1.602176634e-19  # C
K_BOLTZMANN = 1.380649e-23  # J/K
PHI0 = PLANCK_H / (2.0 * E_CHARGE)  # magnetic flux quantum, Wb

# Unit helpers kept next to the constants they depend on.
UEV_TO_JOULE = 1e-6 * E_CHARGE  # micro-electronvolt -> J
