"""Numeric defaults for singularity-chains.

Every tolerance, grid size and fit setting used when the caller does not pass
one lives here. CLI flags override environment variables, which override
these values.
"""

import math

# Chain integrators (Hopf and vortex)
CHAIN_RTOL = 1e-9
CHAIN_ATOL = 1e-12
HOPF_DEFAULT_ORDER = 1

# Hill equation
HILL_TOL = 1e-12
HILL_ATOL_FACTOR = 1e-2
FLOQUET_GRID = 4096
BOUNDARY_TOL = 1e-9
DET_TOL = 1e-6
# Boundary monodromies: distance from +-I that counts as coexistence, and the
# smallest Wronskian weight of a unit eigenvector accepted as a Floquet basis
COEXISTENCE_TOL = 1e-8
BOUNDARY_WEIGHT_TOL = 1e-6

# Finite-volume oracle
GODUNOV_CFL = 0.9
GODUNOV_MIN_CELLS = 100
GODUNOV_DOMAIN = (-4.0, 4.0)
SHOCK_JUMP_TOL = 1e-3
SHOCK_CONTRAST = 10.0
SHOCK_PLATEAU_OFFSET = 8

# First approximation: distance from a resonant Omega0 that is rejected
RESONANCE_TOL = 1e-12

# Fitting
FIT_RESTARTS = 32
FIT_BUDGET = 4000
FIT_XATOL = 1e-10
FIT_FATOL = 1e-30
FIT_SIMPLEX_FRACTION = 0.1
FIT_SEED = 0
OMEGA0_BRANCHES = ((0.3, 0.49), (0.51, 0.7))
MU_BOUNDS = (1e-3, 1.0)
BETA_BOUNDS = (-0.3, 0.3)
C_BOUNDS = (0.05, 10.0)
HOPF_SHIFT_SPAN = 20.0
# Floquet settings used inside exact-family objective evaluations
EXACT_FIT_TOL = 1e-10
EXACT_FIT_GRID = 1024
PREDICT_SAMPLES = 101

# Output formats
CSV_FLOAT_FORMAT = "%.17g"
JSON_INDENT = 2

TWO_PI = 2.0 * math.pi
