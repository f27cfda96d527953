"""
CODATA 2018 constants in SI units.

All SI outputs of the package are computed from this table only, so results are
bit-reproducible across runs and machines.
"""

HBAR = 1.054571817e-34              # reduced Planck constant, J s
ALPHA = 7.2973525693e-3             # fine-structure constant
SPEED_OF_LIGHT = 299792458.0        # m/s (exact)
EPSILON_0 = 8.8541878128e-12        # vacuum permittivity, F/m
ELEMENTARY_CHARGE = 1.602176634e-19 # C (exact)
ELECTRON_MASS = 9.1093837015e-31    # kg
CLASSICAL_ELECTRON_RADIUS = 2.8179403262e-15  # m

# Unit modes understood by make_params
DIMENSIONLESS = "dimensionless"
SI = "SI"
UNIT_MODES = (DIMENSIONLESS, SI)
