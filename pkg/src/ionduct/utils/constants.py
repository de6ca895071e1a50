import math

__all__ = [
    "VACUUM_PERMITTIVITY",
    "ION_MOBILITY",
    "AIR_DENSITY",
    "KINEMATIC_VISCOSITY",
    "BREAKDOWN_FIELD",
    "BREAKDOWN_GUARD",
    "STANDARD_GRAVITY",
    "WARBURG_COEFF",
    "SPACE_CHARGE_FACTOR",
    "DEFAULT_GAP",
    "DEFAULT_DUCT_HEIGHT",
    "DEFAULT_LATERAL",
    "DEFAULT_BEND_DEPTH",
    "DEFAULT_TIP_ANGLE",
    "DEFAULT_RIM_WIDTH",
    "DEFAULT_WIRE_WIDTH",
    "DEFAULT_WIRE_PITCH",
    "DEFAULT_INTERSTAGE_FACTOR",
    "REVERSE_CORONA_FACTOR",
    "TIPS_PER_ASPECT_RATIO",
    "WALL_PENALTY_ANCHOR",
    "DEFAULT_TIP_PENALTY",
    "ONSET_SCAN_POINTS",
    "ONSET_TOLERANCE",
    "STAGE_FACTOR_RESOLUTION",
    "MIN_THRUST_EFFECTIVENESS",
    "SUPERLINEAR_TOLERANCE",
    "NOISE_FLOOR_FACTOR",
    "SUB_ONSET_FRACTION",
    "VOLTAGE_SNAP",
    "ID_SEP_KEY",
]

# Medium defaults (air, 20 °C, positive ions)
VACUUM_PERMITTIVITY = 8.854e-12  # F/m
ION_MOBILITY = 2e-4  # m²/(V·s)
AIR_DENSITY = 1.225  # kg/m³
KINEMATIC_VISCOSITY = 1.48e-5  # m²/s
BREAKDOWN_FIELD = 3e6  # V/m
BREAKDOWN_GUARD = 0.9  # admissible fraction of the breakdown field
STANDARD_GRAVITY = 9.80665  # m/s²

# arctan(pi/3) used as a pure ratio of the inter-electrode gap
WARBURG_COEFF = math.atan(math.pi / 3)
SPACE_CHARGE_FACTOR = 9.0 / 8.0

# Geometry defaults, meters
DEFAULT_GAP = 2e-3
DEFAULT_DUCT_HEIGHT = 6e-3
DEFAULT_LATERAL = 1e-3
DEFAULT_BEND_DEPTH = 1e-3
DEFAULT_TIP_ANGLE = 5.0  # degrees
DEFAULT_RIM_WIDTH = 1e-3
DEFAULT_WIRE_WIDTH = 50e-6
DEFAULT_WIRE_PITCH = 1e-3
DEFAULT_INTERSTAGE_FACTOR = 1.5
REVERSE_CORONA_FACTOR = 1.5  # below this inter-stage factor the stages couple
TIPS_PER_ASPECT_RATIO = 4

# Onset penalty anchor: 1.25 mm tip-to-lip clearance at a 2 mm gap adds ~200 V
WALL_PENALTY_ANCHOR = (1.25e-3, 2e-3, 200.0)
DEFAULT_TIP_PENALTY = 400.0  # V per unit normalized spacing deficit

# Fitting and search knobs
ONSET_SCAN_POINTS = 201
ONSET_TOLERANCE = 1e-9  # volts
STAGE_FACTOR_RESOLUTION = 1e-3
MIN_THRUST_EFFECTIVENESS = 1e-3  # lower clamp of beta
SUPERLINEAR_TOLERANCE = 0.01  # relative excess over N x T1
NOISE_FLOOR_FACTOR = 3.0
SUB_ONSET_FRACTION = 0.01  # leading samples below this share of peak current count as noise
VOLTAGE_SNAP = 1.0  # volts

ID_SEP_KEY = "::"  # separator for CLI override paths
