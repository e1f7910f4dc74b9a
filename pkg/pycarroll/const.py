"""pycarroll constants."""

from math import pi

# Residual thresholds: a form is "zero" when every coefficient stays below the
# threshold on the sample set.
DEFAULT_TOLERANCE = 1e-9
TABLE_TOLERANCE = 1e-10
HORIZON_TOLERANCE = 1e-8
FINITE_DIFFERENCE_STEP = 1e-5
FINITE_DIFFERENCE_TOLERANCE = 1e-6

DEFAULT_SEED = 0
DEFAULT_SAMPLE_COUNT = 100
HORIZON_SAMPLE_COUNT = 60

# Sampling domain of a chart: base box and |t| range on both fibre components.
DEFAULT_BOX = (-1.0, 1.0)
FIBRE_RANGE = (0.5, 2.0)
POLE_MARGIN = 0.2
ANGULAR_BOX = ((POLE_MARGIN, pi - POLE_MARGIN), (0.0, 2 * pi))

FIBRE = "t"
THETA_LABEL = "th"
DT_LABEL = "dt"

WEIGHT_ANY = "any"
WEIGHT_NON_HOMOGENEOUS = "non-homogeneous"

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_ERROR = "error"

FORMAT_TEXT = "text"
FORMAT_JSON = "json"
FORMAT_CSV = "csv"
FORMATS = [FORMAT_TEXT, FORMAT_JSON, FORMAT_CSV]

# Horizon backend
MAX_HARMONIC_DEGREE = 4
REGULAR_COMPONENTS = ("S1", "T0", "T1", "T2")

# Maxwell solver
MIN_GRID_POINTS = 8
BRANCH_POSITIVE = "+"
BRANCH_NEGATIVE = "-"
BRANCHES = {
    "+": 1,
    "positive": 1,
    "-": -1,
    "negative": -1,
}
INIT_PLANE_WAVE = "plane-wave"
INIT_CUSTOM = "custom"
INIT_ZERO = "zero"

CSV_COLUMNS = [
    "step",
    "u",
    "t",
    "energy",
    "max_divE",
    "max_divB",
    "max_residual_faraday",
    "max_residual_ampere",
]

DUMP_MAGIC = b"CARR"
DUMP_VERSION = 1
DUMP_FIELDS = ("ex", "ey", "ez", "bx", "by", "bz")

CONFIG_KEYS = {
    "n",
    "l_box",
    "du",
    "steps",
    "branch",
    "u0",
    "init.kind",
    "init.k",
    "init.e0",
    "init.ex",
    "init.ey",
    "init.ez",
    "init.bx",
    "init.by",
    "init.bz",
    "output.cadence",
    "output.dump_dir",
}
