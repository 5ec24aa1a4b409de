import math

# Error kinds, mapped to exception classes by _rtconfig
KL_EXC_ARGUMENTS = 0
KL_EXC_DOMAIN = 1
KL_EXC_OVERFLOW = 2
KL_EXC_RESOLUTION = 3
KL_EXC_CONFIG = 4
KL_EXC_SOLVER = 5
KL_EXC_PROJECTION = 6
KL_EXC_PROBE = 7
KL_EXC_HYPOTHESIS = 8
KL_EXC_IO = 9

# Exit codes
KL_EXIT_OK = 0
KL_EXIT_HYPOTHESIS = 1
KL_EXIT_ERROR = 2

# Coefficient kinds
COEF_CONSTANT = 'constant'
COEF_AFFINE = 'affine'
COEF_LOGARITHMIC = 'logarithmic'
COEF_CUSTOM = 'custom'
COEF_KINDS = (COEF_CONSTANT, COEF_AFFINE, COEF_LOGARITHMIC, COEF_CUSTOM)

# Nonlinearity kinds
NL_PAPER_EXAMPLE = 'paper_example'
NL_POWER = 'power'
NL_CUSTOM = 'custom'
NL_KINDS = (NL_PAPER_EXAMPLE, NL_POWER, NL_CUSTOM)

# Domain shapes
SHAPE_DISK = 'disk'
SHAPE_RECTANGLE = 'rectangle'
SHAPES = (SHAPE_DISK, SHAPE_RECTANGLE)

# Initial guesses
GUESS_BUMP = 'bump'
GUESS_MOSER = 'moser'
GUESS_FILE = 'file'
GUESSES = (GUESS_BUMP, GUESS_MOSER, GUESS_FILE)

# Hypothesis entry names
HYP_M1 = '(M1)'
HYP_M2 = '(M2)'
HYP_M3 = '(M3)'
HYP_M3_HAT = '(M3-hat)'
HYP_F1 = '(f1)'
HYP_F2 = '(f2)'
HYP_F3 = '(f3)'
HYP_C_ALPHA0 = '(c)alpha0'
HYP_AR_THETA = '(AR-theta)'
HYP_ORIGIN = '(origin-limit)'
HYP_F2_CONST = '(f2-const)'
HYP_SF_4F = '(sf-4F)'
HYP_NAMES = (HYP_M1, HYP_M2, HYP_M3, HYP_M3_HAT, HYP_F1, HYP_F2, HYP_F3,
             HYP_C_ALPHA0, HYP_AR_THETA, HYP_ORIGIN, HYP_F2_CONST, HYP_SF_4F)
HYP_HARD = (HYP_M1, HYP_M3, HYP_F2)

# Hypothesis statuses
STATUS_PASS = 'pass'
STATUS_FAIL = 'fail'
STATUS_HEURISTIC = 'heuristic-pass'

# Solve statuses
SOLVE_CONVERGED = 'converged'
SOLVE_MAX_ITERS = 'max_iters'
SOLVE_STALLED = 'stalled'
SOLVE_OVERFLOW = 'overflow'

# Numerical defaults
EXP_CAP = 700.0
POWER_VALUE_CAP = 1e300
NEHARI_TOL = 1e-10
NEHARI_BISECTIONS = 60
NEHARI_MAX_HALVINGS = 200
CG_TOL = 1e-10
QUAD_ABS_TOL = 1e-12
MOSER_QUAD_ABS_TOL = 1e-10
LIMIT_TOLERANCE = 0.05
MONOTONE_RTOL = 1e-12
F3_BETA_FACTOR = 10.0
INTERIOR_MARGIN = 1e-9

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

REPORT_SCHEMA_VERSION = 1
