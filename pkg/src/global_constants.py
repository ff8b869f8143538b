from fractions import Fraction

# === Logging ===
LOG_DIR = 'logs'
ALL_LOGS_FILE = 'all_logs.log'

# === Finite field work ===

# Classical computer algebra default.
DEFAULT_PRIME = 32003

# Majority vote set for monte-carlo dimension counts.
CONFIRMATION_PRIMES = (32003, 32009, 32027)

# Brute-force lambda enumeration.
ORACLE_PRIMES = (101, 32003)
ORACLE_PRIME = 101

# === Desk scale limits ===
DESK_MAX_DEGREE_SUM = 64
DESK_MAX_VARS = 24

# Exact rational Groebner bases only below this many variables.
EXACT_RATIONAL_MAX_VARS = 8

# === Sampling ===
SUBSPACE_COEFF_RANGE = (-10, 10)
DEFAULT_SAMPLES = 20

# === Exit codes ===
EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3

# === Slope constants ===

# Slope of the first hypertangent divisor skipped in the descent.
NONSINGULAR_SKIPPED_SLOPE = Fraction(3, 2)
MULTIQUADRATIC_SKIPPED_SLOPE = Fraction(4, 3)

# Upper bounds the truncated slope tails must respect.
NONSINGULAR_TAIL_BOUND = Fraction(4, 3)
MULTIQUADRATIC_TAIL_BOUND = Fraction(9, 8)

# Published minimal dimensions M for small k; larger k use the closed forms.
NONSINGULAR_M_TABLE = {3: 96, 4: 160, 5: 215}
MULTIQUADRATIC_M_TABLE = {3: 128, 4: 204, 5: 255, 6: 357, 7: 477}

# Largest M for which every degree tuple is enumerated.
ALL_TUPLES_MAX_M = 60

# === Tracer ===

# Worst case rank loss of a quadratic form on a hyperplane.
HYPERPLANE_RANK_DROP = 2
HYPERPLANE_CODIM_DROP = 2

# === Self test ===
SELFTEST_SEED = 20240
