"""
Configuration and environment variables for riskbound.
"""

import os
import logging
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Verbose mode (for logging)
VERBOSE_MODE = os.getenv('VERBOSE') == '1'

# Logging configuration
# Production: command start/finish and headline numbers (INFO+)
# Verbose: stage timings, brackets, iteration traces (DEBUG)
log_level = logging.DEBUG if VERBOSE_MODE else logging.INFO
logging.basicConfig(
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s' if VERBOSE_MODE else '%(asctime)s - %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S',
    level=log_level
)

# Silence noisy third-party loggers (always)
logging.getLogger('concurrent.futures').setLevel(logging.WARNING)

logger = logging.getLogger('riskbound')


def _env_int(name: str, default: int) -> int:
    """Read a positive integer from the environment, falling back to default."""
    raw = os.getenv(name)
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"[Config] Ignoring non-integer {name}={raw!r}")
        return default
    return value if value > 0 else default


def default_workers() -> int:
    """Physical core count (psutil), used when RISKBOUND_WORKERS is unset."""
    import psutil

    return psutil.cpu_count(logical=False) or 1


# Process pool for collocation node solves (1 disables the pool)
WORKERS = _env_int('RISKBOUND_WORKERS', 0) or default_workers()

# Collocation orders per dimension (smooth output / indicator output)
COLLOCATION_ORDER_SMOOTH = 8
COLLOCATION_ORDER_INDICATOR = 12

# Risk-integral quadrature order per dimension (2^8)
RISK_QUADRATURE_ORDER = _env_int('RISKBOUND_QUADRATURE_ORDER', 256)

# Risk-sensitivity grid (c = 0 is excluded, integrals start at .01)
C_MIN = 0.01
C_MAX = 1000.0
C_POINTS = 200

# Optimal-c search
GOLDEN_TOLERANCE = 1e-6  # relative, in log(c)
PLATEAU_TOLERANCE = 1e-9  # |Λ_2c - Λ_c| below this means c* = inf
MAX_DOUBLINGS = 60

# Ordering / monotonicity checks on risk curves
CURVE_TOLERANCE = 1e-9

# Sup-limit grid search over the epistemic interval
LIMIT_COARSE_POINTS = 256
LIMIT_REFINE_POINTS = 256
LIMIT_MAX_PASSES = 6
LIMIT_TOLERANCE = 1e-12

# Relative entropy oracle
RE_TAIL_MASS = 1e-14
RE_RESOLUTION = 200  # adaptive subinterval limit for continuous laws

# Model numerics
OSCILLATOR_STEP = 1e-3
HEAT_CELLS = 192
HEAT_CFL = 0.5
HEAT_MIN_STEPS = 50
HEAT_MAX_STEPS = 2000

# Output formatting
CSV_SIGNIFICANT_DIGITS = 12
CSV_HEADER = "c,lambda,lambda1,lambda2,bound,bound1,bound2"

# User-facing messages (English only)
MSG_SWEEP_DONE = "Sweep complete: {rows} rows written to {path}"
MSG_OPTIMIZE_LINE = "form {which}: c* = {c_star}, bound = {bound:.12g} ({status})"
MSG_RE_LINE = "closed form = {closed}, oracle = {oracle}, difference = {diff}"
MSG_LIMIT_LINE = "lambda1_infinity = {limit:.12g}, lambda1(c={c_max:g}) = {value:.12g}, gap = {gap:.3g}"
MSG_CONVERGENCE_DONE = "Convergence table written to {path}"
MSG_NON_UNIFORM_NOMINAL = "The c -> infinity limit needs a uniform epistemic nominal on a bounded interval, got {kind}"
