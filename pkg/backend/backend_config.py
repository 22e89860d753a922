import logging
import os

logger = logging.getLogger(__name__)

# Get project root (one level up from backend/)
PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))

# Output files
OUTPUT_FOLDER = os.path.join(PROJECT_ROOT, 'output')

# rules
RULES_FOLDER = os.path.join(PROJECT_ROOT, 'backend', 'rules')
ACCEPTANCE_CASES = os.path.join(RULES_FOLDER, 'acceptance_cases.json')


def threads_from_env(raw):
    """CUSPCOUNT_THREADS as a positive int; unset or invalid values give 1."""
    if raw is None or not raw.strip():
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning(f"Ignoring CUSPCOUNT_THREADS={raw!r}: not an integer, using 1 thread")
        return 1


# Parallelism. Every internal thread pool is capped by this value.
THREADS = threads_from_env(os.environ.get('CUSPCOUNT_THREADS'))

# Logging
LOG_LEVEL = os.environ.get('CUSPCOUNT_LOG_LEVEL', 'WARNING').upper()
LOG_FORMAT = '[%(levelname)s]: %(message)s'

# Search limits
SEARCH_BUDGET = 2_000_000                 # end multisets examined by enumerate_symp_curves
EXPLICIT_ORACLE_MAX_C1 = 30               # explicit partition cross-check for Assumptions A/B

# Rendering
DECIMAL_DIGITS = 12
SVG_SCALE = 10
PNG_SCALE = 10
BOX_FILLS = {'horizontal': '#dfe8f5', 'vertical': '#f5e6d3', 'last': '#f2c14e'}
BOX_STROKE = '#1f3a5f'

# Area normalizations (monotone forms)
CP2_LINE_AREA = 1
F1_LINE_AREA = 3                          # area(d*l - m*e) = 3d - m
F1_FIBER_AREA = 1

# Reproduction suite
REPRO_SEED = 20240229
REPRO_SHAPES = 100
REPRO_MAX_K = 40
REPRO_MAX_ENTRY = 50
