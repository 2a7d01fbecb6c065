import os

# general purpose
DEBUG = False
LOG_FILE = None

# worker threads for grid scans, seed refinement and sweep steps; None uses every core.
# this is the only setting read from the environment, the CLI flag --threads wins over it
THREADS = os.environ.get('MAGLAT_THREADS', None)

DEFAULT_OUTPUT_DIRECTORY = 'out'

# exit-code-2 threshold for grid points whose analytic radicand had to be clamped
CLAMPED_FRACTION_LIMIT = 0.01
# negative radicands within this fraction of the size of their terms are rounding noise, read as 0
RADICAND_ROUNDOFF = 1e-14
MAX_GRID_POINTS_PER_AXIS = 2048
POINTS_PER_PERIOD = 8
# points per evaluation chunk; fixed so results do not depend on the thread count
CHUNK_SIZE = 4096

# finite-difference steps, in units of the lattice length scale
GRADIENT_STEP_FACTOR = 1e-5
HESSIAN_STEP_FACTOR = 1e-3

# trap search tolerances; lengths in units of alpha, fields in units of B_o
GRAD_TOL_FACTOR = 1e-6
MERGE_RADIUS_FACTOR = 1e-2
BAND_Z_TOLERANCE_FACTOR = 0.25
ZERO_FIELD_FACTOR = 1e-6
MAX_ITERS = 200

# saddle search between two sites
BARRIER_SAMPLES = 512
SADDLE_ROUNDS = 100
# candidates per bracketing pass, and the bracket width where a line search stops,
# as a fraction of the site separation
LINE_SAMPLES = 17
SADDLE_TOLERANCE = 1e-7
