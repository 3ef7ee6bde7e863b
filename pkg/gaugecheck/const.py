"""Constants."""

DEFAULT_TOLERANCE = 1e-9
"""Absolute tolerance on max-norm residuals."""

CLOSURE_TOLERANCE = 1e-9
SINGULARITY_THRESHOLD = 1e-12
"""Smallest accepted ``|det|`` of a group element or R-matrix."""

JACOBIAN_STEP = 1e-6
JACOBIAN_TOLERANCE = 1e-6
JACOBIATOR_STEP = 1e-5
JACOBIATOR_TOLERANCE = 1e-4

DERIVATIVE_STEPS = (1e-3, 5e-4)
"""Central-difference steps for d/dq at q=1, combined by one Richardson step."""
SEMICLASSICAL_TOLERANCE = 1e-6

LSTSQ_CUTOFF = 1e-12
"""Singular values below this fraction of the largest are treated as zero."""
ZERO_COEFFICIENT = 1e-14
"""Polynomial coefficients at or below this magnitude are dropped."""

DEFAULT_SAMPLES = 20
DEFAULT_SEED = 0
MAX_IDEAL_DEGREE = 4

FLOAT_FORMAT = ".17g"
RANK_CUTOFF = 1e-10
"""Pivots below this fraction of the largest mark a column as dependent."""
SPAN_CHUNK = 512
"""Straightened placements reduced per batch."""
