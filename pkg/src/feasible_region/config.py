"""Constants or variables shared across multiple modules."""

# COMPLETED
from typing import Any, Dict

# CLI arguments populated by the module `cli`
CLI: Dict[str, Any] = {}

# Default width in bits of the scalars
DEFAULT_PRECISION: int = 64

# Default location of the output JSON file
DEFAULT_OUTPUT_FILE: str = "output.json"

# Number of edge slots allocated by a new region store
INITIAL_STORE_CAPACITY: int = 16

# Generated polygons use lengths below 2^beta before scaling
DEFAULT_BETA: int = 8

# Largest beta for which generated quantities fit in each precision
MAX_BETA_64: int = 30
MAX_BETA_32: int = 1

# Default seed of the corpus generator
DEFAULT_SEED: int = 0

# Normals of generated polygons are drawn from the 32-normal set
POLYGON_NORMAL_SET: int = 32

# Default number of normals of the set from which probes are drawn
DEFAULT_PROBE_SET: int = 64

# Supremum norm of all generated normals
NORMAL_SCALE: int = 8

# Sides of the start box are 2^(beta + START_BOX_OFFSET)
START_BOX_OFFSET: int = 30

# Probe sentinels are +/-2^(beta + PROBE_SENTINEL_OFFSET)
PROBE_SENTINEL_OFFSET: int = 22

# Random probe values drawn inside each gap between vertex levels
PROBE_SAMPLES_PER_GAP: int = 2

# Insertion orders tried per generated polygon
DEFAULT_ORDERS: int = 3

# Number of polygon cases written by `gen`
DEFAULT_CORPUS_BUDGET: int = 20

# Number of cases per degenerate kind written by `gen`
DEFAULT_DEGENERATE_CASES: int = 10

# Largest size of exhaustively enumerated subsets
MAX_EXHAUSTIVE_SUBSET_SIZE: int = 8

# Name of the corpus manifest
MANIFEST_FILENAME: str = "manifest.yaml"

# Default number of concurrent verification workers
DEFAULT_CONCURRENT_WORKERS: int = 4

# Largest relative excess area accepted for well-scaled systems in 64-bit
SHARPNESS_TOLERANCE: float = 1e-8
