"""permlab: exact-permanent laboratory for random sign matrices.

Exact permanent/determinant engines, the full lattice of minor permanents,
level-by-level growth and endgame runs driven by the lattice, and a
verification suite of enumeration identities and seeded Monte Carlo checks.
"""

from .engines import determinant_exact, permanent_mod, permanent_naive, permanent_ryser
from .growth import ProcessConfig, ProcessTrace, StepType, is_successful, run_growth
from .lattice import (
    HeavyFamily,
    MinorTable,
    ParentHistogram,
    SplitVerdict,
    build_lattice,
    heavy_members,
    parent_histogram,
    split_events,
)
from .matrices import (
    CapError,
    RowPrefix,
    SignMatrix,
    enumerate_all_sign_matrices,
    extend_prefix,
    from_text,
    sample_row,
    sample_sign_matrix,
    to_text,
)
from .rng import RngStream

__version__ = "0.1.0"

__all__ = [
    "CapError",
    "HeavyFamily",
    "MinorTable",
    "ParentHistogram",
    "ProcessConfig",
    "ProcessTrace",
    "RngStream",
    "RowPrefix",
    "SignMatrix",
    "SplitVerdict",
    "StepType",
    "build_lattice",
    "determinant_exact",
    "enumerate_all_sign_matrices",
    "extend_prefix",
    "from_text",
    "heavy_members",
    "is_successful",
    "parent_histogram",
    "permanent_mod",
    "permanent_naive",
    "permanent_ryser",
    "run_growth",
    "sample_row",
    "sample_sign_matrix",
    "split_events",
    "to_text",
    "__version__",
]
