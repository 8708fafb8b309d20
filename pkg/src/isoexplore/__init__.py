"""Isolation-aware timing analysis and design-space exploration for
mappings onto tiled many-core platforms with slotted arbitration.

The package splits into:

- model:       problem documents (application, architecture, mapping edges)
- arbitration: slotted resource-arbitration policies and their service tuples
- timing:      worst-case response/traversal composition over service tuples
- scheduling:  minimal-weight budgeting and capacity refinement
- mapping:     genotype decoding, routing, feasibility, objectives
- dse:         evolutionary multi-objective exploration and mode comparison
- simoracle:   adversarial discrete-event simulation against the bounds
- generator:   synthetic benchmark-style problems on mesh platforms
- cli:         the ``isoexplore`` command
"""

from .arbitration import ArbitrationPolicy, ArbitrationTuple
from .dse import (
    ComparisonResult,
    ExploreResult,
    ParetoArchive,
    compare_approaches,
    derive_seed,
    dominates,
    epsilon_dominance,
    explore,
    nondominated,
)
from .errors import (
    BoundViolation,
    CapacityError,
    CycleError,
    DomainError,
    EmptyGraph,
    Infeasible,
    MissingCoefficient,
    NoFeasibleMapping,
    SimHorizonExceeded,
    SpecError,
    SpecSyntaxError,
    ValidationError,
)
from .generator import generate_spec, make_architecture
from .mapping import (
    ExplorationMode,
    Genotype,
    IsolationScheme,
    MappingResult,
    decode,
    from_bindings,
    load_mapping_doc,
)
from .model import ProblemSpec, emit_spec, load_spec, parse_spec
from .simoracle import TrialConfig, adversarial_sweep, simulate
from .timing import wcrt, wctt

__version__ = "0.1.0"

__all__ = [
    "ArbitrationPolicy",
    "ArbitrationTuple",
    "BoundViolation",
    "CapacityError",
    "ComparisonResult",
    "CycleError",
    "DomainError",
    "EmptyGraph",
    "ExplorationMode",
    "ExploreResult",
    "Genotype",
    "Infeasible",
    "IsolationScheme",
    "MappingResult",
    "MissingCoefficient",
    "NoFeasibleMapping",
    "ParetoArchive",
    "ProblemSpec",
    "SimHorizonExceeded",
    "SpecError",
    "SpecSyntaxError",
    "TrialConfig",
    "ValidationError",
    "adversarial_sweep",
    "compare_approaches",
    "decode",
    "derive_seed",
    "dominates",
    "emit_spec",
    "epsilon_dominance",
    "explore",
    "from_bindings",
    "generate_spec",
    "load_mapping_doc",
    "load_spec",
    "make_architecture",
    "nondominated",
    "parse_spec",
    "simulate",
    "wcrt",
    "wctt",
    "__version__",
]
