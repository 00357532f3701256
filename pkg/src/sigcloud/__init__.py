"""Signature verification over annealed profile-curve templates.

Core pipeline: raster bitmap -> per-column-mean profile curve -> normalized
resample -> envelope of enrollment curves -> simulated-annealing basis
points -> template main lines. Verification scores candidates against the
template and either accepts, rejects, or escalates to a human supervisor.
"""

from .aggregation import (
    AggregatedTemplate,
    BasisSolution,
    CombinedArea,
    Envelope,
    TemplateVariant,
    aggregate,
    basis_fitness,
    combine,
    connect,
    find_basis_points,
)
from .annealing import (
    AnnealingConfig,
    AnnealingProblem,
    AnnealingRun,
    TraceEntry,
    accept,
    acceptance_probability,
    anneal,
    cool,
)
from .errors import (
    ConfigError,
    ConflictError,
    FormatError,
    InsufficientDataError,
    IntegrityError,
    NotFoundError,
    SigcloudError,
    ValidationError,
)
from .model import ProfileCurve, RasterSignature, binarize, interpolate, normalize, simplify
from .pbm import load_pbm, load_pgm, save_pbm
from .verification import Decision, DecisionThresholds, VerificationOutcome, decide, score, verify

__version__ = "0.1.0"

__all__ = [
    "AggregatedTemplate",
    "AnnealingConfig",
    "AnnealingProblem",
    "AnnealingRun",
    "BasisSolution",
    "CombinedArea",
    "ConfigError",
    "ConflictError",
    "Decision",
    "DecisionThresholds",
    "Envelope",
    "FormatError",
    "InsufficientDataError",
    "IntegrityError",
    "NotFoundError",
    "ProfileCurve",
    "RasterSignature",
    "SigcloudError",
    "TemplateVariant",
    "TraceEntry",
    "ValidationError",
    "VerificationOutcome",
    "accept",
    "acceptance_probability",
    "aggregate",
    "anneal",
    "basis_fitness",
    "binarize",
    "combine",
    "connect",
    "cool",
    "decide",
    "find_basis_points",
    "interpolate",
    "load_pbm",
    "load_pgm",
    "normalize",
    "save_pbm",
    "score",
    "simplify",
    "verify",
]
