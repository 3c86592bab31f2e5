"""Exponential forgetting of user interest in tags, with estimation,
decay-weighted tag matching and a seeded cohort simulator."""

__version__ = "0.1.0"

from .decay import (
    DecayParams,
    decay_curve,
    evaluate_interest,
    forgetfulness_rate,
    half_life,
    integrate_euler,
)
from .errors import (
    ConstraintError,
    CorpusRejected,
    DegenerateAbscissaError,
    DomainError,
    ForgetfulnessError,
    InsufficientDataError,
    NumericalFailure,
    StepSizeError,
    TemporalOrderError,
)
from .estimation import FitResult, fit_loglinear, fit_nonlinear, goodness_of_fit
from .ingestion import (
    Diagnostic,
    RetagInterval,
    TaggingEvent,
    UsageSeries,
    bin_usage,
    parse_events,
    read_events,
    retag_intervals,
    write_events,
)
from .matching import TagProfile, build_profile, drift, similarity
from .simulation import CohortSpec, GroundTruth, simulate_cohort, simulate_user
