"""Arbitrary-precision verification of q-series continued-fraction identities."""

from .bauermuir import BMResult, ModifyingSequence, bauer_muir, bm_approximant_check, bm_chain, get_preset
from .catalog import IdentityRecord, get, list_identities, sample_point
from .cfengine import (
    CFSpec,
    approximant,
    convergents,
    equivalence_transform,
    evaluate,
    evaluate_modified,
    modified_approximant,
    separate_limits,
)
from .errors import (
    BMDegenerate,
    BudgetExhausted,
    DomainError,
    NoConvergence,
    QCFError,
    SamplingExhausted,
    SingularModification,
    SpecError,
    UnknownIdentity,
)
from .harness import Budget, bm_verify, crosscheck_equal_cfs, sweep, verify
from .precision import working_precision
from .qseries import G_fn, ParameterPoint, phi21, qpoch_finite, qpoch_infinite

__version__ = "0.1.0"
