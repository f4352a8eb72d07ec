"""zetaforge: arbitrary-precision certification of rational zeta-series
identities (the Dancs-He family for ln 2 and odd zeta values) with
machine-checkable truncation bounds."""

from .numkernel import (
    ApproxReal,
    DomainError,
    EvalContext,
    PoleError,
    PrecisionError,
    UsageError,
    ZetaforgeError,
    agrees_within_error,
    make_context,
)
from .ratseq import bernoulli, euler_endpoint
from .zetacore import hurwitz_ds_ref, hurwitz_ref, zeta_ref
from .identities import (
    IdentityReport,
    SeriesResult,
    eval_general,
    eval_ln2,
    eval_milgram,
    eval_param_sum,
    eval_sum_a,
    eval_sum_b,
    eval_tyagi_holm,
    eval_zeta3,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxReal",
    "DomainError",
    "EvalContext",
    "IdentityReport",
    "PoleError",
    "PrecisionError",
    "SeriesResult",
    "UsageError",
    "ZetaforgeError",
    "__version__",
    "agrees_within_error",
    "bernoulli",
    "euler_endpoint",
    "eval_general",
    "eval_ln2",
    "eval_milgram",
    "eval_param_sum",
    "eval_sum_a",
    "eval_sum_b",
    "eval_tyagi_holm",
    "eval_zeta3",
    "hurwitz_ds_ref",
    "hurwitz_ref",
    "make_context",
    "zeta_ref",
]
