"""Exact evaluation of terminating basic hypergeometric series and randomized
verification of q-series identities over the rationals."""

from .closedform import COLLAPSE, Expr, PoleError, eval_expr
from .params import AffineExp, Mono, Point, eval_mono, mono_inv, mono_mul
from .qcore import Rat, ZeroDenominator, catalan, poch_fraction, pochhammer, shapiro_check
from .registry import (
    Identity,
    SpecializationLink,
    builtin_identities,
    builtin_specializations,
    lookup,
)
from .series import SeriesSpec, eval_phi, term
from .verifier import (
    Report,
    SampleConfig,
    confidence_note,
    verify_all,
    verify_identity,
    verify_specialization,
)

__version__ = "0.1.0"
