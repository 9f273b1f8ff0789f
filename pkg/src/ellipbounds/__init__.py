"""Complete elliptic integrals, their closed-form brackets, and tools to check them."""

from .bounds import (
    BoundFamily,
    Bracket,
    CenterRadiusCertificate,
    bracket_e,
    bracket_e2,
    bracket_e_guoqi,
    bracket_for,
    bracket_k,
    bracket_k2,
    cert_k2,
)
from .core import (
    AxisPair,
    Modulus,
    SeriesPolicy,
    agm,
    complete_e,
    complete_e_series,
    complete_k,
    complete_k_series,
    e_two_param,
    hyper_gauss,
    k_two_param,
    wallis,
)
from .errors import AccuracyError, DomainError, TruncationError, UsageError
from .lupas import check_lemma, lupas_bracket, reproduce_theorem_bracket
from .quadrature import integrate
from .verify import GridSpec, compare_families, find_clamp_threshold, tightness, verify_family

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "AxisPair",
    "BoundFamily",
    "Bracket",
    "CenterRadiusCertificate",
    "DomainError",
    "GridSpec",
    "Modulus",
    "SeriesPolicy",
    "TruncationError",
    "UsageError",
    "agm",
    "bracket_e",
    "bracket_e2",
    "bracket_e_guoqi",
    "bracket_for",
    "bracket_k",
    "bracket_k2",
    "cert_k2",
    "check_lemma",
    "compare_families",
    "complete_e",
    "complete_e_series",
    "complete_k",
    "complete_k_series",
    "e_two_param",
    "find_clamp_threshold",
    "hyper_gauss",
    "integrate",
    "k_two_param",
    "lupas_bracket",
    "reproduce_theorem_bracket",
    "tightness",
    "verify_family",
    "wallis",
]
