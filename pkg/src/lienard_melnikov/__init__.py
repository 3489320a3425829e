"""Exact first non-vanishing Melnikov functions for perturbed linear centres.

The symbolic layer (``algebra``, ``forms``, ``reduction``, ``melnikov``,
``analysis``) works over the rationals only.  ``numeric`` integrates the
perturbed flow and is the sole consumer of floating point.
"""

from .algebra import Rat, UniPoly, XHPoly, XYPoly, parity_split, substitute_H
from .analysis import (
    BoundReport,
    InfeasibleSplit,
    RootReport,
    Verdict,
    ZeroPolynomial,
    bound_for,
    construct_sharp,
    construct_sharp_detailed,
    degree_sanity_bound,
    positive_roots,
    roots_match,
    verify_bound,
)
from .forms import OneForm, QElem, SpecError, SystemSpec, build_forms, classify, reduce_product
from .melnikov import (
    DEFAULT_KMAX,
    Exhausted,
    MelnikovResult,
    even_part_oracle,
    first_nonvanishing,
    odd_part_oracle,
)
from .reduction import (
    Cochain,
    CyclePoly,
    NonVanishingIntegral,
    cycle_integral,
    decompose,
    reduce_to_normal_form,
    verify_cochain,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "Cochain",
    "CyclePoly",
    "DEFAULT_KMAX",
    "Exhausted",
    "InfeasibleSplit",
    "MelnikovResult",
    "NonVanishingIntegral",
    "OneForm",
    "QElem",
    "Rat",
    "RootReport",
    "SpecError",
    "SystemSpec",
    "UniPoly",
    "Verdict",
    "XHPoly",
    "XYPoly",
    "ZeroPolynomial",
    "bound_for",
    "build_forms",
    "classify",
    "construct_sharp",
    "construct_sharp_detailed",
    "cycle_integral",
    "decompose",
    "degree_sanity_bound",
    "even_part_oracle",
    "first_nonvanishing",
    "odd_part_oracle",
    "parity_split",
    "positive_roots",
    "reduce_product",
    "reduce_to_normal_form",
    "roots_match",
    "substitute_H",
    "verify_bound",
    "verify_cochain",
]
