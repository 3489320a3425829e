"""Higher-order Melnikov functions by iterated relative-cohomology decomposition.

``Omega_1 = omega_1`` and, while ``oint Omega_l`` vanishes identically,
``Omega_l = dQ_l + q_l dH`` is decomposed and

    Omega_{l+1} = omega_{l+1} + sum_{i+j=l+1} q_i omega_j .

The first ``l`` with a nonzero cycle integral is the order ``k``.  Each
decomposition in the trace carries a certified witness.

Closed-form oracles for the first two interesting orders are provided for
cross-checking only; the iteration never uses them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .algebra import UniPoly, parity_split
from .forms import OneForm, QElem, SystemSpec, build_forms, in_class_A, reduce_product
from .reduction import Cochain, CyclePoly, cycle_integral, cycle_weight, decompose

DEFAULT_KMAX = 12


@dataclass(frozen=True)
class MelnikovResult:
    k: int
    L: CyclePoly
    trace: tuple[tuple[OneForm, Cochain], ...] = ()
    terminated: str = "found"
    path: str = "general"
    omegas: tuple[OneForm, ...] = field(default=(), repr=False, compare=False)


class Exhausted(RuntimeError):
    """Every ``L_l`` up to ``k_max`` vanished; this is not a proof of a centre."""

    def __init__(self, result: MelnikovResult, reason: str = ""):
        why = reason or f"all Melnikov functions vanish up to order {result.k}"
        super().__init__(why)
        self.result = result
        self.reason = why


def _zero_cycle() -> CyclePoly:
    return CyclePoly(UniPoly([], "c"))


def odd_g_shortcut(spec: SystemSpec) -> MelnikovResult | None:
    """Read ``L_k = oint omega_k`` when all earlier ``omega_l`` lie in class A.

    Returns ``None`` when the shortcut does not apply.  When every
    ``omega_l`` lies in class A, all Melnikov functions vanish at every order
    and :class:`Exhausted` is raised with that reason.
    """
    omegas = build_forms(spec)
    for l, w in enumerate(omegas, start=1):
        if in_class_A(w):
            continue
        L = cycle_integral(w)
        if L.is_zero():
            return None
        return MelnikovResult(k=l, L=L, terminated="found", path="shortcut", omegas=tuple(omegas))
    result = MelnikovResult(
        k=len(omegas), L=_zero_cycle(), terminated="exhausted", path="shortcut", omegas=tuple(omegas)
    )
    raise Exhausted(result, "every omega_i lies in class A: all orders vanish")


def first_nonvanishing(
    spec: SystemSpec, k_max: int = DEFAULT_KMAX, fast_path: bool = False
) -> MelnikovResult:
    """Order and value of the first non-vanishing Melnikov function."""
    if k_max < 1:
        raise ValueError("k_max must be positive")
    if fast_path:
        shortcut = odd_g_shortcut(spec)
        if shortcut is not None and shortcut.k <= k_max:
            return shortcut

    omegas = build_forms(spec)
    zero = OneForm()

    def omega(l: int) -> OneForm:
        return omegas[l - 1] if l <= len(omegas) else zero

    qs: dict[int, QElem] = {}
    trace: list[tuple[OneForm, Cochain]] = []
    for l in range(1, k_max + 1):
        Omega = omega(l)
        for i in range(1, l):
            j = l - i
            if not qs[i].is_zero() and j <= len(omegas):
                Omega = Omega + reduce_product(qs[i], omegas[j - 1])
        L = cycle_integral(Omega)
        if not L.is_zero():
            return MelnikovResult(k=l, L=L, trace=tuple(trace), omegas=tuple(omegas))
        witness = decompose(Omega)
        qs[l] = witness.q
        trace.append((Omega, witness))
    result = MelnikovResult(
        k=k_max, L=_zero_cycle(), trace=tuple(trace), terminated="exhausted", omegas=tuple(omegas)
    )
    raise Exhausted(result)


def even_part_oracle(f: UniPoly, g: UniPoly | None = None) -> CyclePoly:
    """``oint (g + f y) dx``: only the even part of ``f`` contributes."""
    fhat, _ = parity_split(f)
    return CyclePoly(UniPoly([a * cycle_weight(r) for r, a in enumerate(fhat.coeffs)], "c"))


class OddPartValue(NamedTuple):
    cycle: CyclePoly
    # the double sum fixes the roots; the overall sign is taken from the iteration
    sign_source: str = "closed-form"


def odd_part_oracle(ftilde: UniPoly, ghat: UniPoly) -> OddPartValue:
    """Double-sum value of ``oint (y qbar) w`` for ``f`` with vanishing even part.

    ``ftilde[r]`` is the coefficient of ``x^(2r+1)`` in ``f`` and ``ghat[s]``
    the coefficient of ``x^(2s)`` in ``g``.
    """
    if ftilde.var != "u" or ghat.var != "u":
        raise TypeError("odd_part_oracle expects polynomials in u")
    out: dict[int, Fraction] = {}
    for s, b in enumerate(ghat.coeffs):
        if not b:
            continue
        for r, a in enumerate(ftilde.coeffs):
            if not a:
                continue
            d = s + r
            w = Fraction(math.comb(2 * (d + 1), d + 1), 2**d * (2 * s + 1))
            out[d] = out.get(d, 0) + w * b * a
    size = max(out, default=-1) + 1
    return OddPartValue(CyclePoly(UniPoly([out.get(d, 0) for d in range(size)], "c")))
