"""Cycle integrals over ``H = c`` and the decomposition ``w = dQ + q dH``.

Everything here is specialised to ``H = (x**2 + y**2)/2``.  Cycles are
integrated counterclockwise and an integral is stored as a polynomial
``P(c)`` with ``I(c) = -pi * c * P(c)``, which keeps all arithmetic in Q.

Rewrite rules (``d`` acts on functions of ``(x, H)``, ``y**2 = 2H - x**2``):

* ``x^a H^i dx = d(x^(a+1) H^i/(a+1)) - i x^(a+1) H^(i-1)/(a+1) dH``
* from ``d(y^3 psi) = y(-3x psi + y^2 psi_x) dx + y(3 psi + y^2 psi_H) dH``
  with ``psi = x^k H^i``:

  - ``k`` even removes the x-odd term ``x^(k+1) H^i y dx`` in favour of
    ``x^(k-1) H^(i+1) y dx``, ending at an exact-plus-``q dH`` form;
  - ``k = 2j+1`` lowers the H-power of the x-even term ``x^(2j) H^(i) y dx``.

What survives is an H-free residual ``sum r_j x^(2j) y dx``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import UniPoly, XHPoly, XYPoly
from .forms import OneForm, QElem


@lru_cache(maxsize=None)
def cycle_weight(j: int) -> Fraction:
    """``binom(2(j+1), j+1) / (2^j (2j+1))``: ``P`` of ``x^(2j) y dx``."""
    return Fraction(math.comb(2 * (j + 1), j + 1), 2**j * (2 * j + 1))


@dataclass(frozen=True)
class CyclePoly:
    """A cycle integral ``I(c) = -pi * c * P(c)``."""

    P: UniPoly

    def __post_init__(self):
        if self.P.var != "c":
            raise TypeError("CyclePoly expects a polynomial in c")

    def is_zero(self) -> bool:
        return self.P.is_zero()

    def integral(self, c: float) -> float:
        """Floating value of ``I(c)``; for reporting and numeric comparison only."""
        return -math.pi * c * self.P.eval_float(c)

    def __str__(self) -> str:
        return f"-pi*c*({self.P})"


class NonVanishingIntegral(ArithmeticError):
    """Raised by :func:`decompose` when the cycle integral is not identically zero."""

    def __init__(self, P: UniPoly):
        super().__init__(f"cycle integral does not vanish: P(c) = {P}")
        self.P = P


class CochainError(ValueError):
    pass


@dataclass(frozen=True)
class Cochain:
    """``Q = Q.scalar_part + y*Q.y_part`` together with the multiplier ``q``."""

    Q: QElem
    q: QElem

    @classmethod
    def certified(cls, w: OneForm, Q: QElem, q: QElem) -> "Cochain":
        cochain = cls(Q, q)
        if not verify_cochain(w, cochain):
            raise CochainError("dQ + q dH does not reproduce the form")
        return cochain

    def differential(self) -> tuple[XYPoly, XYPoly]:
        """dx- and dy-coefficients of ``dQ + q dH`` in Q[x, y]."""
        Q = self.Q.to_xy()
        q = self.q.to_xy()
        dx = Q.diff(0) + q.shift(1, 0)
        dy = Q.diff(1) + q.shift(0, 1)
        return dx, dy


def cycle_integral(w: OneForm) -> CyclePoly:
    """Exact ``P`` with ``oint_{H=c} w = -pi c P(c)`` (counterclockwise)."""
    out: dict[int, Fraction] = {}
    for (a, i), v in w.beta.terms():
        if a % 2 == 0:
            j = a // 2
            out[i + j] = out.get(i + j, 0) + v * cycle_weight(j)
    size = max(out, default=-1) + 1
    return CyclePoly(UniPoly([out.get(k, 0) for k in range(size)], "c"))


def _acc(target: dict, key: tuple[int, int], value: Fraction) -> None:
    s = target.get(key, 0) + value
    if s:
        target[key] = s
    else:
        target.pop(key, None)


def reduce_to_normal_form(w: OneForm) -> tuple[list[tuple[int, Fraction]], Cochain]:
    """Split ``w = sum_j r_j x^(2j) y dx + dQ + q dH``.

    Returns the residual as sorted ``(j, r_j)`` pairs and the uncertified
    pair ``(Q, q)`` accounting for everything else.
    """
    Qa: dict = {}
    Qb: dict = {}
    qa: dict = {}
    qb: dict = {}

    for (a, i), v in w.alpha.terms():
        _acc(Qa, (a + 1, i), v / (a + 1))
        if i:
            _acc(qa, (a + 1, i - 1), -v * i / (a + 1))

    beta = dict(w.beta.terms())

    # x-odd part of beta: each step trades x^2 for one H, ending in dQ + q dH
    odd = sorted((k for k in beta if k[0] % 2), reverse=True)
    pending = {k: beta.pop(k) for k in odd}
    while pending:
        key = max(pending)
        v = pending.pop(key)
        a, i = key
        k = a - 1
        factor = v / (k + 3)
        if k:
            _acc(pending, (k - 1, i + 1), factor * 2 * k)
        _acc(Qb, (k, i + 1), -2 * factor)
        _acc(Qb, (k + 2, i), factor)
        _acc(qb, (k, i), factor * (3 + 2 * i))
        if i:
            _acc(qb, (k + 2, i - 1), -factor * i)

    # x-even part of beta: lower the H-power until the term is H-free
    residual: dict[int, Fraction] = {}
    pending = beta
    while pending:
        key = max(pending, key=lambda t: (t[1], t[0]))
        v = pending.pop(key)
        a, i = key
        if i == 0:
            residual[a // 2] = residual.get(a // 2, 0) + v
            continue
        factor = v / (2 * (a + 1))
        _acc(pending, (a + 2, i - 1), factor * (a + 4))
        _acc(Qb, (a + 1, i), 2 * factor)
        _acc(Qb, (a + 3, i - 1), -factor)
        _acc(qb, (a + 1, i - 1), -factor * (2 * i + 1))
        if i > 1:
            _acc(qb, (a + 3, i - 2), factor * (i - 1))

    cochain = Cochain(
        QElem(XHPoly._raw(Qa), XHPoly._raw(Qb)),
        QElem(XHPoly._raw(qa), XHPoly._raw(qb)),
    )
    res = sorted((j, r) for j, r in residual.items() if r)
    return res, cochain


def residual_form(residual: list[tuple[int, Fraction]]) -> OneForm:
    return OneForm(XHPoly(), XHPoly({(2 * j, 0): r for j, r in residual}))


def decompose(w: OneForm) -> Cochain:
    """Certified ``(Q, q)`` with ``w = dQ + q dH``.

    Raises :class:`NonVanishingIntegral` when ``w`` has a nonzero cycle
    integral, in which case no polynomial decomposition exists.
    """
    P = cycle_integral(w).P
    if not P.is_zero():
        raise NonVanishingIntegral(P)
    residual, cochain = reduce_to_normal_form(w)
    if residual:
        # a vanishing integral forces an empty residual: the weights are nonzero
        raise CochainError(f"nonempty residual {residual} for a form with zero integral")
    return Cochain.certified(w, cochain.Q, cochain.q)


def verify_cochain(w: OneForm, cochain: Cochain) -> bool:
    """Check ``dQ + q dH == w`` exactly in Q[x, y]."""
    dx, dy = cochain.differential()
    return dy.is_zero() and dx == w.to_xy()


def circle_moment(i: int, j: int) -> CyclePoly:
    """Closed form of ``oint H^i x^(2j) y dx`` as a :class:`CyclePoly`."""
    return CyclePoly(UniPoly.monomial(i + j, cycle_weight(j), "c"))


__all__ = [
    "CyclePoly",
    "Cochain",
    "CochainError",
    "NonVanishingIntegral",
    "circle_moment",
    "cycle_integral",
    "cycle_weight",
    "decompose",
    "reduce_to_normal_form",
    "residual_form",
    "verify_cochain",
]
