"""One-forms ``(alpha + beta*y) dx`` over Q[x, H] and the Lienard system data."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Scalar, UniPoly, XHPoly, XYPoly, lift_xy, substitute_H

# y**2 rewritten in the (x, H) ring
Y_SQUARED = XHPoly({(0, 1): 2, (2, 0): -1})


class SpecError(ValueError):
    """Invalid system specification; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class OneForm:
    """The 1-form ``(alpha(x, H) + beta(x, H)*y) dx``."""

    alpha: XHPoly = field(default_factory=XHPoly)
    beta: XHPoly = field(default_factory=XHPoly)

    @classmethod
    def from_xy(cls, p: XYPoly) -> "OneForm":
        """Form whose dx-coefficient is the polynomial ``p(x, y)``."""
        return cls(*lift_xy(p))

    def to_xy(self) -> XYPoly:
        return substitute_H(self.alpha) + substitute_H(self.beta).shift(0, 1)

    def is_zero(self) -> bool:
        return self.alpha.is_zero() and self.beta.is_zero()

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.alpha + other.alpha, self.beta + other.beta)

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.alpha - other.alpha, self.beta - other.beta)

    def __neg__(self) -> "OneForm":
        return OneForm(-self.alpha, -self.beta)

    def scale(self, s: Scalar) -> "OneForm":
        return OneForm(self.alpha.scale(s), self.beta.scale(s))

    def __str__(self) -> str:
        return f"(({self.alpha}) + ({self.beta})*y) dx"


@dataclass(frozen=True)
class QElem:
    """A multiplier ``q = scalar_part(x, H) + y*y_part(x, H)``."""

    scalar_part: XHPoly = field(default_factory=XHPoly)
    y_part: XHPoly = field(default_factory=XHPoly)

    def is_zero(self) -> bool:
        return self.scalar_part.is_zero() and self.y_part.is_zero()

    def __add__(self, other: "QElem") -> "QElem":
        return QElem(self.scalar_part + other.scalar_part, self.y_part + other.y_part)

    def scale(self, s: Scalar) -> "QElem":
        return QElem(self.scalar_part.scale(s), self.y_part.scale(s))

    def to_xy(self) -> XYPoly:
        return substitute_H(self.scalar_part) + substitute_H(self.y_part).shift(0, 1)

    def __str__(self) -> str:
        return f"({self.scalar_part}) + ({self.y_part})*y"


def reduce_product(q: QElem, w: OneForm) -> OneForm:
    """``q*w`` with the single ``y**2`` it produces replaced by ``2H - x**2``."""
    a, b = q.scalar_part, q.y_part
    alpha = a * w.alpha + Y_SQUARED * (b * w.beta)
    beta = a * w.beta + b * w.alpha
    return OneForm(alpha, beta)


def _all_x_odd(p: XHPoly) -> bool:
    return all(i % 2 == 1 for (i, _), _ in p.terms())


def in_class_A(w: OneForm) -> bool:
    """``w = (x*A + x*y*B) dx`` with ``A, B`` in Q[x^2, H]."""
    return _all_x_odd(w.alpha) and _all_x_odd(w.beta)


def in_class_S(q: QElem) -> bool:
    """``q = x**2*q1 + y*q2`` with ``q1, q2`` in Q[x^2, H]."""
    scalar_ok = all(i % 2 == 0 and i >= 2 for (i, _), _ in q.scalar_part.terms())
    return scalar_ok and q.y_part.in_x2_H()


def classify(w: OneForm, q: QElem) -> dict[str, bool]:
    return {"w_in_A": in_class_A(w), "q_in_S": in_class_S(q)}


def _poly_x(p, where: str) -> UniPoly:
    if isinstance(p, UniPoly):
        if p.var != "x":
            raise SpecError(where, f"expected a polynomial in x, got variable {p.var!r}")
        return p
    try:
        return UniPoly(p, "x")
    except (TypeError, ValueError) as exc:
        raise SpecError(where, str(exc)) from None


@dataclass(frozen=True)
class SystemSpec:
    """Perturbation data of ``x' = y + sum eps^i F_i(x)``, ``y' = -x + sum eps^i g_i(x)``.

    ``F[i-1]`` holds ``F_i`` and ``g[i-1]`` holds ``g_i``.  The unperturbed
    ``g_0 = -x`` is implicit and never stored.
    """

    F: tuple[UniPoly, ...] = ()
    g: tuple[UniPoly, ...] = ()

    def __post_init__(self):
        F = tuple(_poly_x(p, f"F[{i + 1}]") for i, p in enumerate(self.F))
        g = tuple(_poly_x(p, f"g[{i + 1}]") for i, p in enumerate(self.g))
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "g", g)
        for i, p in enumerate(F, start=1):
            if p[0] != 0:
                raise SpecError(f"F[{i}]", "F_i(0) must be 0; shift coordinates first")
        if F and F[-1].is_zero():
            raise SpecError(f"F[{len(F)}]", "the highest-order F_mu must not vanish")
        if g and g[-1].is_zero():
            raise SpecError(f"g[{len(g)}]", "the highest-order g_nu must not vanish")
        if not F and not g:
            raise SpecError("F", "zero perturbation: no F_i and no g_i given")

    @classmethod
    def from_coeffs(cls, F: Sequence[Sequence] = (), g: Sequence[Sequence] = ()) -> "SystemSpec":
        return cls(tuple(UniPoly(c, "x") for c in F), tuple(UniPoly(c, "x") for c in g))

    @property
    def mu(self) -> int:
        return len(self.F)

    @property
    def nu(self) -> int:
        return len(self.g)

    @property
    def m(self) -> int:
        """Maximal degree of the F_i (0 when there is no F)."""
        return max((p.degree for p in self.F), default=0)

    @property
    def n(self) -> int:
        """Maximal degree of the g_i (0 when there is no g or all vanish)."""
        return max((max(p.degree, 0) for p in self.g), default=0)

    @property
    def mu0(self) -> int | None:
        """Smallest index with ``F_i`` not identically zero."""
        for i, p in enumerate(self.F, start=1):
            if not p.is_zero():
                return i
        return None

    @property
    def g_all_odd(self) -> bool:
        return all(p.is_odd() for p in self.g)

    @property
    def F_even_after_mu0(self) -> bool:
        mu0 = self.mu0
        if mu0 is None:
            return False
        return all(p.is_even() for p in self.F[mu0:])

    def f(self, i: int) -> UniPoly:
        """``f_i = F_i'``; zero outside ``1..mu``."""
        if 1 <= i <= self.mu:
            return self.F[i - 1].derivative()
        return UniPoly([], "x")

    def g_at(self, i: int) -> UniPoly:
        if 1 <= i <= self.nu:
            return self.g[i - 1]
        return UniPoly([], "x")

    def meta(self) -> dict:
        return {
            "mu": self.mu,
            "nu": self.nu,
            "m": self.m,
            "n": self.n,
            "mu0": self.mu0,
            "g_all_odd": self.g_all_odd,
            "F_even_after_mu0": self.F_even_after_mu0,
        }


def form_of(f: UniPoly, g: UniPoly) -> OneForm:
    """``(g(x) + f(x)*y) dx``."""
    return OneForm(XHPoly.from_x(g), XHPoly.from_x(f))


def build_forms(spec: SystemSpec) -> list[OneForm]:
    """``omega_i = (g_i + f_i*y) dx`` for ``i = 1 .. max(mu, nu)``."""
    count = max(spec.mu, spec.nu)
    return [form_of(spec.f(i), spec.g_at(i)) for i in range(1, count + 1)]

