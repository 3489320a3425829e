"""Exact rational polynomial rings used throughout the package.

Coefficients are :class:`fractions.Fraction` values, so no rounding ever
happens.  Three shapes are provided:

* :class:`UniPoly` -- dense univariate polynomial tagged with its variable
  (``x``, ``u`` standing for ``x**2``, or ``c`` the energy level).
* :class:`XHPoly` -- sparse polynomial in ``x`` and the Hamiltonian ``H``.
* :class:`XYPoly` -- sparse polynomial in ``x`` and ``y``, the ring in which
  identities are certified after substituting ``H = (x**2 + y**2)/2``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Rat = Fraction
Scalar = Union[int, Fraction]

VARIABLES = ("x", "u", "c")


def as_rat(value: Scalar | str) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: silently turning ``0.1`` into a binary fraction
    would break exactness downstream.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE"):
            raise ValueError(f"decimal literal {value!r} is not an exact rational")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


class UniPoly:
    """Dense univariate polynomial with ascending Fraction coefficients."""

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs: Iterable[Scalar | str] = (), var: str = "x"):
        if var not in VARIABLES:
            raise ValueError(f"unknown variable tag {var!r}")
        cs = [as_rat(a) for a in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1, var: str = "x") -> "UniPoly":
        return cls([0] * degree + [coeff], var)

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def _check(self, other: "UniPoly") -> None:
        if self.var != other.var:
            raise TypeError(f"variable mismatch: {self.var} vs {other.var}")

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly([other], self.var)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.var == other.var and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly([other], self.var).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.var, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[k] + other[k] for k in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly([-a for a in self.coeffs], self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly([a * other for a in self.coeffs], self.var)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return UniPoly([], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "UniPoly":
        s = as_rat(scalar)
        return UniPoly([a / s for a in self.coeffs], self.var)

    def __pow__(self, e: int) -> "UniPoly":
        out = UniPoly([1], self.var)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __call__(self, t):
        acc = 0 * t if not isinstance(t, (int, Fraction)) else Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * t + a
        return acc

    def eval_float(self, t: float) -> float:
        acc = 0.0
        for a in reversed(self.coeffs):
            acc = acc * t + float(a)
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([k * a for k, a in enumerate(self.coeffs)][1:], self.var)

    def antiderivative(self) -> "UniPoly":
        """Antiderivative vanishing at 0."""
        return UniPoly([0] + [a / (k + 1) for k, a in enumerate(self.coeffs)], self.var)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        self._check(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly([], self.var), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            factor = rem[k + len(other.coeffs) - 1] / lead
            quo[k] = factor
            if factor:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= factor * b
        return UniPoly(quo, self.var), UniPoly(rem[: len(other.coeffs) - 1], self.var)

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        return self / self.coeffs[-1]

    def compose_square(self, var: str = "x") -> "UniPoly":
        """Return ``p(x**2)`` for ``p`` in ``u``."""
        out = [Fraction(0)] * (2 * len(self.coeffs))
        for k, a in enumerate(self.coeffs):
            out[2 * k] = a
        return UniPoly(out, var)

    def is_even(self) -> bool:
        return all(a == 0 for a in self.coeffs[1::2])

    def is_odd(self) -> bool:
        return all(a == 0 for a in self.coeffs[0::2])

    def __repr__(self) -> str:
        return f"UniPoly({[str(a) for a in self.coeffs]}, var={self.var!r})"

    def __str__(self) -> str:
        terms = (((k,), a) for k, a in enumerate(self.coeffs) if a)
        return _format_terms(terms, (self.var,)) or "0"


def parity_split(h: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Split ``h(x) = hhat(x**2) + x*htilde(x**2)``; both parts are in ``u``."""
    if h.var != "x":
        raise TypeError("parity_split expects a polynomial in x")
    return UniPoly(h.coeffs[0::2], "u"), UniPoly(h.coeffs[1::2], "u")


class _Bivariate:
    """Sparse bivariate polynomial; keys are exponent pairs."""

    __slots__ = ("_terms", "_hash")
    names: tuple[str, str] = ("?", "?")

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if terms:
            for key, value in terms.items():
                v = as_rat(value)
                if v:
                    a, b = key
                    if a < 0 or b < 0:
                        raise ValueError(f"negative exponent in {key}")
                    clean[(a, b)] = v
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, terms: dict):
        # trusted constructor: caller guarantees Fraction values, no zeros
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def monomial(cls, a: int, b: int, coeff: Scalar = 1):
        return cls({(a, b): coeff})

    @classmethod
    def constant(cls, coeff: Scalar):
        return cls({(0, 0): coeff})

    @classmethod
    def from_x(cls, p: UniPoly):
        if p.var != "x":
            raise TypeError("expected a polynomial in x")
        return cls._raw({(k, 0): a for k, a in enumerate(p.coeffs) if a})

    def terms(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        return iter(self._terms.items())

    def items_sorted(self) -> list[tuple[tuple[int, int], Fraction]]:
        return sorted(self._terms.items())

    def coeff(self, a: int, b: int) -> Fraction:
        return self._terms.get((a, b), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if type(other) is type(self):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == type(self).constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other):
        if type(other) is type(self):
            return other
        if isinstance(other, (int, Fraction)):
            return type(self).constant(other)
        if isinstance(other, _Bivariate):
            raise TypeError(f"cannot mix {type(self).__name__} and {type(other).__name__}")
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return type(self)._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s: Scalar):
        s = as_rat(s)
        if not s:
            return type(self)._raw({})
        return type(self)._raw({k: v * s for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), v1 in self._terms.items():
            for (a2, b2), v2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + v1 * v2
        return type(self)._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, s: Scalar):
        return self.scale(1 / as_rat(s))

    def __pow__(self, e: int):
        out = type(self).constant(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, da: int, db: int):
        """Multiply by the monomial with exponents ``(da, db)``."""
        return type(self)._raw({(a + da, b + db): v for (a, b), v in self._terms.items()})

    def diff(self, var: int):
        """Partial derivative in the first (0) or second (1) variable."""
        out = {}
        for (a, b), v in self._terms.items():
            e = (a, b)[var]
            if e:
                out[(a - 1, b) if var == 0 else (a, b - 1)] = v * e
        return type(self)._raw(out)

    def degree(self, var: int | None = None) -> int:
        if not self._terms:
            return -1
        if var is None:
            return max(a + b for a, b in self._terms)
        return max(k[var] for k in self._terms)

    def even_part(self):
        """Terms with even exponent in the first variable."""
        return type(self)._raw({k: v for k, v in self._terms.items() if k[0] % 2 == 0})

    def odd_part(self):
        return type(self)._raw({k: v for k, v in self._terms.items() if k[0] % 2 == 1})

    def __repr__(self) -> str:
        return f"{type(self).__name__}({{{', '.join(f'{k}: {str(v)!r}' for k, v in self.items_sorted())}}})"

    def __str__(self) -> str:
        return _format_terms(self.items_sorted(), self.names) or "0"


class XHPoly(_Bivariate):
    """Polynomial in ``x`` and ``H``; key ``(i, j)`` means ``x**i * H**j``."""

    __slots__ = ()
    names = ("x", "H")

    def deg2(self) -> int:
        """Degree in the ring Q[x^2, H]; requires all x-exponents even."""
        if any(a % 2 for a, _ in self._terms):
            raise ValueError("deg2 is only defined on Q[x^2, H]")
        if not self._terms:
            return -1
        return max(a // 2 + b for a, b in self._terms)

    def in_x2_H(self) -> bool:
        return all(a % 2 == 0 for a, _ in self._terms)

    def at_level(self, c: Scalar) -> UniPoly:
        """Restrict to ``H = c``, giving a polynomial in x."""
        c = as_rat(c)
        size = self.degree(0) + 1
        out = [Fraction(0)] * max(size, 0)
        for (a, b), v in self._terms.items():
            out[a] += v * c**b
        return UniPoly(out, "x")


class XYPoly(_Bivariate):
    """Polynomial in ``x`` and ``y``; key ``(i, j)`` means ``x**i * y**j``."""

    __slots__ = ()
    names = ("x", "y")


_H_IN_XY = XYPoly({(2, 0): Fraction(1, 2), (0, 2): Fraction(1, 2)})


def substitute_H(p: XHPoly) -> XYPoly:
    """Replace every ``H`` by ``(x**2 + y**2)/2`` and expand."""
    if not isinstance(p, XHPoly):
        raise TypeError("substitute_H expects an XHPoly")
    powers = [XYPoly.constant(1)]
    out = XYPoly()
    for (a, b), v in p.items_sorted():
        while len(powers) <= b:
            powers.append(powers[-1] * _H_IN_XY)
        out = out + powers[b].shift(a, 0).scale(v)
    return out


def _format_terms(items, names=("x",)) -> str:
    parts = []
    for exps, v in items:
        mono = "*".join(
            n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e
        )
        if not mono:
            parts.append(str(v))
        elif v == 1:
            parts.append(mono)
        elif v == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{v}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def lift_xy(p: XYPoly) -> tuple[XHPoly, XHPoly]:
    """Write ``p(x, y) = a(x, H) + y*b(x, H)`` using ``y**2 = 2H - x**2``."""
    two_h_minus_x2 = XHPoly({(0, 1): 2, (2, 0): -1})
    powers = [XHPoly.constant(1)]
    a, b = XHPoly(), XHPoly()
    for (i, j), v in p.items_sorted():
        k = j // 2
        while len(powers) <= k:
            powers.append(powers[-1] * two_h_minus_x2)
        term = powers[k].shift(i, 0).scale(v)
        if j % 2:
            b = b + term
        else:
            a = a + term
    return a, b
