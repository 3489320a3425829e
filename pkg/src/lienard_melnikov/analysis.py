"""Exact root isolation, cyclicity bounds and sharp-system synthesis."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import UniPoly, as_rat
from .forms import SystemSpec
from .melnikov import DEFAULT_KMAX, Exhausted, MelnikovResult, first_nonvanishing
from .reduction import cycle_weight


class ZeroPolynomial(ValueError):
    pass


class InfeasibleSplit(RuntimeError):
    """No conjugation-closed split of the weighted target fits the degree budgets."""


# ---------------------------------------------------------------- gcd & friends


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over Q (zero if both inputs vanish)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def exact_div(a: UniPoly, b: UniPoly) -> UniPoly:
    quo, rem = a.divmod(b)
    if not rem.is_zero():
        raise ArithmeticError("division is not exact")
    return quo


def squarefree_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: ``p = lead * prod f_k**k`` with coprime squarefree ``f_k``."""
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no squarefree decomposition")
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = exact_div(p, a)
    c = exact_div(dp, a)
    d = c - b.derivative()
    k = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        b = exact_div(b, a)
        c = exact_div(d, a)
        d = c - b.derivative()
        if a.degree > 0:
            out.append((a, k))
        k += 1
    return out


def sturm_chain(p: UniPoly) -> list[UniPoly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        rem = chain[-2].divmod(chain[-1])[1]
        if rem.is_zero():
            break
        chain.append(-rem)
    return [q for q in chain if not q.is_zero()]


def sign_variations(chain: Sequence[UniPoly], t: Fraction) -> int:
    signs = [s for s in (_sign(q(t)) for q in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def count_roots(chain: Sequence[UniPoly], lo: Fraction, hi: Fraction) -> int:
    """Distinct roots in ``(lo, hi]`` of the squarefree chain head."""
    return sign_variations(chain, lo) - sign_variations(chain, hi)


def cauchy_bound(p: UniPoly) -> Fraction:
    lead = p.lead
    return 1 + max((abs(a / lead) for a in p.coeffs[:-1]), default=Fraction(0))


# ---------------------------------------------------------------- root reports


@dataclass(frozen=True)
class IsolatedRoot:
    lo: Fraction
    hi: Fraction
    multiplicity: int
    exact: Fraction | None = None

    def contains(self, t: Fraction, tol: Fraction = Fraction(0)) -> bool:
        # closed test; locate() insists on a unique hit
        return self.lo - tol <= t <= self.hi + tol

    @property
    def approx(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return float((self.lo + self.hi) / 2)

    def label(self) -> str:
        """Exact rational string when known, else a 17-digit decimal."""
        if self.exact is not None:
            return str(self.exact)
        return f"~{self.approx:.17g}"


@dataclass(frozen=True)
class RootReport:
    roots: tuple[IsolatedRoot, ...] = ()

    @property
    def count_distinct(self) -> int:
        return len(self.roots)

    @property
    def count_with_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    @property
    def all_simple(self) -> bool:
        return all(r.multiplicity == 1 for r in self.roots)

    def locate(self, t, tol: Fraction = Fraction(0)) -> int | None:
        """Index of the unique root whose interval (widened by ``tol``) holds ``t``."""
        t = as_rat(t) if not isinstance(t, Fraction) else t
        hits = [k for k, r in enumerate(self.roots) if r.contains(t, tol)]
        return hits[0] if len(hits) == 1 else None

    def labels(self) -> list[str]:
        return [r.label() for r in self.roots]

    def to_dict(self) -> dict:
        return {
            "count_distinct": self.count_distinct,
            "count_with_multiplicity": self.count_with_multiplicity,
            "roots": [
                {
                    "value": r.label(),
                    "interval": [str(r.lo), str(r.hi)],
                    "multiplicity": r.multiplicity,
                }
                for r in self.roots
            ],
        }


def _isolate(chain, lo: Fraction, hi: Fraction, out: list) -> None:
    # roots of the squarefree chain head in (lo, hi]; a root at mid stays left
    n = count_roots(chain, lo, hi)
    if n == 0:
        return
    if n == 1:
        out.append((lo, hi))
        return
    mid = (lo + hi) / 2
    _isolate(chain, lo, mid, out)
    _isolate(chain, mid, hi, out)


SMALL_DENOM_BITS = 64


def _integer_lead(p: UniPoly) -> int:
    den = math.lcm(*(a.denominator for a in p.coeffs))
    ints = [int(a * den) for a in p.coeffs]
    g = math.gcd(*ints)
    return abs(ints[-1] // g)


def _refine(p: UniPoly, chain, lo: Fraction, hi: Fraction, width: Fraction):
    if lo == hi:
        return lo, hi
    while hi - lo > width:
        mid = (lo + hi) / 2
        if p(mid) == 0:
            return mid, mid
        if count_roots(chain, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _exact_rational(p: UniPoly, chain, lo: Fraction, hi: Fraction):
    """The root in ``(lo, hi]`` if it is rational.

    A rational root ``r/s`` of the integer-normalised ``p`` has ``s`` dividing
    the leading coefficient, so two candidates are at least ``1/lead**2``
    apart; once the interval is narrower, ``limit_denominator`` finds it.
    For very large leading coefficients only denominators up to
    ``2**SMALL_DENOM_BITS`` are searched (a hit is still verified exactly).
    """
    if lo == hi:
        return lo, lo, lo
    lead = _integer_lead(p)
    if lead.bit_length() > SMALL_DENOM_BITS:
        lead = 2**SMALL_DENOM_BITS
    lo, hi = _refine(p, chain, lo, hi, Fraction(1, 4 * lead * lead))
    if lo == hi:
        return lo, hi, lo
    cand = ((lo + hi) / 2).limit_denominator(lead)
    if lo < cand <= hi and p(cand) == 0:
        return cand, cand, cand
    return lo, hi, None


def real_roots(P: UniPoly, lo: Fraction | None = None, hi: Fraction | None = None,
               width: Fraction | None = None) -> RootReport:
    """Isolate the distinct real roots of ``P`` in ``(lo, hi]`` with multiplicities."""
    if P.is_zero():
        raise ZeroPolynomial("cannot isolate the roots of the zero polynomial")
    if P.degree == 0:
        return RootReport()
    B = cauchy_bound(P)
    lo = -B if lo is None else lo
    hi = B if hi is None else min(hi, B)
    factors = squarefree_decomposition(P)
    sqf = UniPoly([1], P.var)
    for f, _ in factors:
        sqf = sqf * f
    chain = sturm_chain(sqf)
    raw: list = []
    if lo < hi:
        _isolate(chain, lo, hi, raw)
    factor_chains = [(sturm_chain(f), k, f) for f, k in factors]
    roots = []
    for a, b in sorted(raw):
        a, b, exact = _exact_rational(sqf, chain, a, b)
        if exact is None:
            a, b = _refine(sqf, chain, a, b, width if width is not None else Fraction(1, 2**64))
            if a == b:
                exact = a
        mult = None
        for fchain, k, f in factor_chains:
            if exact is not None:
                if f(exact) == 0:
                    mult = k
                    break
            elif count_roots(fchain, a, b) == 1:
                mult = k
                break
        if mult is None:
            raise ArithmeticError("root not attributed to a squarefree factor")
        roots.append(IsolatedRoot(a, b, mult, exact))
    return RootReport(tuple(roots))


def positive_roots(P: UniPoly, width: Fraction | None = None) -> RootReport:
    """Distinct roots in ``c > 0`` with multiplicities; exact Sturm counting."""
    if P.is_zero():
        raise ZeroPolynomial("L_k must not be the zero polynomial")
    # roots at 0 are never positive; drop the factor c**v
    k = 0
    while P[k] == 0:
        k += 1
    P = UniPoly(P.coeffs[k:], P.var)
    return real_roots(P, Fraction(0), None, width)


# ---------------------------------------------------------------- bounds


@dataclass(frozen=True)
class BoundReport:
    case: str
    bound: int | None
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"case": self.case, "bound": self.bound, "meta": self.meta}


def bound_formula(case: str, m: int, n: int) -> int | None:
    if case in ("a", "b-odd-m"):
        return (m - 1) // 2
    if case == "b-even-m":
        return m // 2 + n // 2 - 1
    return None


def bound_for(spec: SystemSpec) -> BoundReport:
    meta = spec.meta()
    if spec.mu0 is None:
        case = "inapplicable"
    elif spec.g_all_odd:
        case = "a"
    elif spec.F_even_after_mu0:
        case = "b-odd-m" if spec.m % 2 else "b-even-m"
    else:
        case = "inapplicable"
    return BoundReport(case, bound_formula(case, spec.m, spec.n), meta)


def degree_sanity_bound(k: int, m: int, n: int) -> int:
    return k * (max(n, m) - 1) // 2


@dataclass(frozen=True)
class Verdict:
    bound: int
    observed_count: int | None
    holds: bool | None
    status: str
    case: str
    k: int | None = None
    roots: RootReport | None = None
    sanity: int | None = None
    result: MelnikovResult | None = None

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "bound": self.bound,
            "observed_count": self.observed_count,
            "holds": self.holds,
            "status": self.status,
            "k": self.k,
            "degree_sanity_bound": self.sanity,
        }


def verify_bound(spec: SystemSpec, k_max: int = DEFAULT_KMAX, fast_path: bool = False) -> Verdict:
    """Compare the root count of the first non-vanishing ``L_k`` with the bound."""
    report = bound_for(spec)
    if report.bound is None:
        raise ValueError("no bound applies to this system (neither hypothesis holds)")
    try:
        result = first_nonvanishing(spec, k_max, fast_path=fast_path)
    except Exhausted:
        return Verdict(report.bound, None, None, "vacuous", report.case)
    roots = positive_roots(result.L.P)
    observed = roots.count_with_multiplicity
    holds = observed <= report.bound
    return Verdict(
        bound=report.bound,
        observed_count=observed,
        holds=holds,
        status="holds" if holds else "violated",
        case=report.case,
        k=result.k,
        roots=roots,
        sanity=degree_sanity_bound(result.k, spec.m, spec.n),
        result=result,
    )


# ---------------------------------------------------------------- synthesis


def product_weight(d: int) -> Fraction:
    """``binom(2(d+1), d+1) / 2**d``, the diagonal weight of the product formula."""
    return Fraction(math.comb(2 * (d + 1), d + 1), 2**d)


def target_poly(targets: Sequence[Fraction]) -> UniPoly:
    T = UniPoly([1], "c")
    for t in targets:
        T = T * UniPoly([-t, 1], "c")
    return T


@dataclass(frozen=True)
class SharpConstruction:
    spec: SystemSpec
    targets: tuple[Fraction, ...]
    exact: bool
    attempts: int = 1


def _check_targets(targets, expected: int) -> tuple[Fraction, ...]:
    ts = tuple(as_rat(t) for t in targets)
    if len(ts) != expected:
        raise ValueError(f"expected {expected} target roots, got {len(ts)}")
    if any(t <= 0 for t in ts):
        raise ValueError("target roots must be positive")
    if len(set(ts)) != len(ts):
        raise ValueError("target roots must be distinct")
    return tuple(sorted(ts))


def _odd_padding(n: int) -> UniPoly:
    return UniPoly.monomial(n, 1, "x") if n % 2 else UniPoly([], "x")


def _sharp_first_order(m: int, n: int | None, targets, odd_g: bool) -> SystemSpec:
    # L_1 = sum K_r fhat_r c^r: divide the target coefficients by the weights
    T = target_poly(targets)
    fhat = UniPoly([t / cycle_weight(r) for r, t in enumerate(T.coeffs)], "u").monic()
    f = fhat.compose_square("x")
    F1 = f.antiderivative()
    if F1.degree < m:
        F1 = F1 + UniPoly.monomial(m, 1, "x")
    g: tuple = ()
    if n:
        # case (a) keeps g odd; otherwise make g visibly non-odd
        g1 = _odd_padding(n) if odd_g else UniPoly.monomial(n, 1, "x") + UniPoly([1], "x")
        if not g1.is_zero():
            g = (g1,)
    return SystemSpec((F1,), g)


def _weighted_target(T: UniPoly) -> UniPoly:
    return UniPoly([t / product_weight(d) for d, t in enumerate(T.coeffs)], "u")


def _split_roots(W: UniPoly, dA: int, dps: int) -> UniPoly | None:
    """Numerically factor off ``A | W`` with ``deg A = dA`` and real coefficients.

    Real roots that are exactly rational are used first, which keeps the
    split exact whenever ``W`` allows it.  Returns ``None`` when the real
    roots cannot fill the degree budget (all roots paired, ``dA`` odd).
    """
    import mpmath

    scale = 10 ** (dps - 10)

    def rat(v) -> Fraction:
        return Fraction(int(mpmath.nint(v * scale)), scale)

    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(a.numerator) / a.denominator for a in reversed(W.coeffs)]
        zs = mpmath.polyroots(coeffs, maxsteps=500, extraprec=4 * dps)
        tol = mpmath.mpf(10) ** (-(dps // 3))
        real, pairs = [], []
        for z in zs:
            z = mpmath.mpc(z)
            if abs(z.imag) < tol:
                real.append(z.real)
            elif z.imag > 0:
                pairs.append((rat(z.real), rat(z.real**2 + z.imag**2)))
        lin = []
        for r in real:
            approx = rat(r)
            cand = approx.limit_denominator(10**9)
            lin.append(cand if W(cand) == 0 else approx)
    exact = [q for q in lin if W(q) == 0]
    if len(exact) >= dA:
        n_pairs = 0
    else:
        n_pairs = min(len(pairs), dA // 2)
    n_real = dA - 2 * n_pairs
    if n_real > len(lin):
        return None
    lin.sort(key=lambda q: W(q) != 0)
    A = UniPoly([1], "u")
    for r in lin[:n_real]:
        A = A * UniPoly([-r, 1], "u")
    for re, ab2 in pairs[:n_pairs]:
        A = A * UniPoly([ab2, -2 * re, 1], "u")
    return A


def _sharp_product(m: int, n: int, targets, dps: int) -> tuple[SystemSpec, bool] | None:
    dA, dB = m // 2 - 1, n // 2
    W = _weighted_target(target_poly(targets))
    if dA == 0:
        A, B = UniPoly([1], "u"), W
    elif dB == 0:
        A, B = W, UniPoly([1], "u")
    else:
        A = _split_roots(W, dA, dps)
        if A is None:
            return None
        B = W.divmod(A)[0]
    exact = (A * B) == W
    # ftilde = A, ghat_s = (2s+1) B_s
    f = UniPoly(A.coeffs, "u").compose_square("x") * UniPoly([0, 1], "x")
    F1 = f.antiderivative()
    ghat = UniPoly([(2 * s + 1) * b for s, b in enumerate(B.coeffs)], "u")
    g1 = ghat.compose_square("x") + _odd_padding(n)
    return SystemSpec((F1,), (g1,)), exact


def construct_sharp_detailed(
    case: str,
    m: int,
    n: int | None,
    targets: Sequence,
    *,
    retries: int = 20,
    seed: int = 0,
    dps: int = 50,
    width: Fraction = Fraction(1, 10**25),
) -> SharpConstruction:
    """Synthesize a system whose first non-vanishing ``L_k`` has the given simple roots."""
    if case == "a" or (case == "b" and m % 2 == 1):
        expected = (m - 1) // 2
        ts = _check_targets(targets, expected)
        spec = _sharp_first_order(m, n, ts, odd_g=(case == "a"))
        return SharpConstruction(spec, ts, exact=True)
    if case != "b":
        raise ValueError(f"unknown case {case!r}")
    if n is None or n < 0:
        raise ValueError("case b needs the g-degree n")
    expected = m // 2 + n // 2 - 1
    ts = _check_targets(targets, expected)
    rng = random.Random(seed)
    current = ts
    for attempt in range(1, retries + 1):
        built = _sharp_product(m, n, current, dps)
        if built is not None:
            spec, exact = built
            if _realizes(spec, current, width):
                return SharpConstruction(spec, current, exact, attempt)
        # parity obstruction or numerical trouble: nudge the targets
        gap = min((b - a for a, b in zip(current, current[1:])), default=Fraction(1))
        gap = min(gap, current[0])
        current = tuple(sorted(t + Fraction(rng.randint(-50, 50), 1000) * gap / 4 for t in ts))
    raise InfeasibleSplit(
        f"no real split of degrees ({m // 2 - 1}, {n // 2}) after {retries} attempts"
    )


def construct_sharp(case: str, m: int, n: int | None, targets: Sequence, **kwargs) -> SystemSpec:
    return construct_sharp_detailed(case, m, n, targets, **kwargs).spec


def _realizes(spec: SystemSpec, targets, width: Fraction) -> bool:
    try:
        result = first_nonvanishing(spec, k_max=4)
    except Exhausted:
        return False
    return roots_match(result.L.P, targets, width)


def roots_match(P: UniPoly, targets, width: Fraction = Fraction(0)) -> bool:
    """All positive roots simple, one per target, each target inside its isolating interval.

    With ``width = 0`` the match is exact rational equality; otherwise the
    intervals are refined to ``width`` and may miss a target by at most that.
    """
    report = positive_roots(P, width=width or None)
    if report.count_distinct != len(targets) or not report.all_simple:
        return False
    seen = set()
    for t in targets:
        k = report.locate(t, width)
        if k is None or k in seen:
            return False
        seen.add(k)
    return True
