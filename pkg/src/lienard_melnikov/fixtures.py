"""Reference systems with independently known answers.

``expected_*`` hold the claimed answers.  ``disputed`` marks a fixture
whose claim both the engine and the flow integration contradict; it is
still run and reported, never silently corrected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .forms import SystemSpec


@dataclass(frozen=True)
class Fixture:
    name: str
    spec: SystemSpec
    expected_k: int
    expected_roots: tuple[Fraction, ...]
    # epsilon and c-range for limit-cycle detection
    eps_cycles: float = 0.01
    disputed: bool = False


QUADRATIC = Fixture(
    "quadratic",
    SystemSpec.from_coeffs(F=[[0, 0, -1]], g=[[1, 0, -1]]),
    expected_k=2,
    expected_roots=(Fraction(2),),
    eps_cycles=0.01,
)

CUBIC = Fixture(
    "cubic",
    SystemSpec.from_coeffs(
        F=[[0, 0, -3], [0, 0, 0, -2]],
        g=[[0, 0, 1, 1], [Fraction(-5, 6), 0, Fraction(25, 6)]],
    ),
    expected_k=3,
    expected_roots=(Fraction(1), Fraction(2)),
    eps_cycles=0.005,
    disputed=True,
)

# same first-order data as CUBIC with second-order terms that do give k = 3
CUBIC_CORRECTED = Fixture(
    "cubic-corrected",
    SystemSpec.from_coeffs(
        F=[[0, 0, -3], [0, 0, 0, 2]],
        g=[[0, 0, 1, 1], [Fraction(5, 3), 0, -5]],
    ),
    expected_k=3,
    expected_roots=(Fraction(1), Fraction(2)),
    eps_cycles=0.005,
)

LINEAR = Fixture("linear", SystemSpec.from_coeffs(F=[[0, 1]]), expected_k=1, expected_roots=())

ALL = (QUADRATIC, CUBIC, CUBIC_CORRECTED, LINEAR)
