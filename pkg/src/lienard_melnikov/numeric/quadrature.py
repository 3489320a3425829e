"""Adaptive quadrature of monomial forms over the circles ``H = c``."""

import math

from scipy.integrate import quad


def circle_moment_numeric(i: int, j: int, c: float) -> float:
    """``oint H^i x^(2j) y dx`` counterclockwise over the circle of radius ``sqrt(2c)``."""
    r = math.sqrt(2 * c)

    def integrand(t: float) -> float:
        x, y = r * math.cos(t), r * math.sin(t)
        return x ** (2 * j) * y * (-r * math.sin(t))

    value, _ = quad(integrand, 0.0, 2 * math.pi, epsabs=0.0, epsrel=1e-13, limit=200)
    return c**i * value
