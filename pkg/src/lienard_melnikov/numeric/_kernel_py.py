"""Pure-Python first-return integrator (reference and fallback backend).

Integrates ``x' = y + F(x)``, ``y' = G(x)`` with the Dormand-Prince 5(4)
pair, a PI step-size controller and the standard quartic dense output,
starting at ``(x0, 0)`` and stopping at the next downward crossing of the
half-line ``{y = 0, x > 0}`` after one clockwise turn.

The compiled backend in ``_kernel.pyx`` mirrors this file line for line.
"""

from math import sqrt

# Dormand-Prince tableau
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40

# quartic dense output: y(t + s h) = y + h * sum_i k_i * sum_j P[i][j] s^(j+1)
P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)

SAFETY = 0.9
PI_ALPHA = 0.7 / 5
PI_BETA = 0.4 / 5
FACTOR_MIN, FACTOR_MAX = 0.2, 10.0

OK, MAX_STEPS, LEFT_BOX = 0, 1, 2


def _horner(c, x):
    acc = 0.0
    for k in range(len(c) - 1, -1, -1):
        acc = acc * x + c[k]
    return acc


def _step(F, G, x, y, h, kx1, ky1):
    """One Dormand-Prince step; returns new state, stage slopes and error vector."""
    x2 = x + h * A21 * kx1
    y2 = y + h * A21 * ky1
    kx2 = y2 + _horner(F, x2); ky2 = _horner(G, x2)
    x3 = x + h * (A31 * kx1 + A32 * kx2)
    y3 = y + h * (A31 * ky1 + A32 * ky2)
    kx3 = y3 + _horner(F, x3); ky3 = _horner(G, x3)
    x4 = x + h * (A41 * kx1 + A42 * kx2 + A43 * kx3)
    y4 = y + h * (A41 * ky1 + A42 * ky2 + A43 * ky3)
    kx4 = y4 + _horner(F, x4); ky4 = _horner(G, x4)
    x5 = x + h * (A51 * kx1 + A52 * kx2 + A53 * kx3 + A54 * kx4)
    y5 = y + h * (A51 * ky1 + A52 * ky2 + A53 * ky3 + A54 * ky4)
    kx5 = y5 + _horner(F, x5); ky5 = _horner(G, x5)
    x6 = x + h * (A61 * kx1 + A62 * kx2 + A63 * kx3 + A64 * kx4 + A65 * kx5)
    y6 = y + h * (A61 * ky1 + A62 * ky2 + A63 * ky3 + A64 * ky4 + A65 * ky5)
    kx6 = y6 + _horner(F, x6); ky6 = _horner(G, x6)
    xn = x + h * (B1 * kx1 + B3 * kx3 + B4 * kx4 + B5 * kx5 + B6 * kx6)
    yn = y + h * (B1 * ky1 + B3 * ky3 + B4 * ky4 + B5 * ky5 + B6 * ky6)
    kx7 = yn + _horner(F, xn); ky7 = _horner(G, xn)
    ex = h * (E1 * kx1 + E3 * kx3 + E4 * kx4 + E5 * kx5 + E6 * kx6 + E7 * kx7)
    ey = h * (E1 * ky1 + E3 * ky3 + E4 * ky4 + E5 * ky5 + E6 * ky6 + E7 * ky7)
    kx = (kx1, kx2, kx3, kx4, kx5, kx6, kx7)
    ky = (ky1, ky2, ky3, ky4, ky5, ky6, ky7)
    return xn, yn, kx, ky, ex, ey


def _dense(k, h, s):
    acc = 0.0
    for i in range(7):
        row = P[i]
        acc += k[i] * s * (row[0] + s * (row[1] + s * (row[2] + s * row[3])))
    return h * acc


def _henon(F, G, x, y):
    """Single DP5 step in the independent variable ``y`` from ``y`` to 0."""
    # dx/dy = (y + F(x)) / G(x)
    def fx(xx, yy):
        return (yy + _horner(F, xx)) / _horner(G, xx)

    h = -y
    k1 = fx(x, y)
    k2 = fx(x + h * A21 * k1, y + h / 5)
    k3 = fx(x + h * (A31 * k1 + A32 * k2), y + 3 * h / 10)
    k4 = fx(x + h * (A41 * k1 + A42 * k2 + A43 * k3), y + 4 * h / 5)
    k5 = fx(x + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), y + 8 * h / 9)
    k6 = fx(x + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5), y + h)
    return x + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)


def revolve(F, G, x0, rtol, atol, max_steps, box, h0):
    """Return ``(x1, steps, err_est, status)`` for one clockwise revolution."""
    F = [float(a) for a in F]
    G = [float(a) for a in G]
    x, y = float(x0), 0.0
    kx1 = y + _horner(F, x)
    ky1 = _horner(G, x)
    h = h0
    err_prev = 1e-4
    err_sum = 0.0
    seen_negative = False
    seen_positive = False
    box2 = box * box
    steps = 0
    while steps < max_steps:
        xn, yn, kx, ky, ex, ey = _step(F, G, x, y, h, kx1, ky1)
        sx = atol + rtol * max(abs(x), abs(xn))
        sy = atol + rtol * max(abs(y), abs(yn))
        err = sqrt(0.5 * ((ex / sx) ** 2 + (ey / sy) ** 2))
        if err > 1.0:
            h *= max(FACTOR_MIN, SAFETY * err ** (-1 / 5))
            continue
        steps += 1
        err_sum += max(abs(ex), abs(ey))
        if xn * xn + yn * yn > box2:
            return xn, steps, err_sum, LEFT_BOX
        if yn < 0.0:
            seen_negative = True
        elif yn > 0.0 and seen_negative:
            seen_positive = True
        if seen_positive and y > 0.0 and yn <= 0.0 and xn > 0.0:
            # bisection for the section crossing on the dense interpolant
            lo, hi = 0.0, 1.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if y + _dense(ky, h, mid) > 0.0:
                    lo = mid
                else:
                    hi = mid
            s = 0.5 * (lo + hi)
            # polish: a genuine step of length s*h, then a y-parametrised step onto y = 0
            xs, ys, _, _, _, _ = _step(F, G, x, y, s * h, kx1, ky1)
            x1 = _henon(F, G, xs, ys) if ys != 0.0 else xs
            return x1, steps, err_sum, OK
        x, y = xn, yn
        kx1, ky1 = kx[6], ky[6]
        err = max(err, 1e-10)
        factor = SAFETY * err ** (-PI_ALPHA) * err_prev ** PI_BETA
        h *= min(FACTOR_MAX, max(FACTOR_MIN, factor))
        err_prev = err
    return x, steps, err_sum, MAX_STEPS
