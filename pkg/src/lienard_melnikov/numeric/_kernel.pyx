# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled first-return integrator; same algorithm and contract as ``_kernel_py``."""

from libc.math cimport fabs, sqrt, pow

cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200
cdef double E6 = 22.0 / 525, E7 = -1.0 / 40

cdef double[7][4] P = [
    [1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933, 87487479700.0 / 32700410799],
    [0.0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072],
    [0.0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408, 701980252875.0 / 199316789632],
    [0.0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844],
    [0.0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423],
]

cdef double SAFETY = 0.9
cdef double PI_ALPHA = 0.7 / 5
cdef double PI_BETA = 0.4 / 5
cdef double FACTOR_MIN = 0.2, FACTOR_MAX = 10.0

OK, MAX_STEPS, LEFT_BOX = 0, 1, 2


cdef inline double horner(const double[:] c, double x) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t k
    for k in range(c.shape[0] - 1, -1, -1):
        acc = acc * x + c[k]
    return acc


cdef void step(const double[:] F, const double[:] G, double x, double y, double h,
               double kx1, double ky1, double* out, double* kx, double* ky) noexcept nogil:
    # out = [xn, yn, ex, ey]
    cdef double x2, y2, x3, y3, x4, y4, x5, y5, x6, y6, xn, yn
    kx[0] = kx1
    ky[0] = ky1
    x2 = x + h * A21 * kx[0]
    y2 = y + h * A21 * ky[0]
    kx[1] = y2 + horner(F, x2); ky[1] = horner(G, x2)
    x3 = x + h * (A31 * kx[0] + A32 * kx[1])
    y3 = y + h * (A31 * ky[0] + A32 * ky[1])
    kx[2] = y3 + horner(F, x3); ky[2] = horner(G, x3)
    x4 = x + h * (A41 * kx[0] + A42 * kx[1] + A43 * kx[2])
    y4 = y + h * (A41 * ky[0] + A42 * ky[1] + A43 * ky[2])
    kx[3] = y4 + horner(F, x4); ky[3] = horner(G, x4)
    x5 = x + h * (A51 * kx[0] + A52 * kx[1] + A53 * kx[2] + A54 * kx[3])
    y5 = y + h * (A51 * ky[0] + A52 * ky[1] + A53 * ky[2] + A54 * ky[3])
    kx[4] = y5 + horner(F, x5); ky[4] = horner(G, x5)
    x6 = x + h * (A61 * kx[0] + A62 * kx[1] + A63 * kx[2] + A64 * kx[3] + A65 * kx[4])
    y6 = y + h * (A61 * ky[0] + A62 * ky[1] + A63 * ky[2] + A64 * ky[3] + A65 * ky[4])
    kx[5] = y6 + horner(F, x6); ky[5] = horner(G, x6)
    xn = x + h * (B1 * kx[0] + B3 * kx[2] + B4 * kx[3] + B5 * kx[4] + B6 * kx[5])
    yn = y + h * (B1 * ky[0] + B3 * ky[2] + B4 * ky[3] + B5 * ky[4] + B6 * ky[5])
    kx[6] = yn + horner(F, xn); ky[6] = horner(G, xn)
    out[0] = xn
    out[1] = yn
    out[2] = h * (E1 * kx[0] + E3 * kx[2] + E4 * kx[3] + E5 * kx[4] + E6 * kx[5] + E7 * kx[6])
    out[3] = h * (E1 * ky[0] + E3 * ky[2] + E4 * ky[3] + E5 * ky[4] + E6 * ky[5] + E7 * ky[6])


cdef inline double dense(const double* k, double h, double s) noexcept nogil:
    cdef double acc = 0.0
    cdef int i
    for i in range(7):
        acc += k[i] * s * (P[i][0] + s * (P[i][1] + s * (P[i][2] + s * P[i][3])))
    return h * acc


cdef inline double slope(const double[:] F, const double[:] G, double x, double y) noexcept nogil:
    return (y + horner(F, x)) / horner(G, x)


cdef double henon(const double[:] F, const double[:] G, double x, double y) noexcept nogil:
    cdef double h = -y
    cdef double k1, k2, k3, k4, k5, k6
    k1 = slope(F, G, x, y)
    k2 = slope(F, G, x + h * A21 * k1, y + h / 5)
    k3 = slope(F, G, x + h * (A31 * k1 + A32 * k2), y + 3 * h / 10)
    k4 = slope(F, G, x + h * (A41 * k1 + A42 * k2 + A43 * k3), y + 4 * h / 5)
    k5 = slope(F, G, x + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), y + 8 * h / 9)
    k6 = slope(F, G, x + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5), y + h)
    return x + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)


cdef int revolve_c(const double[:] F, const double[:] G, double x0, double rtol, double atol,
                   long max_steps, double box, double h0,
                   double* x1_out, long* steps_out, double* err_out) noexcept nogil:
    cdef double x = x0, y = 0.0, h = h0
    cdef double kx1 = y + horner(F, x), ky1 = horner(G, x)
    cdef double kx[7]
    cdef double ky[7]
    cdef double kxs[7]
    cdef double kys[7]
    cdef double out[4]
    cdef double outs[4]
    cdef double err, err_prev = 1e-4, err_sum = 0.0
    cdef double sx, sy, xn, yn, ex, ey, lo, hi, mid, s, factor
    cdef double box2 = box * box
    cdef bint seen_negative = False, seen_positive = False
    cdef long steps = 0
    cdef int it
    while steps < max_steps:
        step(F, G, x, y, h, kx1, ky1, out, kx, ky)
        xn = out[0]; yn = out[1]; ex = out[2]; ey = out[3]
        sx = atol + rtol * max(fabs(x), fabs(xn))
        sy = atol + rtol * max(fabs(y), fabs(yn))
        err = sqrt(0.5 * ((ex / sx) * (ex / sx) + (ey / sy) * (ey / sy)))
        if err > 1.0:
            h *= max(FACTOR_MIN, SAFETY * pow(err, -0.2))
            continue
        steps += 1
        err_sum += max(fabs(ex), fabs(ey))
        if xn * xn + yn * yn > box2:
            x1_out[0] = xn; steps_out[0] = steps; err_out[0] = err_sum
            return 2
        if yn < 0.0:
            seen_negative = True
        elif yn > 0.0 and seen_negative:
            seen_positive = True
        if seen_positive and y > 0.0 and yn <= 0.0 and xn > 0.0:
            lo = 0.0
            hi = 1.0
            for it in range(60):
                mid = 0.5 * (lo + hi)
                if y + dense(ky, h, mid) > 0.0:
                    lo = mid
                else:
                    hi = mid
            s = 0.5 * (lo + hi)
            step(F, G, x, y, s * h, kx1, ky1, outs, kxs, kys)
            if outs[1] != 0.0:
                x1_out[0] = henon(F, G, outs[0], outs[1])
            else:
                x1_out[0] = outs[0]
            steps_out[0] = steps; err_out[0] = err_sum
            return 0
        x = xn
        y = yn
        kx1 = kx[6]
        ky1 = ky[6]
        err = max(err, 1e-10)
        factor = SAFETY * pow(err, -PI_ALPHA) * pow(err_prev, PI_BETA)
        h *= min(FACTOR_MAX, max(FACTOR_MIN, factor))
        err_prev = err
    x1_out[0] = x; steps_out[0] = steps; err_out[0] = err_sum
    return 1


def revolve(F, G, double x0, double rtol, double atol, long max_steps, double box, double h0):
    """Return ``(x1, steps, err_est, status)`` for one clockwise revolution."""
    cdef double[::1] Fv = _as_buffer(F)
    cdef double[::1] Gv = _as_buffer(G)
    cdef double x1 = 0.0, err = 0.0
    cdef long steps = 0
    cdef int status
    with nogil:
        status = revolve_c(Fv, Gv, x0, rtol, atol, max_steps, box, h0, &x1, &steps, &err)
    return x1, steps, err, status


cdef double[::1] _as_buffer(seq):
    cdef Py_ssize_t n = len(seq), i
    if n == 0:
        n = 1
    cdef double[::1] buf = _zeros(n)
    for i in range(len(seq)):
        buf[i] = float(seq[i])
    return buf


cdef _zeros(Py_ssize_t n):
    from array import array
    return array("d", [0.0]) * n
