import math
import os
import subprocess
import sys

import pytest

from lienard_melnikov import fixtures
from lienard_melnikov.analysis import construct_sharp, positive_roots
from lienard_melnikov.forms import SystemSpec
from lienard_melnikov.melnikov import first_nonvanishing
from lienard_melnikov.numeric import KERNEL_BACKEND, _kernel_py
from lienard_melnikov.numeric.harness import (
    NoReturn,
    NumericConfig,
    calibrate_sign,
    displacement,
    displacement_sample,
    energy_drift,
    estimate_melnikov,
    find_limit_cycles,
    sample_grid,
    tolerance_check,
    write_csv,
)

try:
    from lienard_melnikov.numeric import _kernel as _kernel_c
except ImportError:
    _kernel_c = None

backends = [pytest.param(_kernel_py, id="python")]
if _kernel_c is not None:
    backends.append(pytest.param(_kernel_c, id="cython"))

QUAD = fixtures.QUADRATIC.spec


@pytest.mark.parametrize("kernel", backends)
def test_kernel_unperturbed_returns_to_start(kernel):
    x1, steps, err, status = kernel.revolve([0.0], [0.0, -1.0], 2.0, 1e-12, 1e-14, 10**6, 100.0, 0.01)
    assert status == 0 and steps > 10
    assert x1 == pytest.approx(2.0, abs=1e-11)


def test_kernels_agree():
    if _kernel_c is None:
        pytest.skip("compiled kernel not built")
    F, G = [0.0, 0.0, -0.01], [0.01, -1.0, -0.01]
    for x0 in (0.7, 1.4, 2.3):
        a = _kernel_py.revolve(F, G, x0, 1e-11, 1e-13, 10**6, 50.0, 0.01)
        b = _kernel_c.revolve(F, G, x0, 1e-11, 1e-13, 10**6, 50.0, 0.01)
        assert (a[1], a[3]) == (b[1], b[3])
        assert a[0] == pytest.approx(b[0], abs=1e-13)


@pytest.mark.parametrize("kernel", backends)
def test_kernel_status_codes(kernel):
    # strongly repelling focus leaves any modest box
    _, _, _, status = kernel.revolve([0.0, 1.0], [0.0, -1.0], 1.0, 1e-10, 1e-12, 10**6, 3.0, 0.01)
    assert status == 2
    _, steps, _, status = kernel.revolve([0.0], [0.0, -1.0], 1.0, 1e-12, 1e-14, 5, 10.0, 0.01)
    assert status == 1 and steps == 5


def test_backend_override_env():
    env = dict(os.environ, LIENARD_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from lienard_melnikov.numeric import KERNEL_BACKEND; print(KERNEL_BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
    assert KERNEL_BACKEND in ("python", "cython")


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0, 4.0])
def test_energy_conserved_without_perturbation(c):
    assert energy_drift(c) < 1e-8


def test_zero_epsilon_gives_zero_displacement():
    for c in (0.5, 1.0, 2.5):
        assert abs(displacement(QUAD, 0.0, c)) < 1e-10


def test_calibration_sign_is_negative_one():
    assert calibrate_sign() == -1


def test_quadratic_displacement_magnitude():
    d = displacement(QUAD, 0.01, 1.0)
    expected = -1 * 0.01**2 * first_nonvanishing(QUAD).L.integral(1.0)
    assert d == pytest.approx(expected, rel=0.2)
    assert abs(d) == pytest.approx(2 * math.pi * 1e-4, rel=0.2)


def test_quadratic_displacement_changes_sign():
    assert displacement(QUAD, 0.01, 1.5) * displacement(QUAD, 0.01, 2.5) < 0


@pytest.mark.parametrize("fx", [fixtures.QUADRATIC, fixtures.CUBIC_CORRECTED, fixtures.LINEAR], ids=lambda f: f.name)
def test_convergence_halves(fx):
    r = first_nonvanishing(fx.spec)
    rep = estimate_melnikov(fx.spec, r.k, r.L, sign=-1)
    assert rep.passed, rep.ratios
    assert rep.sign_consistent
    assert all(0.3 <= q <= 0.7 for q in rep.ratios)


def test_linear_fixture_scaled_displacement_is_uniform():
    samples = sample_grid(fixtures.LINEAR.spec, 0.005, [0.5, 1.0, 2.0, 3.0])
    for s in samples:
        assert s.L / 0.005 == pytest.approx(2 * math.pi * s.c, rel=0.03)


def test_cubic_as_given_converges_to_its_second_order_function():
    r = first_nonvanishing(fixtures.CUBIC.spec)
    rep = estimate_melnikov(fixtures.CUBIC.spec, r.k, r.L, sign=-1)
    assert r.k == 2 and rep.passed and rep.sign_consistent


def test_limit_cycles_quadratic():
    cycles = find_limit_cycles(QUAD, 0.01, (0.5, 3.0))
    assert len(cycles) == 1 and abs(cycles[0] - 2) < 0.1
    assert find_limit_cycles(QUAD, 0.0, (0.5, 3.0)) == []


def test_limit_cycles_cubic_corrected():
    cycles = find_limit_cycles(fixtures.CUBIC_CORRECTED.spec, 0.005, (0.5, 3.0))
    assert len(cycles) == 2
    assert abs(cycles[0] - 1) < 0.1 and abs(cycles[1] - 2) < 0.1


@pytest.mark.parametrize(
    "case, m, n, targets",
    [("a", 5, None, [1, 2]), ("a", 7, None, ["3/4", "3/2", "5/2"]), ("b", 4, 4, ["3/2", 3, "7/2"])],
)
def test_limit_cycle_count_matches_sharp_roots(case, m, n, targets):
    spec = construct_sharp(case, m, n, targets)
    r = first_nonvanishing(spec)
    roots = [x.approx for x in positive_roots(r.L.P).roots]
    lo, hi = 0.5, max(roots) + 0.7
    cfg = NumericConfig(c_min=lo, c_max=hi, grid=60)
    eps = 0.002 if r.k == 1 else 0.005
    cycles = find_limit_cycles(spec, eps, (lo, hi), cfg)
    assert len(cycles) == len([x for x in roots if lo < x < hi])
    for c, root in zip(cycles, sorted(roots)):
        assert abs(c - root) < 0.1


def test_tolerance_self_check():
    for fx in (fixtures.QUADRATIC, fixtures.CUBIC_CORRECTED):
        for c in (0.5, 1.5, 3.0):
            delta, estimate, _ = tolerance_check(fx.spec, 0.01, c)
            assert delta < estimate


def test_no_return_is_raised():
    spec = SystemSpec.from_coeffs(F=[[0, 1]])
    cfg = NumericConfig(box_factor=1.2, c_max=1.0, c_min=0.5)
    with pytest.raises(NoReturn):
        displacement(spec, 0.2, 1.0, cfg)
    with pytest.raises(NoReturn):
        displacement(spec, 0.01, 1.0, NumericConfig(max_steps=3))


def test_config_validation():
    with pytest.raises(ValueError):
        NumericConfig(eps=(0.3,))
    with pytest.raises(ValueError):
        NumericConfig(rtol=0)
    with pytest.raises(ValueError):
        NumericConfig(c_min=2, c_max=1)
    with pytest.raises(ValueError):
        displacement(QUAD, -0.1, 1.0)


def test_grid_is_deterministic_and_ordered():
    cs = [0.5, 2.0, 1.0]
    a = sample_grid(QUAD, 0.01, cs)
    b = sample_grid(QUAD, 0.01, cs, NumericConfig(workers=1))
    assert [s.c for s in a] == cs
    assert [s.L for s in a] == [s.L for s in b]


def test_csv_output(tmp_path):
    samples = [displacement_sample(QUAD, 0.01, c) for c in (1.0, 2.0)]
    path = tmp_path / "s.csv"
    write_csv(path, samples, lambda s: 0.0)
    lines = path.read_text().splitlines()
    assert lines[0] == "c,epsilon,L,predicted,residual"
    assert len(lines) == 3
