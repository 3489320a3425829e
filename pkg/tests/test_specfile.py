import json
import random
from fractions import Fraction

import pytest

from lienard_melnikov.forms import SpecError
from lienard_melnikov.numeric.harness import NumericConfig
from lienard_melnikov.specfile import dumps, load, loads, parse_spec
from strategies import rand_spec_case_a, rand_spec_case_b


def test_parse_minimal():
    spec, numeric = loads('{"mu": 1, "nu": 1, "F": [[0, 0, -1]], "g": [[1, 0, "-1"]]}')
    assert spec.mu == spec.nu == 1
    assert spec.g[0].coeffs == (1, 0, -1)
    assert numeric is None


def test_rational_strings():
    spec, _ = loads('{"F": [[0, "3/4", "-5/6"]]}')
    assert spec.F[0].coeffs == (0, Fraction(3, 4), Fraction(-5, 6))


@pytest.mark.parametrize(
    "doc, field",
    [
        ({"F": [[0, 0.5]]}, "F[1][1]"),
        ({"F": [[0, "0.5"]]}, "F[1][1]"),
        ({"F": [[0, "1e3"]]}, "F[1][1]"),
        ({"F": [[0, True]]}, "F[1][1]"),
        ({"F": [[1, 1]]}, "F[1]"),
        ({"F": [[0, 1]], "g": {"0": [1]}}, "g[0]"),
        ({"F": [[0, 1]], "mu": 2}, "mu"),
        ({"F": [[0, 1]], "extra": 1}, "<root>"),
        ({"F": [[0, 1]], "numeric": {"eps": [0.5]}}, "numeric"),
        ({"F": [[0, 1]], "numeric": {"bogus": 1}}, "numeric"),
        ({"F": "x"}, "F"),
        ({}, "F"),
    ],
)
def test_parse_errors_name_the_field(doc, field):
    with pytest.raises(SpecError) as err:
        parse_spec(doc)
    assert err.value.field == field


def test_dict_form_orders():
    spec, _ = parse_spec({"F": {"2": [0, 1]}, "g": {"1": [0, 1]}})
    assert spec.mu == 2 and spec.F[0].is_zero()


def test_numeric_block():
    _, numeric = parse_spec({"F": [[0, 1]], "numeric": {"eps": [0.02, 0.01, 0.005], "grid": 10}})
    assert numeric == NumericConfig(eps=(0.02, 0.01, 0.005), grid=10)


def test_bad_json_and_missing_file(tmp_path):
    with pytest.raises(SpecError):
        loads("{not json")
    with pytest.raises(SpecError):
        load(tmp_path / "missing.json")


@pytest.mark.parametrize("gen", [rand_spec_case_a, rand_spec_case_b])
def test_round_trip_is_exact(gen):
    rng = random.Random(51)
    for _ in range(50):
        spec = gen(rng)
        again, _ = loads(dumps(spec))
        assert again == spec


def test_round_trip_with_numeric():
    spec, numeric = parse_spec({"F": [[0, 1]], "numeric": {"grid": 7, "c_max": 2.5}})
    again, numeric2 = loads(dumps(spec, numeric))
    assert again == spec and numeric2 == numeric
    assert json.loads(dumps(spec))["F"] == [[0, 1]]
