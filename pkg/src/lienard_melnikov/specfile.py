"""JSON system files.

Grammar::

    {
      "mu": 1, "nu": 1,                 # optional; checked against F and g
      "F": [[0, 0, -1]],                # F_1, F_2, ...: ascending powers of x
      "g": {"1": [1, 0, "-1"]},         # list form or {"order": coeffs}; order >= 1
      "numeric": {"eps": [0.02, 0.01], "c_min": 0.5, "c_max": 3, "grid": 26,
                  "rtol": 1e-12, "atol": 1e-14, "max_steps": 200000,
                  "crossing_tol": 1e-10}
    }

Coefficients are integers or ``"p/q"`` strings.  Decimal floats are
rejected: a coefficient must be exact.  The numeric block is float-valued
and never touches the system itself.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any

from .forms import SpecError, SystemSpec
from .numeric.harness import NumericConfig

_TOP_KEYS = {"mu", "nu", "F", "g", "numeric"}
_NUMERIC_KEYS = {
    "eps", "c_min", "c_max", "grid", "rtol", "atol", "max_steps", "crossing_tol", "box_factor", "h0", "workers",
}


def parse_coefficient(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise SpecError(where, "booleans are not coefficients")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise SpecError(where, f"decimal float {value!r} rejected; write it as an integer or a \"p/q\" string")
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE") or not text:
            raise SpecError(where, f"{value!r} is not an exact rational; use \"p/q\"")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise SpecError(where, f"cannot parse {value!r} as a rational") from None
    raise SpecError(where, f"unsupported coefficient type {type(value).__name__}")


def _orders(raw: Any, name: str) -> list[list[Fraction]]:
    if raw is None:
        return []
    if isinstance(raw, dict):
        table: dict[int, Any] = {}
        for key, coeffs in raw.items():
            try:
                order = int(key)
            except (TypeError, ValueError):
                raise SpecError(f"{name}[{key}]", "order keys must be integers") from None
            if order < 1:
                hint = " (g_0 = -x is implicit)" if name == "g" else ""
                raise SpecError(f"{name}[{key}]", f"orders start at 1{hint}")
            table[order] = coeffs
        raw = [table.get(i, []) for i in range(1, max(table, default=0) + 1)]
    if not isinstance(raw, list):
        raise SpecError(name, "expected a list of coefficient lists")
    out = []
    for i, coeffs in enumerate(raw, start=1):
        if not isinstance(coeffs, list):
            raise SpecError(f"{name}[{i}]", "expected a list of coefficients")
        out.append([parse_coefficient(v, f"{name}[{i}][{d}]") for d, v in enumerate(coeffs)])
    return out


def _numeric(raw: Any) -> NumericConfig | None:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise SpecError("numeric", "expected an object")
    unknown = set(raw) - _NUMERIC_KEYS
    if unknown:
        raise SpecError("numeric", f"unknown keys {sorted(unknown)}")
    try:
        return NumericConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise SpecError("numeric", str(exc)) from None


def parse_spec(doc: Any) -> tuple[SystemSpec, NumericConfig | None]:
    if not isinstance(doc, dict):
        raise SpecError("<root>", "expected a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise SpecError("<root>", f"unknown keys {sorted(unknown)}")
    F = _orders(doc.get("F"), "F")
    g = _orders(doc.get("g"), "g")
    for key, got in (("mu", len(F)), ("nu", len(g))):
        if key in doc:
            declared = doc[key]
            if isinstance(declared, bool) or not isinstance(declared, int) or declared < 0:
                raise SpecError(key, "must be a non-negative integer")
            if declared != got:
                raise SpecError(key, f"declared {declared} but {got} orders given")
    spec = SystemSpec.from_coeffs(F=F, g=g)
    return spec, _numeric(doc.get("numeric"))


def loads(text: str) -> tuple[SystemSpec, NumericConfig | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError("<json>", str(exc)) from None
    return parse_spec(doc)


def load(path: str | os.PathLike) -> tuple[SystemSpec, NumericConfig | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError("--spec", f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def format_rational(a: Fraction) -> int | str:
    return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def spec_to_doc(spec: SystemSpec, numeric: NumericConfig | None = None) -> dict:
    doc: dict[str, Any] = {
        "mu": spec.mu,
        "nu": spec.nu,
        "F": [[format_rational(a) for a in p.coeffs] for p in spec.F],
        "g": [[format_rational(a) for a in p.coeffs] for p in spec.g],
    }
    if numeric is not None:
        d = numeric.to_dict()
        if d.get("workers") is None:
            d.pop("workers", None)
        doc["numeric"] = d
    return doc


def dumps(spec: SystemSpec, numeric: NumericConfig | None = None) -> str:
    return json.dumps(spec_to_doc(spec, numeric), indent=2) + "\n"


def dump(spec: SystemSpec, path: str | os.PathLike, numeric: NumericConfig | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(spec, numeric))
