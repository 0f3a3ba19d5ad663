import random

import pytest

from ocbv.foundation import ValidationError
from ocbv.randomgen import random_spec
from ocbv.spaces import (
    is_nondegenerate,
    pair,
    spec_from_json,
    spec_to_json,
    symmetry_parity,
    validate,
)


def closed_spec(basis, pairing=(), d=()):
    return spec_from_json({"closed": {
        "basis": [{"name": n, "degree": k} for n, k in basis],
        "pairing": [{"a": a, "b": b, "value": v} for a, b, v in pairing],
        "d": [{"from": a, "to": b, "coeff": c} for a, b, c in d],
    }})


def test_valid_closed_pair():
    spec = closed_spec([("x", 0), ("y", -1)], [("x", "y", "1")])
    assert validate(spec) == []


def test_window_violation_is_reported():
    spec = closed_spec([("x", 0), ("y", 0)], [("x", "y", "1")])
    report = validate(spec)
    assert report and any("window" in r and "x" in r and "y" in r for r in report)


def test_differential_degree_violation():
    spec = closed_spec([("x", 0)], d=[("x", "x", "1")])
    assert any("degree" in r for r in validate(spec))


def test_d_squared_violation():
    spec = closed_spec([("x", 0), ("y", 1), ("z", 2)], d=[("x", "y", "1"), ("y", "z", "1")])
    assert validate(spec) == ["closed: d∘d != 0 on x (hits z)"]


def test_pair_lookup_and_symmetry_completion():
    spec = closed_spec([("x", 0), ("y", -1)], [("x", "y", "1")])
    assert pair(spec.pairing, "x", "y") == 1
    assert pair(spec.pairing, "y", "x") == 1
    assert pair(spec.pairing, "x", "x") == 0
    with pytest.raises(ValidationError):
        pair(spec.pairing, "x", "w")


def test_odd_symmetry_sign():
    spec = closed_spec([("u", 1), ("v", -2)], [("u", "v", "3")])
    # |u||v| = -2 is even
    assert pair(spec.pairing, "v", "u") == 3
    assert symmetry_parity("closed", 1, 1) == 1


def test_nondegenerate_frobenius(frob):
    assert is_nondegenerate(frob.pairing_double) == {-2: True, 2: True}


def test_degenerate_tables():
    spec = spec_from_json({"open": {"basis": [{"name": "p", "degree": 2}, {"name": "q", "degree": -2}]}})
    assert not any(is_nondegenerate(spec.pairing_double).values())
    spec = spec_from_json({"open": {
        "basis": [{"name": "u", "degree": 0}, {"name": "v", "degree": 0}],
        "pairing_double": [{"a": "u", "b": "u", "value": "1"}]}})
    assert is_nondegenerate(spec.pairing_double) == {0: False}


def test_chain_map_violation():
    # d x = z with (z, y) = 1 but nothing compensating on the other slot
    spec = closed_spec([("x", -1), ("z", 0), ("y", -1)], [("z", "y", "1")], [("x", "z", "1")])
    assert any("chain" in r for r in validate(spec))


def test_delta_co_support():
    doc = {"closed": {"basis": [{"name": "u", "degree": 1}]}, "delta_co": [{"a": "u", "value": "1"}]}
    assert any("delta_co" in r or "co" in r for r in validate(spec_from_json(doc)))


def test_json_roundtrip(mixed):
    again = spec_from_json(spec_to_json(mixed))
    assert spec_to_json(again) == spec_to_json(mixed)
    assert validate(mixed) == []


def test_malformed_json():
    with pytest.raises(ValidationError):
        spec_from_json({"closed": {"basis": [{"degree": 1}]}})
    with pytest.raises(ValidationError):
        spec_from_json([1, 2])


@pytest.mark.parametrize("seed", range(40))
def test_random_specs_validate(seed):
    spec = random_spec(random.Random(seed))
    assert validate(spec) == []
    for form in (spec.pairing, spec.pairing_prime, spec.pairing_double):
        n = len(form.basis)
        for i in range(n):
            for j in range(n):
                par = symmetry_parity(form.kind, form.basis.degrees[i], form.basis.degrees[j])
                assert form.value(i, j) == (-1) ** par * form.value(j, i)


@pytest.mark.parametrize("doc", [
    {"closed": {"basis": []}, "extra": 1},
    {"open": {"basis": [], "differential": []}},
    {"closed": {"basis": [], "pairing_prime": []}},
])
def test_unknown_keys_are_rejected(doc):
    with pytest.raises(ValidationError, match="unknown keys"):
        spec_from_json(doc)
