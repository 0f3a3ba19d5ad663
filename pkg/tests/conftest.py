import pytest

from ocbv.fixtures import cubic_spec_json, frobenius_spec_json, so3_spec_json
from ocbv.spaces import spec_from_json


def crossing_spec_json():
    """Smallest spec where the prime and double open forms interact on one word."""
    return {
        "open": {
            "basis": [{"name": "a0", "degree": 0}, {"name": "a1", "degree": 2},
                      {"name": "a2", "degree": -2}],
            "pairing_prime": [{"a": "a0", "b": "a1", "value": "2"}],
            "pairing_double": [{"a": "a0", "b": "a0", "value": "2"},
                               {"a": "a1", "b": "a2", "value": "-1"}],
        }
    }


def mixed_spec_json():
    """Closed and open sectors with every pairing kind and a co functional."""
    return {
        "closed": {
            "basis": [{"name": "x", "degree": 0}, {"name": "y", "degree": -1},
                      {"name": "u", "degree": 1}, {"name": "v", "degree": -2}],
            "pairing": [{"a": "x", "b": "y", "value": "1"}, {"a": "u", "b": "v", "value": "3"}],
        },
        "open": {
            "basis": [{"name": "a", "degree": 1}, {"name": "b", "degree": 1},
                      {"name": "c", "degree": 0}],
            "pairing_prime": [{"a": "a", "b": "b", "value": "1"}],
            "pairing_double": [{"a": "c", "b": "c", "value": "1"}],
        },
        "delta_co": [{"a": "x", "value": "1"}],
    }


@pytest.fixture
def frob():
    return spec_from_json(frobenius_spec_json())


@pytest.fixture
def so3():
    return spec_from_json(so3_spec_json())


@pytest.fixture
def cubic():
    return spec_from_json(cubic_spec_json())


@pytest.fixture
def crossing():
    return spec_from_json(crossing_spec_json())


@pytest.fixture
def mixed():
    return spec_from_json(mixed_spec_json())


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
