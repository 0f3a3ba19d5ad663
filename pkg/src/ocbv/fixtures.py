"""Small worked examples used by the CLI and the test suite."""

from __future__ import annotations

from fractions import Fraction

from .algebra import Element
from .foundation import Bounds, Series
from .homotopy import CyclicChain
from .master import MasterSeries
from .spaces import spec_from_json


def frobenius_spec_json() -> dict:
    """Open basis {p:2, q:-2} with (p,q)'' = 1."""
    return {
        "open": {
            "basis": [{"name": "p", "degree": 2}, {"name": "q", "degree": -2}],
            "pairing_double": [{"a": "p", "b": "q", "value": "1"}],
        }
    }


def frobenius_chain(spec=None, coeff=1) -> CyclicChain:
    """M = [p (x) p (x) q] lambda."""
    spec = spec or spec_from_json(frobenius_spec_json())
    return CyclicChain(spec, {2: Element.word(spec, ("p", "p", "q"), coeff=coeff)})


def so3_spec_json() -> dict:
    """Chevalley-Eilenberg data of so(3): odd ghosts c_i against antifields x_i."""
    basis = [{"name": f"c{i}", "degree": 1} for i in (1, 2, 3)]
    basis += [{"name": f"x{i}", "degree": -2} for i in (1, 2, 3)]
    pairing = [{"a": f"c{i}", "b": f"x{i}", "value": "1"} for i in (1, 2, 3)]
    return {"closed": {"basis": basis, "pairing": pairing}}


def so3_solution(spec=None, coeff=Fraction(1, 2), bounds: Bounds = Bounds()) -> MasterSeries:
    """S = coeff * sum over cyclic (i,j,k) of c_i c_j x_k at lambda^2 sqrt(hbar)."""
    spec = spec or spec_from_json(so3_spec_json())
    raw = [((f"c{i}", f"c{j}", f"x{k}"), [], coeff) for i, j, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2))]
    return MasterSeries(spec, Series({(2, 1): Element.from_raw(spec, raw)}, bounds))


def cubic_spec_json() -> dict:
    """One even class y of degree 0 paired with an odd class z of degree -1."""
    return {"closed": {"basis": [{"name": "y", "degree": 0}, {"name": "z", "degree": -1}],
                       "pairing": [{"a": "y", "b": "z", "value": "1"}]}}


def cubic_solution(spec=None, bounds: Bounds = Bounds()) -> MasterSeries:
    """S = y^3 at lambda^2 sqrt(hbar); {S,S} = 0 because (y,y) vanishes."""
    spec = spec or spec_from_json(cubic_spec_json())
    return MasterSeries(spec, Series({(2, 1): Element.closed(spec, "y", "y", "y")}, bounds))


__all__ = [
    "cubic_solution",
    "cubic_spec_json",
    "frobenius_chain",
    "frobenius_spec_json",
    "so3_solution",
    "so3_spec_json",
]
