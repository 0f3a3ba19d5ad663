"""Graded state spaces H_c, H_o with differentials, pairings and the co-functional."""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any

import sympy

from .foundation import ValidationError, format_scalar, scalar

CLOSED, OPEN_PRIME, OPEN_DOUBLE = "closed", "open_prime", "open_double"

DEFAULT_WINDOWS = {CLOSED: -1, OPEN_PRIME: 2, OPEN_DOUBLE: 0}


@dataclass(frozen=True)
class GradedBasis:
    names: tuple
    degrees: tuple

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValidationError("names and degrees differ in length")
        for n in self.names:
            if not isinstance(n, str) or not n:
                raise ValidationError(f"basis name must be a nonempty string, got {n!r}")
        if len(set(self.names)) != len(self.names):
            raise ValidationError(f"duplicate basis names in {self.names!r}")

    @classmethod
    def of(cls, **degrees: int) -> GradedBasis:
        return cls(tuple(degrees), tuple(degrees.values()))

    def __len__(self):
        return len(self.names)

    @cached_property
    def index(self) -> dict:
        return {n: i for i, n in enumerate(self.names)}

    def lookup(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise ValidationError(f"unknown basis symbol {name!r}") from None

    def degree(self, name: str) -> int:
        return self.degrees[self.lookup(name)]


@dataclass(frozen=True)
class Differential:
    """Sparse matrix d[from, to] over basis indices."""

    entries: Mapping[tuple, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "entries", {k: scalar(v) for k, v in self.entries.items() if scalar(v)}
        )

    @cached_property
    def images(self) -> dict:
        out: dict = {}
        for (i, j), c in sorted(self.entries.items()):
            out.setdefault(i, []).append((j, c))
        return out

    def image(self, i: int) -> list:
        return self.images.get(i, [])


def symmetry_parity(kind: str, da: int, db: int) -> int:
    # Same rule for all three forms.  For open_prime this is antisymmetry in the
    # shifted degrees, which is what makes the word-splitting operator well
    # defined on cyclic coinvariants.
    return (da * db) & 1


def chain_parity(kind: str, da: int) -> int:
    # open_prime lives on H_o[1] (x) H_o[1], so d passes a in shifted degree
    return (da - 1) & 1 if kind == OPEN_PRIME else da & 1


@dataclass(frozen=True)
class PairingForm:
    """Bilinear form on a basis; entries may be given on one triangle only."""

    kind: str
    basis: GradedBasis
    entries: Mapping[tuple, Fraction] = field(default_factory=dict)
    window: int | None = None

    def __post_init__(self):
        if self.kind not in DEFAULT_WINDOWS:
            raise ValidationError(f"unknown pairing kind {self.kind!r}")
        if self.window is None:
            object.__setattr__(self, "window", DEFAULT_WINDOWS[self.kind])
        object.__setattr__(
            self, "entries", {k: scalar(v) for k, v in self.entries.items() if scalar(v)}
        )

    def sign(self, i: int, j: int) -> int:
        d = self.basis.degrees
        return -1 if symmetry_parity(self.kind, d[i], d[j]) else 1

    @cached_property
    def table(self) -> dict:
        """Symmetry-completed table; stored entries win over completions."""
        out = {}
        for (i, j), v in self.entries.items():
            if (j, i) not in self.entries:
                out[(j, i)] = self.sign(i, j) * v
        out.update(self.entries)
        return out

    def value(self, i: int, j: int) -> Fraction:
        return self.table.get((i, j), Fraction(0))

    def matrix(self) -> sympy.Matrix:
        n = len(self.basis)
        return sympy.Matrix(n, n, lambda i, j: sympy.Rational(self.value(i, j)))


def pair(form: PairingForm, a: str, b: str) -> Fraction:
    return form.value(form.basis.lookup(a), form.basis.lookup(b))


def is_nondegenerate(form: PairingForm) -> dict:
    """Per degree k: does the block pairing degree k against window - k have full rank?"""
    degs = form.basis.degrees
    result = {}
    for k in sorted(set(degs)):
        rows = [i for i, d in enumerate(degs) if d == k]
        cols = [j for j, d in enumerate(degs) if d == form.window - k]
        if len(rows) != len(cols):
            result[k] = False
            continue
        block = sympy.Matrix(len(rows), len(cols),
                             lambda r, c, rows=rows, cols=cols: sympy.Rational(form.value(rows[r], cols[c])))
        result[k] = block.rank() == len(rows)
    return result


@dataclass(frozen=True)
class AlgebraSpec:
    closed: GradedBasis
    open: GradedBasis
    d_closed: Differential = field(default_factory=Differential)
    d_open: Differential = field(default_factory=Differential)
    pairing: PairingForm | None = None
    pairing_prime: PairingForm | None = None
    pairing_double: PairingForm | None = None
    delta_co: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.pairing is None:
            object.__setattr__(self, "pairing", PairingForm(CLOSED, self.closed))
        if self.pairing_prime is None:
            object.__setattr__(self, "pairing_prime", PairingForm(OPEN_PRIME, self.open))
        if self.pairing_double is None:
            object.__setattr__(self, "pairing_double", PairingForm(OPEN_DOUBLE, self.open))
        object.__setattr__(
            self, "delta_co", {k: scalar(v) for k, v in self.delta_co.items() if scalar(v)}
        )
        if self.pairing.basis != self.closed:
            raise ValidationError("closed pairing is not on the closed basis")
        if self.pairing_prime.basis != self.open or self.pairing_double.basis != self.open:
            raise ValidationError("open pairings must live on the open basis")

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


# --- validation -------------------------------------------------------------

def _check_differential(label: str, basis: GradedBasis, d: Differential, report: list):
    degs = basis.degrees
    n = len(basis)
    for (i, j) in d.entries:
        if not (0 <= i < n and 0 <= j < n):
            report.append(f"{label}: differential entry ({i}, {j}) out of range")
            continue
        if degs[j] != degs[i] + 1:
            report.append(
                f"{label}: differential degree +1 violated by d({basis.names[i]}) -> "
                f"{basis.names[j]} ({degs[i]} -> {degs[j]})"
            )
    for i in range(n):
        acc: dict = {}
        for j, c in d.image(i):
            for k, c2 in d.image(j):
                acc[k] = acc.get(k, 0) + c * c2
        bad = [basis.names[k] for k, v in acc.items() if v]
        if bad:
            report.append(f"{label}: d∘d != 0 on {basis.names[i]} (hits {', '.join(bad)})")


def _check_form(form: PairingForm, d: Differential, report: list):
    basis = form.basis
    degs, names = basis.degrees, basis.names
    label = form.kind
    for (i, j), v in form.entries.items():
        if degs[i] + degs[j] != form.window:
            report.append(
                f"{label}: degree window {form.window} violated by ({names[i]}, {names[j]}) "
                f"with degrees {degs[i]} + {degs[j]}"
            )
        if (j, i) in form.entries and form.entries[(j, i)] != form.sign(i, j) * v:
            report.append(f"{label}: graded symmetry violated by ({names[i]}, {names[j]})")
    n = len(basis)
    for a in range(n):
        for b in range(n):
            total = sum((c * form.value(k, b) for k, c in d.image(a)), Fraction(0))
            sgn = -1 if chain_parity(form.kind, degs[a]) else 1
            total += sgn * sum((c * form.value(a, k) for k, c in d.image(b)), Fraction(0))
            if total:
                report.append(f"{label}: chain-map condition fails on ({names[a]}, {names[b]})")


def validate(spec: AlgebraSpec) -> list:
    """Every violated invariant as a human-readable line; empty iff admissible."""
    report: list = []
    _check_differential("closed", spec.closed, spec.d_closed, report)
    _check_differential("open", spec.open, spec.d_open, report)
    _check_form(spec.pairing, spec.d_closed, report)
    _check_form(spec.pairing_prime, spec.d_open, report)
    _check_form(spec.pairing_double, spec.d_open, report)
    for i in spec.delta_co:
        if not 0 <= i < len(spec.closed):
            report.append(f"delta_co: index {i} out of range")
        elif spec.closed.degrees[i] != 0:
            report.append(
                f"delta_co: support must be in degree 0, {spec.closed.names[i]} has degree "
                f"{spec.closed.degrees[i]}"
            )
    for a in range(len(spec.closed)):
        val = sum((c * spec.delta_co.get(k, 0) for k, c in spec.d_closed.image(a)), Fraction(0))
        if val:
            report.append(f"delta_co: not a chain map, delta_co(d {spec.closed.names[a]}) = {val}")
    return report


# --- JSON ---------------------------------------------------------------------

def _basis_from_json(data: Any, where: str) -> GradedBasis:
    if not isinstance(data, list):
        raise ValidationError(f"{where}.basis must be a list")
    try:
        return GradedBasis(tuple(e["name"] for e in data), tuple(int(e["degree"]) for e in data))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{where}.basis: malformed entry ({exc})") from exc


def _table_from_json(data: Any, basis: GradedBasis, keys: tuple, where: str) -> dict:
    out: dict = {}
    for n, e in enumerate(data or []):
        try:
            k = (basis.lookup(e[keys[0]]), basis.lookup(e[keys[1]]))
            v = scalar(e[keys[2]])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"{where}[{n}]: malformed entry ({exc})") from exc
        if k in out:
            raise ValidationError(f"{where}[{n}]: duplicate entry {e[keys[0]]}, {e[keys[1]]}")
        out[k] = v
    return out


def _known_keys(doc, allowed: set, where: str):
    if not isinstance(doc, Mapping):
        raise ValidationError(f"{where} must be a JSON object")
    extra = sorted(set(doc) - allowed)
    if extra:
        raise ValidationError(f"{where}: unknown keys {extra}")


def spec_from_json(doc: Mapping) -> AlgebraSpec:
    if not isinstance(doc, Mapping):
        raise ValidationError("spec document must be a JSON object")
    _known_keys(doc, {"closed", "open", "delta_co", "windows"}, "spec")
    closed = doc.get("closed", {"basis": []})
    opened = doc.get("open", {"basis": []})
    _known_keys(closed, {"basis", "d", "pairing"}, "closed")
    _known_keys(opened, {"basis", "d", "pairing_prime", "pairing_double"}, "open")
    cb = _basis_from_json(closed.get("basis", []), "closed")
    ob = _basis_from_json(opened.get("basis", []), "open")
    dkeys = ("from", "to", "coeff")
    pkeys = ("a", "b", "value")
    delta_co = {}
    for n, e in enumerate(doc.get("delta_co", []) or []):
        try:
            delta_co[cb.lookup(e["a"])] = scalar(e["value"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"delta_co[{n}]: malformed entry ({exc})") from exc
    windows = doc.get("windows", {})
    return AlgebraSpec(
        closed=cb,
        open=ob,
        d_closed=Differential(_table_from_json(closed.get("d"), cb, dkeys, "closed.d")),
        d_open=Differential(_table_from_json(opened.get("d"), ob, dkeys, "open.d")),
        pairing=PairingForm(CLOSED, cb, _table_from_json(closed.get("pairing"), cb, pkeys,
                                                         "closed.pairing"),
                            windows.get(CLOSED)),
        pairing_prime=PairingForm(OPEN_PRIME, ob, _table_from_json(
            opened.get("pairing_prime"), ob, pkeys, "open.pairing_prime"),
            windows.get(OPEN_PRIME)),
        pairing_double=PairingForm(OPEN_DOUBLE, ob, _table_from_json(
            opened.get("pairing_double"), ob, pkeys, "open.pairing_double"),
            windows.get(OPEN_DOUBLE)),
        delta_co=delta_co,
    )


def spec_to_json(spec: AlgebraSpec) -> dict:
    def basis(b):
        return [{"name": n, "degree": d} for n, d in zip(b.names, b.degrees)]

    def diff(b, d):
        return [{"from": b.names[i], "to": b.names[j], "coeff": format_scalar(c)}
                for (i, j), c in sorted(d.entries.items())]

    def form(f):
        return [{"a": f.basis.names[i], "b": f.basis.names[j], "value": format_scalar(v)}
                for (i, j), v in sorted(f.entries.items())]

    return {
        "closed": {"basis": basis(spec.closed), "d": diff(spec.closed, spec.d_closed),
                   "pairing": form(spec.pairing)},
        "open": {"basis": basis(spec.open), "d": diff(spec.open, spec.d_open),
                 "pairing_prime": form(spec.pairing_prime),
                 "pairing_double": form(spec.pairing_double)},
        "delta_co": [{"a": spec.closed.names[i], "value": format_scalar(v)}
                     for i, v in sorted(spec.delta_co.items())],
    }


def load_spec(path) -> AlgebraSpec:
    with open(path, encoding="utf-8") as fh:
        return spec_from_json(json.load(fh))
