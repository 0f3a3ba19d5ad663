"""Cyclic A-infinity chains, Hochschild cochains and L-infinity data from solutions.

Cochains act on the shifted open space H[1]; every sign below is a Koszul
sign in shifted degrees s(a) = |a| - 1.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .algebra import Element, combine, cyclic_normalize, rotation_parity
from .foundation import (
    Bounds,
    Series,
    ValidationError,
    format_scalar,
    permutation_parity,
    scalar,
)
from .master import MasterSeries, cme_residual
from .operators import antibracket, second_order
from .spaces import AlgebraSpec, is_nondegenerate


class UnsupportedError(ValidationError):
    """The requested inversion needs a nondegenerate pairing."""


def _s(spec: AlgebraSpec, a: int) -> int:
    return spec.open.degrees[a] - 1


# --- Hochschild cochains ----------------------------------------------------------

@dataclass(frozen=True)
class HochschildCochain:
    """A multilinear map H[1]^k -> H[1]; ``entries[(inputs, output)]`` is a scalar."""

    spec: AlgebraSpec
    arity: int
    entries: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.arity < 1:
            raise ValidationError("cochain arity must be at least 1")
        clean = {}
        for (ins, out), c in self.entries.items():
            if len(ins) != self.arity:
                raise ValidationError(f"input {ins} does not have arity {self.arity}")
            if c:
                clean[(tuple(ins), out)] = scalar(c)
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def degree(self) -> int:
        """Shifted degree s(output) - sum s(inputs); 0 for the zero cochain."""
        degs = {_s(self.spec, out) - sum(_s(self.spec, a) for a in ins)
                for (ins, out) in self.entries}
        if len(degs) > 1:
            raise ValidationError(f"inhomogeneous cochain of arity {self.arity}")
        return degs.pop() if degs else 0

    def __call__(self, inputs) -> dict:
        """Value on a basis word as {output: coeff}."""
        inputs = tuple(inputs)
        return {out: c for (ins, out), c in self.entries.items() if ins == inputs}

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self):
        return bool(self.entries)

    def __add__(self, other):
        _same(self, other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return HochschildCochain(self.spec, self.arity, out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = scalar(c)
        return HochschildCochain(self.spec, self.arity, {k: c * v for k, v in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HochschildCochain):
            return NotImplemented
        return self.arity == other.arity and self.entries == other.entries

    def __hash__(self):
        return hash((self.arity, tuple(self.entries.items())))


def _same(f: HochschildCochain, g: HochschildCochain):
    if f.spec is not g.spec or f.arity != g.arity:
        raise ValidationError("cochains differ in spec or arity")


def zero_cochain(spec: AlgebraSpec, arity: int) -> HochschildCochain:
    return HochschildCochain(spec, arity, {})


def differential_cochain(spec: AlgebraSpec) -> HochschildCochain:
    """The internal open differential as an arity-1 cochain."""
    return HochschildCochain(spec, 1, {((a,), b): c for (a, b), c in spec.d_open.entries.items()})


def basis_words(spec: AlgebraSpec, length: int):
    return itertools.product(range(len(spec.open)), repeat=length)


def coderivation(f: HochschildCochain, tensor: Mapping) -> dict:
    """Apply the coderivation of T(H[1]) extending f to {word: coeff}."""
    spec = f.spec
    fdeg = f.degree() & 1
    table: dict = {}
    for (ins, out), c in f.entries.items():
        table.setdefault(ins, []).append((out, c))
    k = f.arity
    result: dict = {}
    for word, coeff in tensor.items():
        passed = 0
        for i in range(len(word) - k + 1):
            for out, c in table.get(tuple(word[i:i + k]), ()):
                sign = -1 if fdeg and passed & 1 else 1
                new = word[:i] + (out,) + word[i + k:]
                result[new] = result.get(new, 0) + sign * c * coeff
            passed += _s(spec, word[i])
    return {w: c for w, c in result.items() if c}


def gerstenhaber_bracket(f: HochschildCochain, g: HochschildCochain) -> HochschildCochain:
    """[f, g] = f o g - (-1)^{|f||g|} g o f, read off the coderivation commutator."""
    if f.spec is not g.spec:
        raise ValidationError("cochains use different specs")
    spec = f.spec
    n = f.arity + g.arity - 1
    par = (f.degree() * g.degree()) & 1
    out: dict = {}
    for word in basis_words(spec, n):
        fg = coderivation(f, coderivation(g, {word: 1}))
        gf = coderivation(g, coderivation(f, {word: 1}))
        for w, c in fg.items():
            if len(w) == 1:
                out[(word, w[0])] = out.get((word, w[0]), 0) + c
        for w, c in gf.items():
            if len(w) == 1:
                out[(word, w[0])] = out.get((word, w[0]), 0) - (-c if par else c)
    return HochschildCochain(spec, n, out)


def stasheff_residual(mhat: Mapping, include_d: bool = True) -> dict:
    """Arity components of 1/2 {d + M, d + M}; all zero iff (H_o, d, mhat) is A-infinity.

    ``mhat`` maps arity -> cochain.  The result maps arity -> cochain and
    lists every arity that receives a contribution.
    """
    cochains = {k: v for k, v in mhat.items() if not v.is_zero()}
    spec = next(iter(mhat.values())).spec if mhat else None
    if spec is None:
        return {}
    if include_d:
        d = differential_cochain(spec)
        if not d.is_zero():
            cochains[1] = cochains[1] + d if 1 in cochains else d
    out: dict = {}
    for i, f in cochains.items():
        for j, g in cochains.items():
            n = i + j - 1
            term = gerstenhaber_bracket(f, g) * Fraction(1, 2)
            out[n] = out[n] + term if n in out else term
    arities = set(out) | set(mhat)
    return {n: out.get(n, zero_cochain(spec, n)) for n in sorted(arities)}


# --- cyclic chains ------------------------------------------------------------------

@dataclass(frozen=True)
class CyclicChain:
    """M = sum_k m_{k+1} lambda^{k-1}: the lambda^{k-1} term holds cyclic words of k+1 letters."""

    spec: AlgebraSpec
    terms: Mapping = field(default_factory=dict)  # arity k -> Element

    def __post_init__(self):
        clean = {}
        for k, el in self.terms.items():
            if k < 2:
                raise ValidationError(f"arity {k} not allowed; cyclic chains start at arity 2")
            for mono in el.terms:
                if len(mono) != 1 or mono[0][0] != 1 or len(mono[0][1]) != k + 1:
                    raise ValidationError(f"arity {k} term must be single cyclic words of {k + 1} letters")
            if el:
                clean[k] = el
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def to_master(self, bounds: Bounds = Bounds()) -> MasterSeries:
        return MasterSeries(self.spec, Series({(k - 1, 0): el for k, el in self.terms.items()}, bounds))

    @classmethod
    def from_master(cls, S: MasterSeries) -> CyclicChain:
        terms: dict = {}
        for (lam, h), el in S.series.items():
            if h != 0:
                raise ValidationError(f"cyclic chain terms carry no sqrt(hbar); found power {h}")
            terms[lam + 1] = terms[lam + 1] + el if lam + 1 in terms else el
        return cls(S.spec, terms)


def hat_word(spec: AlgebraSpec, word, coeff=1) -> dict:
    """Adjoint cochain entries {(inputs, output): coeff} of one cyclic word of k+1 letters."""
    word = tuple(word)
    k = len(word) - 1
    form = spec.pairing_double
    partners = {a: [(v, form.value(a, v)) for v in range(len(spec.open)) if form.value(a, v)]
                for a in set(word)}
    out: dict = {}
    for r in range(k + 1):
        rot = word[r:] + word[:r]
        rpar = rotation_parity(spec, word, r)
        for choice in itertools.product(*(partners[a] for a in rot[1:])):
            vs = tuple(v for v, _ in choice)
            # stage L0 L1 .. Lk v1 .. vk as L0 (L1 v1) (L2 v2) .. (Lk vk)
            degs = [_s(spec, a) for a in rot] + [_s(spec, v) for v in vs]
            order = [0] + [x for j in range(1, k + 1) for x in (j, k + j)]
            par = rpar + permutation_parity(degs, order)
            val = Fraction(-1 if par & 1 else 1) * coeff
            for _, c in choice:
                val *= c
            key = (vs, rot[0])
            out[key] = out.get(key, 0) + val
    return {key: c for key, c in out.items() if c}


def hat_from_cyclic(M: CyclicChain) -> dict:
    """Arity -> cochain via the adjoint correspondence."""
    spec = M.spec
    result = {}
    for k, el in M.terms.items():
        entries: dict = {}
        for mono, c in el.terms.items():
            for key, v in hat_word(spec, mono[0][1], c).items():
                entries[key] = entries.get(key, 0) + v
        result[k] = HochschildCochain(spec, k, entries)
    return result


def hat_element(spec: AlgebraSpec, el: Element, arity: int) -> HochschildCochain:
    """Adjoint cochain of a combination of single cyclic words of ``arity + 1`` letters."""
    entries: dict = {}
    for mono, c in el.terms.items():
        if len(mono) != 1 or mono[0][0] != 1 or len(mono[0][1]) != arity + 1:
            raise ValidationError("hat_element expects single cyclic words of arity + 1 letters")
        for key, v in hat_word(spec, mono[0][1], c).items():
            entries[key] = entries.get(key, 0) + v
    return HochschildCochain(spec, arity, entries)


def _canonical_words(spec: AlgebraSpec, length: int, degree: int | None = 0) -> list:
    seen = []
    found = set()
    for w in basis_words(spec, length):
        res = cyclic_normalize(spec, w)
        if res is None or res[1] in found:
            continue
        if degree is not None and 1 + sum(_s(spec, a) for a in w) != degree:
            continue
        found.add(res[1])
        seen.append(res[1])
    return sorted(seen)


def cyclic_from_hat(mhat: Mapping) -> CyclicChain:
    """Invert the adjoint map; needs a nondegenerate open_double pairing."""
    if not mhat:
        raise ValidationError("empty cochain family has no spec; pass at least one arity")
    spec = next(iter(mhat.values())).spec
    table = is_nondegenerate(spec.pairing_double)
    bad = [d for d, ok in table.items() if not ok]
    if bad:
        raise UnsupportedError(f"open_double pairing degenerate in degrees {bad}")
    terms = {}
    for k, f in sorted(mhat.items()):
        if f.arity != k:
            raise ValidationError(f"cochain stored under arity {k} has arity {f.arity}")
        if f.is_zero():
            continue
        if k < 2:
            raise ValidationError("arity 1 cochains have no cyclic chain counterpart")
        broken = _rotation_defect(f)
        if broken is not None:
            raise ValidationError(f"not a cyclic cochain: {broken}")
        words = _canonical_words(spec, k + 1, degree=None)
        images = [hat_word(spec, w) for w in words]
        keys = sorted(set(f.entries) | {key for im in images for key in im})
        A = sympy.Matrix([[sympy.Rational(im.get(key, 0)) for im in images] for key in keys])
        b = sympy.Matrix([sympy.Rational(f.entries.get(key, 0)) for key in keys])
        try:
            sol, params = A.gauss_jordan_solve(b)
        except ValueError as exc:
            raise ValidationError(f"not a cyclic cochain: arity {k} is outside the image of "
                                  "the adjoint map") from exc
        sol = sol.subs({p: 0 for p in params})
        raw = [(Fraction(int(x.p), int(x.q)), [(1, w)]) for x, w in zip(sol, words) if x != 0]
        terms[k] = combine(spec, raw)
    return CyclicChain(spec, terms)


def cyclic_functional(f: HochschildCochain, v0: int, inputs) -> Fraction:
    """(m(v_1, ..., v_k), v_0)'' with the output paired against v_0."""
    form = f.spec.pairing_double
    return sum((c * form.value(out, v0) for out, c in f(inputs).items()), Fraction(0))


def _rotation_defect(f: HochschildCochain):
    """First basis tuple violating the cyclic symmetry of (m(v1..vk), v0)'', or None."""
    spec = f.spec
    k = f.arity
    for word in basis_words(spec, k + 1):
        v0, ins = word[0], word[1:]
        lhs = cyclic_functional(f, v0, ins)
        # rotate (v0, v1, .., vk) -> (v1, .., vk, v0)
        rot = ins + (v0,)
        rhs = cyclic_functional(f, rot[0], rot[1:])
        par = _s(spec, v0) * sum(_s(spec, a) for a in ins)
        if lhs != (-rhs if par & 1 else rhs):
            return (f"arity {k}: (m({', '.join(spec.open.names[a] for a in ins)}), "
                    f"{spec.open.names[v0]}) = {format_scalar(lhs)} but the rotated value "
                    f"is {format_scalar(rhs)}")
    return None


def cochain_to_json(f: HochschildCochain) -> dict:
    names = f.spec.open.names
    return {"arity": f.arity,
            "entries": [{"inputs": [names[a] for a in ins], "output": names[out],
                         "coeff": format_scalar(c)} for (ins, out), c in f.entries.items()]}


def cochain_from_json(spec: AlgebraSpec, doc: Mapping) -> HochschildCochain:
    try:
        entries = {}
        for e in doc["entries"]:
            key = (tuple(spec.open.lookup(a) for a in e["inputs"]), spec.open.lookup(e["output"]))
            entries[key] = entries.get(key, 0) + scalar(e["coeff"])
        return HochschildCochain(spec, int(doc["arity"]), entries)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed cochain JSON ({exc})") from exc


# --- L-infinity coalgebra data from a closed-sector solution -------------------------

@dataclass(frozen=True)
class CoalgebraDifferential:
    """Generator images: ``components[k][x]`` is D_k(x), an element of S^k(H_c)."""

    spec: AlgebraSpec
    components: Mapping = field(default_factory=dict)
    warnings: tuple = ()

    def on_generator(self, x: int) -> Element:
        total = Element.zero(self.spec)
        for comp in self.components.values():
            if x in comp:
                total = total + comp[x]
        return total


def _closed_generator(spec: AlgebraSpec, x: int) -> Element:
    return Element(spec, {((0, x),): Fraction(1)})


def linf_extract(S_c: MasterSeries, check: bool = True) -> CoalgebraDifferential:
    """D_1 = d and D_k = {S_{k+1}, -} on generators, S_{k+1} the lambda^{2(k-1)} coefficient."""
    spec = S_c.spec
    by_k: dict = {}
    for (lam, h), el in S_c.series.items():
        for mono in el.terms:
            if any(kind for kind, _ in mono):
                raise ValidationError(f"term at lambda^{lam} sqrt(hbar)^{h} has cyclic factors")
            if lam % 2 or len(mono) != lam // 2 + 2:
                raise ValidationError(
                    f"term at lambda^{lam} sqrt(hbar)^{h} has {len(mono)} closed factors; "
                    f"lambda^(2(k-1)) must hold words of length k+1")
        k = lam // 2 + 1
        by_k[k] = by_k[k] + el if k in by_k else el
    components: dict = {}
    d1: dict = {}
    for x in range(len(spec.closed)):
        img = Element(spec, {((0, j),): c for j, c in spec.d_closed.image(x)})
        if img:
            d1[x] = img
    components[1] = d1
    for k, el in sorted(by_k.items()):
        comp = dict(components.get(k, {}))
        for x in range(len(spec.closed)):
            val = antibracket(el, _closed_generator(spec, x), "c")
            if val:
                comp[x] = comp[x] + val if x in comp else val
        components[k] = {x: v for x, v in comp.items() if v}
    warnings = ()
    if check and not cme_residual(S_c).is_zero():
        warnings = ("S_c does not solve the classical master equation; D need not square to zero",)
    return CoalgebraDifferential(spec, components, warnings)


def apply_coderivation(D: CoalgebraDifferential, a: Element, word_max: int | None = None) -> Element:
    """Extend D to S(H_c) as a degree-one derivation."""
    spec = D.spec
    images = {x: D.on_generator(x) for x in range(len(spec.closed))}

    def first(_spec, tok):
        if tok[0]:
            raise ValidationError("coalgebra differential acts on the closed sector only")
        img = images.get(tok[1])
        return [(c, m) for m, c in img.terms.items()] if img else ()

    out = second_order(a, first, None)
    if word_max is not None:
        out = Element(spec, {m: c for m, c in out.terms.items() if len(m) <= word_max})
    return out


def linf_residual(D: CoalgebraDifferential, word_max: int = 6) -> list:
    """Nonzero components of D^2 on generators, output words longer than word_max dropped."""
    spec = D.spec
    defects = []
    for x in range(len(spec.closed)):
        dd = apply_coderivation(D, apply_coderivation(D, _closed_generator(spec, x)), word_max)
        by_len: dict = {}
        for m, c in dd.terms.items():
            by_len.setdefault(len(m), {})[m] = c
        for length, terms in sorted(by_len.items()):
            defects.append({"generator": spec.closed.names[x], "word_length": length,
                            "value": Element(spec, terms)})
    return defects


__all__ = [
    "CoalgebraDifferential",
    "CyclicChain",
    "HochschildCochain",
    "UnsupportedError",
    "apply_coderivation",
    "cochain_from_json",
    "cochain_to_json",
    "coderivation",
    "cyclic_from_hat",
    "cyclic_functional",
    "differential_cochain",
    "gerstenhaber_bracket",
    "hat_element",
    "hat_from_cyclic",
    "hat_word",
    "linf_extract",
    "linf_residual",
    "stasheff_residual",
    "zero_cochain",
]
