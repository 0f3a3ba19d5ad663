"""The algebra A = S(H_c) (x) S(C^lambda(H_o)) with exact normal forms.

A monomial is a sorted tuple of generator tokens.  A token is either
``(0, i)`` for the i-th closed basis vector or ``(1, word)`` for a cyclic
class, ``word`` being the canonical tuple of open basis indices.  The empty
word ``(1, ())`` is the odd generator e.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction

from .foundation import ValidationError, format_scalar, permutation_parity, scalar
from .spaces import AlgebraSpec

EMPTY_WORD = (1, ())
UNIT = ()


def shifted(spec: AlgebraSpec, letter: int) -> int:
    return spec.open.degrees[letter] - 1


def word_degree(spec: AlgebraSpec, word: Sequence[int]) -> int:
    return 1 + sum(spec.open.degrees[a] - 1 for a in word)


def token_degree(spec: AlgebraSpec, token) -> int:
    kind, data = token
    if kind == 0:
        return spec.closed.degrees[data]
    return word_degree(spec, data)


def token_key(token):
    kind, data = token
    if kind == 0:
        return (0, data, ())
    return (1, len(data), data)


def rotation_parity(spec: AlgebraSpec, word: Sequence[int], r: int) -> int:
    """Parity of [w] = (+-)[w[r:] + w[:r]] in C^lambda."""
    head = sum(shifted(spec, a) for a in word[:r])
    tail = sum(shifted(spec, a) for a in word[r:])
    return (head * tail) & 1


def cyclic_normalize(spec: AlgebraSpec, word: Sequence[int]):
    """Return (sign, canonical word) with [word] = sign*[canonical], or None if the class is 0."""
    word = tuple(word)
    n = len(word)
    if n <= 1:
        return 1, word
    best = None
    best_par = 0
    for r in range(n):
        rot = word[r:] + word[:r]
        par = rotation_parity(spec, word, r)
        if best is None or rot < best:
            best, best_par = rot, par
        elif rot == best and par != best_par:
            return None
    return (-1 if best_par else 1), best


def normalize_tokens(spec: AlgebraSpec, tokens: Sequence):
    """Koszul-sort a product of canonical tokens: (sign, monomial) or None."""
    n = len(tokens)
    if n <= 1:
        return 1, tuple(tokens)
    keys = [token_key(t) for t in tokens]
    order = sorted(range(n), key=keys.__getitem__)
    degs = [token_degree(spec, t) for t in tokens]
    for p in range(n - 1):
        a, b = order[p], order[p + 1]
        if keys[a] == keys[b] and degs[a] & 1:
            return None
    par = permutation_parity(degs, order)
    return (-1 if par else 1), tuple(tokens[i] for i in order)


def monomial_degree(spec: AlgebraSpec, mono) -> int:
    return sum(token_degree(spec, t) for t in mono)


def _accumulate(terms: dict, key, value):
    if not value:
        return
    v = terms.get(key)
    v = value if v is None else v + value
    if v:
        terms[key] = v
    else:
        terms.pop(key, None)


class Element:
    """Exact rational combination of normal-form monomials over one AlgebraSpec."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: AlgebraSpec, terms: Mapping | None = None):
        self.spec = spec
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    # construction
    @classmethod
    def zero(cls, spec):
        return cls(spec)

    @classmethod
    def one(cls, spec, coeff=1):
        return cls(spec, {UNIT: Fraction(coeff)})

    @classmethod
    def from_raw(cls, spec: AlgebraSpec, raw: Iterable) -> Element:
        """Build from (closed names, list of letter-name words, coeff) triples."""
        terms: dict = {}
        for closed, words, coeff in raw:
            tokens = [(0, spec.closed.lookup(x)) for x in closed]
            sign = 1
            dead = False
            for w in words:
                letters = tuple(spec.open.lookup(a) for a in w)
                res = cyclic_normalize(spec, letters)
                if res is None:
                    dead = True
                    break
                s, canon = res
                sign *= s
                tokens.append((1, canon))
            if dead:
                continue
            res = normalize_tokens(spec, tokens)
            if res is None:
                continue
            s, mono = res
            _accumulate(terms, mono, sign * s * scalar(coeff))
        return cls(spec, terms)

    @classmethod
    def closed(cls, spec, *names, coeff=1):
        return cls.from_raw(spec, [(names, [], coeff)])

    @classmethod
    def word(cls, spec, *words, coeff=1):
        return cls.from_raw(spec, [((), words, coeff)])

    # arithmetic
    def _check(self, other):
        if other.spec is not self.spec:
            raise ValidationError("elements belong to different algebra specs")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(terms, k, v)
        return Element(self.spec, terms)

    def __neg__(self):
        return Element(self.spec, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Element):
            return dot(self, other)
        c = scalar(other)
        return Element(self.spec, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, other):
        c = scalar(other)
        return Element(self.spec, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.spec is other.spec and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self):
        return degree(self)

    def __repr__(self):
        return f"Element({format_element(self)})"


def dot(a: Element, b: Element) -> Element:
    a._check(b)
    spec = a.spec
    terms: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            res = normalize_tokens(spec, ma + mb)
            if res is None:
                continue
            s, mono = res
            _accumulate(terms, mono, s * ca * cb)
    return Element(spec, terms)


def combine(spec: AlgebraSpec, raw_terms: Iterable) -> Element:
    """Sum of (coeff, token list) pairs, Koszul-normalized."""
    terms: dict = {}
    for coeff, tokens in raw_terms:
        if not coeff:
            continue
        res = normalize_tokens(spec, tokens)
        if res is None:
            continue
        s, mono = res
        _accumulate(terms, mono, s * coeff)
    return Element(spec, terms)


def word_token(spec: AlgebraSpec, letters: Sequence[int]):
    """(sign, token) for a raw cyclic word, or None when the class vanishes."""
    res = cyclic_normalize(spec, letters)
    if res is None:
        return None
    s, canon = res
    return s, (1, canon)


class InhomogeneousError(ValueError):
    pass


def degree(a: Element):
    """Common degree of all monomials, or the string "inhomogeneous"."""
    if a.is_zero():
        raise InhomogeneousError("zero element has no degree")
    degs = {monomial_degree(a.spec, m) for m in a.terms}
    return degs.pop() if len(degs) == 1 else "inhomogeneous"


def word_differential(spec: AlgebraSpec, word: Sequence[int]) -> list:
    """d on a raw tensor word: list of (coeff, raw word), Koszul signs in shifted degrees."""
    out = []
    passed = 0
    for i, a in enumerate(word):
        sign = -1 if passed & 1 else 1
        for b, c in spec.d_open.image(a):
            out.append((sign * c, word[:i] + (b,) + word[i + 1:]))
        passed += spec.open.degrees[a] - 1
    return out


def differential(a: Element) -> Element:
    """Internal differential, a degree +1 derivation."""
    spec = a.spec
    raw = []
    for mono, coeff in a.terms.items():
        passed = 0
        for pos, tok in enumerate(mono):
            sign = -1 if passed & 1 else 1
            kind, data = tok
            if kind == 0:
                for j, c in spec.d_closed.image(data):
                    raw.append((sign * c * coeff, mono[:pos] + ((0, j),) + mono[pos + 1:]))
            else:
                for c, w in word_differential(spec, data):
                    wt = word_token(spec, w)
                    if wt is None:
                        continue
                    s, t = wt
                    raw.append((sign * s * c * coeff, mono[:pos] + (t,) + mono[pos + 1:]))
            passed += token_degree(spec, tok)
    return combine(spec, raw)


# --- serialization --------------------------------------------------------------

def element_to_json(a: Element) -> dict:
    spec = a.spec
    terms = []
    for mono, c in sorted(a.terms.items(), key=lambda kv: [token_key(t) for t in kv[0]]):
        terms.append({
            "coeff": format_scalar(c),
            "closed": [spec.closed.names[d] for k, d in mono if k == 0],
            "cyclic": [[spec.open.names[x] for x in d] for k, d in mono if k == 1],
        })
    return {"terms": terms}


def element_from_json(spec: AlgebraSpec, doc: Mapping) -> Element:
    try:
        raw = [(t.get("closed", []), t.get("cyclic", []), t["coeff"]) for t in doc["terms"]]
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"malformed element JSON ({exc})") from exc
    return Element.from_raw(spec, raw)


def format_monomial(spec: AlgebraSpec, mono) -> str:
    if not mono:
        return "1"
    parts = []
    for kind, data in mono:
        if kind == 0:
            parts.append(spec.closed.names[data])
        else:
            parts.append("[" + "⊗".join(spec.open.names[x] for x in data) + "]" if data else "e")
    return "·".join(parts)


def format_element(a: Element) -> str:
    if a.is_zero():
        return "0"
    return " + ".join(f"{format_scalar(c)}*{format_monomial(a.spec, m)}"
                      for m, c in sorted(a.terms.items(),
                                         key=lambda kv: [token_key(t) for t in kv[0]]))
