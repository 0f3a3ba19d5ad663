"""BV operator components on A and the antibrackets.

Every component is a second-order operator Delta with Delta(1) = 0, so it is
fixed by a generator map ``first`` (its derivation part) and a generator pair
map ``second`` (its value on products of two generators).  A monomial
g_1...g_N expands as

    sum_i   (-1)^{|g_1|+...+|g_{i-1}|} g_1 ... first(g_i) ... g_N
  + sum_{i<j} (-1)^{kappa_ij} second(g_i, g_j) g_1 ... ^i ... ^j ... g_N

where kappa_ij is the Koszul sign of bringing g_i, g_j to the front: the
operator acts from the left, and the consumed factors are staged next to it.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    EMPTY_WORD,
    Element,
    InhomogeneousError,
    combine,
    degree,
    dot,
    token_degree,
    word_token,
)
from .foundation import Bounds, Series, ValidationError
from .spaces import AlgebraSpec

# test hook: drops the degree sign of the o-bracket so the axiom suite has a mutant to catch
_CORRUPT = {"o_bracket": False}


def set_corruption(name: str, enabled: bool):
    if name not in _CORRUPT:
        raise KeyError(name)
    _CORRUPT[name] = enabled


def _shift_sum(spec, letters):
    return sum(spec.open.degrees[a] - 1 for a in letters)


def second_order(a: Element, first: Callable | None, second: Callable | None) -> Element:
    spec = a.spec
    raw = []
    for mono, coeff in a.terms.items():
        degs = [token_degree(spec, t) for t in mono]
        n = len(mono)
        if first is not None:
            passed = 0
            for i in range(n):
                for c, toks in first(spec, mono[i]):
                    sign = -1 if passed & 1 else 1
                    raw.append((sign * c * coeff, mono[:i] + toks + mono[i + 1:]))
                passed += degs[i]
        if second is not None:
            prefix = 0
            for i in range(n):
                between = 0
                for j in range(i + 1, n):
                    vals = second(spec, mono[i], mono[j])
                    if vals:
                        par = degs[i] * prefix + degs[j] * (prefix + between)
                        sign = -1 if par & 1 else 1
                        rest = mono[:i] + mono[i + 1:j] + mono[j + 1:]
                        for c, toks in vals:
                            raw.append((sign * c * coeff, toks + rest))
                    between += degs[j]
                prefix += degs[i]
    return combine(spec, raw)


# --- generator-level data -----------------------------------------------------

def _closed_pair(spec: AlgebraSpec, g, h):
    if g[0] or h[0]:
        return None
    v = spec.pairing.value(g[1], h[1])
    return [(v, ())] if v else None


def _co_first(spec: AlgebraSpec, g):
    if g[0]:
        return ()
    v = spec.delta_co.get(g[1])
    return [(v, (EMPTY_WORD,))] if v else ()


def split_word(spec: AlgebraSpec, word) -> list:
    """Delta'_o on a single raw cyclic word: list of (coeff, (token, token))."""
    word = tuple(word)
    n = len(word)
    out = []
    s = [spec.open.degrees[a] - 1 for a in word]
    for j in range(n):
        head, tail = sum(s[:j]), sum(s[j:])
        rot_par = head * tail
        for i in range(j):
            v = spec.pairing_prime.value(word[i], word[j])
            if not v:
                continue
            move_par = s[j] * (sum(s[j + 1:]) + sum(s[:i + 1]))
            outer = word[j + 1:] + word[:i]
            inner = word[i + 1:j]
            t1 = word_token(spec, outer)
            t2 = word_token(spec, inner)
            if t1 is None or t2 is None:
                continue
            # the new odd marker created by the cut travels past the outer word
            marker_par = 1 + sum(s[j + 1:]) + sum(s[:i])
            sign = -1 if (rot_par + move_par + marker_par) & 1 else 1
            out.append((sign * t1[0] * t2[0] * v, (t1[1], t2[1])))
    return out


def _o_prime_first(spec: AlgebraSpec, g):
    if not g[0]:
        return ()
    return split_word(spec, g[1])


def join_words(spec: AlgebraSpec, w1, w2) -> list:
    """The o-bracket of two raw cyclic words: list of (coeff, token)."""
    w1, w2 = tuple(w1), tuple(w2)
    s1 = [spec.open.degrees[a] - 1 for a in w1]
    s2 = [spec.open.degrees[b] - 1 for b in w2]
    out = []
    for i in range(len(w1)):
        # rotate w1 so that a_i is last
        par1 = sum(s1[:i + 1]) * sum(s1[i + 1:])
        for j in range(len(w2)):
            v = spec.pairing_double.value(w1[i], w2[j])
            if not v:
                continue
            # rotate w2 so that b_j is first
            par2 = sum(s2[:j]) * sum(s2[j:])
            joined = w1[i + 1:] + w1[:i] + w2[j + 1:] + w2[:j]
            t = word_token(spec, joined)
            if t is None:
                continue
            sign = -1 if (par1 + par2) & 1 else 1
            out.append((sign * t[0] * v, t[1]))
    return out


def _o_double_second(spec: AlgebraSpec, g, h):
    if not (g[0] and h[0]):
        return None
    # the o-bracket is the antibracket, and {a,b} = (-1)^|a| Delta(ab) on generators
    sign = -1 if token_degree(spec, g) & 1 and not _CORRUPT["o_bracket"] else 1
    return [(sign * c, (t,)) for c, t in join_words(spec, g[1], h[1])] or None


# --- public operators ------------------------------------------------------------

def delta_c(a: Element) -> Element:
    return second_order(a, None, _closed_pair)


def delta_o_prime(a: Element) -> Element:
    return second_order(a, _o_prime_first, None)


def delta_o_double(a: Element) -> Element:
    return second_order(a, None, _o_double_second)


def delta_o(a: Element) -> Element:
    return second_order(a, _o_prime_first, _o_double_second)


def delta_co_op(a: Element) -> Element:
    return second_order(a, _co_first, None)


def delta(a: Element) -> Element:
    """Unweighted Delta = Delta_c + Delta_o + Delta_co."""
    def first(spec, g):
        return list(_o_prime_first(spec, g)) + list(_co_first(spec, g))

    def second(spec, g, h):
        return _closed_pair(spec, g, h) or _o_double_second(spec, g, h)

    return second_order(a, first, second)


@dataclass(frozen=True)
class BVConfig:
    spec: AlgebraSpec
    weighted: bool = True


def delta_total(a: Element, cfg: BVConfig, bounds: Bounds = Bounds()) -> Series:
    """Delta_c + Delta_o at sqrt(hbar)^0 plus Delta_co at sqrt(hbar)^1 when weighted."""
    if a.spec is not cfg.spec:
        raise ValidationError("element and config use different specs")
    if not cfg.weighted:
        return Series.constant(delta(a), bounds)
    return Series({(0, 0): delta_c(a) + delta_o(a), (0, 1): delta_co_op(a)}, bounds)


_COMPONENTS = {
    "total": delta,
    "c": delta_c,
    "o": delta_o,
    "o_prime": delta_o_prime,
    "o_double": delta_o_double,
    "co": delta_co_op,
}


def antibracket(a: Element, b: Element, which: str = "total") -> Element:
    """{a,b} = (-1)^|a| D(ab) - (-1)^|a| D(a) b - a D(b) for the chosen component D."""
    op = _COMPONENTS[which]
    if a.is_zero() or b.is_zero():
        return Element.zero(a.spec)
    try:
        deg = degree(a)
    except InhomogeneousError:
        deg = 0
    if deg == "inhomogeneous":
        raise ValidationError("antibracket needs a homogeneous first argument")
    sign = -1 if deg & 1 else 1
    return (op(dot(a, b)) - dot(op(a), b)) * sign - dot(a, op(b))


def direct_o_bracket(a: Element, b: Element) -> Element:
    """Bilinear extension of the o-bracket to single-word elements (no closed factors)."""
    spec = a.spec
    raw = []
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if len(ma) != 1 or len(mb) != 1 or not ma[0][0] or not mb[0][0]:
                raise ValidationError("direct o-bracket needs single cyclic words")
            for c, t in join_words(spec, ma[0][1], mb[0][1]):
                raw.append((c * ca * cb, (t,)))
    return combine(spec, raw)


__all__ = [
    "BVConfig",
    "Fraction",
    "antibracket",
    "delta",
    "delta_c",
    "delta_co_op",
    "delta_o",
    "delta_o_double",
    "delta_o_prime",
    "delta_total",
    "direct_o_bracket",
    "join_words",
    "second_order",
    "set_corruption",
    "split_word",
]
