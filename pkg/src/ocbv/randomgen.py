"""Random admissible specs and random elements for the identity suite."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .algebra import Element, combine, cyclic_normalize, monomial_degree, token_degree
from .spaces import (
    CLOSED,
    DEFAULT_WINDOWS,
    OPEN_DOUBLE,
    OPEN_PRIME,
    AlgebraSpec,
    Differential,
    GradedBasis,
    PairingForm,
    chain_parity,
    symmetry_parity,
)


@dataclass(frozen=True)
class GenParams:
    max_basis: int = 4
    degree_min: int = -3
    degree_max: int = 3
    max_word: int = 4
    max_factors: int = 3
    max_terms: int = 2


def _degrees(rng: random.Random, size: int, windows: list, p: GenParams) -> list:
    """Uniform degrees, with partners for the given windows mixed in."""
    degs: list = []
    while len(degs) < size:
        if degs and rng.random() < 0.85:
            w = rng.choice(windows)
            cand = w - rng.choice(degs)
            if p.degree_min <= cand <= p.degree_max:
                degs.append(cand)
                continue
        degs.append(rng.randint(p.degree_min, p.degree_max))
    return degs


def _complex(rng: random.Random, degs: list) -> Differential:
    """d = P D0 P^-1 with D0 a random matching of pairs of adjacent degrees."""
    n = len(degs)
    free = list(range(n))
    rng.shuffle(free)
    d0: dict = {}
    used: set = set()
    for i in free:
        if i in used or rng.random() < 0.4:
            continue
        targets = [j for j in free if j not in used and j != i and degs[j] == degs[i] + 1]
        if targets:
            j = rng.choice(targets)
            d0[(i, j)] = Fraction(rng.choice([1, -1, 2]))
            used.update((i, j))
    # unipotent change of basis inside each degree block
    P = sympy.eye(n)
    for i in range(n):
        for j in range(n):
            if i < j and degs[i] == degs[j] and rng.random() < 0.5:
                P[i, j] = rng.choice([1, -1])
    D0 = sympy.zeros(n, n)
    for (i, j), c in d0.items():
        D0[j, i] = sympy.Rational(c)  # column i holds d(e_i)
    M = P * D0 * P.inv()
    return Differential({(i, j): Fraction(int(M[j, i].p), int(M[j, i].q))
                         for i in range(n) for j in range(n) if M[j, i] != 0})


def _random_solution(rng: random.Random, unknowns: list, rows: list) -> dict:
    if not unknowns:
        return {}
    if rows:
        A = sympy.Matrix(rows)
        basis = A.nullspace()
    else:
        basis = [sympy.eye(len(unknowns))[:, k] for k in range(len(unknowns))]
    vec = sympy.zeros(len(unknowns), 1)
    for b in basis:
        vec += rng.choice([-2, -1, 0, 1, 1, 2]) * b
    return {u: Fraction(int(vec[k].p), int(vec[k].q))
            for k, u in enumerate(unknowns) if vec[k] != 0}


def _form(rng: random.Random, kind: str, basis: GradedBasis, d: Differential) -> PairingForm:
    degs = basis.degrees
    n = len(degs)
    w = DEFAULT_WINDOWS[kind]
    unknowns = [(i, j) for i in range(n) for j in range(n) if degs[i] + degs[j] == w]
    col = {u: k for k, u in enumerate(unknowns)}
    rows = []
    for (i, j) in unknowns:
        if i <= j:
            row = [0] * len(unknowns)
            row[col[(j, i)]] += 1
            row[col[(i, j)]] -= -1 if symmetry_parity(kind, degs[i], degs[j]) else 1
            if any(row):
                rows.append(row)
    for a in range(n):
        for b in range(n):
            row = [sympy.Integer(0)] * len(unknowns)
            for k, c in d.image(a):
                if (k, b) in col:
                    row[col[(k, b)]] += sympy.Rational(c)
            sgn = -1 if chain_parity(kind, degs[a]) else 1
            for k, c in d.image(b):
                if (a, k) in col:
                    row[col[(a, k)]] += sgn * sympy.Rational(c)
            if any(row):
                rows.append(row)
    return PairingForm(kind, basis, _random_solution(rng, unknowns, rows))


def random_spec(rng: random.Random, p: GenParams = GenParams()) -> AlgebraSpec:
    nc = rng.randint(min(2, p.max_basis), p.max_basis)
    no = rng.randint(min(2, p.max_basis), p.max_basis)
    cdeg = _degrees(rng, nc, [-1], p)
    if 0 not in cdeg and rng.random() < 0.5:
        cdeg[rng.randrange(nc)] = 0
    odeg = _degrees(rng, no, [2, 0], p)
    closed = GradedBasis(tuple(f"x{i}" for i in range(nc)), tuple(cdeg))
    opened = GradedBasis(tuple(f"a{i}" for i in range(no)), tuple(odeg))
    dc = _complex(rng, cdeg)
    do = _complex(rng, odeg)
    zeros = [i for i in range(nc) if cdeg[i] == 0]
    rows = []
    for a in range(nc):
        row = [sympy.Integer(0)] * len(zeros)
        for k, c in dc.image(a):
            if k in zeros:
                row[zeros.index(k)] += sympy.Rational(c)
        if any(row):
            rows.append(row)
    delta_co = _random_solution(rng, zeros, rows)
    return AlgebraSpec(
        closed=closed,
        open=opened,
        d_closed=dc,
        d_open=do,
        pairing=_form(rng, CLOSED, closed, dc),
        pairing_prime=_form(rng, OPEN_PRIME, opened, do),
        pairing_double=_form(rng, OPEN_DOUBLE, opened, do),
        delta_co=delta_co,
    )


def _weighted(spec: AlgebraSpec, forms) -> list:
    """Basis indices, repeated so that paired vectors are drawn more often."""
    out = []
    for i in range(len(forms[0].basis)):
        hits = sum(1 for f in forms for (a, b) in f.entries if i in (a, b))
        out.extend([i] * (1 + 3 * min(hits, 1)))
    return out


def random_monomial(rng: random.Random, spec: AlgebraSpec, p: GenParams = GenParams()):
    """A raw token list (unnormalized) with at most ``max_factors`` factors."""
    closed = _weighted(spec, [spec.pairing]) + [i for i in spec.delta_co for _ in range(2)]
    letters = _weighted(spec, [spec.pairing_prime, spec.pairing_double])
    toks = []
    seeds = [f for f in (spec.pairing, spec.pairing_prime, spec.pairing_double) if f.entries]
    if seeds and p.max_factors >= 2 and rng.random() < 0.5:
        form = rng.choice(seeds)
        i, j = rng.choice(sorted(form.entries))
        if form is spec.pairing:
            toks += [(0, i), (0, j)]
        elif form is spec.pairing_prime:
            extra = tuple(rng.choice(letters) for _ in range(rng.randint(0, p.max_word - 2)))
            res = cyclic_normalize(spec, (i,) + extra + (j,))
            if res is not None:
                toks.append((1, res[1]))
        else:
            for x in (i, j):
                extra = tuple(rng.choice(letters) for _ in range(rng.randint(0, p.max_word - 1)))
                res = cyclic_normalize(spec, (x,) + extra)
                if res is not None:
                    toks.append((1, res[1]))
    for _ in range(rng.randint(0 if toks else 1, max(0, p.max_factors - len(toks)))):
        if closed and (rng.random() < 0.45 or not letters):
            toks.append((0, rng.choice(closed)))
        else:
            length = rng.choice([0] + list(range(1, p.max_word + 1)) * 2) if letters else 0
            word = tuple(rng.choice(letters) for _ in range(length))
            res = cyclic_normalize(spec, word)
            if res is not None:
                toks.append((1, res[1]))
    return toks


def random_element(rng: random.Random, spec: AlgebraSpec, p: GenParams = GenParams(),
                   homogeneous: bool = True, nonzero: bool = True) -> Element:
    for _attempt in range(50):
        first = random_monomial(rng, spec, p)
        deg = sum(token_degree(spec, t) for t in first)
        raw = [(Fraction(rng.choice([-3, -2, -1, 1, 2, 3])), first)]
        for _ in range(rng.randint(0, p.max_terms - 1)):
            for _try in range(20):
                m = random_monomial(rng, spec, p)
                if not homogeneous or sum(token_degree(spec, t) for t in m) == deg:
                    raw.append((Fraction(rng.choice([-2, -1, 1, 2])), m))
                    break
        el = combine(spec, raw)
        if el or not nonzero:
            return el
    return Element.one(spec)


def random_paired_spec(rng: random.Random, max_dim: int = 3, differential: bool = True,
                       tries: int = 100) -> AlgebraSpec:
    """An open-only spec whose open_double pairing is nondegenerate (dimension <= max_dim)."""
    from .spaces import is_nondegenerate

    for _ in range(tries):
        n = rng.randint(1, max_dim)
        degs: list = []
        while len(degs) < n:
            if n - len(degs) >= 2 and rng.random() < 0.7:
                # even degrees give odd shifted letters, which degree-0 words need
                d = rng.choice([-2, 0, 2, 2, -1, 1, 3])
                degs += [d, -d]
            else:
                degs.append(0)
        rng.shuffle(degs)
        opened = GradedBasis(tuple(f"a{i}" for i in range(n)), tuple(degs))
        do = _complex(rng, degs) if differential else Differential({})
        form = _form(rng, OPEN_DOUBLE, opened, do)
        if all(is_nondegenerate(form).values()):
            return AlgebraSpec(
                closed=GradedBasis((), ()),
                open=opened,
                d_closed=Differential({}),
                d_open=do,
                pairing=PairingForm(CLOSED, GradedBasis((), ()), {}),
                pairing_prime=PairingForm(OPEN_PRIME, opened, {}),
                pairing_double=form,
                delta_co={},
            )
    raise RuntimeError("no nondegenerate pairing found")


def random_cyclic_terms(rng: random.Random, spec: AlgebraSpec, max_arity: int = 4,
                        density: float = 0.5) -> dict:
    """Arity -> raw (coeff, tokens) lists of degree-0 cyclic words with arity + 1 letters."""
    out: dict = {}
    n = len(spec.open)
    for k in range(2, max_arity + 1):
        raw = []
        seen = set()
        for w in itertools.product(range(n), repeat=k + 1):
            if 1 + sum(spec.open.degrees[a] - 1 for a in w) != 0:
                continue
            res = cyclic_normalize(spec, w)
            if res is None or res[1] in seen:
                continue
            seen.add(res[1])
            if rng.random() < density:
                raw.append((Fraction(rng.choice([-2, -1, 1, 1, 2, 3])), [(1, res[1])]))
        if raw:
            out[k] = raw
    return out


__all__ = [
    "GenParams",
    "monomial_degree",
    "random_cyclic_terms",
    "random_element",
    "random_monomial",
    "random_paired_spec",
    "random_spec",
]
