"""Randomized identity suite for the BV structure on A."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from .algebra import Element, degree, differential, dot, element_to_json
from .operators import (
    antibracket,
    delta,
    delta_c,
    delta_co_op,
    delta_o,
)
from .randomgen import GenParams, random_element, random_spec
from .spaces import spec_to_json, validate

OPS = {
    "d": differential,
    "delta_c": delta_c,
    "delta_o": delta_o,
    "delta_co": delta_co_op,
}


def _sign(par: int) -> int:
    return -1 if par & 1 else 1


def _commutator(A, B, x):
    # every operator here is odd, so the graded commutator is AB + BA
    return A(B(x)) + B(A(x))


def _identities(a: Element, b: Element, c: Element):
    """Yield (name, defect) pairs; a defect of 0 means the identity holds on these inputs."""
    spec = a.spec
    da, db = degree(a), degree(b)
    one = Element.one(spec)
    for name, op in OPS.items():
        if name != "d":
            yield f"{name}^2", op(op(a))
    yield "d^2", differential(differential(a))
    names = list(OPS)
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            yield f"[{x},{y}]", _commutator(OPS[x], OPS[y], a)
    for which in ("c", "o"):
        lhs = antibracket(a, dot(b, c), which)
        rhs = dot(antibracket(a, b, which), c) + dot(b, antibracket(a, c, which)) * _sign((da + 1) * db)
        yield f"leibniz_{which}", lhs - rhs
    yield "delta_co_derivation", (delta_co_op(dot(a, b)) - dot(delta_co_op(a), b)
                                  - dot(a, delta_co_op(b)) * _sign(da))
    yield "o_prime_bracket", antibracket(a, b, "o_prime")
    yield "antisymmetry", antibracket(a, b) + antibracket(b, a) * _sign((da + 1) * (db + 1))
    bc, ab, ac = antibracket(b, c), antibracket(a, b), antibracket(a, c)
    jac = antibracket(a, bc) - antibracket(ab, c) - antibracket(b, ac) * _sign((da + 1) * (db + 1))
    yield "jacobi", jac
    yield "delta_of_one", delta(one)


IDENTITY_NAMES = (
    "delta_c^2", "delta_o^2", "delta_co^2", "d^2",
    "[d,delta_c]", "[d,delta_o]", "[d,delta_co]", "[delta_c,delta_o]", "[delta_c,delta_co]",
    "[delta_o,delta_co]", "leibniz_c", "leibniz_o", "delta_co_derivation", "o_prime_bracket",
    "antisymmetry", "jacobi", "delta_of_one",
)


@dataclass(frozen=True)
class SuiteConfig:
    trials: int = 200
    seed: int = 0
    max_basis: int = 4
    degree_min: int = -3
    degree_max: int = 3
    word_max: int = 4
    max_factors: int = 3

    def params(self) -> GenParams:
        return GenParams(max_basis=self.max_basis, degree_min=self.degree_min,
                         degree_max=self.degree_max, max_word=self.word_max,
                         max_factors=self.max_factors)


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"ocbv-axioms:{seed}:{trial}")


def run_trial(cfg: SuiteConfig, trial: int):
    rng = trial_rng(cfg.seed, trial)
    p = cfg.params()
    spec = random_spec(rng, p)
    problems = validate(spec)
    if problems:
        raise AssertionError(f"generator produced an inadmissible spec: {problems}")
    a, b, c = (random_element(rng, spec, p) for _ in range(3))
    return spec, (a, b, c), list(_identities(a, b, c))


def _defect(name: str, elements) -> Element | None:
    for n, d in _identities(*elements):
        if n == name:
            return d
    return None


def shrink(name: str, elements) -> tuple:
    """Greedily drop monomials while the named identity keeps failing."""
    elements = list(elements)
    changed = True
    while changed:
        changed = False
        for pos, el in enumerate(elements):
            if len(el.terms) < 2:
                continue
            for mono in list(el.terms):
                smaller = Element(el.spec, {m: c for m, c in el.terms.items() if m != mono})
                trial = elements[:pos] + [smaller] + elements[pos + 1:]
                if _defect(name, trial):
                    elements = trial
                    changed = True
                    break
            if changed:
                break
    return tuple(elements)


def run_suite(cfg: SuiteConfig) -> dict:
    counts = {name: {"checked": 0, "failed": 0} for name in IDENTITY_NAMES}
    failures = []
    for t in range(cfg.trials):
        spec, elements, results = run_trial(cfg, t)
        for name, defect in results:
            counts[name]["checked"] += 1
            if defect:
                counts[name]["failed"] += 1
                failures.append((t, name, spec, elements, defect))
    first = None
    if failures:
        t, name, spec, elements, defect = failures[0]
        elements = shrink(name, elements)
        defect = _defect(name, elements)
        first = {
            "trial": t,
            "identity": name,
            "spec": spec_to_json(spec),
            "elements": [element_to_json(e) for e in elements],
            "defect": element_to_json(defect),
        }
    return {
        "config": asdict(cfg),
        "passed": not failures,
        "identities": counts,
        "first_failure": first,
    }


__all__ = ["IDENTITY_NAMES", "SuiteConfig", "run_suite", "run_trial", "shrink", "trial_rng"]
