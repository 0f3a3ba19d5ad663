"""Index bookkeeping for open-closed surface types: stability, weights, degenerations, signs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .foundation import ValidationError, format_scalar, permutation_parity


class DomainError(ValidationError):
    """The operation is only defined on stable types."""


@dataclass(frozen=True, order=True)
class SurfaceType:
    """Genus g, b boundary components, n interior and m boundary punctures (unlabeled totals)."""

    g: int
    b: int
    n: int
    m: int

    def __post_init__(self):
        for name in ("g", "b", "n", "m"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValidationError(f"{name} must be a nonnegative integer, got {v!r}")

    @property
    def valid(self) -> bool:
        return self.b > 0 or self.m == 0

    def as_dict(self) -> dict:
        return {"g": self.g, "b": self.b, "n": self.n, "m": self.m}

    def __str__(self):
        return f"({self.g},{self.b},{self.n},{self.m})"


def _require_valid(t: SurfaceType):
    if not t.valid:
        raise ValidationError(f"type {t} has boundary punctures but no boundary")


def euler_char(t: SurfaceType) -> Fraction:
    _require_valid(t)
    return Fraction(2 - 2 * t.g - t.b - t.n) - Fraction(t.m, 2)


def is_stable(t: SurfaceType) -> bool:
    return euler_char(t) < 0


def excluded_by_list(t: SurfaceType) -> bool:
    """The enumerated list of unstable types, read literally."""
    _require_valid(t)
    g, b, n, m = t.g, t.b, t.n, t.m
    return (
        (g == 0 and b == 0 and n <= 2)
        or (g == 1 and b == 0 and n == 0)
        or (g == 0 and b == 1 and ((n <= 1 and m == 0) or (n == 0 and m <= 2)))
        or (g == 0 and b == 2 and m == 0 and n == 0)
    )


def _require_stable(t: SurfaceType):
    if not is_stable(t):
        raise DomainError(f"type {t} is not stable (chi = {format_scalar(euler_char(t))})")


def dimension(t: SurfaceType) -> int:
    _require_stable(t)
    return 6 * t.g - 6 + 2 * t.n + 3 * t.b + t.m


def p_value(t: SurfaceType) -> Fraction:
    return 1 - Fraction(t.m + t.n, 2)


def weights(t: SurfaceType) -> tuple:
    """(lambda exponent, sqrt(hbar) exponent) = (-2 chi, 2 (p - chi))."""
    _require_stable(t)
    chi = euler_char(t)
    lam = -2 * chi
    half = 2 * (p_value(t) - chi)
    return int(lam), int(half)


# --- boundary expansion -------------------------------------------------------------

UNARY = ("DeltaC", "DeltaOPrime", "DeltaODouble", "DeltaCo")
SPLITS = ("SplitC", "SplitO")
# sqrt(hbar) power carried by each operator in the quantum master equation
OPERATOR_HALF_HBAR = {"DeltaC": 2, "DeltaOPrime": 2, "DeltaODouble": 2, "DeltaCo": 3,
                      "SplitC": 0, "SplitO": 0}
# p(t) - p(argument)
P_SHIFT = {"DeltaC": Fraction(1), "DeltaOPrime": Fraction(1), "DeltaODouble": Fraction(1),
           "DeltaCo": Fraction(1, 2)}


@dataclass(frozen=True)
class BoundaryTerm:
    kind: str
    args: tuple
    coeff: Fraction

    def to_json(self) -> dict:
        return {"kind": self.kind, "args": [a.as_dict() for a in self.args],
                "coeff": format_scalar(self.coeff)}


def _ok(t) -> bool:
    return t is not None and t.valid and is_stable(t)


def _make(g, b, n, m):
    if min(g, b, n, m) < 0:
        return None
    return SurfaceType(g, b, n, m)


def boundary_expansion(t: SurfaceType) -> list:
    """Terms of the degeneration formula for dS on type t, ordered splits carrying -1/2 each."""
    _require_stable(t)
    g, b, n, m = t.g, t.b, t.n, t.m
    terms = []
    unary = [
        ("DeltaC", g >= 1, _make(g - 1, b, n + 2, m)),
        ("DeltaOPrime", b >= 2, _make(g, b - 1, n, m + 2)),
        ("DeltaODouble", g >= 1 and b >= 1, _make(g - 1, b + 1, n, m + 2)),
        ("DeltaCo", b >= 1, _make(g, b - 1, n + 1, m)),
    ]
    for kind, guard, arg in unary:
        if guard and _ok(arg):
            terms.append(BoundaryTerm(kind, (arg,), Fraction(-1)))
    half = Fraction(-1, 2)
    # closed splits: glue one interior puncture of each factor
    for g1 in range(g + 1):
        for b1 in range(b + 1):
            for n1 in range(1, n + 2):
                for m1 in range(m + 1):
                    t1 = _make(g1, b1, n1, m1)
                    t2 = _make(g - g1, b - b1, n + 2 - n1, m - m1)
                    if t2 is not None and t2.n >= 1 and _ok(t1) and _ok(t2):
                        terms.append(BoundaryTerm("SplitC", (t1, t2), half))
    # open splits: glue one boundary puncture of each factor, merging two boundaries
    for g1 in range(g + 1):
        for b1 in range(1, b + 1):
            for n1 in range(n + 1):
                for m1 in range(1, m + 2):
                    t1 = _make(g1, b1, n1, m1)
                    t2 = _make(g - g1, b + 1 - b1, n - n1, m + 2 - m1)
                    if t2 is not None and t2.b >= 1 and t2.m >= 1 and _ok(t1) and _ok(t2):
                        terms.append(BoundaryTerm("SplitO", (t1, t2), half))
    return terms


def canonical_terms(terms: list) -> list:
    """Display view: ordered split pairs merged into unordered ones with summed coefficients."""
    merged: dict = {}
    for term in terms:
        args = tuple(sorted(term.args)) if term.kind in SPLITS else term.args
        key = (term.kind, args)
        merged[key] = merged.get(key, Fraction(0)) + term.coeff
    return [BoundaryTerm(k, a, c) for (k, a), c in merged.items()]


def bookkeeping_check(t: SurfaceType) -> list:
    """Violated identities (chi preservation, p shifts, weight consistency) for every term of t."""
    violations = []
    chi = euler_char(t)
    p = p_value(t)
    lam, half = weights(t)
    for term in boundary_expansion(t):
        label = f"{term.kind} {' + '.join(map(str, term.args))}"
        for a in term.args:
            if not (a.valid and is_stable(a)):
                violations.append(f"{label}: argument {a} is not valid and stable")
        if violations:
            continue
        chis = sum((euler_char(a) for a in term.args), Fraction(0))
        if chis != chi:
            violations.append(f"{label}: chi {format_scalar(chis)} != {format_scalar(chi)}")
        ps = sum((p_value(a) for a in term.args), Fraction(0))
        expected = p - P_SHIFT[term.kind] if term.kind in P_SHIFT else p
        if ps != expected:
            violations.append(f"{label}: p {format_scalar(ps)} != {format_scalar(expected)}")
        wl = sum(weights(a)[0] for a in term.args)
        wh = sum(weights(a)[1] for a in term.args) + OPERATOR_HALF_HBAR[term.kind]
        if (wl, wh) != (lam, half):
            violations.append(f"{label}: weights ({wl},{wh}) != ({lam},{half})")
    return violations


def stable_types(max_dim: int) -> list:
    """All stable valid types of dimension at most max_dim."""
    out = []
    # 6g + 3b + 2n + m <= max_dim + 6 bounds every entry
    top = max_dim + 6
    for g in range(top // 6 + 1):
        for b in range((top - 6 * g) // 3 + 1):
            for n in range((top - 6 * g - 3 * b) // 2 + 1):
                for m in range(top - 6 * g - 3 * b - 2 * n + 1):
                    t = SurfaceType(g, b, n, m)
                    if t.valid and is_stable(t) and dimension(t) <= max_dim:
                        out.append(t)
    return out


# --- sign representation ------------------------------------------------------------

@dataclass(frozen=True)
class Relabeling:
    """Interior permutation, boundary permutation, cyclic offsets, boundary profile.

    ``boundary[j]`` is the old label of the boundary placed at position j and
    ``offsets[i]`` rotates the punctures of old boundary i.
    """

    interior: tuple
    boundary: tuple
    offsets: tuple
    profile: tuple

    def __post_init__(self):
        b = len(self.profile)
        if sorted(self.boundary) != list(range(b)):
            raise ValidationError(f"boundary permutation {self.boundary} does not match {b} boundaries")
        if sorted(self.interior) != list(range(len(self.interior))):
            raise ValidationError(f"interior permutation {self.interior} is not a permutation")
        if len(self.offsets) != b:
            raise ValidationError(f"{len(self.offsets)} offsets for {b} boundaries")
        if any(mi < 0 for mi in self.profile):
            raise ValidationError("boundary profile entries must be nonnegative")
        norm = []
        for r, mi in zip(self.offsets, self.profile):
            if mi == 0:
                if r:
                    raise ValidationError("nonzero offset on a boundary without punctures")
                norm.append(0)
            else:
                norm.append(r % mi)
        object.__setattr__(self, "offsets", tuple(norm))
        object.__setattr__(self, "interior", tuple(self.interior))
        object.__setattr__(self, "boundary", tuple(self.boundary))
        object.__setattr__(self, "profile", tuple(self.profile))

    def target_profile(self) -> tuple:
        return tuple(self.profile[i] for i in self.boundary)

    def then(self, other: Relabeling) -> Relabeling:
        """Apply self first, then other (other's profile must be self's target profile)."""
        if other.profile != self.target_profile():
            raise ValidationError("profiles do not compose")
        if len(other.interior) != len(self.interior):
            raise ValidationError("interior permutations act on different sets")
        boundary = tuple(self.boundary[j] for j in other.boundary)
        position = {old: j for j, old in enumerate(self.boundary)}
        offsets = tuple(self.offsets[i] + other.offsets[position[i]] for i in range(len(self.profile)))
        interior = tuple(self.interior[j] for j in other.interior)
        return Relabeling(interior, boundary, offsets, self.profile)


def rho_sign(r: Relabeling) -> int:
    par = 0
    for off, mi in zip(r.offsets, r.profile):
        par += off * (mi - 1)
    par += permutation_parity([mi - 1 for mi in r.profile], r.boundary)
    return -1 if par & 1 else 1


__all__ = [
    "BoundaryTerm", "DomainError", "Relabeling", "SurfaceType", "bookkeeping_check",
    "boundary_expansion", "canonical_terms", "dimension", "euler_char", "excluded_by_list",
    "is_stable", "p_value", "rho_sign", "stable_types", "weights",
]
