"""Exact scalars, Koszul signs and truncated Laurent series in lambda and sqrt(hbar)."""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


class ValidationError(ValueError):
    """Raised when an input violates a structural invariant."""


class ConvergenceError(ValueError):
    pass


def scalar(value: Any) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational literal: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational literal: {value!r}") from exc
    raise ValidationError(f"not a rational literal: {value!r}")


def format_scalar(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --- Koszul signs ---------------------------------------------------------

def permutation_parity(degrees: Sequence[int], order: Sequence[int]) -> int:
    """Parity (0 or 1) of the Koszul sign for rearranging factors.

    ``degrees[i]`` is the degree of the i-th input factor and ``order`` lists
    input positions in their output order.
    """
    parity = 0
    n = len(order)
    for p in range(n):
        dp = degrees[order[p]] & 1
        if not dp:
            continue
        ip = order[p]
        for q in range(p + 1, n):
            iq = order[q]
            if iq < ip and degrees[iq] & 1:
                parity ^= 1
    return parity


@dataclass(frozen=True)
class SignedPermutation:
    """A rearrangement of graded symbols: ``source`` reordered into ``target``."""

    source: tuple
    target: tuple
    degrees: Mapping[Hashable, int]

    def __post_init__(self):
        if len(set(self.source)) != len(self.source):
            raise ValidationError(f"repeated index in {self.source!r}")
        if sorted(map(repr, self.source)) != sorted(map(repr, self.target)) or len(
            self.source
        ) != len(self.target):
            raise ValidationError(f"{self.target!r} is not a permutation of {self.source!r}")
        missing = [s for s in self.source if s not in self.degrees]
        if missing:
            raise ValidationError(f"no degree given for {missing!r}")


def koszul_sign(perm: SignedPermutation) -> Fraction:
    position = {s: i for i, s in enumerate(perm.source)}
    degrees = [perm.degrees[s] for s in perm.source]
    order = [position[s] for s in perm.target]
    return Fraction(-1 if permutation_parity(degrees, order) else 1)


# --- truncated series -----------------------------------------------------

Key = tuple  # (lambda_exp, half_hbar_exp)


@dataclass(frozen=True)
class Bounds:
    lambda_max: int = 6
    half_hbar_min: int = -6
    half_hbar_max: int = 6

    def __post_init__(self):
        if self.lambda_max < 0:
            raise ValidationError("lambda_max must be nonnegative")
        if self.half_hbar_min > self.half_hbar_max:
            raise ValidationError("empty sqrt(hbar) window")

    def admits(self, key: Key) -> bool:
        lam, h = key
        return 0 <= lam <= self.lambda_max and self.half_hbar_min <= h <= self.half_hbar_max


def _nonzero(value) -> bool:
    return bool(value)


@dataclass(frozen=True)
class Series:
    """Finite table of coefficients indexed by (power of lambda, power of sqrt(hbar)).

    Coefficients are Fractions or algebra elements; anything outside ``bounds``
    is dropped on construction.
    """

    coeffs: Mapping[Key, Any] = field(default_factory=dict)
    bounds: Bounds = field(default_factory=Bounds)

    def __post_init__(self):
        clean = {}
        for (lam, h), v in self.coeffs.items():
            if lam < 0:
                raise ValidationError(f"negative lambda exponent {lam}")
            if self.bounds.admits((lam, h)) and _nonzero(v):
                clean[(lam, h)] = v
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def constant(cls, value, bounds: Bounds = Bounds()) -> Series:
        return cls({(0, 0): value}, bounds)

    @classmethod
    def monomial(cls, value, lam: int = 0, half_hbar: int = 0, bounds: Bounds = Bounds()):
        return cls({(lam, half_hbar): value}, bounds)

    def __getitem__(self, key: Key):
        return self.coeffs.get(key)

    def items(self):
        return self.coeffs.items()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def lowest_key(self):
        return min(self.coeffs) if self.coeffs else None

    def map(self, fn: Callable[[Any], Any]) -> Series:
        return Series({k: fn(v) for k, v in self.coeffs.items()}, self.bounds)

    def shift(self, lam: int = 0, half_hbar: int = 0, bounds: Bounds | None = None) -> Series:
        """Multiply by lambda**lam * sqrt(hbar)**half_hbar."""
        return Series(
            {(k[0] + lam, k[1] + half_hbar): v for k, v in self.coeffs.items()},
            bounds or self.bounds,
        )

    def with_bounds(self, bounds: Bounds) -> Series:
        return Series(self.coeffs, bounds)

    def __add__(self, other):
        return series_combine(self, other, "add")

    def __sub__(self, other):
        return series_combine(self, other.map(lambda v: -v), "add")

    def __neg__(self):
        return self.map(lambda v: -v)

    def __mul__(self, other):
        if isinstance(other, Series):
            return series_combine(self, other, "multiply")
        return self.map(lambda v: v * other)

    def __rmul__(self, other):
        return self.map(lambda v: other * v)


def series_combine(a: Series, b: Series, mode: str) -> Series:
    if a.bounds != b.bounds:
        raise ValidationError(f"incompatible truncation bounds {a.bounds} and {b.bounds}")
    bounds = a.bounds
    out: dict = {}
    if mode == "add":
        out = dict(a.coeffs)
        for k, v in b.coeffs.items():
            out[k] = out[k] + v if k in out else v
    elif mode == "multiply":
        for ka, va in a.coeffs.items():
            for kb, vb in b.coeffs.items():
                k = (ka[0] + kb[0], ka[1] + kb[1])
                if not bounds.admits(k):
                    continue
                prod = va * vb
                out[k] = out[k] + prod if k in out else prod
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Series(out, bounds)


def series_exp(s: Series, bounds: Bounds | None = None, divide_by_hbar: bool = False,
               one=Fraction(1)) -> Series:
    """Truncated exponential; ``one`` is the unit of the coefficient ring.

    With ``divide_by_hbar`` the argument is s/hbar, so sqrt(hbar) exponents
    drop by two before exponentiating.
    """
    bounds = bounds or s.bounds
    arg = s.shift(half_hbar=-2 if divide_by_hbar else 0, bounds=bounds)
    for lam, _ in s.coeffs:
        if lam == 0:
            raise ConvergenceError("exponential not lambda-adically convergent")
    result = Series.constant(one, bounds)
    term = Series.constant(one, bounds)
    for n in range(1, bounds.lambda_max + 1):
        term = (term * arg) * Fraction(1, n)
        if term.is_zero():
            break
        result = result + term
    return result


def series_to_json(s: Series, encode: Callable[[Any], Any] = format_scalar) -> list:
    return [{"lambda": k[0], "sqrt_hbar": k[1], "value": encode(v)} for k, v in s.items()]


def series_from_json(data: Iterable[Mapping], bounds: Bounds = Bounds(),
                     decode: Callable[[Any], Any] = scalar) -> Series:
    out: dict = {}
    for entry in data:
        key = (int(entry["lambda"]), int(entry["sqrt_hbar"]))
        v = decode(entry["value"])
        out[key] = out[key] + v if key in out else v
    return Series(out, bounds)
