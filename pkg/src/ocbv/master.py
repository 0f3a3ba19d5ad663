"""Quantum and classical master equation residuals over truncated series."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Element, degree, differential, element_from_json, element_to_json
from .foundation import Bounds, ConvergenceError, Series, ValidationError, series_exp
from .operators import BVConfig, antibracket, delta, delta_c, delta_co_op, delta_o
from .spaces import AlgebraSpec


@dataclass(frozen=True)
class MasterSeries:
    """A candidate solution: degree-0 algebra elements keyed by (lambda, sqrt(hbar)) powers."""

    spec: AlgebraSpec
    series: Series = field(default_factory=Series)

    def __post_init__(self):
        for key, el in self.series.items():
            if not isinstance(el, Element) or el.spec is not self.spec:
                raise ValidationError(f"coefficient at {key} is not an element of this spec")
            deg = degree(el)
            if deg != 0:
                raise ValidationError(f"coefficient at {key} has degree {deg}, expected 0")

    @classmethod
    def from_terms(cls, spec: AlgebraSpec, terms: Mapping, bounds: Bounds = Bounds()):
        return cls(spec, Series(dict(terms), bounds))

    @property
    def bounds(self) -> Bounds:
        return self.series.bounds

    def lambda_order(self):
        """Smallest lambda exponent present, or None for S = 0."""
        keys = [k[0] for k, _ in self.series.items()]
        return min(keys) if keys else None


def _bracket_series(a: Series, b: Series, which: str) -> Series:
    out: dict = {}
    bounds = a.bounds
    for ka, va in a.items():
        for kb, vb in b.items():
            k = (ka[0] + kb[0], ka[1] + kb[1])
            if not bounds.admits(k):
                continue
            v = antibracket(va, vb, which)
            out[k] = out[k] + v if k in out else v
    return Series(out, bounds)


def _apply(s: Series, fn, lam: int = 0, half_hbar: int = 0) -> Series:
    return s.map(fn).shift(lam, half_hbar)


def _check(S: MasterSeries) -> MasterSeries:
    if not isinstance(S, MasterSeries):
        raise ValidationError("expected a MasterSeries")
    return S


def qme_residual(S: MasterSeries, cfg: BVConfig | None = None, bounds: Bounds | None = None) -> Series:
    """dS + hbar Delta S + 1/2 {S,S}, with Delta weighted as cfg says."""
    _check(S)
    cfg = cfg or BVConfig(S.spec)
    if cfg.spec is not S.spec:
        raise ValidationError("config and series use different specs")
    s = S.series if bounds is None else S.series.with_bounds(bounds)
    res = s.map(differential)
    if cfg.weighted:
        res = res + _apply(s, lambda v: delta_c(v) + delta_o(v), half_hbar=2)
        res = res + _apply(s, delta_co_op, half_hbar=3)
    else:
        res = res + _apply(s, delta, half_hbar=2)
    return res + _bracket_series(s, s, "total") * Fraction(1, 2)


def cme_residual(S: MasterSeries, bounds: Bounds | None = None) -> Series:
    """dS + 1/2 {S,S}."""
    _check(S)
    s = S.series if bounds is None else S.series.with_bounds(bounds)
    return s.map(differential) + _bracket_series(s, s, "total") * Fraction(1, 2)


def _wide_bounds(S: MasterSeries) -> Bounds:
    """Bounds wide enough that no sqrt(hbar) power of e^{S/hbar} up to lambda_max is lost."""
    lam_max = S.bounds.lambda_max
    hs = [k[1] for k, _ in S.series.items()] or [0]
    lo = min(0, lam_max * (min(hs) - 2))
    hi = max(0, lam_max * max(hs)) + 3
    return Bounds(lam_max, lo, hi)


def _restrict(s: Series, lam_max: int) -> Series:
    return Series({k: v for k, v in s.items() if k[0] <= lam_max}, s.bounds)


def exp_qme_check(S: MasterSeries, cfg: BVConfig | None = None) -> dict:
    """Evaluate (d + hbar Delta) e^{S/hbar} and compare with the QME residual.

    Both are computed over an internally widened sqrt(hbar) window so that
    the comparison is exact up to the caller's lambda order.
    """
    _check(S)
    cfg = cfg or BVConfig(S.spec)
    order = S.lambda_order()
    if order == 0:
        raise ConvergenceError("S has a lambda^0 term; e^{S/hbar} does not converge")
    wide = _wide_bounds(S)
    one = Element.one(S.spec)
    E = series_exp(S.series.with_bounds(wide), bounds=wide, divide_by_hbar=True, one=one)
    lhs = E.map(differential)
    if cfg.weighted:
        lhs = lhs + _apply(E, lambda v: delta_c(v) + delta_o(v), half_hbar=2)
        lhs = lhs + _apply(E, delta_co_op, half_hbar=3)
    else:
        lhs = lhs + _apply(E, delta, half_hbar=2)
    lhs = _restrict(lhs, S.bounds.lambda_max)
    qme = _restrict(qme_residual(S, cfg, bounds=wide), S.bounds.lambda_max)
    exp_ok, qme_ok = lhs.is_zero(), qme.is_zero()
    return {
        "exp_vanishes": exp_ok,
        "qme_vanishes": qme_ok,
        "agree": exp_ok == qme_ok and _lowest_lambda(lhs) == _lowest_lambda(qme),
        "lowest_exp": _lowest_lambda(lhs),
        "lowest_qme": _lowest_lambda(qme),
    }


def _lowest_lambda(s: Series):
    keys = [k[0] for k, _ in s.items()]
    return min(keys) if keys else None


def twisted_differential(S_c: Element, a: Element) -> Element:
    """d(a) + {S_c, a}_c for a closed-sector S_c."""
    if S_c.spec is not a.spec:
        raise ValidationError("elements use different specs")
    for mono in S_c.terms:
        if any(kind for kind, _ in mono):
            raise ValidationError("S_c must lie in the closed sector (no cyclic factors)")
    if S_c.is_zero():
        return differential(a)
    return differential(a) + antibracket(S_c, a, "c")


# --- reports and JSON ---------------------------------------------------------------

def residual_report(res: Series) -> dict:
    """Summary with the lowest nonvanishing key and its coefficient."""
    low = res.lowest_key()
    return {
        "vanishes": low is None,
        "nonzero_keys": [list(k) for k, _ in res.items()],
        "lowest_key": list(low) if low else None,
        "lowest_coefficient": element_to_json(res[low]) if low else None,
    }


def master_to_json(S: MasterSeries) -> dict:
    return {"terms": [{"lambda": k[0], "sqrt_hbar": k[1], "element": element_to_json(v)}
                      for k, v in S.series.items()]}


def master_from_json(spec: AlgebraSpec, doc: Mapping, bounds: Bounds = Bounds()) -> MasterSeries:
    try:
        entries = list(doc["terms"])
        out: dict = {}
        for t in entries:
            key = (int(t["lambda"]), int(t["sqrt_hbar"]))
            el = element_from_json(spec, t["element"])
            out[key] = out[key] + el if key in out else el
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed master series JSON ({exc})") from exc
    return MasterSeries(spec, Series(out, bounds))


def series_elements_to_json(s: Series) -> list:
    return [{"lambda": k[0], "sqrt_hbar": k[1], "element": element_to_json(v)} for k, v in s.items()]


__all__ = [
    "MasterSeries",
    "cme_residual",
    "exp_qme_check",
    "master_from_json",
    "master_to_json",
    "qme_residual",
    "residual_report",
    "series_elements_to_json",
    "twisted_differential",
]
