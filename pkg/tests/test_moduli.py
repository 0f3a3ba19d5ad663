import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocbv.foundation import ValidationError
from ocbv.moduli import (
    DomainError,
    Relabeling,
    SurfaceType,
    bookkeeping_check,
    boundary_expansion,
    canonical_terms,
    dimension,
    euler_char,
    excluded_by_list,
    is_stable,
    p_value,
    rho_sign,
    stable_types,
    weights,
)

T = SurfaceType


@pytest.mark.parametrize("t, chi", [(T(1, 0, 1, 0), -1), (T(0, 1, 0, 3), Fraction(-1, 2)),
                                    (T(0, 0, 0, 0), 2)])
def test_euler_char(t, chi):
    assert euler_char(t) == chi


@pytest.mark.parametrize("t, stable", [(T(0, 0, 2, 0), False), (T(0, 2, 0, 0), False),
                                       (T(0, 1, 0, 3), True), (T(1, 0, 0, 0), False)])
def test_stability(t, stable):
    assert is_stable(t) is stable


@pytest.mark.parametrize("t, dim", [(T(0, 1, 0, 3), 0), (T(0, 1, 0, 4), 1), (T(0, 0, 3, 0), 0)])
def test_dimension(t, dim):
    assert dimension(t) == dim


def test_invalid_and_unstable_inputs():
    with pytest.raises(ValidationError):
        euler_char(T(0, 0, 0, 2))
    with pytest.raises(ValidationError):
        T(-1, 0, 0, 0)
    with pytest.raises(DomainError):
        dimension(T(0, 0, 2, 0))
    with pytest.raises(DomainError):
        weights(T(0, 2, 0, 0))


@pytest.mark.parametrize("n", range(3, 8))
def test_sphere_weights(n):
    assert weights(T(0, 0, n, 0)) == (2 * n - 4, n - 2)


@pytest.mark.parametrize("m", range(3, 8))
def test_disk_weights(m):
    assert weights(T(0, 1, 0, m)) == (m - 2, 0)


def test_torus_weight():
    assert weights(T(1, 0, 1, 0)) == (2, 3)


def test_weight_closed_form():
    for t in stable_types(8):
        assert weights(t)[1] == 4 * t.g - 2 + 2 * t.b + t.n


def test_stability_matches_excluded_list():
    for g, b, n, m in itertools.product(range(5), range(5), range(9), range(9)):
        t = T(g, b, n, m)
        if t.valid:
            assert is_stable(t) == (not excluded_by_list(t)), t


def test_disk_with_four_punctures():
    terms = boundary_expansion(T(0, 1, 0, 4))
    assert [(x.kind, x.args, x.coeff) for x in terms] == [
        ("SplitO", (T(0, 1, 0, 3), T(0, 1, 0, 3)), Fraction(-1, 2))]


def test_torus_with_one_puncture():
    terms = boundary_expansion(T(1, 0, 1, 0))
    assert [(x.kind, x.args, x.coeff) for x in terms] == [("DeltaC", (T(0, 0, 3, 0),), -1)]


def test_dimension_zero_types_have_empty_expansion():
    assert boundary_expansion(T(0, 1, 1, 1)) == []
    for t in stable_types(8):
        if dimension(t) == 0:
            assert boundary_expansion(t) == [], t


def test_arguments_are_stable_and_valid():
    for t in stable_types(8):
        for term in boundary_expansion(t):
            assert all(a.valid and is_stable(a) for a in term.args)


def test_ordered_splits_merge_in_canonical_view():
    t = T(0, 1, 1, 4)
    ordered = [x for x in boundary_expansion(t) if x.kind == "SplitO"]
    merged = [x for x in canonical_terms(boundary_expansion(t)) if x.kind == "SplitO"]
    assert sum(x.coeff for x in ordered) == sum(x.coeff for x in merged)
    assert len(merged) < len(ordered)
    assert {x.coeff for x in merged} == {Fraction(-1)}


def test_p_value_examples():
    assert p_value(T(1, 1, 0, 0)) - p_value(T(1, 0, 1, 0)) == Fraction(1, 2)
    assert p_value(T(0, 1, 0, 3)) * 2 == p_value(T(0, 1, 0, 4)) == -1


def test_euler_and_p_relations_hold_everywhere():
    for t in stable_types(8):
        assert not [v for v in bookkeeping_check(t) if "weights" not in v], t


def test_co_weight_mismatch_is_reported():
    violations = bookkeeping_check(T(1, 2, 1, 0))
    assert violations == ["DeltaCo (1,1,2,0): weights (6,9) != (6,7)"]
    assert bookkeeping_check(T(1, 0, 1, 0)) == []
    assert bookkeeping_check(T(0, 1, 0, 4)) == []


def test_stable_type_census():
    types = stable_types(8)
    assert len(types) == 105
    bad = [t for t in types if bookkeeping_check(t)]
    assert len(bad) == 51
    assert all(v.startswith("DeltaCo") for t in bad for v in bookkeeping_check(t))


# --- rho ---------------------------------------------------------------------------

def test_rho_generators():
    assert rho_sign(Relabeling((), (0,), (1,), (3,))) == 1
    assert rho_sign(Relabeling((), (0,), (1,), (2,))) == -1
    assert rho_sign(Relabeling((), (1, 0), (0, 0), (2, 2))) == -1
    assert rho_sign(Relabeling((1, 0, 2), (0,), (0,), (1,))) == 1
    assert rho_sign(Relabeling((), (0,), (0,), (0,))) == 1


def test_relabeling_validation():
    with pytest.raises(ValidationError):
        Relabeling((), (0, 0), (0, 0), (1, 1))
    with pytest.raises(ValidationError):
        Relabeling((), (0,), (1,), (0,))
    with pytest.raises(ValidationError):
        Relabeling((0, 0), (0,), (0,), (1,))
    assert Relabeling((), (0,), (5,), (3,)).offsets == (2,)


def _random_relabeling(rng, profile, n):
    interior = list(range(n))
    rng.shuffle(interior)
    boundary = list(range(len(profile)))
    rng.shuffle(boundary)
    offsets = [rng.randrange(mi) if mi else 0 for mi in profile]
    return Relabeling(tuple(interior), tuple(boundary), tuple(offsets), tuple(profile))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_rho_is_multiplicative(seed):
    rng = random.Random(seed)
    profile = [rng.randint(0, 4) for _ in range(rng.randint(1, 4))]
    n = rng.randint(0, 3)
    r1 = _random_relabeling(rng, profile, n)
    r2 = _random_relabeling(rng, list(r1.target_profile()), n)
    assert rho_sign(r1.then(r2)) == rho_sign(r1) * rho_sign(r2)


def test_composition_needs_matching_profiles():
    r = Relabeling((), (1, 0), (0, 0), (1, 2))
    with pytest.raises(ValidationError):
        r.then(Relabeling((), (0, 1), (0, 0), (1, 2)))
