import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from guarded.core import Base, Later, One, Prod, brute_force_solutions
from guarded.cms import CmsModel, FinMetricSpace, banach_iterate, iteration_bound, scale_delay
from guarded.finite import Mor
from guarded.suite import run_suite
from guarded.axioms import Budget

from .strategies import seeds

HALF = Fraction(1, 2)
RATES = st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(9, 10)])


def three_points():
    return FinMetricSpace.from_rows([[0, HALF, 1], [HALF, 0, HALF], [1, HALF, 0]])


@pytest.mark.parametrize("rows", [
    [[0, 1], [1]],
    [[1]],
    [[0, 2], [2, 0]],
    [[0, HALF], [1, 0]],
    [[0, 0], [0, 0]],
    [[0, Fraction(1, 4), 1], [Fraction(1, 4), 0, Fraction(1, 4)], [1, Fraction(1, 4), 0]],
])
def test_metric_validation(rows):
    with pytest.raises(ValueError):
        FinMetricSpace.from_rows(rows)


def test_scaling():
    x = three_points()
    once = scale_delay(x, HALF)
    assert once.dist[0][2] == HALF and once.dist[0][1] == Fraction(1, 4)
    twice = scale_delay(once, HALF)
    assert all(twice.dist[i][j] == x.dist[i][j] * HALF ** 2 for i in range(3) for j in range(3))


def test_later_object_is_scaled():
    m = CmsModel(Fraction(1, 3))
    x = Base(three_points())
    assert m.space(Later(x)).dist[0][2] == Fraction(1, 3)
    assert m.space(Later(Later(x))).dist[0][2] == Fraction(1, 9)


def test_rate_must_be_a_contraction():
    for r in (Fraction(0), Fraction(1), Fraction(3, 2)):
        with pytest.raises(ValueError):
            CmsModel(r)


def test_constant_on_two_points():
    m = CmsModel()
    x = Base(FinMetricSpace.discrete(2))
    f = Mor(Prod(Later(x), One()), x, (1, 1))
    run = banach_iterate(m, f)
    assert run.solution.table == (1,) and run.steps == 1
    assert brute_force_solutions(m, f) == [run.solution]


def test_non_expansive_check():
    m = CmsModel(HALF)
    x = Base(FinMetricSpace.from_rows([[0, HALF], [HALF, 0]]))
    # the delayed copy halves distances: copying the parameter is fine, swapping the state is not
    y = Base(FinMetricSpace.discrete(2))
    ok = Mor(Prod(Later(x), y), x, (0, 1, 0, 1))
    bad = Mor(Prod(Later(x), One()), x, (1, 0))
    assert m.is_morphism(ok) and not m.is_morphism(bad)
    with pytest.raises(ValueError):
        banach_iterate(m, bad)


@settings(max_examples=80, deadline=None)
@given(seeds, RATES)
def test_contraction_has_a_single_fixpoint(seed, r):
    m = CmsModel(r)
    rng = random.Random(seed)
    x, y = m.sample_object(rng), m.sample_object(rng)
    f = m.sample_hom(Prod(Later(x), y), x, rng)
    sols = brute_force_solutions(m, f)
    assert len(sols) == 1 and m.equal(sols[0], m.dagger(f))


@settings(max_examples=80, deadline=None)
@given(seeds, RATES)
def test_banach_bound_and_start_independence(seed, r):
    m = CmsModel(r)
    rng = random.Random(seed)
    x, y = m.sample_object(rng), m.sample_object(rng)
    f = m.sample_hom(Prod(Later(x), y), x, rng)
    n, ny = m.size(x), m.size(y)
    runs = [banach_iterate(m, f, tuple(rng.randrange(n) for _ in range(ny))) for _ in range(3)]
    runs.append(banach_iterate(m, f))
    assert all(run.steps <= run.bound for run in runs)
    assert len({run.solution.table for run in runs}) == 1


def test_iteration_bound_values():
    assert iteration_bound(HALF, HALF, Fraction(0)) == 0
    assert iteration_bound(HALF, None, Fraction(1)) == 0
    # r^k <= eps / d0: (1/2)^1 <= 1/2 -> k = 1
    assert iteration_bound(HALF, HALF, Fraction(1)) == 2
    assert iteration_bound(HALF, Fraction(1, 8), Fraction(1)) == 4
    assert iteration_bound(Fraction(9, 10), HALF, Fraction(1)) == 8


def test_suite_passes():
    m = CmsModel(Fraction(2, 3))
    report = run_suite(m, Budget(cases=60))
    assert report.passed, report.render()
