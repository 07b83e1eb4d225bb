"""Acceptance criteria, one test each, every test printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import sys
import time
from fractions import Fraction

import pytest

from guarded.axioms import (
    Budget,
    case_rng,
    check_composition_identity,
    check_double_dagger_identity,
    check_fixpoint_identity,
    check_parameter_identity,
    check_point,
    check_round_trips,
    check_trace_axioms,
    check_uniformity,
)
from guarded.cli import WORKED_LEAVES, demo_results
from guarded.cms import CmsModel, banach_iterate
from guarded.core import Later, Prod, brute_force_solutions, trace_from_dagger
from guarded.cpo import CpoModel, kleene_dagger
from guarded.ctree import CtreeModel
from guarded.finite import TrivialModel
from guarded.fixtures import two_chain_fixture
from guarded.presheaf import PresheafModel, Site, dagger_chain, dagger_via_exponentials
from guarded.suite import point_objects

SEED = 0
# hom(|>X x Y, X) summed over all X, Y with stages of size <= 2, for N = 0 and N = 1;
# counted independently by scripts/count_chain_homs.py
CHAIN_HOMS = 11 + 437


def conway_models():
    return [
        PresheafModel(Site.chain(3)),
        CpoModel(max_size=3, max_height=3),
        CmsModel(Fraction(1, 2), max_size=4),
        CtreeModel(),
    ]


def all_models():
    return [
        TrivialModel(),
        PresheafModel(Site.chain(3)),
        PresheafModel(Site.vee(), delay="limit"),
        CpoModel(),
        CmsModel(Fraction(1, 2), max_size=4),
        CtreeModel(),
    ]


def announce(capsys, name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


# -- criteria ------------------------------------------------------------------------

def worked_example():
    start = time.perf_counter()
    rows = demo_results()
    elapsed = time.perf_counter() - start
    spine = {r["check"].split()[0]: r["actual"] for r in rows if "spine" in r["check"]}
    ok = all(spine[x] == " ".join(want) for x, want in WORKED_LEAVES.items()) and elapsed < 1
    ok = ok and all(r["match"] for r in rows)
    return ok, f"x1 = ({spine['x1']}), x2 = ({spine['x2']}), {elapsed:.3f}s"


def uniqueness_oracle():
    start = time.perf_counter()
    total = mismatches = 0
    for top in (0, 1):
        m = PresheafModel(Site.chain(top), max_size=2)
        pool = m.objects()
        for x in pool:
            for y in pool:
                for f in m.hom(Prod(Later(x), y), x):
                    sols = brute_force_solutions(m, f)
                    total += 1
                    if len(sols) != 1 or not m.equal(sols[0], dagger_chain(m, f)):
                        mismatches += 1
    elapsed = time.perf_counter() - start
    ok = total == CHAIN_HOMS and mismatches == 0 and elapsed < 120
    return ok, f"{total} morphisms, {mismatches} mismatches, {elapsed:.1f}s"


CONWAY = (
    ("fixpoint", check_fixpoint_identity),
    ("parameter", check_parameter_identity),
    ("composition", check_composition_identity),
    ("double-dagger", check_double_dagger_identity),
    ("uniformity", check_uniformity),
)


def conway_suite(cases=1000):
    start = time.perf_counter()
    budget = Budget(cases=cases, seed=SEED)
    ok, counts = True, []
    for m in conway_models():
        for name, check in CONWAY:
            r = check(m, m.dagger, budget)
            ok = ok and r.passed and r.cases >= cases
            counts.append(r.cases)
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 300
    return ok, f"{len(counts)} identity runs, min cases {min(counts)}, {elapsed:.1f}s"


def trace_suite(cases=500):
    budget = Budget(cases=cases, seed=SEED)
    ok, least, runs = True, None, 0
    for m in all_models():
        tr = trace_from_dagger(m, m.dagger)
        for r in check_trace_axioms(m, tr, budget).children + check_round_trips(m, m.dagger, budget).children:
            ok = ok and r.passed and r.cases >= cases
            least = r.cases if least is None else min(least, r.cases)
            runs += 1
    return ok, f"{runs} runs over {len(all_models())} models, min cases {least}"


def cpo_counterexample():
    m = CpoModel()
    f = two_chain_fixture()
    sols = sorted(list(s.table) for s in brute_force_solutions(m, f))
    least = list(kleene_dagger(m, f).table)
    return sols == [[0], [1]] and least == [0], f"solutions {sols}, kleene {least}"


def exponential_bridge(per_level=100):
    total = bad = 0
    for top in (0, 1, 2):
        m = PresheafModel(Site.chain(top), max_size=2)
        d = dagger_via_exponentials(m)
        for i in range(per_level):
            rng = case_rng(SEED, f"exponentials-{top}", i)
            x, y = m.sample_object(rng), m.sample_object(rng)
            f = m.sample_hom(Prod(Later(x), y), x, rng)
            total += 1
            bad += not m.equal(d(f), dagger_chain(m, f))
    return total >= 200 and bad == 0, f"{total} cases, {bad} disagreements"


def banach_termination(cases=1000):
    over = moved = 0
    for r in (Fraction(1, 2), Fraction(1, 3), Fraction(9, 10)):
        m = CmsModel(r, max_size=4)
        for i in range(cases // 3 + 1):
            rng = case_rng(SEED, f"banach-{r}", i)
            x, y = m.sample_object(rng), m.sample_object(rng)
            f = m.sample_hom(Prod(Later(x), y), x, rng)
            starts = set()
            while len(starts) < min(3, m.size(x) ** m.size(y)):
                starts.add(tuple(rng.randrange(m.size(x)) for _ in range(m.size(y))))
            runs = [banach_iterate(m, f, s) for s in starts]
            over += sum(run.steps > run.bound for run in runs)
            moved += len({run.solution.table for run in runs}) != 1
    return over == 0 and moved == 0, f"{3 * (cases // 3 + 1)} maps, {over} over bound, {moved} start-dependent"


def derived_point(count=50):
    ok, sizes = True, []
    for m in all_models() + [CpoModel("identity")]:
        objs = point_objects(m, Budget(seed=SEED), count)
        r = check_point(m, m.dagger, objs, SEED)
        ok = ok and r.passed and r.cases >= count
        sizes.append(r.cases)
    return ok, f"{len(sizes)} models, min {min(sizes)} objects each"


CRITERIA = (
    ("worked example", worked_example),
    ("uniqueness oracle", uniqueness_oracle),
    ("conway + uniformity", conway_suite),
    ("trace axioms + round trips", trace_suite),
    ("cpo counterexample", cpo_counterexample),
    ("exponential bridge", exponential_bridge),
    ("banach termination", banach_termination),
    ("derived point", derived_point),
)


@pytest.mark.parametrize("name, criterion", CRITERIA, ids=[c[0].replace(" ", "-") for c in CRITERIA])
def test_criterion(name, criterion, capsys):
    ok, detail = criterion()
    announce(capsys, name, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for name, criterion in CRITERIA:
        ok, detail = criterion()
        announce(None, name, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
