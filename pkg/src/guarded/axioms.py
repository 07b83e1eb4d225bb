"""Executable axioms: cartesian structure, Conway identities, uniformity,
trace axioms, round trips and the derived point.

A law names some object variables and some morphism slots whose types
depend on those objects, plus an equation between two composites.  Cases
are either sampled (one seeded generator per case index, so any case can be
replayed alone) or enumerated exhaustively over the model's object pool and
hom-sets.  Quasi-equations (uniformity) additionally search for premise
witnesses.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator

from .core import (
    CategoryModel,
    Later,
    One,
    Prod,
    brute_force_solutions,
    dagger_from_trace,
    derive_point_q,
    trace_from_dagger,
    unfold,
)
from .ctree import elements


@dataclass(frozen=True)
class Budget:
    cases: int = 200
    seed: int = 0
    exhaustive: bool = False
    max_witnesses: int = 16
    max_tries: int = 50
    # exhaustive mode: laws with many object variables use objects of at most this many points
    wide_pool: int = 2
    wide_arity: int = 4


@dataclass
class Failure:
    index: int
    witness: dict
    recheck: Callable[[], bool] = field(repr=False, compare=False)

    def to_dict(self) -> dict:
        return {"case": self.index, **self.witness}


@dataclass
class AxiomReport:
    axiom: str
    model: str
    mode: str
    seed: int
    cases: int = 0
    vacuous: int = 0
    failures: list[Failure] = field(default_factory=list)
    children: list[AxiomReport] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures and all(c.passed for c in self.children)

    @property
    def total_cases(self) -> int:
        return self.cases + sum(c.total_cases for c in self.children)

    def to_dict(self) -> dict:
        out = {
            "axiom": self.axiom,
            "model": self.model,
            "mode": self.mode,
            "seed": self.seed,
            "cases": self.cases,
            "vacuous": self.vacuous,
            "passed": self.passed,
            "failures": [f.to_dict() for f in self.failures],
        }
        if self.note:
            out["note"] = self.note
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def rows(self, indent: int = 0) -> list[str]:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f" vacuous={self.vacuous}" if self.vacuous else ""
        extra += f" ({self.note})" if self.note else ""
        line = f"{'  ' * indent}{self.axiom:<{34 - 2 * indent}} {verdict:<5} cases={self.cases}{extra}"
        out = [line]
        for f in self.failures[:3]:
            out.append(f"{'  ' * indent}  witness #{f.index}: {json.dumps(f.witness, default=str)[:400]}")
        for c in self.children:
            out.extend(c.rows(indent + 1))
        return out

    def render(self) -> str:
        return "\n".join(self.rows())


def case_rng(seed: int, name: str, index: int) -> random.Random:
    return random.Random(f"{seed}/{name}/{index}")


# ---------------------------------------------------------------------------
# laws


Slot = tuple[str, Callable[[dict], tuple]]


@dataclass
class Law:
    """``objects`` are variable names; each slot maps the objects to ``(src, dst)``."""

    name: str
    objects: tuple[str, ...]
    slots: tuple[Slot, ...]
    sides: Callable[..., tuple[Any, Any]]
    fixed: dict = field(default_factory=dict)


def _sample_case(model: CategoryModel, law: Law, rng, tries: int):
    for _ in range(tries):
        objs = dict(law.fixed)
        for v in law.objects:
            objs[v] = model.sample_object(rng)
        mors = {}
        for name, typ in law.slots:
            src, dst = typ(objs)
            m = model.sample_hom(src, dst, rng)
            if m is None:
                break
            mors[name] = m
        else:
            return objs, mors
    return None


def exhaustive_pool(model: CategoryModel, law: Law, budget: Budget) -> tuple[list, str]:
    pool = model.objects()
    if len(law.objects) >= budget.wide_arity:
        pool = [o for o in pool if model.size(o) <= budget.wide_pool]
        return pool, f"objects with at most {budget.wide_pool} points"
    return pool, ""


def _enumerate_cases(model: CategoryModel, law: Law, pool: list | None = None) -> Iterator[tuple[dict, dict]]:
    pool = model.objects() if pool is None else pool
    for combo in itertools.product(pool, repeat=len(law.objects)):
        objs = dict(law.fixed)
        objs.update(zip(law.objects, combo))

        def rec(k: int, mors: dict):
            if k == len(law.slots):
                yield dict(mors)
                return
            name, typ = law.slots[k]
            src, dst = typ(objs)
            for m in model.hom(src, dst):
                mors[name] = m
                yield from rec(k + 1, mors)
            mors.pop(name, None)

        for mors in rec(0, {}):
            yield objs, mors


def _witness(model: CategoryModel, objs: dict, mors: dict, lhs, rhs) -> dict:
    return {
        "objects": {k: repr(v) for k, v in objs.items()},
        "morphisms": {k: model.describe(m) for k, m in mors.items()},
        "lhs": model.describe(lhs),
        "rhs": model.describe(rhs),
    }


def run_law(model: CategoryModel, law: Law, budget: Budget, **ops) -> AxiomReport:
    mode = "exhaustive" if budget.exhaustive else "randomized"
    report = AxiomReport(law.name, model.name, mode, budget.seed)

    def check(i: int, objs: dict, mors: dict) -> None:
        def evaluate():
            return law.sides(model, objs, mors, **ops)

        lhs, rhs = evaluate()
        report.cases += 1
        if not model.equal(lhs, rhs):
            def recheck(evaluate=evaluate):
                a, b = evaluate()
                return model.equal(a, b)

            report.failures.append(Failure(i, _witness(model, objs, mors, lhs, rhs), recheck))

    if budget.exhaustive:
        pool, report.note = exhaustive_pool(model, law, budget)
        for i, (objs, mors) in enumerate(_enumerate_cases(model, law, pool)):
            check(i, objs, mors)
    else:
        for i in range(budget.cases):
            case = _sample_case(model, law, case_rng(budget.seed, law.name, i), budget.max_tries)
            if case is None:
                report.vacuous += 1
                continue
            check(i, *case)
    return report


# -- helpers for law definitions ---------------------------------------------

def guarded(x, y):
    return Prod(Later(x), y), x


def traced(x, a, x2, b):
    return Prod(Later(x), a), Prod(x2, b)


# -- cartesian structure --------------------------------------------------------

CARTESIAN = (
    Law("assoc", ("A", "B", "C", "D"),
        (("f", lambda o: (o["A"], o["B"])), ("g", lambda o: (o["B"], o["C"])), ("h", lambda o: (o["C"], o["D"]))),
        lambda m, o, f: (m.compose(m.compose(f["h"], f["g"]), f["f"]), m.compose(f["h"], m.compose(f["g"], f["f"])))),
    Law("unit-left", ("A", "B"), (("f", lambda o: (o["A"], o["B"])),),
        lambda m, o, f: (m.compose(m.identity(o["B"]), f["f"]), f["f"])),
    Law("unit-right", ("A", "B"), (("f", lambda o: (o["A"], o["B"])),),
        lambda m, o, f: (m.compose(f["f"], m.identity(o["A"])), f["f"])),
    Law("proj-left", ("A", "B", "C"), (("f", lambda o: (o["A"], o["B"])), ("g", lambda o: (o["A"], o["C"]))),
        lambda m, o, f: (m.compose(m.proj_l(o["B"], o["C"]), m.pair(f["f"], f["g"])), f["f"])),
    Law("proj-right", ("A", "B", "C"), (("f", lambda o: (o["A"], o["B"])), ("g", lambda o: (o["A"], o["C"]))),
        lambda m, o, f: (m.compose(m.proj_r(o["B"], o["C"]), m.pair(f["f"], f["g"])), f["g"])),
    Law("pair-eta", ("A", "B", "C"), (("h", lambda o: (o["A"], Prod(o["B"], o["C"]))),),
        lambda m, o, f: (m.pair(m.compose(m.proj_l(o["B"], o["C"]), f["h"]),
                                m.compose(m.proj_r(o["B"], o["C"]), f["h"])), f["h"])),
    Law("terminal", ("A",), (("f", lambda o: (o["A"], One())),),
        lambda m, o, f: (f["f"], m.bang(o["A"]))),
    Law("delay-compose", ("A", "B", "C"), (("f", lambda o: (o["A"], o["B"])), ("g", lambda o: (o["B"], o["C"]))),
        lambda m, o, f: (m.delay_mor(m.compose(f["g"], f["f"])), m.compose(m.delay_mor(f["g"]), m.delay_mor(f["f"])))),
    Law("delay-identity", ("A",), (),
        lambda m, o, f: (m.delay_mor(m.identity(o["A"])), m.identity(Later(o["A"])))),
    Law("point-natural", ("A", "B"), (("f", lambda o: (o["A"], o["B"])),),
        lambda m, o, f: (m.compose(m.delay_mor(f["f"]), m.point(o["A"])), m.compose(m.point(o["B"]), f["f"]))),
)


def check_cartesian_laws(model: CategoryModel, budget: Budget = Budget()) -> AxiomReport:
    report = AxiomReport("cartesian", model.name, "exhaustive" if budget.exhaustive else "randomized", budget.seed)
    for law in CARTESIAN:
        report.children.append(run_law(model, law, budget))
    return report


# -- Conway identities -------------------------------------------------------

def _fixpoint(m, o, f, d):
    s = d(f["f"])
    return s, unfold(m, f["f"], s)


def _parameter(m, o, f, d):
    lhs = m.compose(d(f["f"]), f["h"])
    rhs = d(m.compose(f["f"], m.id_times(Later(o["X"]), f["h"])))
    return lhs, rhs


def _composition(m, o, f, d):
    lhs = d(m.compose(f["g"], f["f"]))
    rhs = m.compose(f["g"], d(m.compose(f["f"], m.times_id(m.delay_mor(f["g"]), o["Y"]))))
    return lhs, rhs


def _double(m, o, f, d):
    lx = Later(o["X"])
    lhs = d(d(f["f"]))
    spread = m.then(m.times_id(m.diag(lx), o["Y"]), m.assoc_r(lx, lx, o["Y"]), f["f"])
    return lhs, d(spread)


FIXPOINT = Law("fixpoint", ("X", "Y"), (("f", lambda o: guarded(o["X"], o["Y"])),), _fixpoint)
PARAMETER = Law("parameter", ("X", "Y", "Z"),
                (("f", lambda o: guarded(o["X"], o["Y"])), ("h", lambda o: (o["Z"], o["Y"]))), _parameter)
COMPOSITION = Law("composition", ("X", "Y", "Z"),
                  (("f", lambda o: (Prod(Later(o["X"]), o["Y"]), o["Z"])), ("g", lambda o: (o["Z"], o["X"]))),
                  _composition)
DOUBLE = Law("double-dagger", ("X", "Y"),
             (("f", lambda o: (Prod(Later(o["X"]), Prod(Later(o["X"]), o["Y"])), o["X"])),), _double)


def check_fixpoint_identity(model, d, budget: Budget = Budget()) -> AxiomReport:
    return run_law(model, FIXPOINT, budget, d=d)


def check_parameter_identity(model, d, budget: Budget = Budget()) -> AxiomReport:
    return run_law(model, PARAMETER, budget, d=d)


def check_composition_identity(model, d, budget: Budget = Budget()) -> AxiomReport:
    return run_law(model, COMPOSITION, budget, d=d)


def check_double_dagger_identity(model, d, budget: Budget = Budget()) -> AxiomReport:
    return run_law(model, DOUBLE, budget, d=d)


# -- uniformity ----------------------------------------------------------------

def premise_witnesses(model, a, b, rng, limit: int) -> list:
    """Morphisms ``g`` with ``g . a = b`` (finite models only)."""
    return model.extensions(a, b, rng, limit=limit)


def _finite_dagger_case(model, rng, budget: Budget):
    """``(f, h, gs, vacuous)`` with every ``g`` satisfying ``g . (|>h x Y) = h . f``."""
    vacuous = 0
    for _ in range(budget.max_tries):
        x, y, x2 = (model.sample_object(rng) for _ in range(3))
        h = model.sample_hom(x, x2, rng)
        if h is None:
            continue
        a = model.times_id(model.delay_mor(h), y)
        f = model.sample_hom(Prod(Later(x), y), x, rng)
        if f is not None:
            gs = premise_witnesses(model, a, model.compose(h, f), rng, budget.max_witnesses)
            if gs:
                return f, h, gs, vacuous
            vacuous += 1
        # premise first: pick g, then solve h . f = g . (|>h x Y) for f
        g = model.sample_hom(Prod(Later(x2), y), x2, rng)
        if g is None:
            continue
        f = model.lift(h, model.compose(g, a), rng)
        if f is None:
            vacuous += 1
            continue
        gs = premise_witnesses(model, a, model.compose(h, f), rng, budget.max_witnesses)
        return f, h, gs, vacuous
    return None


def _ctree_dagger_case(model, rng, budget: Budget):
    """Witnesses from a renaming ``h`` (the substitution of a surjection ``phi``)."""
    x, y = model.sample_object(rng), model.sample_object(rng)
    f = model.sample_hom(Prod(Later(x), y), x, rng)
    h, pre = model.renaming(x, rng)
    phi = {i: v for v, idx in pre.items() for i in idx}
    gs = []
    for _ in range(min(budget.max_witnesses, 4)):
        table = {i: model.reindex(f(phi[i]), pre, rng) for i in phi}
        gs.append(model.mor(Prod(Later(h.dst), y), h.dst, table.__getitem__))
    return f, h, gs, 0


def _uniformity(model, d, budget: Budget, name: str, cases, premise, conclusion, mode: str) -> AxiomReport:
    """``cases`` yields ``(index, f, h, gs, vacuous)``; ``None`` for ``f`` marks a vacuous case."""
    report = AxiomReport(name, model.name, mode, budget.seed)
    for i, f, h, gs, vac in cases:
        report.vacuous += vac
        if f is None:
            continue
        report.cases += 1
        for g in gs:
            l0, r0 = premise(model, f, h, g)
            if not model.equal(l0, r0):
                raise AssertionError(f"{name}: generated witness violates the premise")
            lhs, rhs = conclusion(model, d, f, h, g)
            if not model.equal(lhs, rhs):
                def recheck(f=f, h=h, g=g):
                    a, b = conclusion(model, d, f, h, g)
                    return model.equal(a, b)

                w = {"morphisms": {k: model.describe(v) for k, v in (("f", f), ("h", h), ("g", g))},
                     "lhs": model.describe(lhs), "rhs": model.describe(rhs)}
                report.failures.append(Failure(i, w, recheck))
    return report


def _sampled_cases(model, budget: Budget, name: str, case_fn):
    for i in range(budget.cases):
        case = case_fn(model, case_rng(budget.seed, name, i), budget)
        if case is None:
            yield i, None, None, (), 1
        else:
            yield (i, *case)


def _exhaustive_cases(model, pool, shapes, premise_arrows, limit: int = 1_000_000):
    """All ``(f, h)`` over ``pool`` with every premise witness ``g``.

    ``shapes(objs)`` gives the types of ``f`` and ``h``; ``premise_arrows``
    gives ``(a, b)`` with the witnesses being all ``g`` such that ``g . a = b``.
    """
    i = 0
    for objs in itertools.product(pool, repeat=3):
        (fs, fd), (hs, hd) = shapes(*objs)
        for h in model.hom(hs, hd):
            for f in model.hom(fs, fd):
                a, b = premise_arrows(model, f, h)
                gs = model.extensions(a, b, limit=limit)
                yield (i, f, h, gs, 0) if gs else (i, None, None, (), 1)
                i += 1


def _dagger_premise(m, f, h, g):
    y = f.src.right
    return m.compose(g, m.times_id(m.delay_mor(h), y)), m.compose(h, f)


def _dagger_conclusion(m, d, f, h, g):
    return m.compose(h, d(f)), d(g)


def _dagger_arrows(m, f, h):
    return m.times_id(m.delay_mor(h), f.src.right), m.compose(h, f)


def check_uniformity(model, d, budget: Budget = Budget()) -> AxiomReport:
    """Exhaustive mode enumerates every ``f``, ``h`` and every premise witness ``g``."""
    if budget.exhaustive and model.enumerable:
        shapes = lambda x, y, x2: ((Prod(Later(x), y), x), (x, x2))
        cases = _exhaustive_cases(model, model.objects(), shapes, _dagger_arrows)
        mode = "exhaustive"
    else:
        case_fn = _ctree_dagger_case if hasattr(model, "renaming") else _finite_dagger_case
        cases = _sampled_cases(model, budget, "uniformity", case_fn)
        mode = "randomized"
    return _uniformity(model, d, budget, "uniformity", cases, _dagger_premise, _dagger_conclusion, mode)


# -- trace axioms ----------------------------------------------------------------

def _vanishing1(m, o, f, tr):
    one = One()
    g = f["f"]
    lhs = tr(m.pair(m.bang(g.src), g))
    rhs = m.then(m.unit_l(o["A"]), m.times_id(m.point(one), o["A"]), g)
    return lhs, rhs


def _vanishing2(m, o, f, tr):
    x, y, a, b = o["X"], o["Y"], o["A"], o["B"]
    g = f["f"]
    lhs = tr(tr(g))
    lx, ly = Later(x), Later(y)
    rhs = tr(m.then(
        m.times_id(m.can(x, y), a),
        m.assoc_r(lx, ly, a),
        g,
        m.assoc_l(x, y, b),
    ))
    return lhs, rhs


def _superposing(m, o, f, tr):
    x, a, b, c = o["X"], o["A"], o["B"], o["C"]
    g = f["f"]
    lhs = tr(m.then(m.assoc_l(Later(x), a, c), m.times_id(g, c), m.assoc_r(x, b, c)))
    return lhs, m.times_id(tr(g), c)


def _yanking(m, o, f, tr):
    x = o["X"]
    return tr(m.swap(Later(x), x)), m.point(x)


def _left_tight(m, o, f, tr):
    lhs = tr(m.compose(f["f"], m.id_times(Later(o["X"]), f["g"])))
    return lhs, m.compose(tr(f["f"]), f["g"])


def _right_tight(m, o, f, tr):
    lhs = tr(m.compose(m.id_times(o["X"], f["g"]), f["f"]))
    return lhs, m.compose(f["g"], tr(f["f"]))


def _sliding(m, o, f, tr):
    lhs = tr(m.compose(m.times_id(f["g"], o["B"]), f["f"]))
    rhs = tr(m.compose(f["f"], m.times_id(m.delay_mor(f["g"]), o["A"])))
    return lhs, rhs


VANISHING_1 = Law("vanishing-1", ("A", "B"), (("f", lambda o: (Prod(Later(One()), o["A"]), o["B"])),), _vanishing1)
VANISHING_2 = Law("vanishing-2", ("X", "Y", "A", "B"),
                  (("f", lambda o: (Prod(Later(o["X"]), Prod(Later(o["Y"]), o["A"])),
                                    Prod(o["X"], Prod(o["Y"], o["B"])))),), _vanishing2)
SUPERPOSING = Law("superposing", ("X", "A", "B", "C"),
                  (("f", lambda o: traced(o["X"], o["A"], o["X"], o["B"])),), _superposing)
YANKING = Law("yanking", ("X",), (), _yanking)
LEFT_TIGHT = Law("left-tightening", ("X", "A", "A2", "B"),
                 (("f", lambda o: traced(o["X"], o["A"], o["X"], o["B"])), ("g", lambda o: (o["A2"], o["A"]))),
                 _left_tight)
RIGHT_TIGHT = Law("right-tightening", ("X", "A", "B", "B2"),
                  (("f", lambda o: traced(o["X"], o["A"], o["X"], o["B"])), ("g", lambda o: (o["B"], o["B2"]))),
                  _right_tight)
SLIDING = Law("sliding", ("X", "X2", "A", "B"),
              (("f", lambda o: traced(o["X"], o["A"], o["X2"], o["B"])), ("g", lambda o: (o["X2"], o["X"]))),
              _sliding)

TRACE_LAWS = (VANISHING_1, VANISHING_2, SUPERPOSING, YANKING, LEFT_TIGHT, RIGHT_TIGHT, SLIDING)


def _finite_trace_case(model, rng, budget: Budget):
    vacuous = 0
    for _ in range(budget.max_tries):
        x, x2, a, b = (model.sample_object(rng) for _ in range(4))
        h = model.sample_hom(x, x2, rng)
        if h is None:
            continue
        pre = model.times_id(model.delay_mor(h), a)
        post = model.times_id(h, b)
        f = model.sample_hom(Prod(Later(x), a), Prod(x, b), rng)
        if f is not None:
            gs = premise_witnesses(model, pre, model.compose(post, f), rng, budget.max_witnesses)
            if gs:
                return f, h, gs, vacuous
            vacuous += 1
        g = model.sample_hom(Prod(Later(x2), a), Prod(x2, b), rng)
        if g is None:
            continue
        f = model.lift(post, model.compose(g, pre), rng)
        if f is None:
            vacuous += 1
            continue
        gs = premise_witnesses(model, pre, model.compose(post, f), rng, budget.max_witnesses)
        return f, h, gs, vacuous
    return None


def _ctree_trace_case(model, rng, budget: Budget):
    x, a, b = (model.sample_object(rng) for _ in range(3))
    f = model.sample_hom(Prod(Later(x), a), Prod(x, b), rng)
    h, pre = model.renaming(x, rng)
    phi = {i: v for v, idx in pre.items() for i in idx}
    dst = Prod(h.dst, b)
    gs = []
    for _ in range(min(budget.max_witnesses, 4)):
        table = {}
        for e in elements(dst):
            src_e = (0, phi[e[1]]) if e[0] == 0 else e
            table[e] = model.reindex(f(src_e), pre, rng)
        gs.append(model.mor(Prod(Later(h.dst), a), dst, table.__getitem__))
    return f, h, gs, 0


def _trace_premise(m, f, h, g):
    a = f.src.right
    b = f.dst.right
    return m.compose(g, m.times_id(m.delay_mor(h), a)), m.compose(m.times_id(h, b), f)


def _trace_conclusion(m, tr, f, h, g):
    return tr(f), tr(g)


def _trace_arrows(m, f, h):
    a, b = f.src.right, f.dst.right
    return m.times_id(m.delay_mor(h), a), m.compose(m.times_id(h, b), f)


def check_trace_uniformity(model, tr, budget: Budget = Budget()) -> AxiomReport:
    """Exhaustive mode fixes ``B = A`` to keep the enumeration at three object variables."""
    if budget.exhaustive and model.enumerable:
        shapes = lambda x, x2, a: ((Prod(Later(x), a), Prod(x, a)), (x, x2))
        pool = [o for o in model.objects() if model.size(o) <= budget.wide_pool]
        cases = _exhaustive_cases(model, pool, shapes, _trace_arrows)
        mode = "exhaustive"
    else:
        case_fn = _ctree_trace_case if hasattr(model, "renaming") else _finite_trace_case
        cases = _sampled_cases(model, budget, "uniform-trace", case_fn)
        mode = "randomized"
    report = _uniformity(model, tr, budget, "uniform-trace", cases, _trace_premise, _trace_conclusion, mode)
    if mode == "exhaustive":
        report.note = f"B = A, objects with at most {budget.wide_pool} points"
    return report


def check_trace_axioms(model, tr, budget: Budget = Budget(), uniform: bool = True) -> AxiomReport:
    """One child report per trace axiom, plus trace uniformity when ``uniform``."""
    report = AxiomReport("trace", model.name, "exhaustive" if budget.exhaustive else "randomized", budget.seed)
    for law in TRACE_LAWS:
        report.children.append(run_law(model, law, budget, tr=tr))
    if uniform:
        report.children.append(check_trace_uniformity(model, tr, budget))
    return report


# -- round trips -------------------------------------------------------------------

def _round_trip_dagger(m, o, f, d):
    back = dagger_from_trace(m, trace_from_dagger(m, d))
    return back(f["f"]), d(f["f"])


def _round_trip_trace(m, o, f, d):
    tr = trace_from_dagger(m, d)
    back = trace_from_dagger(m, dagger_from_trace(m, tr))
    return back(f["f"]), tr(f["f"])


ROUND_TRIP_DAGGER = Law("round-trip-dagger", ("X", "Y"), (("f", lambda o: guarded(o["X"], o["Y"])),),
                        _round_trip_dagger)
ROUND_TRIP_TRACE = Law("round-trip-trace", ("X", "A", "B"),
                       (("f", lambda o: traced(o["X"], o["A"], o["X"], o["B"])),), _round_trip_trace)


def check_round_trips(model, d, budget: Budget = Budget()) -> AxiomReport:
    report = AxiomReport("round-trips", model.name, "exhaustive" if budget.exhaustive else "randomized", budget.seed)
    report.children.append(run_law(model, ROUND_TRIP_DAGGER, budget, d=d))
    report.children.append(run_law(model, ROUND_TRIP_TRACE, budget, d=d))
    return report


# -- derived point, uniqueness --------------------------------------------------

def check_point(model, d, objects: Iterable, seed: int = 0) -> AxiomReport:
    """``q_X = p_X`` on each given object."""
    report = AxiomReport("derived-point", model.name, "exhaustive", seed)
    for i, x in enumerate(objects):
        q = derive_point_q(model, d, x)
        p = model.point(x)
        report.cases += 1
        if not model.equal(q, p):
            report.failures.append(Failure(
                i, {"object": repr(x), "q": model.describe(q), "p": model.describe(p)},
                lambda x=x: model.equal(derive_point_q(model, d, x), model.point(x))))
    return report


def check_uniqueness(model, d, budget: Budget = Budget()) -> AxiomReport:
    """The fixpoint square has exactly one solution and ``d`` returns it."""
    mode = "exhaustive" if budget.exhaustive else "randomized"
    report = AxiomReport("unique-solution", model.name, mode, budget.seed)
    if budget.exhaustive:
        cases = ((objs, mors) for objs, mors in _enumerate_cases(model, FIXPOINT))
    else:
        cases = (_sample_case(model, FIXPOINT, case_rng(budget.seed, "unique-solution", i), budget.max_tries)
                 for i in range(budget.cases))
    for i, case in enumerate(cases):
        if case is None:
            report.vacuous += 1
            continue
        _, mors = case
        f = mors["f"]
        sols = brute_force_solutions(model, f)
        mine = d(f)
        report.cases += 1
        if len(sols) != 1 or not model.equal(sols[0], mine):
            report.failures.append(Failure(
                i, {"f": model.describe(f), "solutions": [model.describe(s) for s in sols],
                    "dagger": model.describe(mine)},
                lambda f=f: (lambda s: len(s) == 1 and model.equal(s[0], d(f)))(brute_force_solutions(model, f))))
    return report
