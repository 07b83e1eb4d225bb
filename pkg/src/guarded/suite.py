"""Model registry and the full per-model check suite."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .axioms import (
    AxiomReport,
    Budget,
    Failure,
    FIXPOINT,
    _sample_case,
    case_rng,
    check_cartesian_laws,
    check_composition_identity,
    check_double_dagger_identity,
    check_fixpoint_identity,
    check_parameter_identity,
    check_point,
    check_round_trips,
    check_trace_axioms,
    check_uniformity,
    check_uniqueness,
)
from .cms import CmsModel
from .core import BudgetExceeded, CategoryModel, brute_force_solutions, trace_from_dagger, unfold
from .cpo import CpoModel
from .ctree import CtreeModel
from .finite import TrivialModel
from .presheaf import PresheafModel, Site
from .trees import prefix

MODELS = ("trivial", "presheaf", "poset", "cpo", "cms", "ctree")


@dataclass(frozen=True)
class ModelConfig:
    model: str = "presheaf"
    n: int = 3
    r: Fraction = Fraction(1, 2)
    site: str = "vee"
    mode: str = "lifting"
    max_size: int | None = None


def build_model(cfg: ModelConfig) -> CategoryModel:
    if cfg.model == "trivial":
        return TrivialModel(cfg.max_size or 3)
    if cfg.model == "presheaf":
        return PresheafModel(Site.chain(cfg.n), delay="shift", max_size=cfg.max_size or 2)
    if cfg.model == "poset":
        sites = {"vee": Site.vee, "diamond": Site.diamond, "chain": lambda: Site.chain(cfg.n)}
        if cfg.site not in sites:
            raise ValueError(f"unknown site {cfg.site!r}")
        return PresheafModel(sites[cfg.site](), delay="limit", max_size=cfg.max_size or 2)
    if cfg.model == "cpo":
        return CpoModel(cfg.mode, max_size=cfg.max_size or 3)
    if cfg.model == "cms":
        return CmsModel(cfg.r, max_size=cfg.max_size or 4)
    if cfg.model == "ctree":
        return CtreeModel(max_size=cfg.max_size or 3)
    raise ValueError(f"unknown model {cfg.model!r}")


# ---------------------------------------------------------------------------
# model-specific oracles


def check_least_solution(model: CpoModel, d, budget: Budget = Budget()) -> AxiomReport:
    """The dagger is the pointwise least element of the brute-force solution set."""
    report = AxiomReport("least-solution", model.name, "randomized", budget.seed)
    for i in range(budget.cases):
        case = _sample_case(model, FIXPOINT, case_rng(budget.seed, "least-solution", i), budget.max_tries)
        if case is None:
            report.vacuous += 1
            continue
        f = case[1]["f"]
        try:
            sols = brute_force_solutions(model, f, limit=20_000)
        except BudgetExceeded:
            report.vacuous += 1
            continue
        mine = d(f)
        leq = model.poset(f.dst).leq
        below = all(leq[a][b] for s in sols for a, b in zip(mine.table, s.table))
        report.cases += 1
        if not (any(model.equal(mine, s) for s in sols) and below):
            report.failures.append(Failure(
                i, {"f": model.describe(f), "dagger": model.describe(mine),
                    "solutions": [model.describe(s) for s in sols]},
                lambda f=f: check_least_solution_once(model, d, f)))
    return report


def check_least_solution_once(model: CpoModel, d, f) -> bool:
    sols = brute_force_solutions(model, f, limit=20_000)
    mine = d(f)
    leq = model.poset(f.dst).leq
    return any(model.equal(mine, s) for s in sols) and all(
        leq[a][b] for s in sols for a, b in zip(mine.table, s.table))


def check_unfolding_uniqueness(model: CtreeModel, d, budget: Budget = Budget(), depth: int = 6) -> AxiomReport:
    """Every solution agrees with the dagger to depth ``k`` after ``k + 1`` unfoldings of any start."""
    report = AxiomReport("unique-by-unfolding", model.name, "randomized", budget.seed)
    for i in range(budget.cases):
        rng = case_rng(budget.seed, "unique-by-unfolding", i)
        objs, mors = _sample_case(model, FIXPOINT, rng, budget.max_tries)
        f = mors["f"]
        sol = d(f)
        s = model.sample_hom(objs["Y"], objs["X"], rng)
        report.cases += 1
        for k in range(depth + 1):
            s = unfold(model, f, s)
            if any(prefix(sol(x), k) != prefix(s(x), k) for x in range(objs["X"].data)):
                report.failures.append(Failure(
                    i, {"f": model.describe(f), "depth": k, "dagger": model.describe(sol)},
                    lambda f=f, k=k: _unfold_agrees(model, d, f, k, rng)))
                break
    return report


def _unfold_agrees(model, d, f, k, rng) -> bool:
    sol = d(f)
    s = model.sample_hom(f.src.right, f.dst, rng)
    for _ in range(k + 1):
        s = unfold(model, f, s)
    return all(prefix(sol(x), k) == prefix(s(x), k) for x in range(f.dst.data))


def point_objects(model: CategoryModel, budget: Budget, count: int = 50) -> list:
    try:
        pool = list(model.objects())
    except BudgetExceeded:
        pool = []
    rng = case_rng(budget.seed, "objects", 0)
    while len(pool) < count:
        pool.append(model.sample_object(rng))
    return pool


def run_suite(model: CategoryModel, budget: Budget = Budget(), d=None) -> AxiomReport:
    """Cartesian laws, Conway identities, uniformity, trace axioms, round trips and oracles."""
    d = d or model.dagger
    mode = "exhaustive" if budget.exhaustive else "randomized"
    root = AxiomReport("suite", model.name, mode, budget.seed)
    sampled = replace(budget, exhaustive=False)
    root.children.append(check_cartesian_laws(model, budget))
    root.children.append(check_fixpoint_identity(model, d, budget))
    root.children.append(check_parameter_identity(model, d, budget))
    root.children.append(check_composition_identity(model, d, budget))
    root.children.append(check_double_dagger_identity(model, d, budget))
    root.children.append(check_uniformity(model, d, budget))
    root.children.append(check_trace_axioms(model, trace_from_dagger(model, d), budget))
    root.children.append(check_round_trips(model, d, budget))
    root.children.append(check_point(model, d, point_objects(model, budget), budget.seed))
    if isinstance(model, CtreeModel):
        root.children.append(check_unfolding_uniqueness(model, d, sampled))
    elif isinstance(model, CpoModel):
        root.children.append(check_least_solution(model, d, sampled))
    elif model.unique_dagger:
        root.children.append(check_uniqueness(model, d, budget))
    return root
