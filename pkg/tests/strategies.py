"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from guarded.trees import STAR_SIGMA_C, EquationSystem, RationalTree

SIG = STAR_SIGMA_C


def terms(leaves: list[str], depth: int = 3) -> st.SearchStrategy[RationalTree]:
    base = st.sampled_from([RationalTree.op("c")] + [RationalTree.gen(v) for v in leaves])
    return st.recursive(
        base,
        lambda kids: st.one_of(
            st.builds(lambda t: RationalTree.op("sigma", t), kids),
            st.builds(lambda a, b: RationalTree.op("*", a, b), kids, kids),
        ),
        max_leaves=2 ** depth,
    )


def guarded_terms(leaves: list[str]) -> st.SearchStrategy[RationalTree]:
    """Right-hand sides that are not a bare recursion variable."""
    return terms(leaves).filter(lambda t: not (t.is_generator and t.root_label[1].startswith("x")))


@st.composite
def systems(draw, max_vars: int = 3, max_params: int = 2) -> EquationSystem:
    nv = draw(st.integers(1, max_vars))
    np_ = draw(st.integers(0, max_params))
    vars_ = [f"x{i}" for i in range(1, nv + 1)]
    params = [f"y{i}" for i in range(1, np_ + 1)]
    rhs = {x: draw(guarded_terms(vars_ + params)) for x in vars_}
    return EquationSystem(SIG, tuple(vars_), tuple(params), rhs)


seeds = st.integers(0, 2 ** 32 - 1)


def rng_from(seed: int) -> random.Random:
    return random.Random(seed)
