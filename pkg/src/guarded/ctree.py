"""The dual Kleisli category of the Sigma-tree monad.

A morphism ``Y -> X`` is a substitution: every element of ``X`` is sent to
a (rational) tree over the elements of ``Y``.  Composition is substitution,
products are disjoint unions (left part tagged ``0``, right part ``1``), the
terminal object is empty, and the delay sends ``X`` to the set of
operation-rooted trees over ``X``.  The point ``|>X -> X`` in the opposite
direction is the inclusion of operation-rooted trees into all trees.

The delayed objects are infinite, so a morphism stores a function rather
than a table.  When the codomain is finite it is tabulated eagerly; equality
on infinite codomains is checked on a fixed probe set (see :meth:`probe`).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable

from .core import Base, CategoryModel, Later, ModelError, Obj, One, Prod, split_guarded, split_traced
from .trees import STAR_SIGMA_C, RationalTree, Signature, map_gens, solve, subst

Tree = RationalTree


@dataclass(frozen=True, eq=False)
class KMor:
    """``src -> dst``: a substitution from elements of ``dst`` to trees over ``src``."""

    src: Obj
    dst: Obj
    fn: Callable[[Any], Tree] = field(repr=False)

    def __call__(self, e) -> Tree:
        return self.fn(e)


def is_finite(obj: Obj) -> bool:
    if isinstance(obj, (One, Base)):
        return True
    if isinstance(obj, Prod):
        return is_finite(obj.left) and is_finite(obj.right)
    return False


def elements(obj: Obj) -> list:
    """All elements of a finite object, left summand first."""
    if isinstance(obj, One):
        return []
    if isinstance(obj, Base):
        return list(range(obj.data))
    if isinstance(obj, Prod):
        return [(0, e) for e in elements(obj.left)] + [(1, e) for e in elements(obj.right)]
    raise ModelError(f"{obj!r} is infinite")


def memo(fn: Callable) -> Callable:
    cache: dict = {}

    def call(e):
        if e not in cache:
            cache[e] = fn(e)
        return cache[e]

    return call


def random_term(rng: random.Random, leaves: list, sig: Signature, depth: int, rooted: bool = False) -> Tree:
    """Random finite term; ``rooted`` forces an operation at the root."""
    consts = sig.names(0)
    ops = [n for n, a in sig.arities if a > 0]
    if not rooted and (depth <= 0 or rng.random() < 0.45):
        if leaves and (not consts or rng.random() < 0.8):
            return Tree.gen(rng.choice(leaves))
        return Tree.op(rng.choice(consts))
    if depth <= 0 and consts:
        return Tree.op(rng.choice(consts))
    name = rng.choice(ops)
    kids = [random_term(rng, leaves, sig, depth - 1) for _ in range(sig.arity(name))]
    return Tree.op(name, *kids).canonical()


def random_rational(rng: random.Random, leaves: list, sig: Signature, depth: int) -> Tree:
    """Operation-rooted tree, sometimes with a cycle (solution of ``x = t(x, leaves)``)."""
    t = random_term(rng, leaves, sig, depth, rooted=True)
    if rng.random() < 0.7:
        return t
    loop = object()
    body = random_term(rng, leaves + [loop, loop], sig, depth, rooted=True)
    sol = solve({loop: body}, lambda g: g if g is loop else None)[loop]
    return sol


class CtreeModel(CategoryModel):
    """Substitutions between finite sets and the trees over them."""

    unique_dagger = True
    enumerable = False

    def __init__(self, signature: Signature = STAR_SIGMA_C, max_size: int = 3, depth: int = 2):
        if not signature.names(0) and not any(a > 0 for _, a in signature.arities):
            raise ValueError("signature has no symbols")
        if not [n for n, a in signature.arities if a > 0]:
            raise ValueError("signature needs an operation of positive arity")
        self.signature = signature
        self.max_size = max_size
        self.depth = depth
        self.name = "ctree"

    # -- helpers -------------------------------------------------------
    def mor(self, src: Obj, dst: Obj, fn: Callable) -> KMor:
        if is_finite(dst):
            table = {e: fn(e) for e in elements(dst)}
            return KMor(src, dst, table.__getitem__)
        return KMor(src, dst, memo(fn))

    def tabulate(self, f: KMor) -> dict:
        return {e: f(e) for e in elements(f.dst)}

    # -- structure -----------------------------------------------------
    def identity(self, a: Obj) -> KMor:
        return KMor(a, a, Tree.gen)

    def compose(self, g: KMor, f: KMor) -> KMor:
        if f.dst != g.src:
            raise ModelError(f"cannot compose {f.src!r}->{f.dst!r} with {g.src!r}->{g.dst!r}")
        return self.mor(f.src, g.dst, lambda e: subst(g(e), f))

    def pair(self, f: KMor, g: KMor) -> KMor:
        if f.src != g.src:
            raise ModelError("pairing needs a common source")
        return self.mor(f.src, Prod(f.dst, g.dst), lambda e: f(e[1]) if e[0] == 0 else g(e[1]))

    def proj_l(self, a: Obj, b: Obj) -> KMor:
        return KMor(Prod(a, b), a, lambda e: Tree.gen((0, e)))

    def proj_r(self, a: Obj, b: Obj) -> KMor:
        return KMor(Prod(a, b), b, lambda e: Tree.gen((1, e)))

    def bang(self, a: Obj) -> KMor:
        def empty(e):
            raise ModelError("the terminal object has no elements")

        return KMor(a, One(), empty)

    def delay_mor(self, f: KMor) -> KMor:
        return self.mor(Later(f.src), Later(f.dst), lambda t: Tree.gen(subst(t, f)))

    def point(self, x: Obj) -> KMor:
        return KMor(x, Later(x), lambda t: t)

    def probe(self, obj: Obj) -> list:
        """Deterministic finite sample of elements (all of them when finite)."""
        if is_finite(obj):
            return elements(obj)
        if isinstance(obj, Prod):
            return [(0, e) for e in self.probe(obj.left)] + [(1, e) for e in self.probe(obj.right)]
        if isinstance(obj, Later):
            gens = self.probe(obj.base)[:4]
            leaves = [Tree.gen(g) for g in gens] + [Tree.op(c) for c in self.signature.names(0)]
            out = []
            for name, arity in self.signature.arities:
                if arity == 0:
                    out.append(Tree.op(name))
                    continue
                for kids in itertools.islice(itertools.product(leaves, repeat=arity), 6):
                    out.append(Tree.op(name, *kids).canonical())
            binary = [n for n, a in self.signature.arities if a > 0]
            for g in gens[:2]:
                loop = object()
                name = binary[0]
                ar = self.signature.arity(name)
                kids = [Tree.gen(loop)] + [Tree.gen(g)] * (ar - 1)
                out.append(solve({loop: Tree.op(name, *kids)}, lambda v, loop=loop: v if v is loop else None)[loop])
            return out
        raise ModelError(f"cannot probe {obj!r}")

    def equal(self, f: KMor, g: KMor) -> bool:
        if f.src != g.src or f.dst != g.dst:
            return False
        return all(f(e) == g(e) for e in self.probe(f.dst))

    def dagger(self, f: KMor) -> KMor:
        return kleisli_dagger(self, f)

    # -- sampling ------------------------------------------------------
    def sample_object(self, rng) -> Obj:
        return Base(rng.randint(1, self.max_size))

    def random_element(self, obj: Obj, rng) -> Any:
        if isinstance(obj, Base):
            return rng.randrange(obj.data) if obj.data else None
        if isinstance(obj, One):
            return None
        if isinstance(obj, Prod):
            sides = [(k, o) for k, o in ((0, obj.left), (1, obj.right)) if not isinstance(o, One)]
            sides = [(k, o) for k, o in sides if not (isinstance(o, Base) and o.data == 0)]
            if not sides:
                return None
            k, o = rng.choice(sides)
            e = self.random_element(o, rng)
            return None if e is None else (k, e)
        if isinstance(obj, Later):
            leaves = [self.random_element(obj.base, rng) for _ in range(3)]
            leaves = [e for e in leaves if e is not None]
            return random_rational(rng, leaves, self.signature, self.depth)
        raise ModelError(f"cannot sample {obj!r}")

    def random_tree(self, src: Obj, rng) -> Tree:
        leaves = [self.random_element(src, rng) for _ in range(4)]
        leaves = [e for e in leaves if e is not None]
        return random_term(rng, leaves, self.signature, self.depth)

    def sample_hom(self, a: Obj, b: Obj, rng, allowed=None) -> KMor:
        if not is_finite(b):
            raise ModelError("random morphisms need a finite codomain")
        table = {e: self.random_tree(a, rng) for e in elements(b)}
        return KMor(a, b, table.__getitem__)

    def objects(self) -> list[Obj]:
        return [Base(n) for n in range(self.max_size + 1)]

    def describe(self, f: KMor):
        from .trees import prefix, render

        show = lambda t: render(prefix(map_gens(t, str), 4))
        return {"src": repr(f.src), "dst": repr(f.dst), "table": {str(e): show(f(e)) for e in self.probe(f.dst)}}

    # -- premise witnesses (uniformity) ----------------------------------
    def renaming(self, x: Obj, rng) -> tuple[KMor, dict]:
        """``h : X -> X'`` induced by a random surjection ``phi : X' -> X``; returns ``(h, preimages)``."""
        xs = elements(x)
        extra = rng.randint(0, 2)
        phi = xs + [rng.choice(xs) for _ in range(extra)] if xs else []
        rng.shuffle(phi)
        x2 = Base(len(phi))
        pre: dict = {}
        for i, v in enumerate(phi):
            pre.setdefault(v, []).append(i)
        return KMor(x, x2, lambda i: Tree.gen(phi[i])), pre

    def reindex(self, t: Tree, pre: dict, rng) -> Tree:
        """Replace ``(0, s)`` leaves by ``(0, s')`` with ``s'`` labelled by chosen preimages."""
        def leaf(g):
            if g[0] == 0:
                return (0, map_gens(g[1], lambda v: rng.choice(pre[v])))
            return g

        return map_gens(t, leaf)


def kleisli_dagger(model: CtreeModel, f: KMor) -> KMor:
    """Unique solution of the guarded equation morphism presented by ``f``.

    ``f : |>X x Y -> X`` sends ``x`` to a tree over ``(0, t)`` (``t``
    operation rooted, over ``X``) and ``(1, y)``.  Flattening turns each
    ``(0, t)`` leaf into ``t`` with variables as leaves, which is guarded;
    the system reachable from ``x`` is then solved.
    """
    x_obj, y_obj = split_guarded(f)
    var = ("var",)
    par = ("par",)

    def flat(e) -> Tree:
        def leaf(g):
            if g[0] == 0:
                if not g[1].is_operation_rooted:
                    raise ModelError("delayed argument must be operation rooted")
                return map_gens(g[1], lambda v: (var, v))
            return Tree.gen((par, g[1]))

        return subst(f(e), leaf)

    flat = memo(flat)

    def solution(e) -> Tree:
        rhs = {}
        todo = [e]
        while todo:
            v = todo.pop()
            if v in rhs:
                continue
            rhs[v] = flat(v)
            todo.extend(g[1] for g in rhs[v].generators() if g[0] == var)
        sol = solve(rhs, lambda g: g[1] if g[0] == var else None)[e]
        return map_gens(sol, lambda g: g[1])

    return model.mor(y_obj, x_obj, solution)


def unfold_prefix_oracle(model: CtreeModel, f: KMor, start: KMor, k: int) -> KMor:
    """``k`` rounds of ``s |-> f . (p x Y) . <s, Y>`` from ``start``."""
    from .core import unfold

    s = start
    for _ in range(k):
        s = unfold(model, f, s)
    return s


def direct_trace(model: CtreeModel, f: KMor) -> KMor:
    """Trace computed straight from the equation system, independent of :mod:`core`.

    ``f : |>X x A -> X x B``; the state ``x`` satisfies ``x = f(0, x)`` with
    delayed leaves as variables and ``(1, a)`` leaves as parameters; the
    result substitutes that solution into ``f(1, b)``.
    """
    x_obj, a_obj, b_obj = split_traced(f)
    var, par = ("var",), ("par",)

    def flat(e) -> Tree:
        return subst(f(e), lambda g: map_gens(g[1], lambda v: (var, v)) if g[0] == 0 else Tree.gen((par, g[1])))

    rhs = {x: flat((0, x)) for x in elements(x_obj)}
    sol = solve(rhs, lambda g: g[1] if g[0] == var else None) if rhs else {}

    def out(b) -> Tree:
        t = flat((1, b))
        t = subst(t, lambda g: sol[g[1]] if g[0] == var else Tree.gen(g))
        return map_gens(t, lambda g: g[1])

    return model.mor(a_obj, b_obj, out)
