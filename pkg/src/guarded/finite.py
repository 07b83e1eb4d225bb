"""Models whose objects denote finite (staged) carriers.

A carrier is a finite set of points split into *stages* (one stage for plain
sets, posets and metric spaces; one per poset element for presheaves).
Morphisms are tables ``point -> point`` that respect stages, so composition,
pairing and projections are shared by every finite model.  What differs per
model is the local constraint a table must satisfy (naturality,
monotonicity, non-expansiveness), which is expressed as a binary constraint
network and searched by :func:`search`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .core import (
    Base,
    BudgetExceeded,
    CategoryModel,
    Later,
    ModelError,
    Obj,
    One,
    Prod,
    split_guarded,
)


@dataclass(frozen=True)
class Mor:
    src: Obj
    dst: Obj
    table: tuple[int, ...]

    def __call__(self, u: int) -> int:
        return self.table[u]


class Carrier:
    """Points ``0..n-1`` grouped into consecutive stages."""

    def __init__(self, sizes: Sequence[int]):
        self.sizes = tuple(sizes)
        offs, acc = [], 0
        for s in self.sizes:
            offs.append(acc)
            acc += s
        self.offsets = tuple(offs)
        self.n = acc
        self.stage_of = tuple(w for w, s in enumerate(self.sizes) for _ in range(s))
        # filled in by products
        self.factors: tuple[Carrier, Carrier] | None = None
        self.pl: tuple[int, ...] = ()
        self.pr: tuple[int, ...] = ()

    def local(self, u: int) -> int:
        return u - self.offsets[self.stage_of[u]]

    def at(self, w: int, i: int) -> int:
        return self.offsets[w] + i

    def stage_points(self, w: int) -> range:
        return range(self.offsets[w], self.offsets[w] + self.sizes[w])

    def encode(self, a: int, b: int) -> int:
        left, right = self.factors
        w = left.stage_of[a]
        return self.offsets[w] + left.local(a) * right.sizes[w] + right.local(b)


def product_sizes(left: Carrier, right: Carrier) -> list[int]:
    if len(left.sizes) != len(right.sizes):
        raise ModelError("stage count mismatch in product")
    return [a * b for a, b in zip(left.sizes, right.sizes)]


def attach_factors(c: Carrier, left: Carrier, right: Carrier) -> Carrier:
    c.factors = (left, right)
    pl, pr = [], []
    for w, s in enumerate(c.sizes):
        rs = right.sizes[w]
        for k in range(s):
            pl.append(left.offsets[w] + k // rs)
            pr.append(right.offsets[w] + k % rs)
    c.pl, c.pr = tuple(pl), tuple(pr)
    return c


# ---------------------------------------------------------------------------
# constraint search

Test = Callable[[int, int], bool]


def search(
    domains: list[list[int]],
    forward: list[list[tuple[int, Test]]],
    rng: random.Random | None = None,
    node_limit: int = 2_000_000,
) -> Iterator[tuple[int, ...]]:
    """Enumerate assignments satisfying all binary tests.

    ``forward[i]`` lists ``(j, test)`` with ``j > i``; ``test(v_i, v_j)`` must
    hold.  Variables are assigned in index order with forward checking.
    Without ``rng`` values are tried in ascending order, giving lexicographic
    output.
    """
    n = len(domains)
    doms = [list(d) for d in domains]
    if rng is not None:
        for d in doms:
            rng.shuffle(d)
    if any(not d for d in doms):
        return
    assignment = [0] * n
    nodes = 0

    def rec(i: int, doms: list[list[int]]):
        nonlocal nodes
        if i == n:
            yield tuple(assignment)
            return
        for v in doms[i]:
            nodes += 1
            if nodes > node_limit:
                raise BudgetExceeded(f"constraint search exceeded {node_limit} nodes")
            pruned = {}
            ok = True
            for j, test in forward[i]:
                cur = pruned.get(j, doms[j])
                nxt = [w for w in cur if test(v, w)]
                if not nxt:
                    ok = False
                    break
                pruned[j] = nxt
            if not ok:
                continue
            assignment[i] = v
            if pruned:
                sub = list(doms)
                for j, d in pruned.items():
                    sub[j] = d
            else:
                sub = doms
            yield from rec(i + 1, sub)

    yield from rec(0, doms)


# ---------------------------------------------------------------------------


class FiniteModel(CategoryModel):
    """Shared machinery for models with finite staged carriers.

    Subclasses implement ``_base_carrier``, ``_later_carrier``,
    ``_product_carrier`` (for extra structure), ``delay_mor``, ``point``,
    ``dagger`` and ``_tests`` (the binary constraints for ``hom(a, b)``).
    """

    stages = 1

    def __init__(self):
        self.carrier = lru_cache(maxsize=None)(self._carrier)
        self._net = lru_cache(maxsize=4096)(self._network)

    # -- carriers ------------------------------------------------------
    def _carrier(self, obj: Obj) -> Carrier:
        if isinstance(obj, One):
            return self._one_carrier()
        if isinstance(obj, Base):
            return self._base_carrier(obj.data)
        if isinstance(obj, Prod):
            left, right = self.carrier(obj.left), self.carrier(obj.right)
            return attach_factors(self._product_carrier(left, right), left, right)
        if isinstance(obj, Later):
            return self._later_carrier(obj.base)
        return self._other_carrier(obj)

    def _one_carrier(self) -> Carrier:
        return Carrier([1] * self.stages)

    def _product_carrier(self, left: Carrier, right: Carrier) -> Carrier:
        return Carrier(product_sizes(left, right))

    def _other_carrier(self, obj: Obj) -> Carrier:
        raise ModelError(f"{self.name}: unsupported object {obj!r}")

    def _base_carrier(self, data) -> Carrier:
        raise NotImplementedError

    def _later_carrier(self, base: Obj) -> Carrier:
        raise NotImplementedError

    def size(self, obj: Obj) -> int:
        return self.carrier(obj).n

    # -- category structure --------------------------------------------
    def identity(self, a: Obj) -> Mor:
        return Mor(a, a, tuple(range(self.carrier(a).n)))

    def compose(self, g: Mor, f: Mor) -> Mor:
        if f.dst != g.src:
            raise ModelError(f"cannot compose {f.src!r}->{f.dst!r} with {g.src!r}->{g.dst!r}")
        gt = g.table
        return Mor(f.src, g.dst, tuple(gt[v] for v in f.table))

    def pair(self, f: Mor, g: Mor) -> Mor:
        if f.src != g.src:
            raise ModelError("pairing needs a common source")
        p = self.carrier(Prod(f.dst, g.dst))
        return Mor(f.src, Prod(f.dst, g.dst), tuple(p.encode(a, b) for a, b in zip(f.table, g.table)))

    def proj_l(self, a: Obj, b: Obj) -> Mor:
        return Mor(Prod(a, b), a, self.carrier(Prod(a, b)).pl)

    def proj_r(self, a: Obj, b: Obj) -> Mor:
        return Mor(Prod(a, b), b, self.carrier(Prod(a, b)).pr)

    def bang(self, a: Obj) -> Mor:
        ca, one = self.carrier(a), self.carrier(One())
        return Mor(a, One(), tuple(one.offsets[ca.stage_of[u]] for u in range(ca.n)))

    def equal(self, f: Mor, g: Mor) -> bool:
        return f.src == g.src and f.dst == g.dst and f.table == g.table

    def const(self, a: Obj, b: Obj, values: Sequence[int]) -> Mor:
        """Morphism from ``a`` to ``b`` sending every point of stage ``w`` to ``values[w]``."""
        ca = self.carrier(a)
        return Mor(a, b, tuple(values[ca.stage_of[u]] for u in range(ca.n)))

    # -- hom-sets ------------------------------------------------------
    def _tests(self, ca: Carrier, cb: Carrier) -> list[list[tuple[int, Test]]]:
        return [[] for _ in range(ca.n)]

    def _network(self, a: Obj, b: Obj):
        ca, cb = self.carrier(a), self.carrier(b)
        doms = [list(cb.stage_points(ca.stage_of[u])) for u in range(ca.n)]
        return doms, self._tests(ca, cb)

    def _search(self, a, b, rng=None, allowed=None) -> Iterator[tuple[int, ...]]:
        doms, fwd = self._net(a, b)
        if allowed is not None:
            doms = [d if al is None else [v for v in d if v in al] for d, al in zip(doms, allowed)]
        return search(doms, fwd, rng=rng)

    def hom(self, a: Obj, b: Obj, limit: int | None = None, allowed=None) -> Iterator[Mor]:
        for k, t in enumerate(self._search(a, b, allowed=allowed)):
            if limit is not None and k >= limit:
                raise BudgetExceeded(f"hom({a!r}, {b!r}) has more than {limit} elements")
            yield Mor(a, b, t)

    def sample_hom(self, a: Obj, b: Obj, rng, allowed=None) -> Mor | None:
        for t in self._search(a, b, rng=rng, allowed=allowed):
            return Mor(a, b, t)
        return None

    def is_morphism(self, f: Mor) -> bool:
        ca, cb = self.carrier(f.src), self.carrier(f.dst)
        if len(f.table) != ca.n:
            return False
        for u, v in enumerate(f.table):
            if not 0 <= v < cb.n or cb.stage_of[v] != ca.stage_of[u]:
                return False
        fwd = self._tests(ca, cb)
        return all(test(f.table[i], f.table[j]) for i in range(ca.n) for j, test in fwd[i])

    # -- premise solving (uniformity) ----------------------------------
    def extensions(self, a: Mor, b: Mor, rng=None, limit: int = 16) -> list[Mor]:
        """Morphisms ``g : a.dst -> b.dst`` with ``g . a = b`` (at most ``limit``)."""
        n = self.carrier(a.dst).n
        allowed: list[set | None] = [None] * n
        for u, v in enumerate(a.table):
            want = b.table[u]
            if allowed[v] is None:
                allowed[v] = {want}
            elif want not in allowed[v]:
                return []
        out = []
        for t in self._search(a.dst, b.dst, rng=rng, allowed=allowed):
            out.append(Mor(a.dst, b.dst, t))
            if len(out) >= limit:
                break
        return out

    def lift(self, h: Mor, c: Mor, rng) -> Mor | None:
        """Some ``f : c.src -> h.src`` with ``h . f = c``, or ``None``."""
        pre: dict[int, set] = {}
        for x, v in enumerate(h.table):
            pre.setdefault(v, set()).add(x)
        allowed = [pre.get(v, set()) for v in c.table]
        if any(not s for s in allowed):
            return None
        return self.sample_hom(c.src, h.src, rng, allowed=allowed)

    def describe(self, f: Mor):
        ca, cb = self.carrier(f.src), self.carrier(f.dst)
        if len(ca.sizes) == 1:
            return {"src": repr(f.src), "dst": repr(f.dst), "table": list(f.table)}
        stages = {}
        for w in range(len(ca.sizes)):
            stages[str(w)] = [cb.local(f.table[u]) for u in ca.stage_points(w)]
        return {"src": repr(f.src), "dst": repr(f.dst), "stages": stages}


# ---------------------------------------------------------------------------


class TrivialModel(FiniteModel):
    """Finite sets with the constant delay ``|>X = 1`` and ``p_X = !``."""

    name = "trivial"
    unique_dagger = True

    def __init__(self, max_size: int = 3):
        super().__init__()
        self.max_size = max_size

    def _base_carrier(self, n: int) -> Carrier:
        return Carrier([n])

    def _later_carrier(self, base: Obj) -> Carrier:
        return Carrier([1])

    def delay_mor(self, f: Mor) -> Mor:
        return Mor(Later(f.src), Later(f.dst), (0,))

    def point(self, x: Obj) -> Mor:
        return Mor(x, Later(x), (0,) * self.size(x))

    def dagger(self, f: Mor) -> Mor:
        x, y = split_guarded(f)
        return self.compose(f, self.pair(Mor(y, Later(x), (0,) * self.size(y)), self.identity(y)))

    def sample_object(self, rng) -> Obj:
        return Base(rng.randint(1, self.max_size))

    def objects(self) -> list[Obj]:
        return [Base(n) for n in range(self.max_size + 1)]
