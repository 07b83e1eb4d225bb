"""Finite posets as cpos, with lifting as the delay and least fixpoints.

Every finite poset has joins of all ascending chains (they stabilize) and
every monotone map between finite posets is continuous, so finite posets
are an exact finite fragment of the cpo example.  In ``identity`` mode the
delay is the identity functor and objects must have a least element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import Base, Later, ModelError, Obj, One, Prod, split_guarded
from .finite import Carrier, FiniteModel, Mor


@dataclass(frozen=True)
class FinPoset:
    """Order on ``0..n-1`` as a tuple of rows, ``leq[i][j]`` meaning ``i <= j``."""

    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        n = len(self.leq)
        if any(len(row) != n for row in self.leq):
            raise ValueError("order must be a reflexive square matrix")
        for i in range(n):
            if not self.leq[i][i]:
                raise ValueError("order must be a reflexive square matrix")
            for j in range(n):
                if i != j and self.leq[i][j] and self.leq[j][i]:
                    raise ValueError(f"not antisymmetric at {i}, {j}")
                for k in range(n):
                    if self.leq[i][j] and self.leq[j][k] and not self.leq[i][k]:
                        raise ValueError(f"not transitive at {i}, {j}, {k}")

    @classmethod
    def derived(cls, leq) -> FinPoset:
        """Skip validation for orders built from valid ones (products, lifting)."""
        out = object.__new__(cls)
        object.__setattr__(out, "leq", leq)
        return out

    @property
    def n(self) -> int:
        return len(self.leq)

    def __repr__(self) -> str:
        return "P(" + ",".join("".join("1" if v else "0" for v in row) for row in self.leq) + ")"

    @classmethod
    def from_relation(cls, n: int, pairs) -> FinPoset:
        """Reflexive-transitive closure of ``pairs``."""
        m = [[i == j for j in range(n)] for i in range(n)]
        for i, j in pairs:
            m[i][j] = True
        for k, i, j in itertools.product(range(n), repeat=3):
            if m[i][k] and m[k][j]:
                m[i][j] = True
        return cls(tuple(tuple(r) for r in m))

    @classmethod
    def chain(cls, n: int) -> FinPoset:
        return cls(tuple(tuple(i <= j for j in range(n)) for i in range(n)))

    @classmethod
    def discrete(cls, n: int) -> FinPoset:
        return cls(tuple(tuple(i == j for j in range(n)) for i in range(n)))

    def least(self) -> int | None:
        for i in range(self.n):
            if all(self.leq[i]):
                return i
        return None

    def height(self) -> int:
        """Number of elements in a longest chain."""
        best = [1] * self.n
        order = sorted(range(self.n), key=lambda i: sum(self.leq[j][i] for j in range(self.n)))
        for i in order:
            for j in range(self.n):
                if j != i and self.leq[j][i]:
                    best[i] = max(best[i], best[j] + 1)
        return max(best, default=0)

    def is_monotone(self, table, target: FinPoset) -> bool:
        return all(
            target.leq[table[i]][table[j]]
            for i in range(self.n)
            for j in range(self.n)
            if self.leq[i][j]
        )


def lift(x: FinPoset) -> FinPoset:
    """``X_bot``: fresh least element ``0``, old ``i`` becomes ``i + 1``."""
    n = x.n + 1
    return FinPoset.derived(
        tuple(tuple(i == 0 or (i > 0 and j > 0 and x.leq[i - 1][j - 1]) for j in range(n)) for i in range(n))
    )


class OCarrier(Carrier):
    def __init__(self, poset: FinPoset):
        super().__init__([poset.n])
        self.poset = poset


class CpoModel(FiniteModel):
    """Finite posets and monotone maps.

    ``mode="lifting"`` uses ``|>X = X_bot`` with ``p_X`` the embedding;
    ``mode="identity"`` uses ``|>X = X``, ``p_X = id`` and needs pointed
    objects.
    """

    def __init__(self, mode: str = "lifting", max_size: int = 3, max_height: int = 3):
        if mode not in ("lifting", "identity"):
            raise ValueError("mode must be 'lifting' or 'identity'")
        self.mode = mode
        self.max_size = max_size
        self.max_height = max_height
        self.name = f"cpo[{mode}]"
        super().__init__()

    # -- carriers ------------------------------------------------------
    def _one_carrier(self) -> OCarrier:
        return OCarrier(FinPoset(((True,),)))

    def _base_carrier(self, x: FinPoset) -> OCarrier:
        if self.mode == "identity" and x.least() is None:
            raise ModelError("identity mode needs posets with a least element")
        return OCarrier(x)

    def _product_carrier(self, a: OCarrier, b: OCarrier) -> OCarrier:
        pa, pb = a.poset, b.poset
        nb = pb.n
        n = pa.n * nb
        return OCarrier(FinPoset.derived(tuple(
            tuple(pa.leq[i // nb][j // nb] and pb.leq[i % nb][j % nb] for j in range(n))
            for i in range(n)
        )))

    def _later_carrier(self, base: Obj) -> OCarrier:
        c = self.carrier(base)
        return c if self.mode == "identity" else OCarrier(lift(c.poset))

    def poset(self, obj: Obj) -> FinPoset:
        return self.carrier(obj).poset

    # -- structure -----------------------------------------------------
    def delay_mor(self, f: Mor) -> Mor:
        if self.mode == "identity":
            return Mor(Later(f.src), Later(f.dst), f.table)
        return Mor(Later(f.src), Later(f.dst), (0,) + tuple(v + 1 for v in f.table))

    def point(self, x: Obj) -> Mor:
        n = self.size(x)
        shift = 0 if self.mode == "identity" else 1
        return Mor(x, Later(x), tuple(i + shift for i in range(n)))

    def dagger(self, f: Mor) -> Mor:
        return kleene_dagger(self, f)

    def _tests(self, ca: OCarrier, cb: OCarrier):
        la, lb = ca.poset.leq, cb.poset.leq
        fwd = [[] for _ in range(ca.n)]
        up = lambda lo, hi: lb[lo][hi]
        down = lambda lo, hi: lb[hi][lo]
        for i in range(ca.n):
            for j in range(i + 1, ca.n):
                if la[i][j]:
                    fwd[i].append((j, up))
                elif la[j][i]:
                    fwd[i].append((j, down))
        return fwd

    # -- sampling ------------------------------------------------------
    def random_poset(self, rng, max_size: int | None = None) -> FinPoset:
        hi = self.max_size if max_size is None else max_size
        while True:
            n = rng.randint(1, hi)
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.45]
            p = FinPoset.from_relation(n, pairs)
            if self.mode == "identity" and p.least() is None:
                p = FinPoset.from_relation(n, pairs + [(0, j) for j in range(1, n)])
            if p.height() <= self.max_height:
                return p

    def sample_object(self, rng) -> Obj:
        return Base(self.random_poset(rng))

    def objects(self) -> list[Obj]:
        out = []
        for n in range(1, self.max_size + 1):
            cand = [(i, j) for i in range(n) for j in range(i + 1, n)]
            seen = set()
            for bits in itertools.product((False, True), repeat=len(cand)):
                p = FinPoset.from_relation(n, [c for c, b in zip(cand, bits) if b])
                if p in seen or p.height() > self.max_height:
                    continue
                if self.mode == "identity" and p.least() is None:
                    continue
                seen.add(p)
                out.append(Base(p))
        return out


def kleene_iterate(model: CpoModel, f: Mor) -> tuple[Mor, int]:
    """Least fixpoint of ``m |-> p_X . f . <m, Y>`` on ``hom(Y, |>X)``.

    Starts from the constant bottom map (in identity mode: the constant least
    element) and stops at the first repeat.  Returns ``(s, steps)``.
    """
    x_obj, y_obj = split_guarded(f)
    cf = model.carrier(f.src)
    ny = model.size(y_obj)
    lx = model.poset(Later(x_obj))
    if model.mode == "identity":
        bottom = lx.least()
        if bottom is None:
            raise ModelError("identity mode needs a least element")
        shift = 0
    else:
        bottom, shift = 0, 1
    m = (bottom,) * ny
    steps = 0
    bound = lx.height() * max(ny, 1)
    while True:
        nxt = tuple(f.table[cf.encode(m[k], k)] + shift for k in range(ny))
        if nxt == m:
            return Mor(y_obj, Later(x_obj), m), steps
        m = nxt
        steps += 1
        if steps > bound:
            raise AssertionError("Kleene iteration exceeded its height bound")


def kleene_dagger(model: CpoModel, f: Mor) -> Mor:
    """Least-fixpoint dagger ``f . <s, Y>`` with ``s`` from :func:`kleene_iterate`."""
    s, _ = kleene_iterate(model, f)
    return model.compose(f, model.pair(s, model.identity(f.src.right)))


def two_chain_counterexample() -> Mor:
    """``f : 2_bot x 1 -> 2`` with ``f(bot) = f(0) = 0`` and ``f(1) = 1``."""
    x = Base(FinPoset.chain(2))
    src = Prod(Later(x), One())
    # points of 2_bot x 1 are bot, 0, 1 in that order
    return Mor(src, x, (0, 0, 1))
