"""Finite 1-bounded metric spaces with exact rational distances.

The delay keeps the carrier and multiplies distances by ``r``; its point
is the identity on elements.  Products carry the max metric.  With exact
``Fraction`` arithmetic, Banach iteration reaches its fixpoint in finitely
many steps and every axiom check is tolerance free.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Base, Later, ModelError, Obj, split_guarded
from .finite import Carrier, FiniteModel, Mor

WEIGHTS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


@dataclass(frozen=True)
class FinMetricSpace:
    dist: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.dist)
        d = self.dist
        if any(len(row) != n for row in d):
            raise ValueError("distance table must be square")
        for i in range(n):
            if d[i][i] != 0:
                raise ValueError(f"d({i},{i}) must be 0")
            for j in range(n):
                if not 0 <= d[i][j] <= 1:
                    raise ValueError(f"d({i},{j}) outside [0, 1]")
                if d[i][j] != d[j][i]:
                    raise ValueError(f"d({i},{j}) is not symmetric")
                if i != j and d[i][j] == 0:
                    raise ValueError(f"distinct points {i}, {j} at distance 0")
                for k in range(n):
                    if d[i][k] > d[i][j] + d[j][k]:
                        raise ValueError(f"triangle inequality fails at {i}, {j}, {k}")

    @classmethod
    def derived(cls, dist) -> FinMetricSpace:
        """Skip validation for tables built from valid spaces (products, scalings)."""
        out = object.__new__(cls)
        object.__setattr__(out, "dist", dist)
        return out

    @property
    def n(self) -> int:
        return len(self.dist)

    def __repr__(self) -> str:
        return "M(" + "; ".join(" ".join(str(v) for v in row) for row in self.dist) + ")"

    @classmethod
    def from_rows(cls, rows) -> FinMetricSpace:
        return cls(tuple(tuple(Fraction(v) for v in r) for r in rows))

    @classmethod
    def discrete(cls, n: int) -> FinMetricSpace:
        return cls(tuple(tuple(Fraction(int(i != j)) for j in range(n)) for i in range(n)))

    def min_positive(self) -> Fraction | None:
        vals = [v for row in self.dist for v in row if v > 0]
        return min(vals) if vals else None


def scale_delay(x: FinMetricSpace, r: Fraction) -> FinMetricSpace:
    """Same carrier, all distances multiplied by ``r``."""
    return FinMetricSpace.derived(tuple(tuple(v * r for v in row) for row in x.dist))


class MCarrier(Carrier):
    def __init__(self, space: FinMetricSpace):
        super().__init__([space.n])
        self.space = space


class CmsModel(FiniteModel):
    """Finite metric spaces, non-expansive maps, delay scaling by ``r``."""

    def __init__(self, r: Fraction = Fraction(1, 2), max_size: int = 4):
        r = Fraction(r)
        if not 0 < r < 1:
            raise ValueError("scale factor must lie strictly between 0 and 1")
        self.r = r
        self.max_size = max_size
        self.name = f"cms[r={r}]"
        super().__init__()

    unique_dagger = True

    def _one_carrier(self) -> MCarrier:
        return MCarrier(FinMetricSpace(((Fraction(0),),)))

    def _base_carrier(self, x: FinMetricSpace) -> MCarrier:
        return MCarrier(x)

    def _product_carrier(self, a: MCarrier, b: MCarrier) -> MCarrier:
        da, db = a.space.dist, b.space.dist
        nb = b.n
        n = a.n * nb
        return MCarrier(FinMetricSpace.derived(tuple(
            tuple(max(da[i // nb][j // nb], db[i % nb][j % nb]) for j in range(n)) for i in range(n)
        )))

    def _later_carrier(self, base: Obj) -> MCarrier:
        return MCarrier(scale_delay(self.carrier(base).space, self.r))

    def space(self, obj: Obj) -> FinMetricSpace:
        return self.carrier(obj).space

    def delay_mor(self, f: Mor) -> Mor:
        return Mor(Later(f.src), Later(f.dst), f.table)

    def point(self, x: Obj) -> Mor:
        return Mor(x, Later(x), tuple(range(self.size(x))))

    def dagger(self, f: Mor) -> Mor:
        return banach_dagger(self, f)

    def _tests(self, ca: MCarrier, cb: MCarrier):
        da, db = ca.space.dist, cb.space.dist
        top = max((v for row in db for v in row), default=Fraction(0))
        fwd = [[] for _ in range(ca.n)]
        for i in range(ca.n):
            for j in range(i + 1, ca.n):
                bound = da[i][j]
                if bound >= top:
                    continue
                fwd[i].append((j, lambda lo, hi, bound=bound: db[lo][hi] <= bound))
        return fwd

    def random_space(self, rng, max_size: int | None = None) -> FinMetricSpace:
        n = rng.randint(1, self.max_size if max_size is None else max_size)
        d = [[Fraction(0) if i == j else None for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d[i][j] = d[j][i] = rng.choice(WEIGHTS)
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if d[i][k] + d[k][j] < d[i][j]:
                        d[i][j] = d[i][k] + d[k][j]
        return FinMetricSpace(tuple(tuple(row) for row in d))

    def sample_object(self, rng) -> Obj:
        return Base(self.random_space(rng))

    def objects(self) -> list[Obj]:
        half = Fraction(1, 2)
        return [
            Base(FinMetricSpace.discrete(1)),
            Base(FinMetricSpace.discrete(2)),
            Base(FinMetricSpace.from_rows([[0, half], [half, 0]])),
            Base(FinMetricSpace.from_rows([[0, half, 1], [half, 0, half], [1, half, 0]])),
        ]


def iteration_bound(r: Fraction, eps: Fraction | None, d0: Fraction) -> int:
    """``ceil(log_r(eps / d0)) + 1``, or ``0`` when the start is already fixed."""
    if d0 == 0 or eps is None:
        return 0
    target = eps / d0
    k, power = 0, Fraction(1)
    while power > target:
        power *= r
        k += 1
    return k + 1


@dataclass(frozen=True)
class BanachRun:
    solution: Mor
    steps: int
    bound: int


def banach_iterate(model: CmsModel, f: Mor, start: tuple[int, ...] | None = None) -> BanachRun:
    """Iterate ``m |-> f . (p_X x Y) . <m, Y>`` from ``start`` (default: constant 0).

    ``steps`` is the first ``k`` with ``m_{k+1} = m_k``.
    """
    if not model.is_morphism(f):
        raise ValueError("f is not non-expansive out of the scaled product")
    x_obj, y_obj = split_guarded(f)
    cf = model.carrier(f.src)
    dx = model.space(x_obj)
    ny = model.size(y_obj)
    if ny and not dx.n:
        raise ModelError("empty target with non-empty parameter space")
    m = tuple(start) if start is not None else (0,) * ny
    phi = lambda m: tuple(f.table[cf.encode(m[k], k)] for k in range(ny))
    nxt = phi(m)
    d0 = max((dx.dist[a][b] for a, b in zip(m, nxt)), default=Fraction(0))
    bound = iteration_bound(model.r, dx.min_positive(), d0)
    steps = 0
    while nxt != m:
        m, nxt = nxt, phi(nxt)
        steps += 1
        if steps > bound:
            raise AssertionError("Banach iteration exceeded its bound")
    return BanachRun(Mor(y_obj, x_obj, m), steps, bound)


def banach_dagger(model: CmsModel, f: Mor) -> Mor:
    return banach_iterate(model, f).solution
