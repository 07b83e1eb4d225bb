"""Cartesian categories with a pointed delay endofunctor.

Objects of every model are built from the same small expression language
(``One``, ``Base``, ``Prod``, ``Later``, ``Exp``); each model decides what
carrier an expression denotes.  Everything model independent lives here:
derived structure (products of maps, ``can``, symmetries, associators), the
two constructions relating fixpoint and trace operators, the derived point
``q`` and the brute-force solution enumerator.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Iterator


class Obj:
    """Marker base for object expressions."""

    __slots__ = ()


@dataclass(frozen=True)
class One(Obj):
    def __repr__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Base(Obj):
    data: Any

    def __repr__(self) -> str:
        return f"<{self.data!r}>"


@dataclass(frozen=True)
class Prod(Obj):
    left: Obj
    right: Obj

    def __repr__(self) -> str:
        return f"({self.left!r} x {self.right!r})"


@dataclass(frozen=True)
class Later(Obj):
    base: Obj

    def __repr__(self) -> str:
        return f"|>{self.base!r}"


@dataclass(frozen=True)
class Exp(Obj):
    """Exponential ``cod ** dom`` (only the chain presheaf model has these)."""

    dom: Obj
    cod: Obj

    def __repr__(self) -> str:
        return f"({self.cod!r} ^ {self.dom!r})"


def prod(*objs: Obj) -> Obj:
    """Right-nested product ``A x (B x (C x ...))``."""
    if not objs:
        return One()
    out = objs[-1]
    for o in reversed(objs[:-1]):
        out = Prod(o, out)
    return out


class BudgetExceeded(Exception):
    """Raised when an enumeration would exceed its configured budget."""


class ModelError(Exception):
    """A request the active model cannot serve (e.g. no exponentials)."""


Dagger = Callable[[Any], Any]
Trace = Callable[[Any], Any]


class CategoryModel(ABC):
    """A cartesian category together with a pointed endofunctor ``Later``.

    Morphisms carry ``src`` and ``dst`` attributes.  ``dagger`` is the model's
    canonical guarded fixpoint operator.
    """

    name = "abstract"
    #: True when every ``f`` has exactly one solution of the fixpoint square.
    unique_dagger = False
    #: True when hom-sets can be enumerated (``hom`` works).
    enumerable = True

    # -- structure -----------------------------------------------------
    @abstractmethod
    def identity(self, a: Obj): ...

    @abstractmethod
    def compose(self, g, f):
        """``g . f`` (apply ``f`` first)."""

    @abstractmethod
    def pair(self, f, g): ...

    @abstractmethod
    def proj_l(self, a: Obj, b: Obj): ...

    @abstractmethod
    def proj_r(self, a: Obj, b: Obj): ...

    @abstractmethod
    def bang(self, a: Obj): ...

    @abstractmethod
    def delay_mor(self, f): ...

    @abstractmethod
    def point(self, x: Obj): ...

    @abstractmethod
    def equal(self, f, g) -> bool: ...

    @abstractmethod
    def dagger(self, f): ...

    # -- sampling ------------------------------------------------------
    @abstractmethod
    def sample_object(self, rng) -> Obj: ...

    @abstractmethod
    def sample_hom(self, a: Obj, b: Obj, rng, allowed=None):
        """A random morphism ``a -> b`` or ``None`` if the hom-set is empty."""

    def hom(self, a: Obj, b: Obj, limit: int | None = None) -> Iterator:
        raise BudgetExceeded(f"{self.name}: hom-sets are not enumerable")

    def objects(self) -> list[Obj]:
        raise BudgetExceeded(f"{self.name}: no exhaustive object pool")

    def describe(self, f) -> Any:
        """JSON-friendly pointwise rendering of a morphism."""
        return repr(f)

    # -- derived structure ---------------------------------------------
    def terminal(self) -> Obj:
        return One()

    def delay(self, a: Obj) -> Obj:
        return Later(a)

    def then(self, *fs):
        """Diagrammatic composite: ``then(f, g, h) = h . g . f``."""
        out = fs[0]
        for g in fs[1:]:
            out = self.compose(g, out)
        return out

    def cross(self, f, g):
        """``f x g : A x B -> C x D``."""
        a, b = f.src, g.src
        return self.pair(
            self.compose(f, self.proj_l(a, b)), self.compose(g, self.proj_r(a, b))
        )

    def diag(self, a: Obj):
        ida = self.identity(a)
        return self.pair(ida, ida)

    def swap(self, a: Obj, b: Obj):
        return self.pair(self.proj_r(a, b), self.proj_l(a, b))

    def can(self, x: Obj, y: Obj):
        """``<|>pi_l, |>pi_r> : |>(X x Y) -> |>X x |>Y``."""
        return self.pair(
            self.delay_mor(self.proj_l(x, y)), self.delay_mor(self.proj_r(x, y))
        )

    def assoc_r(self, a: Obj, b: Obj, c: Obj):
        """``(A x B) x C -> A x (B x C)``."""
        ab = Prod(a, b)
        pl, pr = self.proj_l(ab, c), self.proj_r(ab, c)
        return self.pair(
            self.compose(self.proj_l(a, b), pl),
            self.pair(self.compose(self.proj_r(a, b), pl), pr),
        )

    def assoc_l(self, a: Obj, b: Obj, c: Obj):
        """``A x (B x C) -> (A x B) x C``."""
        bc = Prod(b, c)
        pl, pr = self.proj_l(a, bc), self.proj_r(a, bc)
        return self.pair(
            self.pair(pl, self.compose(self.proj_l(b, c), pr)),
            self.compose(self.proj_r(b, c), pr),
        )

    def unit_l(self, a: Obj):
        """``A -> 1 x A``."""
        return self.pair(self.bang(a), self.identity(a))

    def id_times(self, a: Obj, g):
        """``A x g``."""
        return self.cross(self.identity(a), g)

    def times_id(self, f, a: Obj):
        """``f x A``."""
        return self.cross(f, self.identity(a))


# ---------------------------------------------------------------------------
# shape helpers


def split_guarded(f) -> tuple[Obj, Obj]:
    """For ``f : |>X x Y -> X`` return ``(X, Y)``."""
    src = f.src
    if not (isinstance(src, Prod) and isinstance(src.left, Later)):
        raise ModelError(f"not of shape |>X x Y -> X: {src!r} -> {f.dst!r}")
    if src.left.base != f.dst:
        raise ModelError(f"delayed object {src.left.base!r} differs from {f.dst!r}")
    return f.dst, src.right


def split_traced(f) -> tuple[Obj, Obj, Obj]:
    """For ``f : |>X x A -> X x B`` return ``(X, A, B)``."""
    src, dst = f.src, f.dst
    if not (isinstance(src, Prod) and isinstance(src.left, Later) and isinstance(dst, Prod)):
        raise ModelError(f"not of shape |>X x A -> X x B: {src!r} -> {dst!r}")
    if src.left.base != dst.left:
        raise ModelError("trace: state objects of source and target differ")
    return dst.left, src.right, dst.right


# ---------------------------------------------------------------------------
# fixpoint square, solutions


def unfold(model: CategoryModel, f, s):
    """Right-hand side of the fixpoint square: ``f . (p_X x Y) . <s, Y>``."""
    x, y = split_guarded(f)
    return model.then(
        model.pair(s, model.identity(y)),
        model.times_id(model.point(x), y),
        f,
    )


def brute_force_solutions(model: CategoryModel, f, limit: int = 100_000) -> list:
    """Every ``s : Y -> X`` with ``s = f . (p_X x Y) . <s, Y>``, in enumeration order."""
    x, y = split_guarded(f)
    sols = []
    for s in model.hom(y, x, limit=limit):
        if model.equal(s, unfold(model, f, s)):
            sols.append(s)
    return sols


# ---------------------------------------------------------------------------
# fixpoint <-> trace


def dagger_from_trace(model: CategoryModel, tr: Trace) -> Dagger:
    """``f |-> Tr(<f, f>)``."""

    def dagger(f):
        split_guarded(f)
        return tr(model.pair(f, f))

    return dagger


def trace_from_dagger(model: CategoryModel, d: Dagger) -> Trace:
    """``f |-> pi_r . f . (p_X x A) . <(pi_l . f)^dagger, A>``."""

    def trace(f):
        x, a, b = split_traced(f)
        head = model.compose(model.proj_l(x, b), f)
        return model.then(
            model.pair(d(head), model.identity(a)),
            model.times_id(model.point(x), a),
            f,
            model.proj_r(x, b),
        )

    return trace


def derive_point_q(model: CategoryModel, d: Dagger, x: Obj):
    """``q_X = pi_l . (|>pi_r x X)^dagger : X -> |>X``."""
    lx = Later(x)
    fx = model.times_id(model.delay_mor(model.proj_r(lx, x)), x)
    return model.compose(model.proj_l(lx, x), d(fx))
