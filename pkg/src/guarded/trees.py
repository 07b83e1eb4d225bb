"""Rational Sigma-trees and guarded equation systems.

A :class:`RationalTree` is a finite rooted graph whose nodes are labelled
either by an operation symbol (with ordered children) or by a generator
(a leaf).  Back edges are allowed, so the graph presents the possibly
infinite tree obtained by unfolding it.  Two presentations denote the same
tree iff they are bisimilar; equality and hashing use the minimal canonical
presentation, and :func:`bisim_equal` decides bisimilarity of arbitrary
presentations by partition refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping

OP = "op"
GEN = "gen"

Label = tuple  # (OP, name) | (GEN, value)


class UnguardedError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "unguarded system")


def refine(labels: list, children: list) -> list[int]:
    """Coarsest stable partition: block ids per node (Moore-style refinement)."""
    ids: dict = {}
    block = [ids.setdefault(lab, len(ids)) for lab in labels]
    count = len(ids)
    while True:
        sig: dict = {}
        new = [sig.setdefault((block[i], tuple(block[c] for c in ch)), len(sig))
               for i, ch in enumerate(children)]
        if len(sig) == count:
            return new
        block, count = new, len(sig)


class RationalTree:
    """Rooted graph presentation of a rational tree.

    ``labels[i]`` is ``("op", name)`` or ``("gen", value)``; ``children[i]``
    lists child node indices (empty for generators and constants).
    """

    __slots__ = ("labels", "children", "root", "_key", "_hash")

    def __init__(self, labels: Iterable[Label], children: Iterable[Iterable[int]], root: int = 0):
        self.labels = tuple(labels)
        self.children = tuple(tuple(c) for c in children)
        self.root = root
        self._key = None
        self._hash = None
        if not 0 <= root < len(self.labels):
            raise ValueError("root out of range")
        for lab, ch in zip(self.labels, self.children):
            if lab[0] == GEN and ch:
                raise ValueError("generator nodes are leaves")

    # -- constructors --------------------------------------------------
    @classmethod
    def gen(cls, value: Hashable) -> RationalTree:
        return cls([(GEN, value)], [()], 0)

    @classmethod
    def op(cls, name: str, *kids: RationalTree) -> RationalTree:
        labels: list = [(OP, name)]
        children: list = [None]
        roots = []
        for k in kids:
            off = len(labels)
            roots.append(off + k.root)
            labels.extend(k.labels)
            children.extend(tuple(c + off for c in ch) for ch in k.children)
        children[0] = tuple(roots)
        return cls(labels, children, 0)

    # -- identity ------------------------------------------------------
    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = _canonical_key(self)
        return self._key

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, RationalTree):
            return NotImplemented
        return hash(self) == hash(other) and self.key == other.key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def canonical(self) -> RationalTree:
        """Minimal presentation with nodes numbered breadth first from the root."""
        key = self.key
        t = RationalTree([k[0] for k in key], [k[1] for k in key], 0)
        t._key = key
        return t

    # -- inspection ----------------------------------------------------
    @property
    def root_label(self) -> Label:
        return self.labels[self.root]

    @property
    def is_generator(self) -> bool:
        return self.root_label[0] == GEN

    @property
    def is_operation_rooted(self) -> bool:
        return self.root_label[0] == OP

    def subtree(self, node: int) -> RationalTree:
        return RationalTree(self.labels, self.children, node)

    def child(self, k: int) -> RationalTree:
        return self.subtree(self.children[self.root][k])

    def reachable(self) -> list[int]:
        seen = {self.root}
        order = [self.root]
        for i in order:
            for c in self.children[i]:
                if c not in seen:
                    seen.add(c)
                    order.append(c)
        return order

    def generators(self) -> set:
        return {self.labels[i][1] for i in self.reachable() if self.labels[i][0] == GEN}

    def is_finite(self) -> bool:
        """True when no cycle is reachable from the root."""
        state: dict[int, int] = {}

        def visit(i: int) -> bool:
            state[i] = 1
            for c in self.children[i]:
                s = state.get(c, 0)
                if s == 1 or (s == 0 and not visit(c)):
                    return False
            state[i] = 2
            return True

        return visit(self.root)

    def __repr__(self) -> str:
        return f"RationalTree({render(prefix(self, 4))})"

    # -- json ------------------------------------------------------------
    def to_json(self) -> dict:
        nodes = []
        for lab, ch in zip(self.labels, self.children):
            if lab[0] == OP:
                nodes.append({"op": lab[1], "children": list(ch)})
            else:
                nodes.append({"gen": lab[1]})
        return {"root": self.root, "nodes": nodes}

    @classmethod
    def from_json(cls, data: Mapping) -> RationalTree:
        labels, children = [], []
        for node in data["nodes"]:
            if "op" in node:
                labels.append((OP, node["op"]))
                children.append(tuple(node.get("children", ())))
            else:
                labels.append((GEN, node["gen"]))
                children.append(())
        return cls(labels, children, data["root"])


def _canonical_key(t: RationalTree) -> tuple:
    order = t.reachable()
    local = {n: k for k, n in enumerate(order)}
    labels = [t.labels[n] for n in order]
    children = [[local[c] for c in t.children[n]] for n in order]
    block = refine(labels, children)
    number: dict[int, int] = {block[0]: 0}
    queue = [0]
    out = []
    for i in queue:
        kids = []
        for c in children[i]:
            b = block[c]
            if b not in number:
                number[b] = len(number)
                queue.append(c)
            kids.append(number[b])
        out.append((labels[i], tuple(kids)))
    return tuple(out)


def bisim_equal(t1: RationalTree, t2: RationalTree) -> bool:
    """Bisimilarity by partition refinement on the disjoint union of both graphs."""
    off = len(t1.labels)
    labels = list(t1.labels) + list(t2.labels)
    children = [list(ch) for ch in t1.children] + [[c + off for c in ch] for ch in t2.children]
    block = refine(labels, children)
    return block[t1.root] == block[t2.root + off]


# ---------------------------------------------------------------------------
# substitution and the monad structure


def subst(t: RationalTree, fn: Callable[[Any], RationalTree]) -> RationalTree:
    """Replace every generator ``v`` by the tree ``fn(v)`` (Kleisli extension)."""
    reach = t.reachable()
    labels: list = []
    children: list = []
    where: dict[int, int] = {}
    cache: dict = {}
    pending = []
    for n in reach:
        lab = t.labels[n]
        if lab[0] == OP:
            where[n] = len(labels)
            labels.append(lab)
            children.append(None)
            pending.append(n)
    for n in reach:
        lab = t.labels[n]
        if lab[0] == GEN:
            v = lab[1]
            if v not in cache:
                s = fn(v)
                off = len(labels)
                labels.extend(s.labels)
                children.extend(tuple(c + off for c in ch) for ch in s.children)
                cache[v] = off + s.root
            where[n] = cache[v]
    for n in pending:
        children[where[n]] = tuple(where[c] for c in t.children[n])
    return RationalTree(labels, children, where[t.root]).canonical()


def map_gens(t: RationalTree, fn: Callable[[Any], Hashable]) -> RationalTree:
    """Functor action: rename generators."""
    return RationalTree(
        [(GEN, fn(lab[1])) if lab[0] == GEN else lab for lab in t.labels], t.children, t.root
    ).canonical()


def eta(v: Hashable) -> RationalTree:
    """Unit: the bare generator ``v``."""
    return RationalTree.gen(v)


def mu(t: RationalTree) -> RationalTree:
    """Multiplication: flatten a tree whose generators are trees."""
    return subst(t, lambda s: s)


def sigma(t: RationalTree) -> RationalTree:
    """Injection of the operation-rooted summand."""
    if not t.is_operation_rooted:
        raise ValueError("sigma expects an operation-rooted tree")
    return t


def mu_prime(t: RationalTree) -> RationalTree:
    """``mu`` restricted to operation-rooted trees (stays operation rooted)."""
    out = mu(sigma(t))
    assert out.is_operation_rooted
    return out


def classify(t: RationalTree) -> str:
    """``"generator"`` for the unit summand, ``"operation"`` for the ideal."""
    return "generator" if t.is_generator else "operation"


def distributive_law(t: RationalTree) -> RationalTree:
    """``eta_{S'} . mu'`` : operation-rooted tree of trees -> bare generator."""
    return eta(mu_prime(t))


# ---------------------------------------------------------------------------
# prefixes

HOLE = ("?",)


def prefix(t: RationalTree, depth: int):
    """Finite unfolding to ``depth``: operation nodes of arity > 0 at that depth become holes.

    Returns nested tuples ``("op", name, kids)`` / ``("gen", value)`` / ``HOLE``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")

    def go(n: int, d: int):
        lab = t.labels[n]
        if lab[0] == GEN:
            return lab
        kids = t.children[n]
        if not kids:
            return (OP, lab[1], ())
        if d >= depth:
            return HOLE
        return (OP, lab[1], tuple(go(c, d + 1) for c in kids))

    return go(t.root, 0)


def render(term, infix: Iterable[str] = ("*",)) -> str:
    """Text form of a prefix: binary symbols in ``infix`` are written infix."""
    infix = set(infix)

    def go(x, top: bool) -> str:
        if x == HOLE:
            return "?"
        if x[0] == GEN:
            v = x[1]
            return v if isinstance(v, str) else repr(v)
        _, name, kids = x
        if not kids:
            return name
        if name in infix and len(kids) == 2:
            s = f"{go(kids[0], False)} {name} {go(kids[1], False)}"
            return s if top else f"({s})"
        return f"{name}({', '.join(go(k, True) for k in kids)})"

    return go(term, True)


def spine_leaves(t: RationalTree, k: int) -> list:
    """Labels of the right children along the leftmost spine, ``k`` of them."""
    out = []
    node = t.root
    for _ in range(k):
        kids = t.children[node]
        if len(kids) != 2:
            break
        lab = t.labels[kids[1]]
        out.append(lab[1])
        node = kids[0]
    return out


# ---------------------------------------------------------------------------
# signatures and equation systems


@dataclass(frozen=True)
class Signature:
    arities: tuple  # ((name, arity), ...)

    def __post_init__(self):
        names = [n for n, _ in self.arities]
        if len(set(names)) != len(names):
            raise ValueError("operation names must be unique")
        if any(a < 0 for _, a in self.arities):
            raise ValueError("arities are natural numbers")

    @classmethod
    def of(cls, **arities: int) -> Signature:
        return cls(tuple(arities.items()))

    @classmethod
    def from_pairs(cls, pairs) -> Signature:
        return cls(tuple(pairs))

    def arity(self, name: str) -> int | None:
        return dict(self.arities).get(name)

    def __contains__(self, name: str) -> bool:
        return name in dict(self.arities)

    def names(self, arity: int | None = None) -> list[str]:
        return [n for n, a in self.arities if arity is None or a == arity]

    def check(self, t: RationalTree) -> None:
        for i in t.reachable():
            lab = t.labels[i]
            if lab[0] == OP:
                a = self.arity(lab[1])
                if a is None:
                    raise ValueError(f"unknown operation {lab[1]!r}")
                if a != len(t.children[i]):
                    raise ValueError(f"{lab[1]!r} expects {a} children")


STAR_SIGMA_C = Signature.of(**{"*": 2, "sigma": 1, "c": 0})


@dataclass(frozen=True)
class Violation:
    var: str
    reason: str
    location: tuple | None = None

    def __str__(self) -> str:
        loc = f"line {self.location[0]}, col {self.location[1]}: " if self.location else ""
        return f"{loc}{self.var}: {self.reason}"


@dataclass
class EquationSystem:
    """``x_i = t_i`` with right-hand sides over generators named by variables or parameters."""

    signature: Signature
    variables: tuple[str, ...]
    parameters: tuple[str, ...]
    rhs: dict[str, RationalTree]
    locations: dict[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        if set(self.variables) & set(self.parameters):
            raise ValueError("variables and parameters must be disjoint")
        for x, t in self.rhs.items():
            self.signature.check(t)
            extra = t.generators() - set(self.variables) - set(self.parameters)
            if extra:
                raise ValueError(f"{x}: unknown generators {sorted(map(str, extra))}")


def check_guarded(sys: EquationSystem) -> list[Violation]:
    """Equations whose right-hand side is a bare recursion variable."""
    out = []
    vars_ = set(sys.variables)
    for x in sys.variables:
        t = sys.rhs.get(x)
        if t is not None and t.is_generator and t.root_label[1] in vars_:
            out.append(Violation(x, "right-hand side is a bare recursion variable", sys.locations.get(x)))
    return out


def solve(rhs: Mapping[Hashable, RationalTree], var_of: Callable[[Any], Hashable | None]) -> dict:
    """Unique solution of a guarded system given as trees.

    Generator ``g`` is a recursion variable iff ``var_of(g)`` is not ``None``;
    every occurrence becomes a back edge to the root of that variable's
    right-hand side.
    """
    labels: list = []
    children: list = []
    roots: dict = {}
    for v, t in rhs.items():
        off = len(labels)
        roots[v] = off + t.root
        labels.extend(t.labels)
        children.extend(tuple(c + off for c in ch) for ch in t.children)
    redirect: dict[int, int] = {}
    for i, lab in enumerate(labels):
        if lab[0] == GEN:
            x = var_of(lab[1])
            if x is not None:
                if x not in roots:
                    raise KeyError(f"no equation for {x!r}")
                redirect[i] = roots[x]
                if labels[roots[x]][0] == GEN and var_of(labels[roots[x]][1]) is not None:
                    raise UnguardedError([Violation(str(x), "bare recursion variable")])
    children = [tuple(redirect.get(c, c) for c in ch) for ch in children]
    return {v: RationalTree(labels, children, redirect.get(r, r)).canonical() for v, r in roots.items()}


def solve_system(sys: EquationSystem) -> dict[str, RationalTree]:
    """Solution of a guarded system: one rational tree over the parameters per variable."""
    bad = check_guarded(sys)
    if bad:
        raise UnguardedError(bad)
    missing = [x for x in sys.variables if x not in sys.rhs]
    if missing:
        raise KeyError(f"no equation for {missing}")
    vars_ = set(sys.variables)
    return solve({x: sys.rhs[x] for x in sys.variables}, lambda g: g if g in vars_ else None)


def unfold_system(sys: EquationSystem, x: str, rounds: int) -> RationalTree:
    """``rounds`` steps of syntactic substitution starting from the variable ``x``."""
    vars_ = set(sys.variables)
    cur = {v: RationalTree.gen(v) for v in sys.variables}
    for _ in range(rounds):
        cur = {v: subst(sys.rhs[v], lambda g: cur[g] if g in vars_ else RationalTree.gen(g))
               for v in sys.variables}
    return cur[x]


def term(sig: Signature, text: str) -> RationalTree:
    """Small helper: build a finite term from ``op(a, b)`` / ``a * b`` text."""
    from .parser import parse_term

    return parse_term(text, sig)
