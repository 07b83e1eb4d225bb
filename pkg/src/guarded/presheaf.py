"""Presheaves of finite sets over a finite rooted poset.

Two delays are available.  On a chain ``0 < 1 < ... < N`` the *shift* delay
has ``|>X(0) = 1`` and ``|>X(n+1) = X(n)``; on any rooted poset the *limit*
delay takes ``|>X(w)`` to be the set of compatible families over the
elements strictly below ``w``.  The truncated chain is the desk-scale
stand-in for the topos of trees.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .core import (
    Base,
    BudgetExceeded,
    Exp,
    Later,
    ModelError,
    Obj,
    One,
    Prod,
    split_guarded,
)
from .finite import Carrier, FiniteModel, Mor, product_sizes


class SiteError(ValueError):
    pass


@dataclass(frozen=True)
class Site:
    """Finite poset on ``0..n-1`` with root ``0``; indices are a linear extension."""

    n: int
    less: frozenset  # pairs (v, w) with v < w

    def __post_init__(self):
        if self.n < 1:
            raise SiteError("a site needs at least its root")
        for v, w in self.less:
            if v == w:
                raise SiteError(f"cycle through {v}")
            if (w, v) in self.less:
                raise SiteError(f"cycle between {v} and {w}")
            if not (0 <= v < self.n and 0 <= w < self.n):
                raise SiteError(f"pair {(v, w)} out of range")
            if v > w:
                raise SiteError(f"elements must be numbered along the order; got {v} < {w}")
        for u, v in self.less:
            for v2, w in self.less:
                if v == v2 and (u, w) not in self.less:
                    raise SiteError("order is not transitive")
        for w in range(1, self.n):
            if (0, w) not in self.less:
                raise SiteError(f"0 is not a root: not below {w}")

    @classmethod
    def from_covers(cls, n: int, covers) -> Site:
        less = set(covers)
        changed = True
        while changed:
            changed = False
            for (u, v), (v2, w) in itertools.product(list(less), list(less)):
                if v == v2 and (u, w) not in less:
                    less.add((u, w))
                    changed = True
                    if u == w:
                        raise SiteError(f"cycle through {u}")
        return cls(n, frozenset(less))

    @classmethod
    def chain(cls, top: int) -> Site:
        return cls.from_covers(top + 1, [(k, k + 1) for k in range(top)])

    @classmethod
    def vee(cls) -> Site:
        """Root below two incomparable elements."""
        return cls.from_covers(3, [(0, 1), (0, 2)])

    @classmethod
    def diamond(cls) -> Site:
        return cls.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])

    def below(self, w: int) -> tuple[int, ...]:
        return tuple(v for v in range(w) if (v, w) in self.less)

    def covers(self, w: int) -> tuple[int, ...]:
        bl = self.below(w)
        return tuple(v for v in bl if not any((v, u) in self.less for u in bl))

    @property
    def is_chain(self) -> bool:
        return all(self.below(w) == tuple(range(w)) for w in range(self.n))


@dataclass(frozen=True)
class Presheaf:
    """Stage sizes plus restriction tables along covering pairs.

    ``restr`` maps a cover ``(v, w)`` to a tuple sending elements of ``X(w)``
    to elements of ``X(v)``.
    """

    site: Site
    sizes: tuple[int, ...]
    restr: tuple = field(default=())  # sorted ((v, w), table) pairs

    def __post_init__(self):
        if len(self.sizes) != self.site.n:
            raise SiteError("one size per site element required")
        if any(s < 0 for s in self.sizes):
            raise SiteError("negative stage size")
        tab = dict(self.restr)
        for w in range(self.site.n):
            for v in self.site.covers(w):
                t = tab.get((v, w))
                if t is None or len(t) != self.sizes[w] or any(not 0 <= e < self.sizes[v] for e in t):
                    raise SiteError(f"restriction {w}->{v} missing or not a function")
        self.all_restrictions()  # coherence check

    def restriction(self, v: int, w: int) -> tuple[int, ...]:
        if v == w:
            return tuple(range(self.sizes[w]))
        return self.all_restrictions()[(v, w)]

    def all_restrictions(self) -> dict:
        cached = self.__dict__.get("_all")
        if cached is not None:
            return cached
        tab = dict(self.restr)
        out: dict = {}
        for w in range(self.site.n):
            for v in self.site.below(w):
                cand = None
                for u in self.site.covers(w):
                    if u == v:
                        t = tab[(u, w)]
                    elif (v, u) in self.site.less:
                        inner = out[(v, u)]
                        t = tuple(inner[e] for e in tab[(u, w)])
                    else:
                        continue
                    if cand is None:
                        cand = t
                    elif cand != t:
                        raise SiteError(f"restrictions {w}->{v} do not commute")
                out[(v, w)] = cand
        object.__setattr__(self, "_all", out)
        return out

    def __repr__(self) -> str:
        maps = " ".join(f"{v}<{w}:" + "".join(map(str, t)) for (v, w), t in self.restr)
        return f"F({','.join(map(str, self.sizes))}{' ' + maps if maps else ''})"

    def __hash__(self):
        return hash((self.site, self.sizes, self.restr))

    def __eq__(self, other):
        return (
            isinstance(other, Presheaf)
            and (self.site, self.sizes, self.restr) == (other.site, other.sizes, other.restr)
        )


def make_presheaf(site: Site, sizes: Sequence[int], restr: dict) -> Presheaf:
    return Presheaf(site, tuple(sizes), tuple(sorted((k, tuple(v)) for k, v in restr.items())))


def chain_presheaf(sizes: Sequence[int], restrictions: Sequence[Sequence[int]] = ()) -> Presheaf:
    """Presheaf on the chain ``0 < ... < N``; ``restrictions[n] : X(n+1) -> X(n)``."""
    site = Site.chain(len(sizes) - 1)
    return make_presheaf(site, sizes, {(n, n + 1): r for n, r in enumerate(restrictions)})


def constant_presheaf(site: Site, k: int = 1) -> Presheaf:
    return make_presheaf(
        site, [k] * site.n, {(v, w): tuple(range(k)) for w in range(site.n) for v in site.covers(w)}
    )


# ---------------------------------------------------------------------------
# carriers


class PCarrier(Carrier):
    """Staged carrier with restrictions ``restr[(v, w)]`` on local indices."""

    def __init__(self, site: Site, sizes, restr: dict, labels=None):
        super().__init__(sizes)
        self.site = site
        self.restr = restr
        self.labels = labels  # optional per-stage list of element labels
        self.index = [{lab: k for k, lab in enumerate(ls)} for ls in labels] if labels else None

    def r(self, v: int, w: int, i: int) -> int:
        return i if v == w else self.restr[(v, w)][i]


def compatible_families(site: Site, x: PCarrier, w: int) -> list[tuple[int, ...]]:
    """Compatible families ``(x_v)_{v<w}`` in lexicographic order."""
    bl = site.below(w)
    pos = {v: k for k, v in enumerate(bl)}
    out: list[tuple[int, ...]] = []

    def rec(k: int, acc: list[int]):
        if k == len(bl):
            out.append(tuple(acc))
            return
        v = bl[k]
        for e in range(x.sizes[v]):
            if all(x.r(u, v, e) == acc[pos[u]] for u in site.below(v)):
                acc.append(e)
                rec(k + 1, acc)
                acc.pop()

    rec(0, [])
    return out


class PresheafModel(FiniteModel):
    """Presheaves over ``site`` with the shift (chains only) or limit delay."""

    unique_dagger = True

    def __init__(self, site: Site, delay: str = "shift", max_size: int = 2, min_size: int = 1,
                 exp_limit: int = 20_000):
        if delay not in ("shift", "limit"):
            raise ValueError("delay must be 'shift' or 'limit'")
        if delay == "shift" and not site.is_chain:
            raise SiteError("the shift delay needs a chain site")
        self.site = site
        self.delay_kind = delay
        self.max_size = max_size
        self.min_size = min_size
        self.exp_limit = exp_limit
        self.stages = site.n
        self.name = f"presheaf[{'chain' if site.is_chain else 'poset'} n={site.n}, {delay}]"
        super().__init__()

    # -- carriers ------------------------------------------------------
    def _one_carrier(self) -> PCarrier:
        s = self.site
        return PCarrier(s, [1] * s.n, {(v, w): (0,) for w in range(s.n) for v in s.below(w)})

    def _base_carrier(self, x: Presheaf) -> PCarrier:
        if x.site != self.site:
            raise ModelError("presheaf lives on a different site")
        return PCarrier(self.site, x.sizes, x.all_restrictions())

    def _product_carrier(self, a: PCarrier, b: PCarrier) -> PCarrier:
        sizes = product_sizes(a, b)
        restr = {}
        for (v, w), ta in a.restr.items():
            tb = b.restr[(v, w)]
            nb_w, nb_v = b.sizes[w], b.sizes[v]
            restr[(v, w)] = tuple(ta[k // nb_w] * nb_v + tb[k % nb_w] for k in range(sizes[w]))
        return PCarrier(self.site, sizes, restr)

    def _later_carrier(self, base: Obj) -> PCarrier:
        x = self.carrier(base)
        s = self.site
        if self.delay_kind == "shift":
            sizes = [1] + list(x.sizes[:-1])
            restr = {}
            for w in range(s.n):
                for v in s.below(w):
                    if v == 0:
                        restr[(v, w)] = (0,) * sizes[w]
                    else:
                        restr[(v, w)] = tuple(x.r(v - 1, w - 1, i) for i in range(sizes[w]))
            return PCarrier(s, sizes, restr)
        labels = [compatible_families(s, x, w) for w in range(s.n)]
        restr = {}
        for w in range(s.n):
            bw = s.below(w)
            for v in bw:
                keep = [bw.index(u) for u in s.below(v)]
                idx = {lab: k for k, lab in enumerate(labels[v])}
                restr[(v, w)] = tuple(idx[tuple(fam[p] for p in keep)] for fam in labels[w])
        return PCarrier(s, [len(l) for l in labels], restr, labels)

    def _other_carrier(self, obj: Obj) -> PCarrier:
        if isinstance(obj, Exp):
            return self._exp_carrier(obj.dom, obj.cod)
        return super()._other_carrier(obj)

    # -- structure -----------------------------------------------------
    def delay_mor(self, f: Mor) -> Mor:
        a, b = self.carrier(f.src), self.carrier(f.dst)
        la, lb = self.carrier(Later(f.src)), self.carrier(Later(f.dst))
        out = []
        for w in range(self.site.n):
            for i in range(la.sizes[w]):
                if self.delay_kind == "shift":
                    if w == 0:
                        out.append(lb.at(0, 0))
                    else:
                        out.append(lb.at(w, b.local(f.table[a.at(w - 1, i)])))
                else:
                    fam = la.labels[w][i]
                    img = tuple(b.local(f.table[a.at(v, e)]) for v, e in zip(self.site.below(w), fam))
                    out.append(lb.at(w, lb.index[w][img]))
        return Mor(Later(f.src), Later(f.dst), tuple(out))

    def point(self, x: Obj) -> Mor:
        c, lc = self.carrier(x), self.carrier(Later(x))
        out = []
        for w in range(self.site.n):
            for i in range(c.sizes[w]):
                if self.delay_kind == "shift":
                    out.append(lc.at(w, 0 if w == 0 else c.r(w - 1, w, i)))
                else:
                    fam = tuple(c.r(v, w, i) for v in self.site.below(w))
                    out.append(lc.at(w, lc.index[w][fam]))
        return Mor(x, Later(x), tuple(out))

    def dagger(self, f: Mor) -> Mor:
        if self.delay_kind == "shift":
            return dagger_chain(self, f)
        return dagger_poset(self, f)

    def _tests(self, ca: PCarrier, cb: PCarrier):
        fwd = [[] for _ in range(ca.n)]
        for w in range(self.site.n):
            for v in self.site.covers(w):
                rb = cb.restr[(v, w)]
                off_v = cb.offsets[v]
                off_w = cb.offsets[w]
                test = lambda lo, hi, rb=rb, ov=off_v, ow=off_w: rb[hi - ow] + ov == lo
                for i in range(ca.sizes[w]):
                    fwd[ca.at(v, ca.r(v, w, i))].append((ca.at(w, i), test))
        return fwd

    # -- sampling ------------------------------------------------------
    def _presheaf_from_choices(self, sizes, fams_choice) -> Presheaf:
        restr = {}
        for w, fams in fams_choice.items():
            bl = self.site.below(w)
            for v in self.site.covers(w):
                k = bl.index(v)
                restr[(v, w)] = tuple(fam[k] for fam in fams)
        return make_presheaf(self.site, sizes, restr)

    def random_presheaf(self, rng, max_size: int | None = None, min_size: int | None = None) -> Presheaf:
        hi = self.max_size if max_size is None else max_size
        lo = self.min_size if min_size is None else min_size
        sizes: list[int] = []
        choice = {}
        partial = PCarrier(self.site, [], {})
        for w in range(self.site.n):
            if w == 0:
                sizes.append(rng.randint(lo, hi))
            else:
                fams = compatible_families(self.site, partial, w)
                n = rng.randint(lo, hi) if fams else 0
                sizes.append(n)
                choice[w] = [rng.choice(fams) for _ in range(n)]
            partial = self._partial(sizes, choice)
        return self._presheaf_from_choices(sizes, choice)

    def _partial(self, sizes, choice) -> PCarrier:
        x = self._presheaf_from_choices(sizes + [0] * (self.site.n - len(sizes)), {
            w: c for w, c in choice.items()
        } | {w: [] for w in range(len(sizes), self.site.n)})
        return PCarrier(self.site, x.sizes, x.all_restrictions())

    def all_presheaves(self, max_size: int | None = None, min_size: int = 0) -> list[Presheaf]:
        hi = self.max_size if max_size is None else max_size
        out: list[Presheaf] = []

        def rec(w: int, sizes: list[int], choice: dict):
            if w == self.site.n:
                out.append(self._presheaf_from_choices(sizes, choice))
                return
            if w == 0:
                for n in range(min_size, hi + 1):
                    rec(1, [n], {})
                return
            fams = compatible_families(self.site, self._partial(sizes, choice), w)
            for n in range(min_size, hi + 1):
                if n and not fams:
                    continue
                for pick in itertools.product(fams, repeat=n):
                    rec(w + 1, sizes + [n], choice | {w: list(pick)})

        rec(0, [], {})
        return out

    def sample_object(self, rng) -> Obj:
        return Base(self.random_presheaf(rng))

    def objects(self) -> list[Obj]:
        return [Base(x) for x in self.all_presheaves()]

    # -- exponentials (chain, shift delay) -----------------------------
    def _require_chain(self):
        if self.delay_kind != "shift":
            raise ModelError("exponentials are only provided for the chain model")

    def _exp_carrier(self, dom: Obj, cod: Obj) -> PCarrier:
        self._require_chain()
        y, z = self.carrier(dom), self.carrier(cod)
        levels: list[list[tuple]] = []
        prev: list[tuple] = [()]
        for n in range(self.site.n):
            cur = []
            for fam in prev:
                opts = []
                for e in range(y.sizes[n]):
                    if n == 0:
                        opts.append(range(z.sizes[0]))
                    else:
                        want = fam[n - 1][y.r(n - 1, n, e)]
                        opts.append([c for c in range(z.sizes[n]) if z.r(n - 1, n, c) == want])
                for g in itertools.product(*opts):
                    cur.append(fam + (tuple(g),))
                    if len(cur) > self.exp_limit:
                        raise BudgetExceeded("exponential object too large")
            levels.append(cur)
            prev = cur
        restr = {}
        for w in range(self.site.n):
            for v in range(w):
                idx = {lab: k for k, lab in enumerate(levels[v])}
                restr[(v, w)] = tuple(idx[fam[: v + 1]] for fam in levels[w])
        return PCarrier(self.site, [len(l) for l in levels], restr, levels)

    def ev(self, dom: Obj, cod: Obj) -> Mor:
        """``ev : Y x Z^Y -> Z``."""
        e = Exp(dom, cod)
        src = Prod(dom, e)
        cs, ce, cz = self.carrier(src), self.carrier(e), self.carrier(cod)
        y = self.carrier(dom)
        out = [0] * cs.n
        for u in range(cs.n):
            w = cs.stage_of[u]
            yi, ei = y.local(cs.pl[u]), ce.local(cs.pr[u])
            out[u] = cz.at(w, ce.labels[w][ei][w][yi])
        return Mor(src, cod, tuple(out))

    def curry(self, f: Mor) -> Mor:
        """``curry : C(X x Y, Z) -> C(X, Z^Y)``."""
        if not isinstance(f.src, Prod):
            raise ModelError("curry needs a product source")
        x_obj, y_obj = f.src.left, f.src.right
        e = Exp(y_obj, f.dst)
        cx, cy, cf, cz, ce = (self.carrier(o) for o in (x_obj, y_obj, f.src, f.dst, e))
        out = []
        for n in range(self.site.n):
            for i in range(cx.sizes[n]):
                fam = tuple(
                    tuple(cz.local(f.table[cf.encode(cx.at(k, cx.r(k, n, i)), cy.at(k, yv))])
                          for yv in range(cy.sizes[k]))
                    for k in range(n + 1)
                )
                out.append(ce.at(n, ce.index[n][fam]))
        return Mor(x_obj, e, tuple(out))

    def uncurry(self, g: Mor) -> Mor:
        """``uncurry : C(X, Z^Y) -> C(X x Y, Z)``."""
        if not isinstance(g.dst, Exp):
            raise ModelError("uncurry needs an exponential target")
        y_obj, z_obj = g.dst.dom, g.dst.cod
        src = Prod(g.src, y_obj)
        cs, ce, cz, cy = self.carrier(src), self.carrier(g.dst), self.carrier(z_obj), self.carrier(y_obj)
        out = []
        for u in range(cs.n):
            w = cs.stage_of[u]
            fam = ce.labels[w][ce.local(g.table[cs.pl[u]])]
            out.append(cz.at(w, fam[w][cy.local(cs.pr[u])]))
        return Mor(src, z_obj, tuple(out))

    def inverse(self, f: Mor) -> Mor:
        """Inverse of a bijective morphism; ``ModelError`` otherwise."""
        n = self.carrier(f.dst).n
        inv = [-1] * n
        for u, v in enumerate(f.table):
            if inv[v] != -1:
                raise ModelError("morphism is not invertible")
            inv[v] = u
        if -1 in inv:
            raise ModelError("morphism is not invertible")
        g = Mor(f.dst, f.src, tuple(inv))
        if not self.is_morphism(g):
            raise ModelError("inverse is not natural")
        return g


# ---------------------------------------------------------------------------
# fixpoint operators


def dagger_chain(model: PresheafModel, f: Mor) -> Mor:
    """Stage-by-stage solution on a chain with the shift delay.

    Stage 0 is ``f_0``; stage ``n+1`` feeds the restriction of the stage-``n``
    solution, together with the parameter, through ``f_{n+1}``.
    """
    if model.delay_kind != "shift":
        raise ModelError("dagger_chain needs the shift delay")
    x_obj, y_obj = split_guarded(f)
    cx, cy, cf = model.carrier(x_obj), model.carrier(y_obj), model.carrier(f.src)
    lx = model.carrier(Later(x_obj))
    sol = [0] * cy.n
    for n in range(model.site.n):
        for yi in range(cy.sizes[n]):
            if n == 0:
                prev = lx.at(0, 0)
            else:
                below = sol[cy.at(n - 1, cy.r(n - 1, n, yi))]
                prev = lx.at(n, cx.local(below))
            sol[cy.at(n, yi)] = f.table[cf.encode(prev, cy.at(n, yi))]
    return Mor(y_obj, x_obj, tuple(sol))


def dagger_poset(model: PresheafModel, f: Mor) -> Mor:
    """Solution by induction over the site, using the limit delay."""
    if model.delay_kind != "limit":
        raise ModelError("dagger_poset needs the limit delay")
    x_obj, y_obj = split_guarded(f)
    cx, cy, cf = model.carrier(x_obj), model.carrier(y_obj), model.carrier(f.src)
    lx = model.carrier(Later(x_obj))
    sol = [0] * cy.n
    for w in range(model.site.n):
        bl = model.site.below(w)
        for yi in range(cy.sizes[w]):
            fam = tuple(cx.local(sol[cy.at(v, cy.r(v, w, yi))]) for v in bl)
            k = lx.at(w, lx.index[w][fam])
            sol[cy.at(w, yi)] = f.table[cf.encode(k, cy.at(w, yi))]
    return Mor(y_obj, x_obj, tuple(sol))


def unparam_chain(model: PresheafModel, g: Mor) -> Mor:
    """Fixpoint ``1 -> A`` of ``g : |>A -> A`` on the chain."""
    if not (isinstance(g.src, Later) and g.src.base == g.dst):
        raise ModelError("expected g : |>A -> A")
    ca, la = model.carrier(g.dst), model.carrier(g.src)
    out = []
    prev = None
    for n in range(model.site.n):
        arg = la.at(0, 0) if n == 0 else la.at(n, ca.local(prev))
        prev = g.table[arg]
        out.append(prev)
    return Mor(One(), g.dst, tuple(out))


def dagger_via_exponentials(model: PresheafModel, unparam=unparam_chain):
    """Parametrized dagger obtained from an unparametrized one through exponentials.

    ``f : |>X x Y -> X`` is turned into ``|>(X^Y) -> X^Y`` by currying
    ``f . <|>ev . can^-1 . (p_Y x |>(X^Y)), pi_l>`` (with the product
    swapped), its fixpoint ``1 -> X^Y`` is uncurried and precomposed with
    ``Y = 1 x Y``.
    """
    model._require_chain()

    def dagger(f: Mor) -> Mor:
        x, y = split_guarded(f)
        e = Exp(y, x)
        le = Later(e)
        iota = model.inverse(model.can(y, e))
        to_later_x = model.then(
            model.times_id(model.point(y), le), iota, model.delay_mor(model.ev(y, x))
        )
        g = model.compose(f, model.pair(to_later_x, model.proj_l(y, le)))
        c = model.curry(model.compose(g, model.swap(le, y)))
        s = unparam(model, c)
        return model.compose(model.uncurry(s), model.unit_l(y))

    return dagger
