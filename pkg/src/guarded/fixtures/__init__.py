"""Plain-text fixture formats and the shipped fixture files.

Posets are order matrices (rows of ``0``/``1``), metric spaces are distance
tables with entries like ``1/2``, presheaves are ``site`` / ``sizes`` /
``restrict v<w: ...`` lines.  ``#`` starts a comment everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from ..core import Base, Later, One, Prod
from ..cms import FinMetricSpace
from ..cpo import FinPoset
from ..finite import Mor
from ..presheaf import Presheaf, Site, make_presheaf

TWO_CHAIN = "cpo_two_chain.v1.txt"
STAR_EXAMPLE = "star_example.eqs"


class FixtureError(ValueError):
    pass


def read_fixture(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text()


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_poset(text: str) -> FinPoset:
    rows = [line.split() for line in _lines(text)]
    try:
        return FinPoset(tuple(tuple(bool(int(v)) for v in r) for r in rows))
    except ValueError as e:
        raise FixtureError(f"bad order matrix: {e}") from e


def format_poset(p: FinPoset) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in p.leq) + "\n"


def parse_metric(text: str) -> FinMetricSpace:
    try:
        return FinMetricSpace(tuple(tuple(Fraction(v) for v in line.split()) for line in _lines(text)))
    except (ValueError, ZeroDivisionError) as e:
        raise FixtureError(f"bad distance table: {e}") from e


def format_metric(x: FinMetricSpace) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in x.dist) + "\n"


def parse_site(words: list[str]) -> Site:
    kind = words[0] if words else ""
    if kind == "chain" and len(words) == 2:
        return Site.chain(int(words[1]))
    if kind == "covers" and len(words) >= 2:
        n = int(words[1].rstrip(":"))
        pairs = [tuple(int(v) for v in w.split("<")) for w in words[2:]]
        return Site.from_covers(n, pairs)
    raise FixtureError("site lines look like 'site chain N' or 'site covers n: 0<1 0<2 ...'")


def parse_presheaf(text: str) -> Presheaf:
    site, sizes, restr = None, None, {}
    for line in _lines(text):
        head, _, rest = line.partition(" ")
        if head == "site":
            site = parse_site(rest.split())
        elif head == "sizes":
            sizes = [int(v) for v in rest.split()]
        elif head == "restrict":
            pair, _, table = rest.partition(":")
            v, w = (int(k) for k in pair.strip().split("<"))
            restr[(v, w)] = tuple(int(k) for k in table.split())
        else:
            raise FixtureError(f"unknown presheaf line {line!r}")
    if site is None or sizes is None:
        raise FixtureError("presheaf needs 'site' and 'sizes' lines")
    return make_presheaf(site, sizes, restr)


def format_presheaf(x: Presheaf) -> str:
    covers = " ".join(f"{v}<{w}" for w in range(x.site.n) for v in x.site.covers(w))
    lines = [f"site covers {x.site.n}: {covers}".rstrip(), "sizes " + " ".join(map(str, x.sizes))]
    for (v, w), t in x.restr:
        lines.append(f"restrict {v}<{w}: " + " ".join(map(str, t)))
    return "\n".join(lines) + "\n"


def parse_cpo_map(text: str) -> Mor:
    """``format cpo-map v1``: a poset ``X`` and a table for ``X_bot x 1 -> X``."""
    lines = _lines(text)
    if not lines or lines[0] != "format cpo-map v1":
        raise FixtureError("expected 'format cpo-map v1' header")
    try:
        split = lines.index("map")
    except ValueError as e:
        raise FixtureError("missing 'map' section") from e
    if lines[1] != "poset":
        raise FixtureError("missing 'poset' section")
    x = Base(parse_poset("\n".join(lines[2:split])))
    table = tuple(int(v) for line in lines[split + 1:] for v in line.split())
    return Mor(Prod(Later(x), One()), x, table)


def two_chain_fixture() -> Mor:
    return parse_cpo_map(read_fixture(TWO_CHAIN))
