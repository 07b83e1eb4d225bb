"""Text format for guarded equation systems.

::

    sig *: 2, c: 0          # or: sig */2, c/0
    vars x1 x2
    params y1 y2
    x1 = x2 * y1
    x2 = (x1 * y2) * c

Statements are separated by newlines or ``;``.  Terms are prefix
applications ``op(t1, ..., tn)``, bare names (constants, variables,
parameters) and a left-associative infix ``*`` when ``*`` is declared
binary.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .trees import EquationSystem, RationalTree, Signature, check_guarded

E_SYNTAX = "E_SYNTAX"
E_UNKNOWN_SYMBOL = "E_UNKNOWN_SYMBOL"
E_ARITY = "E_ARITY"
E_DUPLICATE = "E_DUPLICATE"
E_UNDEFINED_VAR = "E_UNDEFINED_VAR"
E_UNGUARDED = "E_UNGUARDED"


class ParseError(ValueError):
    def __init__(self, code: str, message: str, line: int = 0, col: int = 0):
        self.code, self.line, self.col = code, line, col
        super().__init__(f"{line}:{col}: {code}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # name, num, sym, sep, end
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<sep>[;\n])|(?P<num>\d+(?![A-Za-z_]))"
                    r"|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[*(),:=/])")


def tokenize(text: str) -> list[Token]:
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(E_SYNTAX, f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        col = pos - start + 1
        if kind in ("num", "name", "sym", "sep"):
            out.append(Token(kind, m.group(), line, col))
        if m.group() == "\n":
            line, start = line + 1, m.end()
        pos = m.end()
    out.append(Token("end", "", line, pos - start + 1))
    return out


def _statements(tokens: list[Token]) -> list[list[Token]]:
    stmts, cur = [], []
    for t in tokens:
        if t.kind in ("sep", "end"):
            if cur:
                stmts.append(cur)
            cur = []
        else:
            cur.append(t)
    return stmts


class _Terms:
    """Recursive-descent term parser over one statement's tokens."""

    def __init__(self, toks: list[Token], sig: Signature, vars_: set, params: set, end: Token):
        self.toks, self.i = toks, 0
        self.sig, self.vars, self.params = sig, vars_, params
        self.end = end
        self.infix = sig.arity("*") == 2

    def peek(self) -> Token:
        return self.toks[self.i] if self.i < len(self.toks) else self.end

    def take(self, text: str | None = None) -> Token:
        t = self.peek()
        if text is not None and t.text != text:
            found = t.text or "end of statement"
            raise ParseError(E_SYNTAX, f"expected {text!r}, found {found!r}", t.line, t.col)
        self.i += 1
        return t

    def expr(self) -> RationalTree:
        left = self.atom()
        while self.peek().text == "*":
            star = self.take()
            if not self.infix:
                raise ParseError(E_UNKNOWN_SYMBOL, "infix '*' needs '*' declared with arity 2", star.line, star.col)
            left = RationalTree.op("*", left, self.atom())
        return left

    def atom(self) -> RationalTree:
        t = self.peek()
        if t.text == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if t.kind != "name":
            raise ParseError(E_SYNTAX, f"expected a term, found {t.text or 'end of statement'!r}", t.line, t.col)
        self.take()
        if self.peek().text == "(":
            self.take()
            kids = [self.expr()]
            while self.peek().text == ",":
                self.take()
                kids.append(self.expr())
            self.take(")")
            arity = self.sig.arity(t.text)
            if arity is None:
                raise ParseError(E_UNKNOWN_SYMBOL, f"unknown operation {t.text!r}", t.line, t.col)
            if arity != len(kids):
                raise ParseError(E_ARITY, f"{t.text!r} expects {arity} arguments, got {len(kids)}", t.line, t.col)
            return RationalTree.op(t.text, *kids)
        if t.text in self.vars or t.text in self.params:
            return RationalTree.gen(t.text)
        arity = self.sig.arity(t.text)
        if arity is None:
            raise ParseError(E_UNKNOWN_SYMBOL, f"unknown name {t.text!r}", t.line, t.col)
        if arity:
            raise ParseError(E_ARITY, f"{t.text!r} expects {arity} arguments, got 0", t.line, t.col)
        return RationalTree.op(t.text)


def _parse_sig(toks: list[Token]) -> list[tuple[str, int, Token]]:
    entries = []
    i = 0
    while i < len(toks):
        name = toks[i]
        if name.kind not in ("name", "sym") or name.text in ("(", ")", ",", ":", "=", "/"):
            raise ParseError(E_SYNTAX, f"expected an operation name, found {name.text!r}", name.line, name.col)
        if i + 2 >= len(toks) or toks[i + 1].text not in (":", "/") or toks[i + 2].kind != "num":
            raise ParseError(E_SYNTAX, "signature entries look like 'name/arity' or 'name: arity'", name.line, name.col)
        entries.append((name.text, int(toks[i + 2].text), name))
        i += 3
        if i < len(toks):
            if toks[i].text != ",":
                raise ParseError(E_SYNTAX, "expected ',' between signature entries", toks[i].line, toks[i].col)
            i += 1
    return entries


def _names(toks: list[Token]) -> list[Token]:
    out = []
    for t in toks:
        if t.text == ",":
            continue
        if t.kind != "name":
            raise ParseError(E_SYNTAX, f"expected a name, found {t.text!r}", t.line, t.col)
        out.append(t)
    return out


def parse_equation_file(text: str, check: bool = True) -> tuple[Signature, EquationSystem]:
    """Parse and validate; with ``check`` an unguarded system raises ``E_UNGUARDED``."""
    tokens = tokenize(text)
    end = tokens[-1]
    stmts = _statements(tokens)
    sig_entries: list = []
    vars_: list[Token] = []
    params: list[Token] = []
    equations: list[list[Token]] = []
    seen_section: set = set()
    for st in stmts:
        head = st[0]
        if head.text in ("sig", "vars", "params") and (len(st) == 1 or st[1].text != "="):
            if head.text in seen_section:
                raise ParseError(E_DUPLICATE, f"second {head.text!r} section", head.line, head.col)
            seen_section.add(head.text)
            if head.text == "sig":
                sig_entries = _parse_sig(st[1:])
            elif head.text == "vars":
                vars_ = _names(st[1:])
            else:
                params = _names(st[1:])
        else:
            equations.append(st)

    declared: dict[str, Token] = {}
    for name, _, tok in sig_entries:
        if name in declared:
            raise ParseError(E_DUPLICATE, f"{name!r} declared twice", tok.line, tok.col)
        declared[name] = tok
    for tok in vars_ + params:
        if tok.text in declared:
            raise ParseError(E_DUPLICATE, f"{tok.text!r} declared twice", tok.line, tok.col)
        declared[tok.text] = tok
    sig = Signature(tuple((n, a) for n, a, _ in sig_entries))
    var_names = [t.text for t in vars_]
    param_names = [t.text for t in params]

    rhs: dict[str, RationalTree] = {}
    locations: dict[str, tuple] = {}
    for st in equations:
        lhs = st[0]
        if lhs.kind != "name" or len(st) < 2 or st[1].text != "=":
            raise ParseError(E_SYNTAX, "expected 'variable = term'", lhs.line, lhs.col)
        if lhs.text not in var_names:
            raise ParseError(E_UNDEFINED_VAR, f"{lhs.text!r} is not a declared variable", lhs.line, lhs.col)
        if lhs.text in rhs:
            raise ParseError(E_DUPLICATE, f"second equation for {lhs.text!r}", lhs.line, lhs.col)
        parser = _Terms(st[2:], sig, set(var_names), set(param_names), end)
        t = parser.expr()
        if parser.i != len(st) - 2:
            extra = st[2 + parser.i]
            raise ParseError(E_SYNTAX, f"unexpected {extra.text!r}", extra.line, extra.col)
        rhs[lhs.text] = t
        locations[lhs.text] = (lhs.line, lhs.col)
    for tok in vars_:
        if tok.text not in rhs:
            raise ParseError(E_UNDEFINED_VAR, f"no equation for {tok.text!r}", tok.line, tok.col)

    system = EquationSystem(sig, tuple(var_names), tuple(param_names), rhs, locations)
    if check:
        bad = check_guarded(system)
        if bad:
            v = bad[0]
            line, col = v.location or (0, 0)
            raise ParseError(E_UNGUARDED, f"{v.var}: {v.reason}", line, col)
    return sig, system


def parse_term(text: str, sig: Signature, vars_=(), params=()) -> RationalTree:
    """Single term; unknown bare names are errors."""
    tokens = tokenize(text)
    toks = [t for t in tokens if t.kind not in ("sep", "end")]
    p = _Terms(toks, sig, set(vars_), set(params), tokens[-1])
    t = p.expr()
    if p.i != len(toks):
        bad = toks[p.i]
        raise ParseError(E_SYNTAX, f"unexpected {bad.text!r}", bad.line, bad.col)
    return t
