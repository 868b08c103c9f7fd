"""Text grammar for polynomials, a deterministic printer, and fixture files.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' nonneg-int)?
    base   := integer | identifier | '(' expr ')'

A leading '-' is allowed in front of any term. Whitespace is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .poly import REGISTRY, Poly, UnknownVariable, VarTable


class ExprSyntaxError(SyntaxError):
    def __init__(self, msg, line=1, column=1, text=None):
        super().__init__(f"{msg} at line {line}, column {column}")
        self.msg = msg
        self.lineno = line
        self.offset = column
        self.text = text

    def __str__(self):
        return f"{self.msg} at line {self.lineno}, column {self.offset}"

    @property
    def line(self):
        return self.lineno

    @property
    def column(self):
        return self.offset


class DuplicateId(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def _tokenize(text: str, line: int = 1):
    pos = 0
    n = len(text)
    out = []
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", line, pos + 1, text)
        kind = m.lastindex
        tok = m.group(kind)
        col = m.start(kind) + 1
        if tok == "**":
            raise ExprSyntaxError("'**' is not an operator; use '^'", line, col, text)
        out.append((("int", "name", "op")[kind - 1], tok, col))
        pos = m.end()
    out.append(("end", "", n + 1))
    return out


class _Parser:
    def __init__(self, text: str, table: VarTable, line: int):
        self.text = text
        self.table = table
        self.line = line
        self.toks = _tokenize(text, line)
        self.i = 0
        self._vars: dict[str, Poly] = {}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExprSyntaxError(msg, self.line, tok[2], self.text)

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Poly:
        base = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.error("exponent must be a nonnegative integer", tok)
            base = base ** int(tok[1])
        return base

    def base(self) -> Poly:
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return Poly.const(int(val), self.table)
        if kind == "name":
            if val not in self.table:
                raise UnknownVariable(val)
            p = self._vars.get(val)
            if p is None:
                p = self._vars[val] = Poly.var(val, self.table)
            return p
        if kind == "op" and val == "(":
            inner = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return inner
        if kind == "op" and val == "-":
            # a sign directly in front of a factor, e.g. "2*-3"
            return -self.factor()
        self.error("expected a number, variable or '('", tok)


def parse(text: str, table: VarTable = REGISTRY, line: int = 1) -> Poly:
    return _Parser(text, table, line).parse()


def _monomial_text(exps, names, sep, fmt_power):
    parts = []
    for e, n in zip(exps, names):
        if e:
            parts.append(fmt_power(n, e))
    return sep.join(parts)


def _join(terms):
    out = []
    for i, (coeff, mono) in enumerate(terms):
        neg = coeff < 0
        a = -coeff if neg else coeff
        body = mono[1](a) if a != 1 or not mono[0] else mono[0]
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


def render(p: Poly) -> str:
    """Terms in increasing graded-lex order, in the fixture grammar."""
    names = p.table.names

    def power(n, e):
        return n if e == 1 else f"{n}^{e}"

    terms = []
    for exps, coeff in p.terms(descending=False):
        mono = _monomial_text(exps, names, "*", power)
        terms.append((coeff, (mono, lambda a, m=mono: f"{a}*{m}" if m else str(a))))
    return _join(terms)


LATEX_NAMES = {
    "c": "c",
    "lam": r"\lambda",
    "T": "T",
    "kap": r"\kappa",
    "tau": r"\tau",
    "y1": "y_1",
    "y2": "y_2",
    "y3": "y_3",
    "a": "a",
    "w2": r"\omega_{22}^{1}",
    "w3": r"\omega_{33}^{1}",
    "w4": r"\omega_{44}^{1}",
    "mu2": r"\lambda_2",
    "mu3": r"\lambda_3",
    "mu4": r"\lambda_4",
    "Da": "e_1(a)",
    "u": "u",
}
for _k in range(1, 6):
    LATEX_NAMES[f"lam{_k}"] = r"\lambda" + "'" * _k
for _k in range(1, 5):
    LATEX_NAMES[f"T{_k}"] = "T" + "'" * _k


def _latex_symbol(name):
    if name in LATEX_NAMES:
        return LATEX_NAMES[name]
    m = re.fullmatch(r"([A-Za-z]+)(\d+)", name)
    if m:
        return f"{m.group(1)}_{{{m.group(2)}}}"
    return name


def render_latex(p: Poly) -> str:
    names = p.table.names

    def power(n, e):
        sym = _latex_symbol(n)
        if e == 1:
            return sym
        exp = str(e) if e < 10 else "{%d}" % e
        if "'" in sym or "^" in sym:
            sym = "{" + sym + "}"
        return f"{sym}^{exp}"

    terms = []
    for exps, coeff in p.terms(descending=False):
        mono = _monomial_text(exps, names, " ", power)
        terms.append((coeff, (mono, lambda a, m=mono: f"{a}{m}" if m else str(a))))
    return _join(terms)


@dataclass(frozen=True)
class FixtureEntry:
    id: str
    expr: Poly
    note: str = ""
    line: int = 0


@dataclass(frozen=True)
class FixtureFile:
    entries: tuple[FixtureEntry, ...] = ()
    path: str | None = None
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        idx = {}
        for e in self.entries:
            if e.id in idx:
                raise DuplicateId(f"duplicate fixture id {e.id!r}")
            idx[e.id] = e
        object.__setattr__(self, "_index", idx)

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[FixtureEntry]:
        return iter(self.entries)

    def __contains__(self, fid):
        return fid in self._index

    def __getitem__(self, fid) -> Poly:
        return self._index[fid].expr

    def get(self, fid, default=None):
        e = self._index.get(fid)
        return default if e is None else e.expr

    def entry(self, fid) -> FixtureEntry:
        return self._index[fid]

    def ids(self):
        return [e.id for e in self.entries]

    def merged(self, other: FixtureFile) -> FixtureFile:
        return FixtureFile(self.entries + other.entries)


_ID = re.compile(r"^([A-Za-z0-9][A-Za-z0-9_.\-]*)\s*:(.*)$")


def _logical_lines(text):
    """Yield (line number, text); indented lines continue the previous entry."""
    buf = None
    start = 0
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)
        content = body[0]
        note = body[1].strip() if len(body) > 1 else ""
        if not content.strip():
            continue
        if raw[:1] in (" ", "\t") and buf is not None:
            buf[0] += " " + content.strip()
            if note:
                buf[1] = (buf[1] + " " + note).strip()
            continue
        if buf is not None:
            yield start, buf[0], buf[1]
        buf = [content.strip(), note]
        start = no
    if buf is not None:
        yield start, buf[0], buf[1]


def parse_fixtures(text: str, table: VarTable = REGISTRY, path: str | None = None) -> FixtureFile:
    entries = []
    seen = set()
    for no, content, note in _logical_lines(text):
        m = _ID.match(content)
        if not m:
            raise ExprSyntaxError("expected 'id: expression'", no, 1, content)
        fid, body = m.group(1), m.group(2)
        if fid in seen:
            raise DuplicateId(f"duplicate fixture id {fid!r} (line {no})")
        seen.add(fid)
        try:
            expr = parse(body, table, line=no)
        except ExprSyntaxError as exc:
            raise ExprSyntaxError(exc.msg, no, exc.offset + len(content) - len(body), content) from None
        entries.append(FixtureEntry(fid, expr, note, no))
    return FixtureFile(tuple(entries), path)


def load_fixtures(path, table: VarTable = REGISTRY) -> FixtureFile:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_fixtures(text, table, str(path))


def load_fixture_dir(directory, table: VarTable = REGISTRY) -> FixtureFile:
    """Merge every ``*.txt`` fixture file in a directory; ids must be unique overall."""
    directory = Path(directory)
    merged = FixtureFile()
    for f in sorted(directory.glob("*.txt")):
        merged = merged.merged(load_fixtures(f, table))
    return merged
