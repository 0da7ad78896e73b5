"""
Line-oriented problem files.

    # comments run to the end of the line
    polyset-problem 1
    n 1
    q 1
    graph hrep          # or: graph vrep, with point/ray/line rows in R^{n+q}
    -1 1 <= 0           # a.x + b.y <= rhs  (also "=")
    end
    fibre               # optional: ray/line rows in R^q added to every value
    end
    cone                # ray/line rows in R^q; an empty block is C = {0}
    ray 1
    end
    standard-form       # optional marker written for standard-form problems

Numerals are exact rationals ("3", "-7/2", "2.23").
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from polyset.core import Mat, Vec, format_rational, parse_rational
from polyset.exceptions import ProblemParseError
from polyset.polyhedron import HRep, VRep
from polyset.setopt import OrderCone, PolyMap, SetOptProblem

FORMAT_NAME = "polyset-problem"
FORMAT_VERSION = "1"

_SENSES = {"<=": "<=", "≤": "<=", "=": "="}
_TOKEN_RE = re.compile(r"\S+")


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[list[_Token]]:
    rows: list[list[_Token]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [_Token(m.group(), number, m.start() + 1) for m in _TOKEN_RE.finditer(body)]
        if toks:
            rows.append(toks)
    return rows


def _rational(tok: _Token) -> Fraction:
    try:
        return parse_rational(tok.text)
    except ValueError:
        raise ProblemParseError(f"malformed numeral {tok.text!r}", tok.line, tok.column) from None


def _fail(message: str, tok: _Token) -> ProblemParseError:
    return ProblemParseError(message, tok.line, tok.column)


class _ProblemParser:
    def __init__(self, text: str) -> None:
        self.rows = _tokenize(text)
        self.pos = 0
        self.n: int | None = None
        self.q: int | None = None
        self.graph: HRep | VRep | None = None
        self.fibre: tuple[list[Vec], list[Vec]] | None = None
        self.cone: tuple[list[Vec], list[Vec]] | None = None
        self.standard = False

    def _next(self) -> list[_Token]:
        row = self.rows[self.pos]
        self.pos += 1
        return row

    def _last_line(self) -> int:
        return self.rows[-1][-1].line if self.rows else 1

    def parse(self) -> SetOptProblem:
        if not self.rows:
            raise ProblemParseError("empty problem file", 1)
        self._header(self._next())
        while self.pos < len(self.rows):
            toks = self._next()
            key = toks[0]
            if key.text in ("n", "q"):
                self._dimension(toks)
            elif key.text == "graph":
                self._graph(toks)
            elif key.text == "fibre":
                self.fibre = self._generators(toks, "fibre")
            elif key.text == "cone":
                self.cone = self._generators(toks, "cone")
            elif key.text == "standard-form":
                if len(toks) != 1:
                    raise _fail("standard-form takes no arguments", toks[1])
                self.standard = True
            else:
                raise _fail(f"unknown block {key.text!r}", key)

        end = self._last_line()
        if self.graph is None:
            raise ProblemParseError("missing graph block", end)
        if self.cone is None:
            raise ProblemParseError("missing cone block", end)
        assert self.n is not None and self.q is not None
        y_rays, y_lines = self.fibre or ([], [])
        F = PolyMap(
            n=self.n, q=self.q, base=self.graph, y_rays=tuple(y_rays), y_lines=tuple(y_lines)
        )
        C = OrderCone(q=self.q, rays=tuple(self.cone[0]), lines=tuple(self.cone[1]))
        return SetOptProblem(F=F, C=C, is_standard_form=self.standard)

    def _header(self, toks: list[_Token]) -> None:
        if toks[0].text != FORMAT_NAME:
            raise _fail(f"expected header {FORMAT_NAME!r}, got {toks[0].text!r}", toks[0])
        if len(toks) != 2 or toks[1].text != FORMAT_VERSION:
            raise _fail(f"unsupported format version (expected {FORMAT_VERSION})", toks[-1])

    def _dimension(self, toks: list[_Token]) -> None:
        key = toks[0]
        if len(toks) != 2:
            raise _fail(f"'{key.text}' takes exactly one integer", key)
        if self.graph is not None or self.cone is not None or self.fibre is not None:
            raise _fail(f"'{key.text}' must precede all blocks", key)
        if getattr(self, key.text) is not None:
            raise _fail(f"'{key.text}' declared twice", key)
        if not toks[1].text.isdigit() or int(toks[1].text) < 1:
            raise _fail(f"'{key.text}' must be a positive integer", toks[1])
        setattr(self, key.text, int(toks[1].text))

    def _block(self, opener: list[_Token]) -> list[list[_Token]]:
        if self.n is None or self.q is None:
            raise _fail("n and q must be declared before any block", opener[0])
        body: list[list[_Token]] = []
        while self.pos < len(self.rows):
            toks = self._next()
            if toks[0].text == "end":
                if len(toks) != 1:
                    raise _fail("'end' takes no arguments", toks[1])
                return body
            body.append(toks)
        raise _fail(f"unterminated '{opener[0].text}' block", opener[0])

    def _vector(self, toks: list[_Token], width: int, what: str, anchor: _Token) -> Vec:
        if len(toks) != width:
            raise _fail(f"{what} has {len(toks)} entries, expected {width}", anchor)
        return tuple(_rational(t) for t in toks)

    def _graph(self, opener: list[_Token]) -> None:
        if self.graph is not None:
            raise _fail("more than one graph block", opener[0])
        if len(opener) != 2 or opener[1].text not in ("hrep", "vrep"):
            raise _fail("expected 'graph hrep' or 'graph vrep'", opener[-1])
        kind = opener[1].text
        body = self._block(opener)
        d = self.n + self.q
        if kind == "hrep":
            A, b, E, f = [], [], [], []
            for i, toks in enumerate(body, start=1):
                senses = [k for k, t in enumerate(toks) if t.text in _SENSES]
                if len(senses) != 1:
                    raise _fail(f"graph row {i} needs exactly one of '<=' or '='", toks[0])
                k = senses[0]
                row = self._vector(toks[:k], d, f"graph row {i}", toks[0])
                if len(toks) != k + 1 + 1:
                    raise _fail(f"graph row {i} needs exactly one right-hand side", toks[k])
                rhs = _rational(toks[k + 1])
                if _SENSES[toks[k].text] == "<=":
                    A.append(row)
                    b.append(rhs)
                else:
                    E.append(row)
                    f.append(rhs)
            self.graph = HRep(dim=d, A=tuple(A), b=tuple(b), E=tuple(E), f=tuple(f))
        else:
            gens: dict[str, list[Vec]] = {"point": [], "ray": [], "line": []}
            for i, toks in enumerate(body, start=1):
                tag = toks[0]
                if tag.text not in gens:
                    raise _fail(f"graph row {i}: expected point, ray or line", tag)
                gens[tag.text].append(self._vector(toks[1:], d, f"graph row {i}", tag))
            self.graph = VRep(
                dim=d,
                points=tuple(gens["point"]),
                rays=tuple(gens["ray"]),
                lines=tuple(gens["line"]),
            )

    def _generators(self, opener: list[_Token], name: str) -> tuple[list[Vec], list[Vec]]:
        if len(opener) != 1:
            raise _fail(f"'{name}' takes no arguments", opener[1])
        if (self.cone if name == "cone" else self.fibre) is not None:
            raise _fail(f"more than one {name} block", opener[0])
        rays: list[Vec] = []
        lines: list[Vec] = []
        for i, toks in enumerate(self._block(opener), start=1):
            tag = toks[0]
            if tag.text not in ("ray", "line"):
                raise _fail(f"{name} row {i}: expected ray or line", tag)
            v = self._vector(toks[1:], self.q, f"{name} row {i}", tag)
            (rays if tag.text == "ray" else lines).append(v)
        return rays, lines


def parse_problem(text: str) -> SetOptProblem:
    """Parse a problem file; errors carry the line and column of the offending token."""
    return _ProblemParser(text).parse()


def _row(values: Vec) -> str:
    return " ".join(format_rational(v) for v in values)


def serialize_problem(p: SetOptProblem) -> str:
    out = [f"{FORMAT_NAME} {FORMAT_VERSION}", f"n {p.n}", f"q {p.q}"]
    base = p.F.base
    if isinstance(base, HRep):
        out.append("graph hrep")
        out += [f"{_row(a)} <= {format_rational(bi)}" for a, bi in zip(base.A, base.b)]
        out += [f"{_row(e)} = {format_rational(fi)}" for e, fi in zip(base.E, base.f)]
    else:
        out.append("graph vrep")
        out += [f"point {_row(v)}" for v in base.points]
        out += [f"ray {_row(v)}" for v in base.rays]
        out += [f"line {_row(v)}" for v in base.lines]
    out.append("end")
    if p.F.y_rays or p.F.y_lines:
        out.append("fibre")
        out += [f"ray {_row(v)}" for v in p.F.y_rays]
        out += [f"line {_row(v)}" for v in p.F.y_lines]
        out.append("end")
    out.append("cone")
    out += [f"ray {_row(v)}" for v in p.C.rays]
    out += [f"line {_row(v)}" for v in p.C.lines]
    out.append("end")
    if p.is_standard_form:
        out.append("standard-form")
    return "\n".join(out) + "\n"


def parse_matrix_file(text: str) -> Mat:
    """Whitespace-separated rows of rationals, one matrix row per line."""
    rows = _tokenize(text)
    if not rows:
        raise ProblemParseError("empty matrix file", 1)
    width = len(rows[0])
    for toks in rows[1:]:
        if len(toks) != width:
            raise _fail(f"row has {len(toks)} entries, expected {width}", toks[0])
    return tuple(tuple(_rational(t) for t in toks) for toks in rows)


def parse_vector_file(text: str) -> Vec:
    """All rationals of the file, in reading order."""
    return tuple(_rational(t) for toks in _tokenize(text) for t in toks)
