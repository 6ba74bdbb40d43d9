"""Problem files: a line-oriented format with [section] headers.

See docs/problem-format.md for the grammar.  ``parse_problem`` and
``write_problem`` round-trip: parsing the canonical text of a parsed problem
gives an equal problem.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError, SpicError
from .exact import QMatrix, scalar_str
from .fpmodule import FPModule
from .groebner import vec_from_polys, vec_to_polys
from .models import ExplicitHomology, MatrixTuple, ModuleTuple, OperatorModel
from .polyring import Poly, Ring, parse_poly

QUERY_NAMES = (
    "spectrum", "fiber", "stalk", "cycle", "picture", "weyl", "hs", "mult",
    "pushforward", "chi", "arveson", "verify",
)
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class ModuleSpec:
    ngens: int
    relations: tuple  # tuple of tuples of Poly, one entry per generator

    def build(self, ring: Ring) -> FPModule:
        return FPModule(ring, self.ngens, [vec_from_polys(list(r)) for r in self.relations])


@dataclass(frozen=True)
class CandidateSpec:
    generators: tuple
    trusted: bool = False


@dataclass(frozen=True)
class Query:
    name: str
    point: tuple | None = None
    frame: tuple | None = None  # variable indices
    polys: tuple | None = None  # ideal generators or map components
    checks: tuple | None = None
    at: tuple | None = None
    target: tuple | None = None


@dataclass
class Problem:
    ring: Ring
    kind: str  # "module", "matrix" or "homology"
    module: ModuleSpec | None = None
    matrices: tuple = ()
    homology: dict = field(default_factory=dict)  # degree -> ModuleSpec
    candidates: tuple = ()
    queries: tuple = ()

    def model(self) -> OperatorModel:
        if self.kind == "module":
            return ModuleTuple(self.module.build(self.ring))
        if self.kind == "matrix":
            return MatrixTuple(list(self.matrices), self.ring)
        top = max(self.homology) if self.homology else -1
        mods = [
            self.homology[j].build(self.ring) if j in self.homology else FPModule.zero(self.ring)
            for j in range(top + 1)
        ]
        return ExplicitHomology(mods, self.ring)


# ---------------------------------------------------------------------------
# low-level scanning


def _split_top(text: str, line: int, col0: int, sep: str = ",") -> list[tuple[str, int]]:
    """Split at top-level separators; returns (piece, starting column) pairs."""
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced {ch!r}", line, col0 + i)
        elif ch == sep and depth == 0:
            parts.append((text[start:i], col0 + start))
            start = i + 1
    if depth:
        raise ParseError("unbalanced brackets", line, col0 + len(text))
    parts.append((text[start:], col0 + start))
    out = []
    for piece, col in parts:
        stripped = piece.strip()
        if stripped:
            out.append((stripped, col + len(piece) - len(piece.lstrip())))
    return out


def _poly(text: str, ring: Ring, line: int, col: int) -> Poly:
    try:
        return parse_poly(text, ring)
    except ParseError as exc:
        inner = exc.column or 1
        msg = str(exc).split(": ", 1)[-1]
        raise ParseError(msg, line, col + inner - 1) from None


def _scalar(text: str, line: int, col: int) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {text.strip()!r}", line, col) from None


def _group(text: str, opener: str, closer: str, line: int, col: int) -> str:
    text = text.strip()
    if not (text.startswith(opener) and text.endswith(closer)):
        raise ParseError(f"expected {opener}...{closer}", line, col)
    return text[1:-1]


def _point(text: str, line: int, col: int) -> tuple:
    inner = _group(text, "(", ")", line, col)
    return tuple(_scalar(p, line, c) for p, c in _split_top(inner, line, col + 1))


def _poly_list(text: str, ring: Ring, line: int, col: int) -> tuple:
    inner = _group(text, "(", ")", line, col)
    return tuple(_poly(p, ring, line, c) for p, c in _split_top(inner, line, col + 1))


def _frame(text: str, ring: Ring, line: int, col: int) -> tuple:
    inner = _group(text, "{", "}", line, col)
    out = []
    for name, c in _split_top(inner, line, col + 1):
        if name not in ring.names:
            raise ParseError(f"unknown variable {name!r}", line, c)
        out.append(ring.index(name))
    return tuple(sorted(set(out)))


def _tokens(text: str, line: int, col0: int) -> list[tuple[str, int]]:
    """Words and bracketed groups of a query line."""
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "({[":
            close = {"(": ")", "{": "}", "[": "]"}[ch]
            depth = 0
            j = i
            while j < len(text):
                if text[j] == ch:
                    depth += 1
                elif text[j] == close:
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if j >= len(text):
                raise ParseError("unbalanced brackets", line, col0 + i)
            toks.append((text[i:j + 1], col0 + i))
            i = j + 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in "({[":
            j += 1
        toks.append((text[i:j], col0 + i))
        i = j
    return toks


# ---------------------------------------------------------------------------
# sections


def _parse_matrix(text: str, line: int, col: int) -> QMatrix:
    inner = _group(text, "[", "]", line, col)
    rows = []
    for row, c in _split_top(inner, line, col + 1):
        body = _group(row, "[", "]", line, c)
        rows.append([_scalar(x, line, cc) for x, cc in _split_top(body, line, c + 1)])
    if not rows:
        raise ParseError("empty matrix", line, col)
    width = len(rows[0])
    if any(len(r) != width for r in rows) or width != len(rows):
        raise ParseError("matrix must be square", line, col)
    return QMatrix(rows, width)


def _parse_relation(text: str, ring: Ring, ngens: int, line: int, col: int) -> tuple:
    if text.startswith("["):
        inner = _group(text, "[", "]", line, col)
        entries = tuple(_poly(p, ring, line, c) for p, c in _split_top(inner, line, col + 1))
    else:
        entries = (_poly(text, ring, line, col),)
    if len(entries) != ngens:
        raise ParseError(f"relation has {len(entries)} entries but the module has {ngens} generators", line, col)
    return entries


def _parse_query(text: str, ring: Ring, line: int, col: int) -> Query:
    toks = _tokens(text, line, col)
    name, ncol = toks[0]
    rest = toks[1:]
    if name not in QUERY_NAMES:
        raise ParseError(f"unknown query {name!r}", line, ncol)

    def need(count):
        if len(rest) < count:
            raise ParseError(f"query {name!r} needs {count} argument(s)", line, ncol)

    def trailing(opts, options):
        out = {}
        for i in range(0, len(opts), 2):
            key, kcol = opts[i]
            if key not in options or key in out or i + 1 >= len(opts):
                raise ParseError(f"unexpected {key!r}", line, kcol)
            val, vcol = opts[i + 1]
            out[key] = options[key](val, vcol)
        return out

    def point_arg(v, c):
        return _point(v, line, c)

    if name in ("spectrum", "picture", "arveson"):
        if rest:
            raise ParseError(f"query {name!r} takes no arguments", line, rest[0][1])
        return Query(name)
    if name in ("fiber", "stalk", "cycle", "weyl"):
        need(1)
        if len(rest) > 1:
            raise ParseError("unexpected argument", line, rest[1][1])
        return Query(name, point=_point(rest[0][0], line, rest[0][1]))
    if name == "chi":
        need(2)
        if len(rest) > 2:
            raise ParseError("unexpected argument", line, rest[2][1])
        return Query(name, point=_point(rest[0][0], line, rest[0][1]), frame=_frame(rest[1][0], ring, line, rest[1][1]))
    if name in ("hs", "mult"):
        need(1)
        polys = _poly_list(rest[0][0], ring, line, rest[0][1])
        opts = trailing(rest[1:], {"at": point_arg})
        return Query(name, polys=polys, at=opts.get("at"))
    if name == "pushforward":
        need(1)
        polys = _poly_list(rest[0][0], ring, line, rest[0][1])
        opts = trailing(rest[1:], {"at": point_arg})
        return Query(name, polys=polys, target=opts.get("at"))
    # verify
    names = []
    i = 0
    while i < len(rest) and rest[i][0] not in ("at", "frame", "map", "target"):
        names.extend(n.strip() for n in rest[i][0].split(",") if n.strip())
        i += 1
    if not names:
        raise ParseError("verify needs at least one check name (or 'all')", line, ncol)
    opts = trailing(rest[i:], {
        "at": point_arg,
        "frame": lambda v, c: _frame(v, ring, line, c),
        "map": lambda v, c: _poly_list(v, ring, line, c),
        "target": point_arg,
    })
    return Query(name, point=opts.get("at"), frame=opts.get("frame"), polys=opts.get("map"),
                 checks=tuple(names), target=opts.get("target"))


_HEADER = re.compile(r"\[\s*(ring|module|matrix|homology|candidates|queries)(?:\s+(\d+))?\s*\]$")


def parse_problem(text: str) -> Problem:
    sections: list[tuple[str, int | None, int, list[tuple[int, str]]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("[") and _HEADER.match(stripped):
            m = _HEADER.match(stripped)
            sections.append((m.group(1), int(m.group(2)) if m.group(2) else None, lineno, []))
            continue
        if stripped.startswith("[") and not sections:
            raise ParseError(f"unknown section {stripped!r}", lineno, 1)
        if not sections:
            raise ParseError("content before the first section header", lineno, 1)
        sections[-1][3].append((lineno, line))

    seen = {}
    for name, deg, lineno, _ in sections:
        key = (name, deg)
        if key in seen:
            raise ParseError(f"duplicate section [{name}{'' if deg is None else ' ' + str(deg)}]", lineno, 1)
        seen[key] = lineno
        if name == "homology" and deg is None:
            raise ParseError("[homology j] needs a degree", lineno, 1)
        if name != "homology" and deg is not None:
            raise ParseError(f"[{name}] takes no degree", lineno, 1)

    ring_sec = [s for s in sections if s[0] == "ring"]
    if not ring_sec:
        raise ParseError("missing [ring] section", 1, 1)
    ring = _parse_ring(ring_sec[0])

    kinds = {s[0] for s in sections} & {"module", "matrix", "homology"}
    if len(kinds) != 1:
        raise ParseError("exactly one model block ([module], [matrix] or [homology j]) is required",
                         ring_sec[0][2], 1)
    kind = kinds.pop()
    problem = Problem(ring, kind)
    for name, deg, lineno, lines in sections:
        if name == "module":
            problem.module = _parse_module(lines, ring, lineno)
        elif name == "homology":
            if deg > ring.n:
                raise ParseError(f"homology degree {deg} exceeds {ring.n}", lineno, 1)
            problem.homology[deg] = _parse_module(lines, ring, lineno)
        elif name == "matrix":
            problem.matrices = _parse_matrices(lines, ring, lineno)
        elif name == "candidates":
            problem.candidates = tuple(_parse_candidate(ln, t, ring) for ln, t in lines)
        elif name == "queries":
            problem.queries = tuple(
                _parse_query(t.strip(), ring, ln, len(t) - len(t.lstrip()) + 1) for ln, t in lines
            )
    problem.homology = dict(sorted(problem.homology.items()))
    return problem


def _key_value(line: str, lineno: int) -> tuple[str, str, int]:
    if ":" not in line:
        raise ParseError("expected 'key: value'", lineno, 1)
    key, value = line.split(":", 1)
    return key.strip(), value, len(key) + 2


def _parse_ring(section) -> Ring:
    _, _, lineno, lines = section
    names = None
    for ln, text in lines:
        key, value, col = _key_value(text, ln)
        if key != "vars":
            raise ParseError(f"unknown ring key {key!r}", ln, 1)
        parts = _split_top(value, ln, col)
        names = []
        for nm, c in parts:
            if not _NAME.match(nm) or nm in names:
                raise ParseError(f"bad or repeated variable name {nm!r}", ln, c)
            names.append(nm)
    if not names:
        raise ParseError("[ring] needs 'vars: ...'", lineno, 1)
    return Ring(names)


def _parse_module(lines, ring: Ring, header_line: int) -> ModuleSpec:
    ngens = 1
    rels = []
    in_rels = False
    for ln, text in lines:
        stripped = text.strip()
        if not in_rels or ":" in stripped and stripped.split(":", 1)[0].strip() in ("gens", "relations"):
            key, value, col = _key_value(text, ln)
            if key == "gens":
                try:
                    ngens = int(value.strip())
                except ValueError:
                    raise ParseError("gens must be a non-negative integer", ln, col) from None
                if ngens < 0:
                    raise ParseError("gens must be a non-negative integer", ln, col)
                continue
            if key == "relations":
                in_rels = True
                if value.strip():
                    rels.append((ln, value, col))
                continue
            raise ParseError(f"unknown module key {key!r}", ln, 1)
        rels.append((ln, text, 1))
    out = []
    for ln, text, col in rels:
        lead = len(text) - len(text.lstrip())
        out.append(_parse_relation(text.strip(), ring, ngens, ln, col + lead))
    return ModuleSpec(ngens, tuple(out))


def _parse_matrices(lines, ring: Ring, header_line: int) -> tuple:
    mats = {}
    for ln, text in lines:
        key, value, col = _key_value(text, ln)
        m = re.fullmatch(r"T(\d+)", key)
        if not m:
            raise ParseError(f"expected T1 ... T{ring.n}, got {key!r}", ln, 1)
        i = int(m.group(1))
        if not 1 <= i <= ring.n or i in mats:
            raise ParseError(f"bad or repeated operator index {i}", ln, 1)
        lead = len(value) - len(value.lstrip())
        mats[i] = _parse_matrix(value.strip(), ln, col + lead)
    if sorted(mats) != list(range(1, ring.n + 1)):
        raise ParseError(f"[matrix] needs T1 ... T{ring.n}", header_line, 1)
    return tuple(mats[i] for i in range(1, ring.n + 1))


def _parse_candidate(ln: int, text: str, ring: Ring) -> CandidateSpec:
    stripped = text.strip()
    col = len(text) - len(stripped) + 1
    trusted = False
    if stripped.startswith("trusted:"):
        trusted = True
        body = stripped[len("trusted:"):]
        col += len("trusted:") + len(body) - len(body.lstrip())
        stripped = body.strip()
    gens = tuple(_poly(p, ring, ln, col + c - 1) for p, c in _split_top(stripped, ln, 1))
    return CandidateSpec(gens, trusted)


def read_problem(path) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


# ---------------------------------------------------------------------------
# canonical writer


def _fmt_point(pt) -> str:
    return "(" + ", ".join(scalar_str(x) for x in pt) + ")"


def _fmt_polys(ps) -> str:
    return "(" + ", ".join(str(p) for p in ps) + ")"


def query_text(q: Query, ring: Ring) -> str:
    parts = [q.name]
    frame = None if q.frame is None else "{" + ", ".join(ring.names[i] for i in q.frame) + "}"
    if q.name == "verify":
        parts.append(", ".join(q.checks))
        if q.point is not None:
            parts += ["at", _fmt_point(q.point)]
        if frame is not None:
            parts += ["frame", frame]
        if q.polys is not None:
            parts += ["map", _fmt_polys(q.polys)]
        if q.target is not None:
            parts += ["target", _fmt_point(q.target)]
        return " ".join(parts)
    if q.point is not None:
        parts.append(_fmt_point(q.point))
    if frame is not None:
        parts.append(frame)
    if q.polys is not None:
        parts.append(_fmt_polys(q.polys))
    if q.at is not None:
        parts += ["at", _fmt_point(q.at)]
    if q.target is not None:
        parts += ["at", _fmt_point(q.target)]
    return " ".join(parts)


def _module_lines(spec: ModuleSpec) -> list[str]:
    out = [f"gens: {spec.ngens}", "relations:"]
    for rel in spec.relations:
        if spec.ngens == 1:
            out.append(f"  {rel[0]}")
        else:
            out.append("  [" + ", ".join(str(p) for p in rel) + "]")
    return out


def write_problem(problem: Problem) -> str:
    ring = problem.ring
    out = ["[ring]", "vars: " + ", ".join(ring.names), ""]
    if problem.kind == "module":
        out += ["[module]"] + _module_lines(problem.module) + [""]
    elif problem.kind == "matrix":
        out.append("[matrix]")
        for i, m in enumerate(problem.matrices, start=1):
            rows = ", ".join("[" + ", ".join(scalar_str(x) for x in row) + "]" for row in m.tolist())
            out.append(f"T{i}: [{rows}]")
        out.append("")
    else:
        for j, spec in problem.homology.items():
            out += [f"[homology {j}]"] + _module_lines(spec) + [""]
    if problem.candidates:
        out.append("[candidates]")
        for c in problem.candidates:
            body = ", ".join(str(p) for p in c.generators)
            out.append(("trusted: " if c.trusted else "") + body)
        out.append("")
    out.append("[queries]")
    out += [query_text(q, ring) for q in problem.queries]
    return "\n".join(out) + "\n"


def problem_from_model(model: OperatorModel, queries=(), candidates=()) -> Problem:
    """Problem record for a model built in code (used for round-trip tests)."""

    def spec(m: FPModule) -> ModuleSpec:
        return ModuleSpec(m.ngens, tuple(tuple(vec_to_polys(r, m.ring, m.ngens)) for r in m.relations))

    if isinstance(model, ModuleTuple):
        return Problem(model.ring, "module", module=spec(model.module), candidates=tuple(candidates),
                       queries=tuple(queries))
    if isinstance(model, MatrixTuple):
        return Problem(model.ring, "matrix", matrices=tuple(model.ops), candidates=tuple(candidates),
                       queries=tuple(queries))
    if isinstance(model, ExplicitHomology):
        homology = {j: spec(m) for j, m in enumerate(model.modules) if not m.is_zero()} or {0: ModuleSpec(0, ())}
        return Problem(model.ring, "homology", homology=homology, candidates=tuple(candidates),
                       queries=tuple(queries))
    raise SpicError("unknown model type")
