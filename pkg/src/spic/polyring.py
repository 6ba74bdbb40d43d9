"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, RingMismatch, ShapeMismatch
from .exact import ZERO, as_scalar, scalar_str


class Ring:
    """Polynomial ring Q[names...]; two rings are equal iff their names agree."""

    __slots__ = ("names", "n", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("a ring needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"bad variable name {name!r}")
        self.names = names
        self.n = len(names)
        self._index = {v: i for i, v in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Ring({', '.join(self.names)})"

    def index(self, name: str) -> int:
        return self._index[name]

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = as_scalar(c)
        return Poly(self, {(0,) * self.n: c} if c else {})

    def var(self, i) -> "Poly":
        if isinstance(i, str):
            i = self._index[i]
        e = [0] * self.n
        e[i] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def gens(self) -> list["Poly"]:
        return [self.var(i) for i in range(self.n)]

    def monomial(self, exps: Sequence[int], coeff=1) -> "Poly":
        if len(exps) != self.n:
            raise ShapeMismatch("exponent vector length differs from ring arity")
        c = as_scalar(coeff)
        return Poly(self, {tuple(exps): c} if c else {})

    def __call__(self, text) -> "Poly":
        if isinstance(text, Poly):
            if text.ring != self:
                raise RingMismatch("polynomial belongs to another ring")
            return text
        if isinstance(text, str):
            return parse_poly(text, self)
        return self.const(text)

    def extend(self, names: Iterable[str], front: bool = False) -> "Ring":
        names = tuple(names)
        return Ring(names + self.names if front else self.names + names)


class TermOrder:
    """Monomial order; ``key(exps)`` is larger for larger monomials.

    kinds: ``lex``, ``grevlex`` and ``block`` (grevlex on the first
    ``block`` variables, ties broken by grevlex on the rest).
    """

    __slots__ = ("kind", "block")

    def __init__(self, kind: str = "grevlex", block: int = 0):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown term order {kind!r}")
        self.kind = kind
        self.block = block

    def __eq__(self, other):
        return isinstance(other, TermOrder) and (self.kind, self.block) == (other.kind, other.block)

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        return f"TermOrder({self.kind!r}{', ' + str(self.block) if self.kind == 'block' else ''})"

    def key(self, e: tuple) -> tuple:
        if self.kind == "lex":
            return e
        if self.kind == "grevlex":
            return (sum(e), tuple(-x for x in reversed(e)))
        k = self.block
        a, b = e[:k], e[k:]
        return (sum(a), tuple(-x for x in reversed(a)), sum(b), tuple(-x for x in reversed(b)))


LEX = TermOrder("lex")
GREVLEX = TermOrder("grevlex")


def block_order(k: int) -> TermOrder:
    return TermOrder("block", k)


class Poly:
    """Immutable polynomial: a map from exponent tuples to nonzero Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple, Fraction]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    # -- basic protocol ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(0,) * self.ring.n: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.n, ZERO)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) - c
        return Poly(self.ring, out)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Poly(self.ring, {e: c * v for e, v in self.terms.items()}) if c else self.ring.zero()
        other = self._coerce(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("division only by nonzero constants")
            other = other.constant_term()
        c = Fraction(other)
        return Poly(self.ring, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure ----------------------------------------------------------
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def leading(self, order: TermOrder = None) -> tuple[tuple, Fraction]:
        order = order or GREVLEX
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def monic(self, order: TermOrder = None) -> "Poly":
        if not self.terms:
            return self
        return self / self.leading(order)[1]

    # -- evaluation ----------------------------------------------------------
    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.ring.n:
            raise ShapeMismatch("point length differs from ring arity")
        pt = [as_scalar(x) for x in point]
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x**k
            total += v
        return total

    def substitute(self, images: Sequence["Poly"], target: Ring | None = None) -> "Poly":
        """Composition p(images[0], ..., images[n-1]) in the images' ring."""
        if len(images) != self.ring.n:
            raise ShapeMismatch("need one image per variable")
        if target is None:
            target = images[0].ring if images else self.ring
        imgs = [target(im) if not isinstance(im, Poly) else im for im in images]
        for im in imgs:
            if im.ring != target:
                raise RingMismatch("images must share one ring")
        cache: dict[tuple[int, int], Poly] = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = imgs[i] ** k
            return cache[key]

        out = target.zero()
        for e, c in self.terms.items():
            t = target.const(c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            out = out + t
        return out

    def translate(self, point: Sequence) -> "Poly":
        """p(z + point)."""
        shifted = [self.ring.var(i) + as_scalar(c) for i, c in enumerate(point)]
        return self.substitute(shifted, self.ring)

    def to_ring(self, target: Ring, positions: Sequence[int] | None = None) -> "Poly":
        """Re-embed into a ring containing this ring's variables (by name by default)."""
        if positions is None:
            positions = [target.index(v) for v in self.ring.names]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * target.n
            for k, p in zip(e, positions):
                ne[p] = k
            out[tuple(ne)] = c
        return Poly(target, out)

    # -- printing ---------------------------------------------------------------
    def sorted_terms(self, order: TermOrder = None) -> list[tuple[tuple, Fraction]]:
        order = order or GREVLEX
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (self.ring.names[i] if k == 1 else f"{self.ring.names[i]}^{k}") for i, k in enumerate(e) if k
            )
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if not mono:
                body = scalar_str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{scalar_str(a)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self})"


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + 1
            while col <= len(text) and text[col - 1].isspace():
                col += 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", column=col)
        num, ident, op = m.groups()
        start = m.start(m.lastindex) + 1
        if num is not None:
            toks.append(("num", int(num), start))
        elif ident is not None:
            toks.append(("id", ident, start))
        else:
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    return toks


def _split_identifier(ident: str, ring: Ring):
    """Split juxtaposed variable names like 'z1z2' (longest match first)."""
    if ident in ring._index:
        return [ident]
    names = sorted(ring.names, key=len, reverse=True)
    out = []
    rest = ident
    while rest:
        for nm in names:
            if rest.startswith(nm):
                out.append(nm)
                rest = rest[len(nm):]
                break
        else:
            return None
    return out


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, column=tok[2] if tok else None)

    def parse(self) -> Poly:
        if not self.toks:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        tok = self.peek()
        neg = False
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            neg = tok[1] == "-"
        p = self.term()
        if neg:
            p = -p
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.take()
                q = self.term()
                p = p + q if tok[1] == "+" else p - q
            else:
                return p

    def term(self) -> Poly:
        p = self.factor()
        while True:
            tok = self.peek()
            if tok is None:
                return p
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                p = p * self.factor()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                q = self.factor()
                if not q.is_constant() or q.is_zero():
                    self.error("division only by nonzero constants", tok)
                p = p / q
            elif tok[0] in ("num", "id") or (tok[0] == "op" and tok[1] == "("):
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Poly:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "-":
            self.take()
            return -self.factor()
        base = self.base()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.take()
            if exp is None or exp[0] != "num":
                self.error("exponent must be a non-negative integer", exp)
            base = base ** exp[1]
        return base

    def base(self) -> Poly:
        tok = self.take()
        if tok is None:
            raise ParseError("unexpected end of input")
        kind, val, col = tok
        if kind == "num":
            return self.ring.const(val)
        if kind == "id":
            parts = _split_identifier(val, self.ring)
            if parts is None:
                raise ParseError(f"unknown variable {val!r}", column=col)
            p = self.ring.one()
            for nm in parts:
                p = p * self.ring.var(nm)
            return p
        if val == "(":
            p = self.expr()
            close = self.take()
            if close is None or close[1] != ")":
                raise ParseError("missing ')'", column=col)
            return p
        raise ParseError(f"unexpected token {val!r}", column=col)


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse e.g. ``'z1^2 - 3/2*z1 z2 + 1'`` (``*`` optional, ``^`` powers)."""
    return _Parser(text, ring).parse()


def parse_scalar(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text.strip()!r}") from exc
