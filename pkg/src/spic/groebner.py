"""Gröbner bases for ideals and submodules of free modules R^g.

Internally a module element is a ``Vec``: a dict mapping ``(component,
exponents)`` to a nonzero Fraction.  Ideals are the ``g = 1`` case.  Public
entry points accept :class:`FreeElem` (or plain :class:`Poly` for ideals).
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InfiniteStaircase, NotMonomial, RingMismatch, ShapeMismatch
from .exact import ZERO, as_scalar
from .polyring import GREVLEX, Poly, Ring, TermOrder, block_order

Vec = dict  # (component, exponents) -> Fraction


# ---------------------------------------------------------------------------
# module orders


class ModuleOrder:
    """Monomial order on R^g.

    Default is position-over-term (component 0 largest).  ``elim > 0`` puts
    a grevlex comparison of the first ``elim`` exponents before the
    position; ``tag_from`` additionally ranks components below ``tag_from``
    above everything else.  Both are used to cut a submodule down to a
    subring or a coordinate block.
    """

    def __init__(self, term: TermOrder = GREVLEX, elim: int = 0, tag_from: int | None = None):
        self.term = term
        self.elim = elim
        self.tag_from = tag_from
        self._memo: dict = {}

    def __eq__(self, other):
        return isinstance(other, ModuleOrder) and (self.term, self.elim, self.tag_from) == (
            other.term,
            other.elim,
            other.tag_from,
        )

    def __hash__(self):
        return hash((self.term, self.elim, self.tag_from))

    def __repr__(self):
        return f"ModuleOrder({self.term!r}, elim={self.elim}, tag_from={self.tag_from})"

    def key(self, t):
        k = self._memo.get(t)
        if k is None:
            c, e = t
            parts = []
            if self.tag_from is not None:
                parts.append(1 if c < self.tag_from else 0)
            if self.elim:
                head = e[: self.elim]
                parts.append((sum(head), tuple(-x for x in reversed(head))))
            parts.append(-c)
            parts.append(self.term.key(e))
            k = tuple(parts)
            self._memo[t] = k
        return k


POT = ModuleOrder()


# ---------------------------------------------------------------------------
# vector helpers


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def lead(v: Vec, order: ModuleOrder):
    return max(v, key=order.key)


def _monic(v: Vec, order: ModuleOrder) -> Vec:
    c = v[lead(v, order)]
    if c == 1:
        return v
    return {t: x / c for t, x in v.items()}


def _axpy(v: Vec, coef: Fraction, shift: tuple, g: Vec) -> None:
    """v -= coef * z^shift * g, in place."""
    for (c, e), x in g.items():
        t = (c, _add(e, shift))
        y = v.get(t, ZERO) - coef * x
        if y:
            v[t] = y
        else:
            v.pop(t, None)


def vec_from_polys(entries: Sequence[Poly]) -> Vec:
    v = {}
    for c, p in enumerate(entries):
        for e, x in p.terms.items():
            v[(c, e)] = x
    return v


def vec_to_polys(v: Vec, ring: Ring, rank: int) -> list[Poly]:
    parts: list[dict] = [{} for _ in range(rank)]
    for (c, e), x in v.items():
        parts[c][e] = x
    return [Poly(ring, p) for p in parts]


def vec_scale_poly(p: Poly, v: Vec) -> Vec:
    out: Vec = {}
    for e1, x1 in p.terms.items():
        for (c, e2), x2 in v.items():
            t = (c, _add(e1, e2))
            y = out.get(t, ZERO) + x1 * x2
            if y:
                out[t] = y
            else:
                out.pop(t, None)
    return out


def vec_add(*vs: Vec) -> Vec:
    out: Vec = {}
    for v in vs:
        for t, x in v.items():
            y = out.get(t, ZERO) + x
            if y:
                out[t] = y
            else:
                out.pop(t, None)
    return out


def vec_neg(v: Vec) -> Vec:
    return {t: -x for t, x in v.items()}


def vec_shift_components(v: Vec, offset: int) -> Vec:
    return {(c + offset, e): x for (c, e), x in v.items()}


def vec_unit(c: int, n: int, coeff=1) -> Vec:
    return {(c, (0,) * n): as_scalar(coeff)}


class FreeElem:
    """Element of a free module R^g, stored as a tuple of polynomials."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring: Ring, entries: Sequence):
        self.ring = ring
        self.entries = tuple(ring(p) for p in entries)

    @classmethod
    def from_vec(cls, ring: Ring, v: Vec, rank: int) -> "FreeElem":
        return cls(ring, vec_to_polys(v, ring, rank))

    @property
    def rank(self) -> int:
        return len(self.entries)

    def to_vec(self) -> Vec:
        return vec_from_polys(self.entries)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.entries)

    def __eq__(self, other):
        return isinstance(other, FreeElem) and self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        return hash((self.ring, self.entries))

    def __repr__(self):
        return "[" + ", ".join(str(p) for p in self.entries) + "]"


def _as_vecs(ring: Ring, gens: Iterable) -> tuple[list[Vec], int | None]:
    out = []
    rank = None
    for g in gens:
        if isinstance(g, Poly):
            if g.ring != ring:
                raise RingMismatch("generator from another ring")
            r, v = 1, vec_from_polys([g])
        elif isinstance(g, FreeElem):
            if g.ring != ring:
                raise RingMismatch("generator from another ring")
            r, v = g.rank, g.to_vec()
        else:
            raise TypeError("generators must be Poly or FreeElem")
        if rank is None:
            rank = r
        elif rank != r:
            raise ShapeMismatch("generators of different ranks")
        out.append(v)
    return out, rank


# ---------------------------------------------------------------------------
# reduction


class _Index:
    """Basis elements bucketed by leading component."""

    def __init__(self, order: ModuleOrder):
        self.order = order
        self.by_comp: dict[int, list[tuple[tuple, Vec]]] = {}

    def add(self, g: Vec):
        c, e = lead(g, self.order)
        self.by_comp.setdefault(c, []).append((e, g))

    def find(self, c: int, e: tuple):
        for le, g in self.by_comp.get(c, ()):
            if _divides(le, e):
                return le, g
        return None


def _reduce(v: Vec, index: _Index, order: ModuleOrder, full: bool = True) -> Vec:
    v = dict(v)
    rem: Vec = {}
    key = order.key
    while v:
        t = max(v, key=key)
        x = v[t]
        hit = index.find(t[0], t[1])
        if hit is None:
            if not full:
                rem.update(v)
                return rem
            rem[t] = x
            del v[t]
        else:
            le, g = hit
            _axpy(v, x, _sub(t[1], le), g)
    return rem


def _spoly(f: Vec, g: Vec, order: ModuleOrder):
    (c, ef) = lead(f, order)
    (_, eg) = lead(g, order)
    m = _lcm(ef, eg)
    # f and g are monic, so the leading terms cancel
    s: Vec = {}
    for (cc, e), x in f.items():
        s[(cc, _add(e, _sub(m, ef)))] = x
    _axpy(s, Fraction(1), _sub(m, eg), g)
    return s


def _interreduce(G: list[Vec], order: ModuleOrder) -> list[Vec]:
    leads = [lead(g, order) for g in G]
    keep = []
    for i, (c, e) in enumerate(leads):
        redundant = False
        for j, (c2, e2) in enumerate(leads):
            if j != i and c2 == c and _divides(e2, e) and (e2 != e or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(G[i])
    out = []
    for i, g in enumerate(keep):
        idx = _Index(order)
        for j, h in enumerate(keep):
            if j != i:
                idx.add(h)
        r = _reduce(g, idx, order)
        out.append(_monic(r, order))
    out.sort(key=lambda g: order.key(lead(g, order)))
    return out


def _buchberger(vecs: list[Vec], order: ModuleOrder, ideal: bool) -> list[Vec]:
    G: list[Vec] = []
    leads: list[tuple] = []
    index = _Index(order)
    pairs: list = []
    pending: set = set()

    def add(h: Vec):
        h = _monic(h, order)
        k = len(G)
        lk = lead(h, order)
        G.append(h)
        leads.append(lk)
        index.add(h)
        for i in range(k):
            if leads[i][0] != lk[0]:
                continue
            m = _lcm(leads[i][1], lk[1])
            heapq.heappush(pairs, (order.key((lk[0], m)), i, k))
            pending.add((i, k))

    for v in sorted((v for v in vecs if v), key=lambda v: order.key(lead(v, order))):
        h = _reduce(v, index, order)
        if h:
            add(h)

    while pairs:
        _, i, j = heapq.heappop(pairs)
        pending.discard((i, j))
        (c, ei), (_, ej) = leads[i], leads[j]
        m = _lcm(ei, ej)
        if ideal and all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue
        skip = False
        for k in range(len(G)):
            if k == i or k == j or leads[k][0] != c or not _divides(leads[k][1], m):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                skip = True
                break
        if skip:
            continue
        s = _spoly(G[i], G[j], order)
        h = _reduce(s, index, order)
        if h:
            add(h)
    return _interreduce(G, order)


class GroebnerBasis:
    """Reduced Gröbner basis of a submodule of R^rank (an ideal when rank == 1)."""

    def __init__(self, ring: Ring, order: ModuleOrder, rank: int, elems: list[Vec]):
        self.ring = ring
        self.order = order
        self.rank = rank
        self.elems = elems
        self.reduced = True
        self._index = _Index(order)
        for g in elems:
            self._index.add(g)

    @classmethod
    def compute(cls, ring: Ring, vecs: list[Vec], rank: int, order: ModuleOrder = POT) -> "GroebnerBasis":
        return cls(ring, order, rank, _buchberger([v for v in vecs if v], order, ideal=rank == 1))

    def __len__(self):
        return len(self.elems)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.ring == other.ring
            and self.rank == other.rank
            and self.order == other.order
            and self.elems == other.elems
        )

    def leads(self) -> list[tuple]:
        return [lead(g, self.order) for g in self.elems]

    def reduce(self, v: Vec) -> Vec:
        return _reduce(v, self._index, self.order)

    def contains(self, v: Vec) -> bool:
        return not _reduce(v, self._index, self.order, full=False)

    def is_whole(self) -> bool:
        """True when the submodule is all of R^rank."""
        const = (0,) * self.ring.n
        comps = {c for c, e in self.leads() if e == const}
        return len(comps) == self.rank

    def polys(self) -> list[Poly]:
        if self.rank != 1:
            raise ShapeMismatch("not an ideal basis")
        return [vec_to_polys(g, self.ring, 1)[0] for g in self.elems]

    def free_elems(self) -> list[FreeElem]:
        return [FreeElem.from_vec(self.ring, g, self.rank) for g in self.elems]

    def certify(self) -> bool:
        """Every S-pair reduces to zero (no criteria applied)."""
        leads = self.leads()
        for i in range(len(self.elems)):
            for j in range(i + 1, len(self.elems)):
                if leads[i][0] != leads[j][0]:
                    continue
                if self.reduce(_spoly(self.elems[i], self.elems[j], self.order)):
                    return False
        return True

    def leading_monomials(self, component: int = 0) -> list[tuple]:
        return [e for c, e in self.leads() if c == component]


# ---------------------------------------------------------------------------
# public operations


def buchberger(gens: Sequence, order: TermOrder | ModuleOrder = GREVLEX, ring: Ring | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal/submodule generated by ``gens``."""
    if ring is None:
        if not gens:
            raise ValueError("ring required for an empty generator list")
        ring = gens[0].ring
    vecs, rank = _as_vecs(ring, gens)
    mo = order if isinstance(order, ModuleOrder) else ModuleOrder(order)
    return GroebnerBasis.compute(ring, vecs, rank or 1, mo)


def normal_form(f, gb: GroebnerBasis):
    if f.ring != gb.ring:
        raise RingMismatch("element and basis live in different rings")
    if isinstance(f, Poly):
        return vec_to_polys(gb.reduce(vec_from_polys([f])), gb.ring, 1)[0]
    return FreeElem.from_vec(gb.ring, gb.reduce(f.to_vec()), gb.rank)


def _is_finite_component(monos: list[tuple], n: int) -> bool:
    if any(not any(e) for e in monos):
        return True
    for i in range(n):
        if not any(e[i] > 0 and all(x == 0 for k, x in enumerate(e) if k != i) for e in monos):
            return False
    return True


def _enumerate_standard(monos: list[tuple], n: int, max_deg: int | None, bounds: list[int] | None):
    out = []

    def rec(i, prefix, deg):
        if i == n:
            e = tuple(prefix)
            if not any(_divides(m, e) for m in monos):
                out.append(e)
            return
        k = 0
        while True:
            if max_deg is not None and deg + k > max_deg:
                break
            if bounds is not None and k >= bounds[i]:
                break
            # prune: partial exponent already divisible by a monomial using only fixed variables
            prefix.append(k)
            partial = tuple(prefix) + (0,) * (n - i - 1)
            if any(_divides(m, partial) for m in monos):
                prefix.pop()
                break
            rec(i + 1, prefix, deg + k)
            prefix.pop()
            k += 1

    rec(0, [], 0)
    return out


def std_monomials(gb: GroebnerBasis, mode="all") -> list[tuple[int, tuple]]:
    """Standard monomials per component: ``mode='all'`` or an int degree bound."""
    n = gb.ring.n
    leads = gb.leads()
    out = []
    for c in range(gb.rank):
        monos = [e for cc, e in leads if cc == c]
        if mode == "all":
            if not _is_finite_component(monos, n):
                raise InfiniteStaircase(f"component {c} has infinitely many standard monomials")
            bounds = []
            for i in range(n):
                pure = [e[i] for e in monos if all(x == 0 for k, x in enumerate(e) if k != i)]
                bounds.append(min(pure) if pure else 0)
            found = _enumerate_standard(monos, n, None, bounds)
        else:
            found = _enumerate_standard(monos, n, int(mode), None)
        out.extend((c, e) for e in found)
    out.sort(key=lambda t: (t[0], GREVLEX.key(t[1])))
    return out


def _monomial_dimension(monos: list[tuple], n: int) -> int:
    if any(not any(e) for e in monos):
        return -1
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in monos]
    for size in range(n, -1, -1):
        for s in combinations(range(n), size):
            ss = set(s)
            if not any(sup <= ss for sup in supports):
                return size
    return -1


def dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of R^rank / submodule (-1 for the zero quotient)."""
    n = gb.ring.n
    leads = gb.leads()
    return max((_monomial_dimension([e for c, e in leads if c == comp], n) for comp in range(gb.rank)), default=-1)


def independent_sets(gb: GroebnerBasis, size: int) -> list[tuple[int, ...]]:
    """Variable subsets of the given size that carry no leading monomial (ideal case)."""
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in gb.leading_monomials(0)]
    out = []
    for s in combinations(range(gb.ring.n), size):
        ss = set(s)
        if not any(sup <= ss for sup in supports):
            out.append(s)
    return out


def eliminate(gens: Sequence[Poly], drop: int) -> list[Poly]:
    """Generators of I ∩ Q[z_{drop+1}, ...] for I = (gens) (block elimination order)."""
    if not gens:
        return []
    ring = gens[0].ring
    gb = buchberger(list(gens), block_order(drop), ring)
    return [p for p in gb.polys() if all(not any(e[:drop]) for e in p.terms)]


def syzygy_vecs(vecs: list[Vec], rank: int, n: int, base: TermOrder = GREVLEX) -> list[Vec]:
    """Generators of {c : sum c_j v_j = 0} via tagged-component elimination."""
    tagged = []
    for j, v in enumerate(vecs):
        w = dict(v)
        w[(rank + j, (0,) * n)] = Fraction(1)
        tagged.append(w)
    order = ModuleOrder(base)
    G = _buchberger(tagged, order, ideal=False)
    out = []
    for g in G:
        c, _ = lead(g, order)
        if c >= rank:
            out.append(vec_shift_components(g, -rank))
    return out


def syzygies(gens: Sequence, ring: Ring | None = None) -> list[FreeElem]:
    if ring is None:
        ring = gens[0].ring
    vecs, rank = _as_vecs(ring, gens)
    syz = syzygy_vecs(vecs, rank or 1, ring.n)
    return [FreeElem.from_vec(ring, s, len(vecs)) for s in syz]


def minimal_primes_monomial(gens: Sequence) -> list[tuple[int, ...]]:
    """Minimal primes of a monomial ideal as tuples of variable indices.

    Accepts Poly monomials or exponent tuples.  The zero ideal yields [()],
    the unit ideal yields [].
    """
    supports = []
    for g in gens:
        if isinstance(g, Poly):
            if g.is_zero():
                continue
            if not g.is_monomial():
                raise NotMonomial(f"{g} is not a monomial")
            e = next(iter(g.terms))
            n = g.ring.n
        else:
            e = tuple(g)
            n = len(e)
        supports.append(frozenset(i for i, x in enumerate(e) if x))
    if not supports:
        return [()]
    if any(not s for s in supports):
        return []
    n = max(max(s) for s in supports) + 1
    found: list[frozenset] = []
    for size in range(1, n + 1):
        for cand in combinations(range(n), size):
            cs = frozenset(cand)
            if any(f <= cs for f in found):
                continue
            if all(s & cs for s in supports):
                found.append(cs)
    return sorted(tuple(sorted(f)) for f in found)


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """Ideal of a polynomial ring with a cached reduced grevlex basis."""

    def __init__(self, ring: Ring, gens: Iterable = ()):
        self.ring = ring
        self.gens = tuple(p for p in (ring(g) for g in gens) if not p.is_zero())
        self._gb = None

    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = buchberger(list(self.gens), GREVLEX, self.ring)
        return self._gb

    def reduced_gens(self) -> list[Poly]:
        return self.gb.polys()

    def __repr__(self):
        return "(" + ", ".join(str(p) for p in self.reduced_gens()) + ")"

    def __str__(self):
        return repr(self)

    def contains(self, p) -> bool:
        p = self.ring(p)
        return self.gb.contains(vec_from_polys([p]))

    def __contains__(self, p):
        return self.contains(p)

    def __le__(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.gb.elems == other.gb.elems

    def __hash__(self):
        return hash((self.ring, tuple(str(p) for p in self.reduced_gens())))

    def is_unit(self) -> bool:
        return self.gb.is_whole()

    def is_zero(self) -> bool:
        return not self.gens

    def dimension(self) -> int:
        return dimension(self.gb)

    def is_monomial(self) -> bool:
        return all(p.is_monomial() for p in self.reduced_gens())

    def vanishes_at(self, point: Sequence) -> bool:
        return all(not g.evaluate(point) for g in self.gens)

    def __add__(self, other):
        if isinstance(other, Ideal):
            other = other.gens
        return Ideal(self.ring, self.gens + tuple(self.ring(g) for g in other))

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])

    def power(self, k: int) -> "Ideal":
        return Ideal(self.ring, power_generators(list(self.gens), k, self.ring))

    def normal_form(self, p) -> Poly:
        return normal_form(self.ring(p), self.gb)


def power_generators(gens: list[Poly], k: int, ring: Ring) -> list[Poly]:
    """All degree-k products of the generators (k = 0 gives [1])."""
    if k == 0:
        return [ring.one()]
    out = []
    for combo in _multisets(len(gens), k):
        p = ring.one()
        for i, m in enumerate(combo):
            if m:
                p = p * gens[i] ** m
        out.append(p)
    return out


def _multisets(n: int, k: int):
    if n == 0:
        if k == 0:
            yield ()
        return
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _multisets(n - 1, k - first):
            yield (first,) + rest


def intersect(a: Ideal, b: Ideal) -> Ideal:
    """a ∩ b via the tag-variable construction t*a + (1-t)*b, eliminating t."""
    ring = a.ring
    if b.ring != ring:
        raise RingMismatch("ideals from different rings")
    if a.is_zero() or b.is_zero():
        return Ideal(ring)
    tag = "_t"
    while tag in ring.names:
        tag += "_"
    big = ring.extend([tag], front=True)
    t = big.var(0)
    gens = [t * g.to_ring(big) for g in a.gens] + [(1 - t) * g.to_ring(big) for g in b.gens]
    kept = eliminate(gens, 1)
    back = [Poly(ring, {e[1:]: c for e, c in p.terms.items()}) for p in kept]
    return Ideal(ring, back)


def colon_element(a: Ideal, g: Poly) -> Ideal:
    """a : (g) from the syzygies of (g, a_1, ..., a_s)."""
    ring = a.ring
    if g.is_zero():
        return Ideal(ring, [ring.one()])
    vecs = [vec_from_polys([g])] + [vec_from_polys([h]) for h in a.gens]
    syz = syzygy_vecs(vecs, 1, ring.n)
    firsts = []
    for s in syz:
        part = {e: x for (c, e), x in s.items() if c == 0}
        if part:
            firsts.append(Poly(ring, part))
    return Ideal(ring, firsts)


def quotient(a: Ideal, b: Ideal) -> Ideal:
    """Colon ideal a : b."""
    if b.ring != a.ring:
        raise RingMismatch("ideals from different rings")
    result = None
    for g in b.gens:
        q = colon_element(a, g)
        result = q if result is None else intersect(result, q)
    return result if result is not None else Ideal(a.ring, [a.ring.one()])


def saturation(a: Ideal, b: Ideal, max_steps: int = 64) -> Ideal:
    """a : b^∞ by iterated colon ideals until the basis stabilises."""
    cur = a
    for _ in range(max_steps):
        nxt = quotient(cur, b)
        if nxt == cur:
            return cur
        cur = nxt
    raise RuntimeError("saturation did not stabilise")


def intersect_all(ideals: Sequence[Ideal]) -> Ideal:
    result = ideals[0]
    for other in ideals[1:]:
        result = intersect(result, other)
    return result


def maximal_ideal(ring: Ring, point: Sequence) -> Ideal:
    return Ideal(ring, [ring.var(i) - as_scalar(c) for i, c in enumerate(point)])


def variable_ideal(ring: Ring, indices: Sequence[int]) -> Ideal:
    return Ideal(ring, [ring.var(i) for i in indices])
