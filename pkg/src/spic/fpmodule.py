"""Finitely presented modules M = R^g / N over a polynomial ring."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Sequence

from .errors import (
    DimensionMismatch,
    IllDefinedMap,
    InfiniteDimensional,
    InfiniteStaircase,
    NoStabilization,
    NotCofinite,
    NotContained,
    NotFinite,
    RingMismatch,
    ShapeMismatch,
)
from .exact import ZERO, QMatrix, as_scalar, joint_root_space, scalar_str
from .groebner import (
    POT,
    FreeElem,
    GroebnerBasis,
    _enumerate_standard,
    Ideal,
    ModuleOrder,
    Vec,
    intersect_all,
    lead,
    colon_element,
    maximal_ideal,
    power_generators,
    saturation,
    std_monomials,
    syzygy_vecs,
    vec_add,
    vec_from_polys,
    vec_neg,
    vec_scale_poly,
    vec_shift_components,
    vec_to_polys,
    vec_unit,
)
from .polyring import Poly, Ring

DEFAULT_MAX_K = 25
STABILIZATION_CAP = 64


def _to_vec(ring: Ring, rel, ngens: int) -> Vec:
    if isinstance(rel, dict):
        v = rel
    elif isinstance(rel, FreeElem):
        if rel.ring != ring:
            raise RingMismatch("relation from another ring")
        v = rel.to_vec()
    elif isinstance(rel, (Poly, str)) and ngens == 1:
        v = vec_from_polys([ring(rel)])
    else:
        v = vec_from_polys([ring(p) for p in rel])
    for c, _ in v:
        if c >= ngens:
            raise ShapeMismatch(f"relation has component {c + 1} but the module has {ngens} generators")
    return v


class FPModule:
    """Module R^ngens / (relations), with a cached reduced Gröbner basis."""

    def __init__(self, ring: Ring, ngens: int, relations: Sequence = ()):
        self.ring = ring
        self.ngens = ngens
        self.relations = tuple(v for v in (_to_vec(ring, r, ngens) for r in relations) if v)
        self._gb = None
        self._ann = None
        self._realization = None

    # -- constructors ---------------------------------------------------------
    @classmethod
    def free(cls, ring: Ring, rank: int = 1) -> "FPModule":
        return cls(ring, rank)

    @classmethod
    def cyclic(cls, ring: Ring, ideal_gens: Sequence) -> "FPModule":
        """R / (ideal_gens)."""
        return cls(ring, 1, [vec_from_polys([ring(g)]) for g in ideal_gens])

    @classmethod
    def zero(cls, ring: Ring) -> "FPModule":
        return cls(ring, 0)

    @classmethod
    def from_matrices(cls, ring: Ring, mats: Sequence[QMatrix]) -> "FPModule":
        """Q^d with ring variable i acting by mats[i]: relations z_i e_k - sum_m A_i[m,k] e_m."""
        if len(mats) != ring.n:
            raise ShapeMismatch("one matrix per ring variable required")
        d = mats[0].rows if mats else 0
        rels = []
        zero = (0,) * ring.n
        for i, a in enumerate(mats):
            xi = next(iter(ring.var(i).terms))
            for k in range(d):
                v: Vec = {(k, xi): Fraction(1)}
                for m in range(d):
                    if a[m, k]:
                        v[(m, zero)] = v.get((m, zero), ZERO) - a[m, k]
                rels.append(v)
        return cls(ring, d, rels)

    def direct_sum(self, other: "FPModule") -> "FPModule":
        if other.ring != self.ring:
            raise RingMismatch("modules over different rings")
        rels = list(self.relations) + [vec_shift_components(v, self.ngens) for v in other.relations]
        return FPModule(self.ring, self.ngens + other.ngens, rels)

    def with_relations(self, extra: Sequence[Vec]) -> "FPModule":
        return FPModule(self.ring, self.ngens, list(self.relations) + [v for v in extra if v])

    def ideal_times(self, gens: Sequence[Poly]) -> list[Vec]:
        """Generators of I*R^g for I = (gens)."""
        out = []
        for c in range(self.ngens):
            for p in gens:
                if p:
                    out.append({(c, e): x for e, x in p.terms.items()})
        return out

    def modulo_ideal(self, gens: Sequence[Poly]) -> "FPModule":
        """M / I M."""
        return self.with_relations(self.ideal_times([self.ring(g) for g in gens]))

    def translate(self, point: Sequence) -> "FPModule":
        """Pull back along z -> z + point, moving `point` to the origin."""
        shifted = [self.ring.var(i) + as_scalar(c) for i, c in enumerate(point)]
        rels = []
        for v in self.relations:
            polys = vec_to_polys(v, self.ring, self.ngens)
            rels.append(vec_from_polys([p.substitute(shifted, self.ring) for p in polys]))
        return FPModule(self.ring, self.ngens, rels)

    def to_ring(self, target: Ring, positions: Sequence[int] | None = None) -> "FPModule":
        rels = []
        for v in self.relations:
            polys = vec_to_polys(v, self.ring, self.ngens)
            rels.append(vec_from_polys([p.to_ring(target, positions) for p in polys]))
        return FPModule(target, self.ngens, rels)

    # -- basic data -----------------------------------------------------------
    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = GroebnerBasis.compute(self.ring, list(self.relations), self.ngens, POT)
        return self._gb

    def __repr__(self):
        if not self.relations:
            return f"FPModule(R^{self.ngens})"
        rels = "; ".join(str(FreeElem.from_vec(self.ring, g, self.ngens)) for g in self.gb.elems)
        return f"FPModule(R^{self.ngens} / <{rels}>)"

    def relation_elems(self) -> list[FreeElem]:
        return [FreeElem.from_vec(self.ring, v, self.ngens) for v in self.relations]

    def is_zero(self) -> bool:
        return self.ngens == 0 or self.gb.is_whole()

    def reduce(self, v: Vec) -> Vec:
        return self.gb.reduce(v)

    def contains(self, v: Vec) -> bool:
        """True when v lies in the relation submodule (is zero in M)."""
        return self.ngens == 0 or self.gb.contains(v)

    def is_finite_dimensional(self) -> bool:
        if self.ngens == 0:
            return True
        try:
            std_monomials(self.gb, "all")
        except InfiniteStaircase:
            return False
        return True

    def standard_basis(self) -> list[tuple[int, tuple]]:
        if self.ngens == 0:
            return []
        try:
            return std_monomials(self.gb, "all")
        except InfiniteStaircase as exc:
            raise InfiniteDimensional(str(exc)) from None

    def vector_dim(self) -> int:
        """Dimension over the rationals (InfiniteDimensional if infinite)."""
        return len(self.standard_basis())

    def annihilator(self) -> Ideal:
        """Ann(M) = intersection over generators of (N : e_c)."""
        if self._ann is None:
            ring = self.ring
            if self.is_zero():
                self._ann = Ideal(ring, [ring.one()])
            elif not self.relations:
                self._ann = Ideal(ring)
            else:
                parts = []
                for c in range(self.ngens):
                    unit = vec_unit(c, ring.n)
                    syz = syzygy_vecs([unit] + list(self.gb.elems), self.ngens, ring.n)
                    firsts = []
                    for s in syz:
                        part = {e: x for (cc, e), x in s.items() if cc == 0}
                        if part:
                            firsts.append(Poly(ring, part))
                    parts.append(Ideal(ring, firsts))
                self._ann = intersect_all(parts)
        return self._ann

    def dimension(self) -> int:
        """Krull dimension of R/Ann(M); -1 for the zero module."""
        if self.is_zero():
            return -1
        return self.annihilator().dimension()

    def realization(self) -> "FiniteRealization":
        if self._realization is None:
            self._realization = finite_realization(self)
        return self._realization


# ---------------------------------------------------------------------------
# maps, kernels, subquotients


class ModuleMap:
    """Map source -> target given by the images of the source generators."""

    def __init__(self, source: FPModule, target: FPModule, columns: Sequence, check: bool = True):
        if source.ring != target.ring:
            raise RingMismatch("source and target over different rings")
        if len(columns) != source.ngens:
            raise ShapeMismatch("one image per source generator required")
        self.source = source
        self.target = target
        self.columns = [_to_vec(target.ring, c, target.ngens) if not isinstance(c, dict) else c for c in columns]
        if check:
            self.check()

    def apply(self, v: Vec) -> Vec:
        polys = vec_to_polys(v, self.source.ring, self.source.ngens)
        return vec_add(*(vec_scale_poly(p, col) for p, col in zip(polys, self.columns) if p))

    def check(self) -> None:
        for r in self.source.relations:
            if not self.target.contains(self.apply(r)):
                raise IllDefinedMap("a source relation does not map into the target relations")

    def matrix(self) -> list[list[Poly]]:
        """Entries indexed [target generator][source generator]."""
        cols = [vec_to_polys(c, self.target.ring, self.target.ngens) for c in self.columns]
        return [[cols[j][i] for j in range(self.source.ngens)] for i in range(self.target.ngens)]


def _project(vecs: Sequence[Vec], keep: int) -> list[Vec]:
    out = []
    for s in vecs:
        part = {(c, e): x for (c, e), x in s.items() if c < keep}
        if part:
            out.append(part)
    return out


def preimage_generators(columns: Sequence[Vec], target_rels: Sequence[Vec], target_rank: int, n: int) -> list[Vec]:
    """Generators of {v in R^len(columns) : sum v_j columns_j lies in (target_rels)}."""
    m = len(columns)
    if m == 0:
        return []
    syz = syzygy_vecs(list(columns) + list(target_rels), target_rank, n)
    return _project(syz, m)


def _prune(ring: Ring, ngens: int, rels: list[Vec], reps: list | None) -> tuple[int, list[Vec], list | None]:
    """Drop generators that some relation expresses through the others."""
    zero = (0,) * ring.n
    rels = [dict(r) for r in rels if r]
    while True:
        hit = None
        for idx, r in enumerate(rels):
            comps_const = {}
            comps_other = set()
            for (c, e), x in r.items():
                if e == zero:
                    comps_const[c] = x
                else:
                    comps_other.add(c)
            for c in sorted(comps_const):
                if c not in comps_other:
                    hit = (idx, c, comps_const[c])
                    break
            if hit:
                break
        if hit is None:
            if not rels:
                return ngens, rels, reps
            gb = GroebnerBasis.compute(ring, rels, ngens, POT)
            if any(e == zero for _, e in gb.leads()):
                rels = [dict(g) for g in gb.elems]
                continue
            return ngens, list(gb.elems), reps
        idx, c, a = hit
        r = rels[idx]
        new_rels = []
        for j, s in enumerate(rels):
            if j == idx:
                continue
            part = {e: x for (cc, e), x in s.items() if cc == c}
            if part:
                coef = {(0, e): x / a for e, x in part.items()}
                factor = vec_to_polys(coef, ring, 1)[0]
                s = vec_add(s, vec_neg(vec_scale_poly(factor, r)))
            s = {((cc - 1 if cc > c else cc), e): x for (cc, e), x in s.items()}
            if s:
                new_rels.append(s)
        rels = new_rels
        ngens -= 1
        if reps is not None:
            reps = reps[:c] + reps[c + 1:]


def present_subquotient(ring: Ring, U: Sequence[Vec], V: Sequence[Vec], rank: int, prune: bool = True):
    """Presentation of <U> / (<U> ∩ <V>) inside R^rank, with generator representatives."""
    p = len(U)
    if p == 0:
        return FPModule(ring, 0), []
    syz = syzygy_vecs(list(U) + list(V), rank, ring.n)
    rels = _project(syz, p)
    reps = list(U)
    if prune:
        p, rels, reps = _prune(ring, p, rels, reps)
    return FPModule(ring, p, rels), reps


def kernel_of_map(f: ModuleMap) -> tuple[FPModule, ModuleMap]:
    """ker f with its inclusion into the source."""
    f.check()
    ring = f.source.ring
    gens = preimage_generators(f.columns, f.target.relations, f.target.ngens, ring.n)
    gens = [g for g in gens if not f.source.contains(g)]
    mod, reps = present_subquotient(ring, gens, f.source.relations, f.source.ngens)
    return mod, ModuleMap(mod, f.source, reps, check=False)


def subquotient(module: FPModule, elements: Sequence) -> FPModule:
    """module / <elements>."""
    vecs = []
    for el in elements:
        if isinstance(el, FreeElem) and el.rank != module.ngens:
            raise NotContained("element has the wrong number of components")
        try:
            vecs.append(_to_vec(module.ring, el, module.ngens))
        except (ShapeMismatch, RingMismatch) as exc:
            raise NotContained(str(exc)) from None
    return module.with_relations(vecs)


# ---------------------------------------------------------------------------
# Koszul homology


def koszul_differential_columns(ring: Ring, elems: Sequence[Poly], g: int, j: int) -> list[Vec]:
    """Images of the free generators of K_j in K_{j-1}.

    d(e_J) = sum_t (-1)^t f_{J_t} e_{J minus J_t}, generator e_J ⊗ e_c sits at
    block(J) * g + c.
    """
    r = len(elems)
    src = list(combinations(range(r), j))
    dst = {J: i for i, J in enumerate(combinations(range(r), j - 1))}
    cols = []
    for J in src:
        for c in range(g):
            v: Vec = {}
            for t, i in enumerate(J):
                rest = J[:t] + J[t + 1:]
                pos = dst[rest] * g + c
                f = elems[i] if t % 2 == 0 else -elems[i]
                v = vec_add(v, {(pos, e): x for e, x in f.terms.items()})
            cols.append(v)
    return cols


def _block_relations(M: FPModule, blocks: int) -> list[Vec]:
    out = []
    rels = M.gb.elems if M.relations else []
    for b in range(blocks):
        out.extend(vec_shift_components(v, b * M.ngens) for v in rels)
    return out


def koszul_homology(M: FPModule, elems: Sequence) -> list[FPModule]:
    """H_0, ..., H_r of the Koszul complex of elems on M (H_0 = M / (elems) M)."""
    ring = M.ring
    elems = [ring(f) for f in elems]
    r = len(elems)
    g = M.ngens
    out = [M.modulo_ideal(elems)]
    for j in range(1, r + 1):
        rank_j = comb(r, j) * g
        if g == 0:
            out.append(FPModule(ring, 0))
            continue
        cols = koszul_differential_columns(ring, elems, g, j)
        kernel = preimage_generators(cols, _block_relations(M, comb(r, j - 1)), comb(r, j - 1) * g, ring.n)
        own = _block_relations(M, comb(r, j))
        image = koszul_differential_columns(ring, elems, g, j + 1) if j < r else []
        mod, _ = present_subquotient(ring, kernel, list(image) + own, rank_j)
        out.append(mod)
    return out


# ---------------------------------------------------------------------------
# finite realization


@dataclass
class FiniteRealization:
    """Finite-dimensional module as Q^dim with one action matrix per variable."""

    module: FPModule
    basis: list
    actions: list
    _index: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, v: Vec) -> tuple:
        r = self.module.reduce(v)
        out = [ZERO] * self.dim
        for t, x in r.items():
            out[self._index[t]] = x
        return tuple(out)


def finite_realization(M: FPModule) -> FiniteRealization:
    basis = M.standard_basis()
    index = {t: i for i, t in enumerate(basis)}
    n = M.ring.n
    d = len(basis)
    actions = []
    for i in range(n):
        cols = []
        for c, e in basis:
            e2 = tuple(x + (1 if k == i else 0) for k, x in enumerate(e))
            r = M.reduce({(c, e2): Fraction(1)})
            col = [ZERO] * d
            for t, x in r.items():
                col[index[t]] = x
            cols.append(col)
        actions.append(QMatrix([[cols[k][m] for k in range(d)] for m in range(d)], d))
    return FiniteRealization(M, basis, actions, index)


# ---------------------------------------------------------------------------
# local lengths and Hilbert-Samuel data


def point_status(J: Ideal, point: Sequence) -> str:
    """'absent', 'isolated' or 'embedded' (point on a positive-dimensional part of V(J))."""
    point = [as_scalar(x) for x in point]
    if J.is_unit() or not J.vanishes_at(point):
        return "absent"
    if J.dimension() <= 0:
        return "isolated"
    sat = saturation(J, maximal_ideal(J.ring, point))
    if any(g.evaluate(point) for g in sat.gens):
        return "isolated"
    return "embedded"


def local_length(N: FPModule, point: Sequence, cap: int = STABILIZATION_CAP) -> int:
    """Length of the localization of N at the maximal ideal of `point`.

    Finite-dimensional N: dimension of the joint root space of the variable
    actions.  Otherwise dim N/m^k N is computed until two consecutive values
    agree, which by Nakayama certifies m^k N_m = 0.
    """
    point = [as_scalar(x) for x in point]
    if N.is_zero():
        return 0
    if N.is_finite_dimensional():
        real = N.realization()
        if real.dim == 0:
            return 0
        return joint_root_space(real.actions, point, check=False).dim
    shifted = N.translate(point)
    ring = N.ring
    prev = None
    for k in range(1, cap + 1):
        mk = [ring.monomial(e) for e in _degree_monomials(ring.n, k)]
        v = shifted.with_relations(shifted.ideal_times(mk)).vector_dim()
        if v == prev:
            return v
        prev = v
    raise NoStabilization(f"local length at ({', '.join(scalar_str(x) for x in point)}) did not stabilise within k = {cap}")


def _degree_monomials(n: int, k: int):
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _degree_monomials(n - 1, k - first):
            yield (first,) + rest


def _q_gens(ring: Ring, q) -> list[Poly]:
    if isinstance(q, Ideal):
        return list(q.gens)
    return [ring(g) for g in q]


def hs_function(M: FPModule, q, k: int, point: Sequence | None = None) -> int:
    """dim M / q^k M (or its length at `point` when given)."""
    ring = M.ring
    gens = _q_gens(ring, q)
    if k < 0:
        raise ValueError("k must be non-negative")
    if M.is_zero() or k == 0:
        return 0
    if point is None and not M.modulo_ideal(gens).is_finite_dimensional():
        raise NotCofinite("M / qM is infinite-dimensional")
    quotient = M.modulo_ideal(power_generators(gens, k, ring))
    if point is None:
        return quotient.vector_dim()
    return local_length(quotient, point)


@dataclass
class HSRecord:
    """Eventual Hilbert-Samuel polynomial of k -> dim M/q^k M."""

    q: list
    samples: list
    coefficients: list  # in powers of k, lowest first
    degree: int
    multiplicity: int
    stability_window: tuple

    def value(self, k: int) -> Fraction:
        return sum((c * k**i for i, c in enumerate(self.coefficients)), ZERO)

    def multiplicity_at(self, r: int) -> int:
        """r! times the coefficient of k^r (0 when the degree is below r)."""
        if self.degree > r:
            raise DimensionMismatch(f"polynomial degree {self.degree} exceeds {r}")
        c = self.coefficients[r] if r < len(self.coefficients) else ZERO
        val = c * factorial(r)
        if val.denominator != 1:
            raise ArithmeticError("non-integral multiplicity")
        return int(val)


def _newton_to_power(values: Sequence[int], start: int, degree: int) -> list[Fraction]:
    """Coefficients in k of the degree-`degree` interpolant through values at start, start+1, ..."""
    diffs = [Fraction(v) for v in values[: degree + 1]]
    newton = []
    cur = diffs
    for _ in range(degree + 1):
        newton.append(cur[0])
        cur = [b - a for a, b in zip(cur, cur[1:])]
    # sum_i newton[i] * binom(k - start, i)
    coeffs = [ZERO] * (degree + 1)
    basis = [Fraction(1)]  # polynomial in k, lowest first
    for i in range(degree + 1):
        for j, c in enumerate(basis):
            coeffs[j] += newton[i] * c
        # basis *= (k - start - i) / (i + 1)
        nxt = [ZERO] * (len(basis) + 1)
        for j, c in enumerate(basis):
            nxt[j + 1] += c / (i + 1)
            nxt[j] -= c * (start + i) / (i + 1)
        basis = nxt
    return coeffs


def fit_eventual_polynomial(values: Sequence[int], first_k: int, max_degree: int, confirm: int = 3):
    """Smallest degree d whose trailing d+1+confirm values lie on one polynomial.

    Returns (degree, coefficients, window start) or None.
    """
    for d in range(max_degree + 1):
        width = d + 1 + confirm
        if len(values) < width:
            return None
        window = list(values[-width:])
        cur = window
        for _ in range(d + 1):
            cur = [b - a for a, b in zip(cur, cur[1:])]
        if all(x == 0 for x in cur):
            start = first_k + len(values) - width
            return d, _newton_to_power(window, start, d), start
    return None


def tangent_cone(gens: Sequence[Poly], point: Sequence) -> Ideal:
    """Lowest-degree forms of the ideal (gens) in coordinates centred at `point`.

    The family I_t = {f(t u)} is saturated by t and specialised at t = 0,
    which is the flat limit of the rescaled ideal.
    """
    ring = gens[0].ring
    tag = "_t"
    while tag in ring.names:
        tag += "_"
    big = ring.extend([tag])
    t = big.var(ring.n)
    scaled = []
    for g in gens:
        h = g.translate(point)
        scaled.append(Poly(big, {e + (sum(e),): c for e, c in h.terms.items()}))
    sat = Ideal(big, scaled)
    while True:
        nxt = colon_element(sat, t)
        if nxt == sat:
            break
        sat = nxt
    return Ideal(ring, [Poly(ring, {e[:-1]: c for e, c in g.terms.items() if not e[-1]}) for g in sat.gens])


def polynomial_from(M: FPModule, gens: Sequence[Poly], point: Sequence | None) -> int:
    """A k from which dim M/q^k M is provably polynomial; 1 when no bound is known.

    Available for cyclic modules with q the maximal ideal at `point`: the
    function is the cumulative Hilbert function of R/in(C), C the tangent
    cone, and for a monomial ideal L that function is polynomial from
    deg lcm(L) - n + 1 on (inclusion-exclusion over the generators).
    """
    ring = M.ring
    if point is None or M.ngens != 1 or Ideal(ring, gens) != maximal_ideal(ring, point):
        return 1
    rels = [vec_to_polys(v, ring, 1)[0] for v in M.relations]
    rels = [r for r in rels if not r.is_zero()]
    if not rels:
        return 1
    leads = tangent_cone(rels, point).gb.leading_monomials()
    if not leads:
        return 1
    lcm = [max(e[i] for e in leads) for i in range(ring.n)]
    return max(1, sum(lcm) - ring.n + 1)


def hs_polynomial(
    M: FPModule, q, point: Sequence | None = None, max_k: int = DEFAULT_MAX_K, confirm: int = 3
) -> HSRecord:
    """Fit the eventual polynomial of hs_function by finite differences.

    A fit is accepted only if its degree is at most dim M and, where a proven
    stabilisation point is known, its window starts there or later.
    """
    ring = M.ring
    gens = _q_gens(ring, q)
    if M.is_zero():
        raise NotCofinite("zero module has no Hilbert-Samuel polynomial")
    if point is None and not M.modulo_ideal(gens).is_finite_dimensional():
        raise NotCofinite("M / qM is infinite-dimensional")
    top = min(ring.n, len(gens), M.dimension())
    earliest = polynomial_from(M, gens, point)
    values = []
    for k in range(1, max_k + 1):
        values.append(hs_function(M, gens, k, point))
        fit = fit_eventual_polynomial(values, 1, top, confirm)
        if fit is not None and fit[2] >= earliest:
            d, coeffs, start = fit
            lead_c = coeffs[d] * factorial(d)
            if lead_c.denominator != 1:
                raise ArithmeticError("non-integral leading coefficient")
            samples = list(zip(range(1, k + 1), values))
            return HSRecord(gens, samples, coeffs, d, int(lead_c), (start, k))
    raise NoStabilization(f"no polynomial fit within k <= {max_k}")


def multiplicity_serre(M: FPModule, params: Sequence) -> int:
    """Sum_i (-1)^i dim H_i(params; M)."""
    ring = M.ring
    params = [ring(p) for p in params]
    if not M.modulo_ideal(params).is_finite_dimensional():
        raise NotCofinite("M / (params) M is infinite-dimensional")
    dim = M.dimension()
    if dim != len(params):
        raise DimensionMismatch(f"{len(params)} parameters for a module of dimension {dim}")
    total = 0
    for i, h in enumerate(koszul_homology(M, params)):
        total += (-1) ** i * h.vector_dim()
    return total


def annihilator(M: FPModule) -> Ideal:
    return M.annihilator()


def module_dimension(M: FPModule) -> int:
    return M.dimension()


# ---------------------------------------------------------------------------
# restriction of scalars along a polynomial map


def target_ring_for(source: Ring, k: int) -> Ring:
    base = ["w"] if k == 1 else [f"w{j + 1}" for j in range(k)]
    names = list(base)
    while set(names) & set(source.names):
        names = [nm + "_" for nm in names]
    return Ring(names)


def restrict_scalars(M: FPModule, images: Sequence, target: Ring | None = None) -> FPModule:
    """M viewed over Q[w_1..w_k] through w_j -> images[j]; M must be finite over it."""
    ring = M.ring
    images = [ring(f) for f in images]
    k = len(images)
    if target is None:
        target = target_ring_for(ring, k)
    n = ring.n
    big = Ring(list(ring.names) + list(target.names))
    zpos = list(range(n))
    g = M.ngens
    if g == 0:
        return FPModule(target, 0)
    lifted = [vec_from_polys([p.to_ring(big, zpos) for p in vec_to_polys(v, ring, g)]) for v in M.relations]
    graph = []
    for j, f in enumerate(images):
        h = big.var(n + j) - f.to_ring(big, zpos)
        for c in range(g):
            graph.append({(c, e): x for e, x in h.terms.items()})
    elim = ModuleOrder(elim=n)
    gb = GroebnerBasis.compute(big, lifted + graph, g, elim)
    # B-module generators: z^a e_c not divisible by a w-free leading term
    gens = []
    for c in range(g):
        walls = [e[:n] for cc, e in gb.leads() if cc == c and not any(e[n:])]
        if any(not any(a) for a in walls):
            continue
        bounds = []
        for i in range(n):
            pure = [a[i] for a in walls if all(x == 0 for t, x in enumerate(a) if t != i)]
            if not pure:
                raise NotFinite("module is not finite over the target ring")
            bounds.append(min(pure))
        gens.extend((c, a) for a in _enumerate_standard(walls, n, None, bounds))
    p = len(gens)
    if p == 0:
        return FPModule(target, 0)
    tagged = []
    for idx, (c, a) in enumerate(gens):
        tagged.append({(c, a + (0,) * k): Fraction(1), (g + idx, (0,) * (n + k)): Fraction(1)})
    order = ModuleOrder(elim=n, tag_from=g)
    G = GroebnerBasis.compute(big, tagged + list(gb.elems), g + p, order)
    rels = []
    for v in G.elems:
        c, e = lead(v, order)
        if c >= g and not any(e[:n]):
            rels.append({(cc - g, ee[n:]): x for (cc, ee), x in v.items()})
    p2, rels, _ = _prune(target, p, rels, None)
    return FPModule(target, p2, rels)
