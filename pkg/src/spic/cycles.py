"""Cycles of operator models: components, local indexes, Weyl points, push-forwards."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .errors import (
    BadCandidate,
    ComponentsUnknown,
    GenericSampleDisagreement,
    IrrationalPreimage,
    NotACoordinateSystem,
    NotFinite,
    NotGeneric,
    NotOnComponent,
    PointOffSpectrum,
    Unsupported,
)
from .exact import as_scalar, rational_joint_spectrum
from .fpmodule import DEFAULT_MAX_K, FPModule, hs_polynomial, point_status, target_ring_for
from .groebner import (
    Ideal,
    buchberger,
    independent_sets,
    intersect_all,
    maximal_ideal,
    minimal_primes_monomial,
)
from .models import MatrixTuple, ModuleTuple, OperatorModel
from .polyring import GREVLEX, Poly, Ring, block_order

KINDS = ("monomial", "linear", "principal-irreducible", "user-trusted", "image-of-certified")
DEFAULT_BUDGET = 40


@dataclass(frozen=True)
class Sampling:
    """Generic-point search settings; the spiral start comes from SPIC_SEED."""

    budget: int = DEFAULT_BUDGET
    seed: int = 0
    max_k: int = DEFAULT_MAX_K

    @classmethod
    def from_env(cls, budget: int = DEFAULT_BUDGET, max_k: int = DEFAULT_MAX_K) -> "Sampling":
        return cls(budget, int(os.environ.get("SPIC_SEED", "0") or 0), max_k)


# ---------------------------------------------------------------------------
# prime candidates


def certified_kind(ideal: Ideal) -> str | None:
    """Kind under which primality of `ideal` can be machine-checked, if any."""
    if ideal.is_unit():
        return None
    gens = ideal.reduced_gens()
    if not gens:
        return "linear"
    if all(g.is_monomial() and g.total_degree() == 1 for g in gens):
        return "monomial"
    if all(g.total_degree() <= 1 for g in gens):
        return "linear"
    if len(gens) == 1:
        p = gens[0]
        for i in range(p.ring.n):
            if p.degree_in(i) != 1:
                continue
            coeff = [e for e in p.terms if e[i] == 1]
            # p = a*z_i + b with a a nonzero constant
            if len(coeff) == 1 and sum(coeff[0]) == 1:
                return "principal-irreducible"
    return None


class PrimeCandidate:
    """A prime ideal given by generators, with how its primality is known."""

    def __init__(self, ring: Ring, gens: Sequence, kind: str | None = None, note: str = ""):
        self.ideal = Ideal(ring, gens)
        self.ring = ring
        if self.ideal.is_unit():
            raise BadCandidate("candidate generates the unit ideal")
        auto = certified_kind(self.ideal)
        if kind is None:
            if auto is None:
                raise BadCandidate(
                    f"cannot certify {self.label()} as prime; declare it trusted to use it anyway"
                )
            kind = auto
        elif kind not in KINDS:
            raise BadCandidate(f"unknown candidate kind {kind!r}")
        elif kind in ("monomial", "linear", "principal-irreducible"):
            if auto != kind and not (kind == "linear" and auto == "monomial"):
                raise BadCandidate(f"{self.label()} is not of kind {kind}")
            kind = auto
        self.kind = kind
        self.note = note
        self.dimension = self.ideal.dimension()

    @property
    def generators(self) -> list[Poly]:
        return sorted(self.ideal.reduced_gens(), key=lambda g: GREVLEX.key(g.leading()[0]), reverse=True)

    def label(self) -> str:
        gens = self.generators
        return "(" + ", ".join(str(g) for g in gens) + ")" if gens else "(0)"

    def __repr__(self):
        return f"PrimeCandidate{self.label()}"

    def __eq__(self, other):
        return isinstance(other, PrimeCandidate) and self.ideal == other.ideal

    def __hash__(self):
        return hash(self.ideal)

    def contains_point(self, point: Sequence) -> bool:
        return self.ideal.vanishes_at(point)

    def sort_key(self):
        return (-self.dimension, self.label())


def candidates_from_text(ring: Ring, lines: Sequence[str]) -> list[PrimeCandidate]:
    out = []
    for line in lines:
        kind = None
        text = line.strip()
        if text.startswith("trusted:"):
            kind, text = "user-trusted", text[len("trusted:"):]
        gens = [ring(g) for g in _split_top(text)]
        out.append(PrimeCandidate(ring, gens, kind))
    return out


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


# ---------------------------------------------------------------------------
# cycles


class Cycle:
    """Formal integer combination of prime candidates."""

    def __init__(self, terms: Sequence[tuple[PrimeCandidate, int]] = (), off_spectrum: bool = False):
        merged: dict[PrimeCandidate, int] = {}
        order: list[PrimeCandidate] = []
        for p, c in terms:
            if p not in merged:
                merged[p] = 0
                order.append(p)
            merged[p] += int(c)
        self.terms = sorted(((p, merged[p]) for p in order if merged[p]), key=lambda t: t[0].sort_key())
        self.off_spectrum = off_spectrum

    def __eq__(self, other):
        return isinstance(other, Cycle) and [(p.ideal, c) for p, c in self.terms] == [
            (p.ideal, c) for p, c in other.terms
        ]

    def __add__(self, other: "Cycle") -> "Cycle":
        return Cycle(self.terms + other.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, p: PrimeCandidate) -> int:
        for q, c in self.terms:
            if q == p:
                return c
        return 0

    def max_part(self) -> "Cycle":
        if not self.terms:
            return Cycle()
        top = max(p.dimension for p, _ in self.terms)
        return Cycle([(p, c) for p, c in self.terms if p.dimension == top])

    def scaled(self, k: int) -> "Cycle":
        return Cycle([(p, k * c) for p, c in self.terms])

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{p.label()}" for p, c in self.terms)

    __repr__ = __str__

    def to_json(self) -> list:
        return [
            {"prime_generators": [str(g) for g in p.generators], "coefficient": c, "dimension": p.dimension}
            for p, c in self.terms
        ]


# ---------------------------------------------------------------------------
# components


def _in_radical(h: Poly, ideal: Ideal) -> bool:
    """h in sqrt(ideal), via 1 in ideal + (1 - t h) over one extra variable."""
    ring = ideal.ring
    tag = "_r"
    while tag in ring.names:
        tag += "_"
    big = ring.extend([tag])
    t = big.var(ring.n)
    gens = [g.to_ring(big) for g in ideal.gens] + [1 - t * h.to_ring(big)]
    return Ideal(big, gens).is_unit()


def verify_candidates(support: Ideal, candidates: Sequence[PrimeCandidate]) -> list[PrimeCandidate]:
    """Check that the candidates are exactly the minimal primes over `support`."""
    cands = []
    for p in candidates:
        if p not in cands:
            cands.append(p)
    for p in cands:
        if not all(p.ideal.contains(g) for g in support.gens):
            raise BadCandidate(f"{p.label()} does not contain the support ideal")
    for p in cands:
        for q in cands:
            if p is not q and q.ideal <= p.ideal:
                raise BadCandidate(f"{p.label()} contains the candidate {q.label()}; it is not minimal")
    if support.is_unit():
        return []
    if not cands:
        raise ComponentsUnknown("no candidates given for a nonempty support")
    inter = intersect_all([p.ideal for p in cands])
    for h in inter.reduced_gens():
        if not _in_radical(h, support):
            raise ComponentsUnknown(f"candidates miss part of the support (witness {h})")
    if max(p.dimension for p in cands) != support.dimension():
        raise ComponentsUnknown("candidate dimensions disagree with the support dimension")
    return sorted(cands, key=PrimeCandidate.sort_key)


def _rational_points(ideal: Ideal) -> tuple[list[tuple], bool]:
    """Rational points of a zero-dimensional ideal, plus whether they exhaust V(ideal)."""
    mod = FPModule.cyclic(ideal.ring, ideal.gens)
    real = mod.realization()
    if real.dim == 0:
        return [], True
    spec = rational_joint_spectrum(real.actions, partial=True)
    total = sum(s.dim for _, s in spec)
    return [p for p, _ in spec], total == real.dim


def automatic_components(model: OperatorModel) -> list[PrimeCandidate]:
    """Components found without user input (monomial, prime or finite supports)."""
    ring = model.ring
    if isinstance(model, MatrixTuple):
        return [PrimeCandidate(ring, maximal_ideal(ring, p).gens, "linear") for p in model.taylor_spectrum()]
    support = model.support_ideal()
    if support.is_unit():
        return []
    if support.is_zero():
        return [PrimeCandidate(ring, [], "linear")]
    gens = support.reduced_gens()
    if all(g.is_monomial() for g in gens):
        return [
            PrimeCandidate(ring, [ring.var(i) for i in vs], "monomial") for vs in minimal_primes_monomial(gens)
        ]
    if certified_kind(support) is not None:
        return [PrimeCandidate(ring, gens)]
    if support.dimension() == 0:
        points, complete = _rational_points(support)
        if complete:
            return [PrimeCandidate(ring, maximal_ideal(ring, p).gens, "linear") for p in points]
    raise ComponentsUnknown("support components are not automatic here; supply prime candidates")


def components(model: OperatorModel, candidates: Sequence[PrimeCandidate] | None = None) -> list[PrimeCandidate]:
    if candidates:
        return verify_candidates(model.support_ideal(), candidates)
    return sorted(automatic_components(model), key=PrimeCandidate.sort_key)


# ---------------------------------------------------------------------------
# generic samples


def spiral() -> Iterator[Fraction]:
    """0, 1, -1, 2, -2, 1/2, -1/2, 3, ... (small rationals by height)."""
    yield Fraction(0)
    h = 1
    while True:
        vals = []
        for q in range(1, h + 1):
            for p in range(0, h + 1):
                if max(p, q) == h and p and Fraction(p, q).denominator == q:
                    vals.append(Fraction(p, q))
        vals.sort(key=lambda x: (x.denominator, x.numerator) if x >= 1 else (h + x.denominator, x.numerator))
        for v in vals:
            yield v
            yield -v
        h += 1


def spiral_tuples(r: int, seed: int = 0) -> Iterator[tuple]:
    """Tuples of spiral values ordered by largest spiral index used."""
    if r == 0:
        yield ()
        return
    values: list[Fraction] = []
    gen = spiral()
    skipped = 0
    m = 0
    while True:
        while len(values) <= m:
            values.append(next(gen))
        for idx in product(range(m + 1), repeat=r):
            if max(idx) != m:
                continue
            if skipped < seed:
                skipped += 1
                continue
            yield tuple(values[i] for i in idx)
        m += 1


def frames_for(p: PrimeCandidate) -> list[tuple[int, ...]]:
    return independent_sets(p.ideal.gb, p.dimension)


def component_points(
    p: PrimeCandidate, avoid: Sequence[PrimeCandidate], sampling: Sampling
) -> Iterator[tuple[tuple, tuple]]:
    """Rational points of V(p) off the other components, one per frame value.

    Yields (point, frame) pairs; frame values never repeat.
    """
    ring = p.ring
    if p.dimension == 0:
        points, _ = _rational_points(p.ideal)
        for pt in points:
            if not any(q.contains_point(pt) for q in avoid):
                yield pt, ()
        return
    frames = frames_for(p)
    for tried, values in enumerate(spiral_tuples(p.dimension, sampling.seed)):
        if tried >= sampling.budget:
            return
        for frame in frames:
            fiber = p.ideal + [ring.var(i) - c for i, c in zip(frame, values)]
            if fiber.is_unit() or fiber.dimension() != 0:
                continue
            points, _ = _rational_points(fiber)
            good = [pt for pt in points if not any(q.contains_point(pt) for q in avoid)]
            if good:
                yield good[0], frame
                break


def local_e(module: FPModule, elems: Sequence[Poly], point: Sequence, max_k: int = DEFAULT_MAX_K) -> int:
    """e_q of the localization at `point`, q = (elems), scaled by len(elems)!."""
    rec = hs_polynomial(module, list(elems), point=point, max_k=max_k)
    return rec.multiplicity_at(len(elems))


@dataclass
class IndexSample:
    point: tuple
    frame: tuple
    chi: int
    e: int
    index: int


def l_via_multiplicity(
    model: OperatorModel,
    p: PrimeCandidate,
    point: Sequence,
    frame: Sequence[int],
    others: Sequence[PrimeCandidate] = (),
    max_k: int = DEFAULT_MAX_K,
) -> IndexSample:
    """Local index of `model` along p from chi' and e_q(R/p) at a point of p."""
    ring = model.ring
    point = tuple(as_scalar(x) for x in point)
    frame = tuple(frame)
    if not p.contains_point(point):
        raise NotOnComponent(f"{_fmt(point)} is not on {p.label()}")
    for q in others:
        if q != p and q.contains_point(point):
            raise NotGeneric(f"{_fmt(point)} also lies on {q.label()}")
    chi = model.chi_prime(point, frame)
    elems = [ring.var(i) - point[i] for i in frame]
    e = local_e(FPModule.cyclic(ring, p.ideal.gens), elems, point, max_k)
    if e <= 0 or chi % e:
        raise NotGeneric(f"chi' = {chi} is not a multiple of e = {e} at {_fmt(point)}")
    return IndexSample(point, frame, chi, e, chi // e)


@dataclass
class ComponentReport:
    prime: PrimeCandidate
    samples: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return self.prime.dimension

    @property
    def constant(self) -> bool:
        return len({s.index for s in self.samples}) == 1

    @property
    def index(self) -> int:
        if not self.samples:
            raise NotGeneric(f"no generic sample found on {self.prime.label()}")
        if not self.constant:
            raise GenericSampleDisagreement(f"local index varies along {self.prime.label()}")
        return self.samples[0].index


@dataclass
class SpectralPicture:
    components: list

    def cycle(self) -> Cycle:
        return Cycle([(c.prime, c.index) for c in self.components])

    def all_weyl(self) -> bool:
        return all(c.index == 0 and c.dimension > 0 for c in self.components)


def sample_component(
    model: OperatorModel,
    p: PrimeCandidate,
    others: Sequence[PrimeCandidate],
    sampling: Sampling,
    count: int = 2,
) -> ComponentReport:
    report = ComponentReport(p)
    for point, frame in component_points(p, [q for q in others if q != p], sampling):
        try:
            s = l_via_multiplicity(model, p, point, frame, others, sampling.max_k)
        except (NotACoordinateSystem, NotGeneric):
            continue
        report.samples.append(s)
        if len(report.samples) >= count:
            break
    if not report.samples:
        raise GenericSampleDisagreement(f"no usable generic point on {p.label()} within the sample budget")
    if p.dimension > 0 and len(report.samples) < count:
        raise GenericSampleDisagreement(f"only {len(report.samples)} generic sample(s) on {p.label()}")
    return report


def spectral_picture(
    model: OperatorModel, candidates: Sequence[PrimeCandidate] | None = None, sampling: Sampling | None = None
) -> SpectralPicture:
    sampling = sampling or Sampling.from_env()
    comps = components(model, candidates)
    return SpectralPicture([sample_component(model, p, comps, sampling) for p in comps])


def cycle_of_module(
    M: FPModule, candidates: Sequence[PrimeCandidate] | None = None, sampling: Sampling | None = None
) -> Cycle:
    return spectral_picture(ModuleTuple(M), candidates, sampling).cycle()


def local_cycle(
    model: OperatorModel,
    point: Sequence,
    candidates: Sequence[PrimeCandidate] | None = None,
    sampling: Sampling | None = None,
    picture: SpectralPicture | None = None,
) -> Cycle:
    """z at `point` (homological signs); empty and flagged when off the spectrum."""
    point = tuple(as_scalar(x) for x in point)
    if not model.in_spectrum(point):
        return Cycle([], off_spectrum=True)
    picture = picture or spectral_picture(model, candidates, sampling)
    return Cycle([(c.prime, c.index) for c in picture.components if c.prime.contains_point(point)])


def cochain_sign(n: int) -> int:
    """Factor relating these coefficients to the cochain-indexed convention."""
    return -1 if n % 2 else 1


@dataclass
class WeylResult:
    point: tuple
    is_weyl: bool
    witnesses: list  # (prime, local index)


def weyl_test(
    model: OperatorModel,
    point: Sequence,
    candidates: Sequence[PrimeCandidate] | None = None,
    sampling: Sampling | None = None,
    picture: SpectralPicture | None = None,
) -> WeylResult:
    point = tuple(as_scalar(x) for x in point)
    if not model.in_spectrum(point):
        raise PointOffSpectrum(f"{_fmt(point)} is not in the spectrum")
    picture = picture or spectral_picture(model, candidates, sampling)
    through = [c for c in picture.components if c.prime.contains_point(point)]
    witnesses = [(c.prime, c.index) for c in through]
    is_weyl = all(c.index == 0 and c.dimension > 0 for c in through)
    return WeylResult(point, is_weyl, witnesses)


def in_weyl_spectrum(model, point, candidates=None, sampling=None, picture=None) -> bool:
    point = tuple(as_scalar(x) for x in point)
    if not model.in_spectrum(point):
        return False
    return not weyl_test(model, point, candidates, sampling, picture).is_weyl


# ---------------------------------------------------------------------------
# push-forward along polynomial maps


def _graph(p_ideal: Ideal, images: Sequence[Poly], target: Ring):
    ring = p_ideal.ring
    n = ring.n
    big = Ring(list(ring.names) + list(target.names))
    zpos = list(range(n))
    gens = [g.to_ring(big, zpos) for g in p_ideal.gens]
    gens += [big.var(n + j) - f.to_ring(big, zpos) for j, f in enumerate(images)]
    return big, gens


def image_prime(p: PrimeCandidate, images: Sequence[Poly], target: Ring) -> PrimeCandidate:
    """Kernel of B -> R/p; raises NotFinite unless R/p is finite over B."""
    n = p.ring.n
    big, gens = _graph(p.ideal, images, target)
    gb = buchberger(gens, block_order(n), big)
    leads = [e for _, e in gb.leads()]
    for i in range(n):
        if not any(e[i] > 0 and all(x == 0 for t, x in enumerate(e) if t != i) for e in leads):
            raise NotFinite(f"{p.label()} is not finite over the target ring")
    kept = [g for g in gb.polys() if all(not any(e[:n]) for e in g.terms)]
    qgens = [Poly(target, {e[n:]: c for e, c in g.terms.items()}) for g in kept]
    return PrimeCandidate(target, qgens, "image-of-certified", note=f"image of {p.label()}")


def generic_degree(p: PrimeCandidate, images: Sequence[Poly], sampling: Sampling) -> int:
    """Generic fiber length of V(p) -> target; the minimum must repeat at two values."""
    ring = p.ring
    seen: dict[tuple, int] = {}
    for point, _ in component_points(p, [], sampling):
        mu = tuple(f.evaluate(point) for f in images)
        if mu in seen:
            continue
        fiber = p.ideal + [f - m for f, m in zip(images, mu)]
        seen[mu] = FPModule.cyclic(ring, fiber.gens).vector_dim()
        if p.dimension == 0:
            return seen[mu]
        low = min(seen.values())
        if list(seen.values()).count(low) >= 2:
            return low
    raise GenericSampleDisagreement(f"generic fiber length of {p.label()} not confirmed within the budget")


def pushforward_cycle(
    cycle: Cycle, images: Sequence, sampling: Sampling | None = None, target: Ring | None = None
) -> Cycle:
    sampling = sampling or Sampling.from_env()
    if not cycle.terms:
        return Cycle()
    ring = cycle.terms[0][0].ring
    images = [ring(f) for f in images]
    target = target or target_ring_for(ring, len(images))
    out = []
    for p, c in cycle.terms:
        q = image_prime(p, images, target)
        out.append((q, c * generic_degree(p, images, sampling)))
    return Cycle(out)


def preimage_points(model: OperatorModel, images: Sequence[Poly], mu: Sequence) -> list[tuple]:
    fiber = model.support_ideal() + [f - as_scalar(m) for f, m in zip(images, mu)]
    if fiber.is_unit():
        return []
    if fiber.dimension() != 0:
        raise NotFinite(f"the spectrum meets the fiber over {_fmt(mu)} in positive dimension")
    points, complete = _rational_points(fiber)
    if not complete:
        raise IrrationalPreimage(f"fiber over {_fmt(mu)} has non-rational points")
    return points


def _minimal(primes: Sequence[PrimeCandidate]) -> list[PrimeCandidate]:
    uniq = []
    for p in primes:
        if p not in uniq:
            uniq.append(p)
    return [p for p in uniq if not any(q != p and q.ideal <= p.ideal for q in uniq)]


def local_degree(
    p: PrimeCandidate, q: PrimeCandidate, images: Sequence[Poly], lam: tuple, mu: tuple, max_k: int
) -> int:
    """Degree of V(p) -> V(q) near lam as a ratio of local multiplicities."""
    target = q.ring
    r = q.dimension
    for frame in independent_sets(q.ideal.gb, r) if r else [()]:
        fiber = q.ideal + [target.var(i) - mu[i] for i in frame]
        if fiber.is_unit():
            continue
        if point_status(fiber, mu) != "isolated":
            continue
        e_tgt = local_e(
            FPModule.cyclic(target, q.ideal.gens), [target.var(i) - mu[i] for i in frame], mu, max_k
        )
        e_src = local_e(FPModule.cyclic(p.ring, p.ideal.gens), [images[i] - mu[i] for i in frame], lam, max_k)
        if e_src % e_tgt:
            raise NotGeneric(f"local multiplicities {e_src}/{e_tgt} are not divisible")
        return e_src // e_tgt
    raise NotACoordinateSystem(f"no coordinate frame isolates {_fmt(mu)} on {q.label()}")


@dataclass
class FunctorialityReport:
    mu: tuple
    preimages: list
    lhs: Cycle
    rhs: Cycle

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def functoriality_check(
    model: OperatorModel,
    images: Sequence,
    mu: Sequence,
    candidates: Sequence[PrimeCandidate] | None = None,
    sampling: Sampling | None = None,
) -> FunctorialityReport:
    """Compare z^max of the pushed model at mu with the push-forward of the local
    top cycles over the preimage points."""
    if not isinstance(model, (ModuleTuple, MatrixTuple)):
        raise Unsupported("functoriality is checked on module and matrix models")
    sampling = sampling or Sampling.from_env()
    ring = model.ring
    images = [ring(f) for f in images]
    mu = tuple(as_scalar(x) for x in mu)
    pushed = model.pushforward(images)
    target = pushed.ring
    if len(mu) != target.n:
        raise ValueError("target point has the wrong number of coordinates")
    comps = components(model, candidates)
    source_picture = SpectralPicture([sample_component(model, p, comps, sampling) for p in comps])
    image_of = {p: image_prime(p, images, target) for p in comps}
    lams = preimage_points(model, images, mu)

    rhs_terms = []
    for lam in lams:
        through = [c for c in source_picture.components if c.prime.contains_point(lam)]
        if not through:
            continue
        top = max(c.dimension for c in through)
        for c in through:
            if c.dimension != top:
                continue
            q = image_of[c.prime]
            rhs_terms.append((q, c.index * local_degree(c.prime, q, images, lam, mu, sampling.max_k)))
    rhs = Cycle(rhs_terms).max_part()

    if isinstance(pushed, MatrixTuple):
        lhs = local_cycle(pushed, mu, None, sampling).max_part()
    else:
        cands = _minimal(list(image_of.values()))
        lhs = local_cycle(pushed, mu, cands, sampling).max_part()
    return FunctorialityReport(mu, lams, lhs, rhs)


@dataclass
class WeylPushReport:
    checked: int
    inclusion_ok: bool
    equality_expected: bool
    equality_ok: bool
    failures: list
    skipped: list = field(default_factory=list)


def weyl_pushforward_check(
    model: OperatorModel,
    images: Sequence,
    grid: Sequence[Sequence],
    candidates: Sequence[PrimeCandidate] | None = None,
    sampling: Sampling | None = None,
) -> WeylPushReport:
    """On target points mu: mu in w(f(T)) implies a preimage in w(T); the reverse
    when f is injective on the sampled spectrum or the model is a module model."""
    sampling = sampling or Sampling.from_env()
    ring = model.ring
    images = [ring(f) for f in images]
    pushed = model.pushforward(images)
    source_picture = spectral_picture(model, candidates, sampling)
    if isinstance(pushed, MatrixTuple):
        push_cands = None
    else:
        push_cands = _minimal([image_prime(c.prime, images, pushed.ring) for c in source_picture.components])
    if push_cands or isinstance(pushed, MatrixTuple):
        push_picture = spectral_picture(pushed, push_cands, sampling)
    else:
        push_picture = SpectralPicture([])
    inclusion_ok = True
    equality_ok = True
    injective = True
    failures = []
    skipped = []
    checked = 0
    for mu in grid:
        mu = tuple(as_scalar(x) for x in mu)
        try:
            lams = preimage_points(model, images, mu)
        except IrrationalPreimage:
            skipped.append(mu)
            continue
        if len(lams) > 1:
            injective = False
        in_target = bool(lams) and pushed.in_spectrum(mu)
        if not in_target:
            continue
        checked += 1
        w_target = in_weyl_spectrum(pushed, mu, picture=push_picture)
        w_source = any(in_weyl_spectrum(model, lam, picture=source_picture) for lam in lams)
        if w_target and not w_source:
            inclusion_ok = False
            failures.append(("inclusion", mu))
        if w_source and not w_target:
            equality_ok = False
            failures.append(("equality", mu))
    expected = injective or isinstance(model, ModuleTuple)
    return WeylPushReport(checked, inclusion_ok, expected, equality_ok, failures, skipped)


def _fmt(point) -> str:
    return "(" + ", ".join(str(x) for x in point) + ")"
