"""Verification suites run against a model; each returns a pass/fail/skip record."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Sequence

from .arveson import GradedModule, degree_report, is_homogeneous, phi_kernel_dim
from .cycles import (
    Sampling,
    components,
    functoriality_check,
    image_prime,
    l_via_multiplicity,
    local_e,
    spectral_picture,
    weyl_pushforward_check,
    weyl_test,
)
from .errors import (
    DimensionMismatch,
    NotACoordinateSystem,
    NotCofinite,
    SpicError,
)
from .exact import as_scalar
from .fpmodule import FPModule, hs_function, hs_polynomial
from .groebner import syzygies
from .models import ExplicitHomology, MatrixTuple, ModuleTuple, OperatorModel
from .polyring import Poly


@dataclass
class CheckResult:
    name: str
    verdict: str  # "pass", "fail" or "skip"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"


@dataclass
class CheckContext:
    point: tuple | None = None
    frame: tuple | None = None
    images: list | None = None
    target_point: tuple | None = None
    candidates: list | None = None
    sampling: Sampling = field(default_factory=Sampling.from_env)
    _picture: object = None

    def picture(self, model):
        if self._picture is None:
            self._picture = spectral_picture(model, self.candidates, self.sampling)
        return self._picture


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def cokernel_module(model: OperatorModel) -> FPModule:
    """The H_0 module of a model (the cokernel side)."""
    if isinstance(model, ModuleTuple):
        return model.module
    if isinstance(model, MatrixTuple):
        return model.as_module()
    return model.modules[0]


def _sample_points(model, ctx: CheckContext) -> list[tuple[tuple, tuple | None]]:
    if ctx.point is not None:
        return [(ctx.point, ctx.frame)]
    return [(s.point, s.frame) for c in ctx.picture(model).components for s in c.samples]


def _isolating_frame(model: OperatorModel, point: tuple) -> tuple:
    """Smallest coordinate subset that isolates `point` in the spectrum."""
    n = model.n
    for r in range(n + 1):
        for frame in _subsets(n, r):
            try:
                model.chi_prime(point, frame)
                return frame
            except NotACoordinateSystem:
                continue
    raise NotACoordinateSystem("no coordinate subset isolates the point")


def _subsets(n: int, r: int):
    return list(combinations(range(n), r))


# ---------------------------------------------------------------------------
# suites


def check_euler_multiplicity(model, ctx: CheckContext) -> CheckResult:
    """chi' equals the alternating sum of local multiplicities of the homology."""
    rows = []
    ok = True
    for point, frame in _sample_points(model, ctx):
        if frame is None:
            frame = _isolating_frame(model, point)
        chi = model.chi_prime(point, frame)
        elems = [model.ring.var(i) - point[i] for i in frame]
        total = 0
        for sign, module in model.chi_terms():
            if module.is_zero():
                continue
            try:
                total += sign * local_e(module, elems, point, ctx.sampling.max_k)
            except DimensionMismatch:
                total = None
                break
        good = total is not None and total == chi
        ok &= good
        rows.append({"point": point, "frame": [model.ring.names[i] for i in frame], "chi": chi, "e_sum": total})
    return CheckResult("euler-multiplicity", _verdict(ok), {"points": rows})


def check_nilpotent_stalk(model, ctx: CheckContext) -> CheckResult:
    """Stalk homology of a matrix tuple sits in degree 0 with the root-space dimension."""
    if not isinstance(model, MatrixTuple):
        return CheckResult("nilpotent-stalk", "skip", {"reason": "matrix models only"})
    rows = []
    ok = True
    dims = model.root_space_dims()
    for point in model.taylor_spectrum():
        stalk = model.stalk_homology(point)
        h0 = stalk[0].vector_dim() if not stalk[0].is_zero() else 0
        higher = [0 if h.is_zero() else h.vector_dim() for h in stalk[1:]]
        good = h0 == dims[point] and not any(higher)
        ok &= good
        rows.append({"point": point, "h0": h0, "root_space": dims[point], "higher": higher})
    return CheckResult("nilpotent-stalk", _verdict(ok), {"points": rows})


def _grid(n: int, minimum: int = 20) -> list[tuple]:
    width = 1
    while width**n < minimum:
        width += 1
    lo = -(width // 2)
    return [tuple(as_scalar(x) for x in p) for p in product(range(lo, lo + width), repeat=n)]


def check_matrix_index(model, ctx: CheckContext) -> CheckResult:
    """The Euler characteristic of the fiber Koszul complex vanishes everywhere."""
    if not isinstance(model, MatrixTuple):
        return CheckResult("matrix-index", "skip", {"reason": "matrix models only"})
    points = list(dict.fromkeys(model.taylor_spectrum() + _grid(model.n)))
    bad = [p for p in points if model.fiber_homology(p).index != 0]
    return CheckResult("matrix-index", _verdict(not bad), {"points_checked": len(points), "nonzero_at": bad})


def _local_dimension(model, module: FPModule, point, ctx: CheckContext) -> int | None:
    if isinstance(model, MatrixTuple):
        return 0
    cands = ctx.candidates if isinstance(model, ModuleTuple) else None
    try:
        comps = components(ModuleTuple(module), cands)
    except SpicError:
        return None
    through = [p.dimension for p in comps if p.contains_point(point)]
    return max(through) if through else -1


def check_hs_polynomial(model, ctx: CheckContext) -> CheckResult:
    """dim M/q^k M is eventually polynomial with degree equal to the dimension."""
    module = cokernel_module(model)
    if module.is_zero():
        return CheckResult("hs-polynomial", "skip", {"reason": "cokernel module is zero"})
    ring = module.ring
    rows = []
    ok = True
    if ctx.images is not None and ctx.target_point is not None:
        q = [ring(f) - m for f, m in zip(ctx.images, ctx.target_point)]
        try:
            rec = hs_polynomial(module, q, max_k=ctx.sampling.max_k)
        except NotCofinite:
            return CheckResult("hs-polynomial", "skip", {"reason": "M/qM is infinite-dimensional"})
        dim = module.dimension()
        fits = all(rec.value(k) == v for k, v in rec.samples if k >= rec.stability_window[0])
        good = rec.degree == dim and rec.multiplicity > 0 and fits
        ok &= good
        rows.append({"q": [str(p) for p in q], "values": [v for _, v in rec.samples], "degree": rec.degree,
                     "dimension": dim, "e": rec.multiplicity})
    else:
        points = [ctx.point] if ctx.point is not None else [p for p, _ in _sample_points(model, ctx)]
        for point in points:
            if not module.annihilator().vanishes_at(point):
                continue
            mx = [ring.var(i) - point[i] for i in range(ring.n)]
            rec = hs_polynomial(module, mx, point=point, max_k=ctx.sampling.max_k)
            dim = _local_dimension(model, module, point, ctx)
            good = rec.multiplicity > 0 and (dim is None or rec.degree == dim)
            ok &= good
            rows.append({"point": point, "values": [v for _, v in rec.samples], "degree": rec.degree,
                         "local_dimension": dim, "e": rec.multiplicity})
    return CheckResult("hs-polynomial", _verdict(ok), {"cases": rows})


def check_graded_shadow(model, ctx: CheckContext, window: int = 10) -> CheckResult:
    """Graded partial sums agree with dim M/m^k M and share its leading term."""
    module = cokernel_module(model)
    if module.is_zero() or not is_homogeneous(module):
        return CheckResult("graded-shadow", "skip", {"reason": "cokernel module is not graded"})
    G = GradedModule(module)
    sums = [phi_kernel_dim(G, k, cross_check=False) for k in range(window + 1)]
    direct = [0] + [hs_function(module, module.ring.gens(), k) for k in range(1, window + 1)]
    rep = degree_report(G, ctx.sampling.max_k)
    monotone = all(a <= b for a, b in zip(sums, sums[1:]))
    ok = sums == direct and monotone and rep.equal and rep.degree_bound
    return CheckResult("graded-shadow", _verdict(ok), {"partial_sums": sums, "quotient_dims": direct, **rep.as_dict()})


def check_index_constancy(model, ctx: CheckContext) -> CheckResult:
    """Each component shows the same local index at two generic samples."""
    pic = ctx.picture(model)
    rows = []
    ok = True
    for c in pic.components:
        need = 2 if c.dimension > 0 else 1
        good = len(c.samples) >= need and c.constant
        ok &= good
        rows.append({"component": c.prime.label(), "indices": [s.index for s in c.samples],
                     "points": [s.point for s in c.samples]})
    return CheckResult("index-constancy", _verdict(ok), {"components": rows})


def check_weyl_local(model, ctx: CheckContext) -> CheckResult:
    """The Weyl verdict is the same at every sample of a component and matches its index."""
    pic = ctx.picture(model)
    rows = []
    ok = True
    svep = model.svep_check()
    for c in pic.components:
        verdicts = [weyl_test(model, s.point, picture=pic).is_weyl for s in c.samples]
        expect = c.index == 0 and c.dimension > 0
        good = all(v == expect for v in verdicts) and not (svep and any(verdicts))
        ok &= good
        rows.append({"component": c.prime.label(), "index": c.index, "weyl": verdicts})
    return CheckResult("weyl-local", _verdict(ok), {"svep": svep, "components": rows})


def check_weyl_criterion(model, ctx: CheckContext) -> CheckResult:
    """A point is Weyl iff chi' vanishes at generic samples of every component through it."""
    pic = ctx.picture(model)
    comps = [c.prime for c in pic.components]
    points = [ctx.point] if ctx.point is not None else [s.point for c in pic.components for s in c.samples]
    rows = []
    ok = True
    for point in points:
        if not model.in_spectrum(point):
            continue
        res = weyl_test(model, point, picture=pic)
        chis = []
        isolated = False
        for c in pic.components:
            if not c.prime.contains_point(point):
                continue
            isolated |= c.dimension == 0
            s = c.samples[0]
            chis.append(l_via_multiplicity(model, c.prime, s.point, s.frame, comps, ctx.sampling.max_k).chi)
        expect = not isolated and all(x == 0 for x in chis)
        ok &= res.is_weyl == expect
        rows.append({"point": point, "weyl": res.is_weyl, "chi_values": chis})
    return CheckResult("weyl-criterion", _verdict(ok), {"points": rows})


def _target_grid(model, ctx: CheckContext, images) -> list[tuple]:
    pic = ctx.picture(model)
    ring = model.ring
    polys = [ring(f) for f in images]
    mus = [tuple(f.evaluate(s.point) for f in polys) for c in pic.components for s in c.samples]
    k = len(polys)
    box = [tuple(as_scalar(x) for x in p) for p in product(range(-1, 3), repeat=k)] if k <= 2 else []
    return list(dict.fromkeys(mus + box))


def check_weyl_pushforward(model, ctx: CheckContext) -> CheckResult:
    """Weyl spectrum of f(T) sits inside f of the Weyl spectrum, with equality when expected."""
    if ctx.images is None:
        return CheckResult("weyl-pushforward", "skip", {"reason": "no map given"})
    grid = [ctx.target_point] if ctx.target_point is not None else _target_grid(model, ctx, ctx.images)
    rep = weyl_pushforward_check(model, ctx.images, grid, ctx.candidates, ctx.sampling)
    ok = rep.inclusion_ok and (rep.equality_ok or not rep.equality_expected)
    return CheckResult("weyl-pushforward", _verdict(ok), {
        "points_checked": rep.checked, "inclusion": rep.inclusion_ok, "equality_expected": rep.equality_expected,
        "equality": rep.equality_ok, "failures": rep.failures, "skipped": rep.skipped})


def check_functoriality(model, ctx: CheckContext) -> CheckResult:
    """Top-dimensional local cycles commute with push-forward along a finite map."""
    if ctx.images is None:
        return CheckResult("functoriality", "skip", {"reason": "no map given"})
    if isinstance(model, ExplicitHomology):
        return CheckResult("functoriality", "skip", {"reason": "module and matrix models only"})
    if ctx.target_point is not None:
        mus = [ctx.target_point]
    else:
        ring = model.ring
        polys = [ring(f) for f in ctx.images]
        pts = [s.point for c in ctx.picture(model).components for s in c.samples]
        mus = list(dict.fromkeys(tuple(f.evaluate(p) for f in polys) for p in pts))
    rows = []
    ok = True
    for mu in mus:
        rep = functoriality_check(model, ctx.images, mu, ctx.candidates, ctx.sampling)
        ok &= rep.equal
        rows.append({"target_point": mu, "preimages": rep.preimages, "lhs": rep.lhs, "rhs": rep.rhs})
    return CheckResult("functoriality", _verdict(ok), {"cases": rows})


def _products(gens: Sequence[Poly], ring) -> list[Poly]:
    out = []
    for g in gens[:4]:
        for i in range(ring.n):
            out.append(g * ring.var(i) + ring.var(i) ** 2)
    return out


def check_engine(model, ctx: CheckContext) -> CheckResult:
    """Certify the Groebner bases the model relies on."""
    ring = model.ring
    stats = {"bases": 0, "normal_forms": 0, "syzygies": 0, "eliminations": 0}
    ok = True
    modules = [m for _, m in model.chi_terms() if not m.is_zero()]
    for m in modules:
        ok &= m.gb.certify()
        stats["bases"] += 1
    support = model.support_ideal()
    ok &= support.gb.certify()
    stats["bases"] += 1
    for p in _products(list(support.gens) or ring.gens(), ring):
        nf = support.normal_form(p)
        ok &= support.normal_form(nf) == nf and support.contains(p - nf)
        stats["normal_forms"] += 1
    gens = list(support.gens)
    if gens:
        for s in syzygies(gens, ring):
            total = ring.zero()
            for a, g in zip(s.entries, gens):
                total = total + a * g
            ok &= total.is_zero()
            stats["syzygies"] += 1
    if ctx.images is not None:
        target = model.pushforward(ctx.images).ring
        polys = [ring(f) for f in ctx.images]
        for c in ctx.picture(model).components:
            q = image_prime(c.prime, polys, target)
            ok &= q.ideal.gb.certify()
            for s in c.samples:
                mu = [f.evaluate(s.point) for f in polys]
                ok &= q.ideal.vanishes_at(mu)
                stats["eliminations"] += 1
    return CheckResult("engine", _verdict(ok), stats)


SUITES: dict[str, Callable[[OperatorModel, CheckContext], CheckResult]] = {
    "index-constancy": check_index_constancy,
    "matrix-index": check_matrix_index,
    "functoriality": check_functoriality,
    "euler-multiplicity": check_euler_multiplicity,
    "nilpotent-stalk": check_nilpotent_stalk,
    "hs-polynomial": check_hs_polynomial,
    "graded-shadow": check_graded_shadow,
    "weyl-local": check_weyl_local,
    "weyl-criterion": check_weyl_criterion,
    "weyl-pushforward": check_weyl_pushforward,
    "engine": check_engine,
}


def run_checks(model: OperatorModel, names: Sequence[str], ctx: CheckContext | None = None) -> list[CheckResult]:
    ctx = ctx or CheckContext()
    if not names or list(names) == ["all"]:
        names = list(SUITES)
    unknown = [nm for nm in names if nm not in SUITES]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}; known: {', '.join(SUITES)}")
    return [SUITES[nm](model, ctx) for nm in names]


__all__ = ["CheckContext", "CheckResult", "SUITES", "run_checks"]
