"""Acceptance criteria, one PASS/FAIL line each.

Every comparison is exact (tolerance 0).  Run with ``pytest -s
tests/test_acceptance.py`` or look for the ``[criterion N]`` lines in the
verbose log.
"""

from fractions import Fraction
from itertools import product
from math import factorial
from pathlib import Path

import pytest

from spic import groebner
from spic import cycles as cycles_mod
from spic.arveson import degree_report, phi_kernel_dim
from spic.cli import emit_json, run_problem
from spic.cycles import (
    Cycle,
    PrimeCandidate,
    Sampling,
    component_points,
    functoriality_check,
    local_e,
    spectral_picture,
    weyl_pushforward_check,
    weyl_test,
)
from spic.errors import SpicError
from spic.exact import QMatrix
from spic.fpmodule import FPModule, hs_function, hs_polynomial, multiplicity_serre, target_ring_for
from spic.groebner import GroebnerBasis, _reduce, syzygies, vec_add, vec_neg
from spic.models import ExplicitHomology, MatrixTuple, ModuleTuple
from spic.polyring import Poly, Ring
from spic.problem import read_problem

R = Ring(["z1", "z2"])
z1, z2 = R.gens()
S3 = Ring(["x", "y", "z"])
GOLDEN = Path(__file__).parent / "golden"
CORPUS = sorted(p for p in GOLDEN.glob("*.spic") if p.stem != "bad_syntax")
W = target_ring_for(R, 1)
w = W.var(0)


@pytest.fixture
def report(capsys):
    def emit(n, ok, text):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {text}")
        assert ok, text

    return emit


@pytest.fixture(autouse=True)
def default_seed(monkeypatch):
    monkeypatch.delenv("SPIC_SEED", raising=False)


def cyclic(*gens):
    return FPModule.cyclic(R, list(gens))


def line_plus_plane():
    # R + R/(z1): second generator killed by z1
    return FPModule(R, 2, [{(1, (1, 0)): 1}])


def test_criterion_1_chi_equals_multiplicity(report):
    # (module, point, frame indices, hand-derived chi')
    cases = [
        ("R/(z1)", cyclic(z1), (0, 3), (1,), 1),
        ("R/(z1^2)", cyclic(z1**2), (0, 0), (1,), 2),
        ("R/(z1^2)", cyclic(z1**2), (0, 1), (1,), 2),
        ("R/(z1z2)", cyclic(z1 * z2), (0, 1), (1,), 1),
        ("R/(z1z2)", cyclic(z1 * z2), (0, 0), (0, 1), 0),
        ("R/(z1-z2^2)", cyclic(z1 - z2**2), (1, 1), (0,), 1),
        ("R/(z1-z2^2)", cyclic(z1 - z2**2), (0, 0), (0,), 2),
        ("R/(z1^2,z1z2)", cyclic(z1**2, z1 * z2), (0, 1), (1,), 1),
        ("R/(z1^2,z1z2)", cyclic(z1**2, z1 * z2), (0, 0), (1,), 1),
        ("R+R/(z1)", line_plus_plane(), (0, 5), (0, 1), 1),
        ("R+R/(z1)", line_plus_plane(), (2, 0), (0, 1), 1),
    ]
    bad = []
    for name, M, pt, frame, expected in cases:
        model = ModuleTuple(M)
        chi = model.chi_prime(pt, frame)
        elems = [R.var(i) - pt[i] for i in frame]
        e = local_e(M, elems, pt)
        if not chi == e == expected:
            bad.append((name, pt, chi, e, expected))
    models = len({c[0] for c in cases})
    report(1, not bad and models >= 6,
           f"chi' = e_q at {len(cases)} points on {models} module models, exact; mismatches {bad}")


def test_criterion_2_serre_matches_hs(report):
    x, y, z = S3.gens()
    pairs = [
        (cyclic(z1 * z2), [z1 - z2], 2),
        (cyclic(z1**2), [z2], 2),
        (FPModule.free(R), [z1, z2], 1),
        (cyclic(z2 - z1**2), [z2], 2),
        (cyclic(z2 - z1**2), [z1], 1),
        (cyclic(z2**2 - z1**3), [z1], 2),
        (cyclic(z2**2 - z1**3), [z2], 3),
        (line_plus_plane(), [z1, z2], 1),
        (cyclic(z1 * (z1 - 1), z2), [], 2),
        (FPModule.cyclic(S3, [x * y]), [x - y, z], 2),
        (FPModule.free(R, 2), [z1**2, z2], 4),
    ]
    bad = []
    for M, q, expected in pairs:
        serre = multiplicity_serre(M, q)
        hs = hs_polynomial(M, q).multiplicity_at(len(q))
        if not serre == hs == expected:
            bad.append((q, serre, hs, expected))
    report(2, not bad and len(pairs) >= 8, f"{len(pairs)} pairs, Serre = HS exactly; mismatches {bad}")


def nilpotent_tuples():
    J3 = QMatrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    J2 = QMatrix([[0, 1], [0, 0]])
    J4 = QMatrix([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
    return [
        [J3, J3 @ J3],
        [J2, QMatrix.zero(2)],
        [J3, J3 @ J3, J3.scale(2) - J3 @ J3],
        [J4, J4 @ J4],
        [QMatrix.zero(2), QMatrix.zero(2)],
    ]


def test_criterion_3_nilpotent_stalks(report):
    rows = []
    ok = True
    for ops in nilpotent_tuples():
        T = MatrixTuple(ops)
        origin = (0,) * T.n
        stalk = T.stalk_homology(origin)
        h0 = 0 if stalk[0].is_zero() else stalk[0].vector_dim()
        higher = [0 if h.is_zero() else h.vector_dim() for h in stalk[1:]]
        ok &= h0 == T.dim and not any(higher)
        rows.append((T.dim, h0, higher))
    report(3, ok and len(rows) >= 3, f"{len(rows)} nilpotent tuples, (dim, H_0, higher) = {rows}")


def test_criterion_4_matrix_index_vanishes(report):
    A = QMatrix([[1, 1, 0], [0, 1, 0], [0, 0, -2]])
    models = [
        MatrixTuple([A]),
        MatrixTuple([A, A @ A - A]),
        MatrixTuple([QMatrix.diag([1, 1, 2]), QMatrix.diag([0, 0, 3])]),
        MatrixTuple([A, A.scale(2), A @ A]),
    ]
    rows = []
    ok = True
    for T in models:
        width = {1: 21, 2: 5, 3: 3}[T.n]
        grid = [tuple(c - width // 2 for c in p) for p in product(range(width), repeat=T.n)]
        grid = list(dict.fromkeys(grid + T.taylor_spectrum()))
        nonzero = [p for p in grid if T.fiber_homology(p).index != 0]
        ok &= not nonzero and len(grid) >= 20
        rows.append((T.n, len(grid), len(nonzero)))
    report(4, ok and {r[0] for r in rows} == {1, 2, 3}, f"(n, points, nonzero) = {rows}")


def test_criterion_5_functoriality(report):
    diag = MatrixTuple([QMatrix.diag([1, 1, 2]), QMatrix.diag([0, 0, 3])])
    cases = [
        ("R/(z1), z2^2, 0", ModuleTuple(cyclic(z1)), [z2**2], (0,), Cycle([(PrimeCandidate(W, []), 2)])),
        ("two points, z2^2, 1", ModuleTuple(cyclic(z1, z2**2 - 1)), [z2**2], (1,),
         Cycle([(PrimeCandidate(W, [w - 1]), 2)])),
        ("point (1,2), z1, 1", ModuleTuple(cyclic(z1 - 1, z2 - 2)), [z1], (1,),
         Cycle([(PrimeCandidate(W, [w - 1]), 1)])),
        ("R/(z1), z2^2, 1", ModuleTuple(cyclic(z1)), [z2**2], (1,), Cycle([(PrimeCandidate(W, []), 2)])),
        ("diagonal, z1, 1", diag, [z1], (1,), Cycle([(PrimeCandidate(W, [w - 1]), 2)])),
        ("R/(z2-z1^2), z2, 4", ModuleTuple(cyclic(z2 - z1**2)), [z2], (4,), Cycle([(PrimeCandidate(W, []), 2)])),
    ]
    rows = []
    ok = True
    for name, model, f, mu, expected in cases:
        rep = functoriality_check(model, f, mu)
        good = rep.lhs == rep.rhs == expected
        ok &= good
        rows.append(f"{name}: {rep.lhs} | {rep.rhs}")
    report(5, ok, f"{len(cases)} triples, lhs | rhs: " + "; ".join(rows))


def test_criterion_6_hs_polynomial(report):
    rows = []
    ok = True
    local_cases = [
        (cyclic(z1 * z2), (0, 0), 1, 2),
        (cyclic(z1**2), (0, 3), 1, 2),
        (FPModule.free(R), (1, 1), 2, 1),
        (cyclic(z1, z2**3), (0, 0), 0, 3),
        (cyclic(z2**2 - z1**3), (0, 0), 1, 2),
    ]
    for M, pt, dim, e in local_cases:
        rec = hs_polynomial(M, [z1 - pt[0], z2 - pt[1]], point=pt)
        lead = rec.coefficients[rec.degree]
        good = rec.degree == dim and rec.multiplicity == e and lead * factorial(dim) == e
        ok &= good
        rows.append((pt, rec.degree, rec.multiplicity))
    par = hs_polynomial(cyclic(z2 - z1**2), [z2 - 1])
    values = [v for _, v in par.samples]
    par_ok = values == [2 * k for k in range(1, len(values) + 1)] and par.degree == 1 and par.multiplicity == 2
    report(6, ok and par_ok, f"maximal-ideal cases (point, degree, e) = {rows}; parabola q=(z2-1) values {values}")


def test_criterion_7_graded_shadow(report):
    x, y, z = S3.gens()
    modules = [
        ("R", FPModule.free(R)),
        ("R/(z1z2)", cyclic(z1 * z2)),
        ("R/(z1^2,z1z2)", cyclic(z1**2, z1 * z2)),
        ("R/(z1^2-z2^2,z1z2)", cyclic(z1**2 - z2**2, z1 * z2)),
        ("S/(xy,yz,zx)", FPModule.cyclic(S3, [x * y, y * z, z * x])),
        ("R+R/(z1)", line_plus_plane()),
    ]
    bad = []
    for name, M in modules:
        sums = [phi_kernel_dim(M, k, cross_check=False) for k in range(1, 11)]
        direct = [hs_function(M, M.ring.gens(), k) for k in range(1, 11)]
        rep = degree_report(M)
        if sums != direct or not rep.equal:
            bad.append(name)
    report(7, not bad and len(modules) >= 4, f"{len(modules)} homogeneous modules, k <= 10; failing {bad}")


def test_criterion_8_weyl_suite(report):
    line = cyclic(z1)
    cancel = ExplicitHomology([line, line])
    pic = spectral_picture(cancel)
    samples = [s.point for s in pic.components[0].samples]
    cancel_ok = len(samples) == 2 and all(weyl_test(cancel, p, picture=pic).is_weyl for p in samples)

    module_ok = True
    module_points = 0
    for M in [cyclic(z1), cyclic(z1 * z2), cyclic(z2 - z1**2), cyclic(z1**2, z1 * z2), cyclic(z1, z2 - 1)]:
        model = ModuleTuple(M)
        mpic = spectral_picture(model)
        for c in mpic.components:
            for s in c.samples:
                module_ok &= not weyl_test(model, s.point, picture=mpic).is_weyl
                module_points += 1

    matrix_ok = True
    for ops in nilpotent_tuples()[:2] + [[QMatrix.diag([1, 2]), QMatrix.diag([0, 0])]]:
        T = MatrixTuple(ops)
        matrix_ok &= all(not weyl_test(T, p).is_weyl for p in T.taylor_spectrum())

    push_rows = []
    push_ok = True
    grid1 = [(i,) for i in range(-2, 6)]
    for model, f, grid, injective in [
        (ModuleTuple(cyclic(z2 - z1**2)), [z2], grid1, False),
        (MatrixTuple([QMatrix.diag([1, 1, 2]), QMatrix.diag([0, 0, 3])]), [z1], grid1, True),
        (ModuleTuple(cyclic(z1 * z2)), [z1, z1 + z2], list(product(range(-1, 3), repeat=2)), True),
        (cancel, [z2], grid1, False),
    ]:
        rep = weyl_pushforward_check(model, f, grid)
        good = rep.inclusion_ok and (rep.equality_ok if injective else True)
        push_ok &= good
        push_rows.append((rep.checked, rep.inclusion_ok, rep.equality_ok))
    ok = cancel_ok and module_ok and matrix_ok and push_ok
    report(8, ok, f"cancel Weyl at {len(samples)} samples: {cancel_ok}; module points not Weyl "
                  f"({module_points}): {module_ok}; isolated matrix points not Weyl: {matrix_ok}; "
                  f"push-forward (checked, inclusion, equality) = {push_rows}")


def _run_corpus():
    out = []
    for path in CORPUS:
        data, code = run_problem(read_problem(path), Sampling())
        out.append(emit_json(data))
    return out


def test_criterion_9_engine_certification(report, monkeypatch):
    recorded = []
    images = []
    real = groebner._buchberger
    real_image = cycles_mod.image_prime

    def recording(vecs, order, ideal):
        G = real(vecs, order, ideal)
        recorded.append((list(vecs), order, G))
        return G

    def recording_image(p, f, target):
        q = real_image(p, f, target)
        images.append((p, f, q))
        return q

    monkeypatch.setattr(groebner, "_buchberger", recording)
    monkeypatch.setattr(cycles_mod, "image_prime", recording_image)
    _run_corpus()
    for model, f, mu in [(ModuleTuple(cyclic(z1)), [z2**2], (1,)), (ModuleTuple(cyclic(z1 * z2)), [z1 + z2], (0,))]:
        functoriality_check(model, f, mu)
    monkeypatch.undo()

    spairs = nf_ok = members = syz = elim = 0
    failures = []
    for vecs, order, G in recorded:
        gb = GroebnerBasis(None, order, 0, G)
        if not gb.certify():
            failures.append("s-pair")
        spairs += 1
        for v in vecs:
            r = _reduce(v, gb._index, order)
            if r or _reduce(r, gb._index, order) != r:
                failures.append("membership")
            members += 1
        for v in vecs[:4]:
            # push v off the module by a monomial, then check nf(nf(w)) = nf(w) and w - nf(w) reduces to 0
            comp, mono = next(iter(v))
            w = vec_add(v, {(comp, tuple(a + 1 for a in mono)): Fraction(1, 3)})
            nf = _reduce(w, gb._index, order)
            if _reduce(nf, gb._index, order) != nf or _reduce(vec_add(w, vec_neg(nf)), gb._index, order):
                failures.append("normal form")
            nf_ok += 1
        polys = [p for p in (_as_poly(g) for g in G) if p is not None]
        if polys and len(polys) <= 6:
            for s in syzygies(polys):
                total = sum((a * g for a, g in zip(s.entries, polys)), polys[0].ring.zero())
                if not total.is_zero():
                    failures.append("syzygy")
                syz += 1
    for p, f, q in images:
        for k, (pt, _) in enumerate(component_points(p, [], Sampling())):
            if k >= 3:
                break
            if not q.ideal.vanishes_at([g.evaluate(pt) for g in f]):
                failures.append("elimination")
            elim += 1
    ok = not failures and spairs > 0 and elim > 0 and syz > 0
    report(9, ok, f"{spairs} bases certified over the corpus; {members} generator memberships, {nf_ok} "
                  f"normal-form idempotence checks, {syz} syzygy identities, {elim} elimination "
                  f"evaluations; failures {sorted(set(failures))}")


def _as_poly(vec):
    """Entries of a rank-one basis element as a polynomial over the recorded ring."""
    if any(c != 0 for c, _ in vec):
        return None
    n = len(next(iter(vec))[1])
    ring = Ring([f"v{i}" for i in range(n)])
    return Poly(ring, {e: c for (_, e), c in vec.items()})


def test_criterion_10_constancy(report):
    rows = []
    ok = True
    for path in CORPUS:
        problem = read_problem(path)
        model = problem.model()
        cands = None
        if problem.candidates:
            cands = [PrimeCandidate(problem.ring, list(c.generators), "user-trusted" if c.trusted else None)
                     for c in problem.candidates]
        try:
            pic = spectral_picture(model, cands, Sampling())
        except SpicError as exc:
            ok = False
            rows.append((path.stem, type(exc).__name__))
            continue
        for c in pic.components:
            need = 2 if c.dimension > 0 else 1
            good = len(c.samples) >= need and c.constant
            ok &= good
            rows.append((path.stem, c.prime.label(), [s.index for s in c.samples]))
    report(10, ok, f"{len(rows)} components: {rows}")


def test_criterion_11_determinism(report):
    first = _run_corpus()
    second = _run_corpus()
    frozen = [p.with_suffix(".json").read_bytes() for p in CORPUS]
    ok = first == second == frozen
    report(11, ok, f"{len(CORPUS)} golden reports byte-identical across two runs and the frozen copies")
