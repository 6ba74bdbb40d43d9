from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spic.cycles import (
    Cycle,
    PrimeCandidate,
    Sampling,
    candidates_from_text,
    certified_kind,
    components,
    cycle_of_module,
    functoriality_check,
    generic_degree,
    image_prime,
    in_weyl_spectrum,
    local_cycle,
    cochain_sign,
    pushforward_cycle,
    spectral_picture,
    spiral,
    spiral_tuples,
    verify_candidates,
    weyl_pushforward_check,
    weyl_test,
)
from spic.errors import BadCandidate, ComponentsUnknown, IrrationalPreimage, NotFinite, PointOffSpectrum
from spic.exact import QMatrix
from spic.fpmodule import FPModule, target_ring_for
from spic.groebner import Ideal
from spic.models import ExplicitHomology, MatrixTuple, ModuleTuple
from spic.polyring import Ring
from strategies import RING2

R = RING2
z1, z2 = R.gens()
F = Fraction


def cyc(gens):
    return cycle_of_module(FPModule.cyclic(R, gens))


def P(*gens, kind=None):
    return PrimeCandidate(R, list(gens), kind)


def test_spiral_order():
    assert list(islice(spiral(), 11)) == [0, 1, -1, 2, -2, F(1, 2), F(-1, 2), 3, -3, F(3, 2), F(-3, 2)]
    assert list(islice(spiral_tuples(2), 4)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


@given(st.integers(0, 6), st.integers(1, 2))
def test_seed_offsets_the_spiral(seed, r):
    base = list(islice(spiral_tuples(r), seed + 5))
    assert list(islice(spiral_tuples(r, seed), 5)) == base[seed:]


def test_certified_kinds():
    assert certified_kind(Ideal(R, [z1, z2])) == "monomial"
    assert certified_kind(Ideal(R, [z1 - 1])) == "linear"
    assert certified_kind(Ideal(R, [])) == "linear"
    assert certified_kind(Ideal(R, [z2 - z1**2])) == "principal-irreducible"
    assert certified_kind(Ideal(R, [z1 * z2])) is None
    assert certified_kind(Ideal(R, [R.one()])) is None


def test_candidate_errors():
    with pytest.raises(BadCandidate):
        P(R.one())
    with pytest.raises(BadCandidate, match="trusted"):
        P(z1**2 + z2**2 - 1)
    with pytest.raises(BadCandidate):
        P(z2 - z1**2, kind="linear")
    with pytest.raises(BadCandidate):
        P(z1, kind="prime")
    assert P(z1, kind="linear").kind == "monomial"
    circle = candidates_from_text(R, ["trusted: z1^2 + z2^2 - 1", "z1, z2 - 1"])
    assert [c.kind for c in circle] == ["user-trusted", "linear"]
    assert circle[1].dimension == 0


def test_verify_candidates():
    support = Ideal(R, [z1 * (z2 - 1)])
    good = verify_candidates(support, [P(z2 - 1), P(z1)])
    assert [c.label() for c in good] == ["(z1)", "(z2 - 1)"]
    with pytest.raises(BadCandidate, match="contain the support"):
        verify_candidates(support, [P(z1), P(z2)])
    with pytest.raises(ComponentsUnknown, match="miss"):
        verify_candidates(support, [P(z1)])
    with pytest.raises(BadCandidate, match="minimal"):
        verify_candidates(support, [P(z1), P(z2 - 1), P(z1, z2 - 1)])
    with pytest.raises(BadCandidate):
        verify_candidates(Ideal(R, [R.one()]), [P(z1)])
    assert verify_candidates(Ideal(R, [R.one()]), []) == []


def test_automatic_components_need_help_when_not_rational():
    M = ModuleTuple(FPModule.cyclic(R, [z1**2 - 2, z2]))
    with pytest.raises(ComponentsUnknown):
        components(M)
    circle = ModuleTuple(FPModule.cyclic(R, [z1**2 + z2**2 - 1]))
    with pytest.raises(ComponentsUnknown):
        components(circle)
    cands = candidates_from_text(R, ["trusted: z1^2 + z2^2 - 1"])
    assert cycle_of_module(circle.module, cands) == Cycle([(cands[0], 1)])


def test_cycle_examples():
    assert cyc([z1**2]) == Cycle([(P(z1), 2)])
    assert cyc([z1 * z2]) == Cycle([(P(z1), 1), (P(z2), 1)])
    assert cyc([z2 - z1**2]) == Cycle([(P(z2 - z1**2), 1)])
    # embedded point does not show up
    assert cyc([z1**2, z1 * z2]) == Cycle([(P(z1), 1)])
    assert cyc([z1 * (z1 - 1), z2]) == Cycle([(P(z1, z2), 1), (P(z1 - 1, z2), 1)])
    assert cycle_of_module(FPModule.free(R)) == Cycle([(PrimeCandidate(R, []), 1)])


@given(st.integers(0, 3), st.integers(0, 3))
def test_monomial_cycle_counts_exponents(a, b):
    if a + b == 0:
        return
    expected = Cycle([(P(z1), a), (P(z2), b)])
    assert cyc([z1**a * z2**b]) == expected


def test_cycle_arithmetic():
    c = Cycle([(P(z1), 2), (P(z1, z2), 1), (P(z1), -2)])
    assert c.terms == [(P(z1, z2), 1)]
    assert not Cycle([(P(z1), 0)])
    mixed = Cycle([(P(z1), 1), (P(z1 - 1, z2), 4)])
    assert mixed.max_part() == Cycle([(P(z1), 1)])
    assert mixed.scaled(-1).coefficient(P(z1 - 1, z2)) == -4
    assert mixed.to_json()[1] == {"prime_generators": ["z1 - 1", "z2"], "coefficient": 4, "dimension": 0}
    assert str(Cycle()) == "0"


def test_local_cycle_and_sign():
    M = ModuleTuple(FPModule.cyclic(R, [z1 * z2**2]))
    assert local_cycle(M, (0, 0)) == Cycle([(P(z1), 1), (P(z2), 2)])
    assert local_cycle(M, (0, 5)) == Cycle([(P(z1), 1)])
    off = local_cycle(M, (1, 1))
    assert off.off_spectrum and not off
    assert [cochain_sign(n) for n in (1, 2, 3)] == [-1, 1, -1]


def test_matrix_picture_is_root_space_dims():
    T = MatrixTuple([QMatrix.diag([1, 1, 2]), QMatrix.diag([0, 0, 3])])
    assert spectral_picture(T).cycle() == Cycle([(P(z1 - 1, z2), 2), (P(z1 - 2, z2 - 3), 1)])
    assert in_weyl_spectrum(T, (1, 0))
    assert not in_weyl_spectrum(T, (0, 0))


def test_weyl_points():
    line = FPModule.cyclic(R, [z1])
    balanced = ExplicitHomology([line, line])
    assert weyl_test(balanced, (0, 1)).is_weyl
    assert not in_weyl_spectrum(balanced, (0, 1))
    res = weyl_test(ModuleTuple(line), (0, 1))
    assert not res.is_weyl and res.witnesses == [(P(z1), 1)]
    with pytest.raises(PointOffSpectrum):
        weyl_test(ModuleTuple(line), (1, 1))


def test_image_prime_and_degree():
    S = target_ring_for(R, 2)
    w1, w2 = S.gens()
    par = P(z2 - z1**2)
    img = image_prime(par, [z1**2, z2], S)
    assert img.ideal == Ideal(S, [w1 - w2])
    assert img.kind == "image-of-certified"
    assert generic_degree(par, [z1**2, z2], Sampling()) == 2
    with pytest.raises(NotFinite):
        image_prime(P(z1), [z1], target_ring_for(R, 1))


def test_pushforward_examples():
    par = Cycle([(P(z2 - z1**2), 1)])
    W = target_ring_for(R, 1)
    assert pushforward_cycle(par, [z2]) == Cycle([(PrimeCandidate(W, []), 2)])
    pts = Cycle([(P(z1 - 1, z2 - 2), 3), (P(z1 - 2, z2 - 1), 1)])
    assert pushforward_cycle(pts, [z1 + z2]) == Cycle([(PrimeCandidate(W, [W.var(0) - 3]), 4)])


@given(st.integers(1, 3), st.integers(1, 2), st.integers(-2, 2), st.integers(-2, 2))
def test_pushforward_composes(j, m, a, b):
    c = Cycle([(P(z1), a), (P(z2), b)])
    f = [z1 + z2**j]
    W, U = target_ring_for(R, 1), Ring(["u"])
    g = [W.var(0) ** m]
    step = pushforward_cycle(pushforward_cycle(c, f), g, target=U)
    direct = pushforward_cycle(c, [(z1 + z2**j) ** m], target=U)
    assert step == direct
    assert direct == Cycle([(PrimeCandidate(U, []), m * (j * a + b))])


def test_functoriality_examples():
    par = ModuleTuple(FPModule.cyclic(R, [z2 - z1**2]))
    W = target_ring_for(R, 1)
    for mu in [(0,), (1,), (4,)]:
        r = functoriality_check(par, [z2], mu)
        assert r.equal and r.lhs == Cycle([(PrimeCandidate(W, []), 2)])
    with pytest.raises(IrrationalPreimage):
        functoriality_check(par, [z2], (-1,))
    assert functoriality_check(par, [z2], (F(1, 4),)).equal
    T = MatrixTuple([QMatrix.diag([1, 1, 2]), QMatrix.diag([0, 0, 3])])
    r = functoriality_check(T, [z1], (1,))
    assert r.equal and r.lhs == Cycle([(PrimeCandidate(W, [W.var(0) - 1]), 2)])


def test_weyl_pushforward():
    par = ModuleTuple(FPModule.cyclic(R, [z2 - z1**2]))
    rep = weyl_pushforward_check(par, [z2], [(i,) for i in range(-3, 4)])
    assert rep.inclusion_ok and rep.equality_ok and rep.equality_expected
    assert (F(2),) in rep.skipped
    cross = ModuleTuple(FPModule.cyclic(R, [z1 * (z2 - 1), z2 * (z1 - 2)]))
    rep = weyl_pushforward_check(cross, [z1 + z2], [(i,) for i in range(-1, 5)])
    assert rep.checked == 2 and rep.inclusion_ok and not rep.failures
