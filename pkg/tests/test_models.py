from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import koszul_matrix_ranks
from spic.errors import NonCommuting, NotACoordinateSystem, ShapeMismatch, Unsupported
from spic.exact import QMatrix
from spic.fpmodule import FPModule
from spic.models import ExplicitHomology, MatrixTuple, ModuleTuple, evaluate_at_matrices
from strategies import RING2, square

R = RING2
z1, z2 = R.gens()


def commuting_pair(a, c):
    A = QMatrix(a)
    return [A, A @ A + A.scale(c)]


@given(square(1, 3, st.integers(-2, 2)), st.integers(-2, 2), st.integers(-2, 2))
def test_matrix_fiber_homology_matches_raw_ranks(a, c, x):
    ops = commuting_pair(a, c)
    T = MatrixTuple(ops)
    pt = (Fraction(x), Fraction(x * x + c * x))
    ranks = koszul_matrix_ranks([o.tolist() for o in ops], pt)
    d = len(a)
    assert T.fiber_homology(pt).dims == (d - ranks[0], 2 * d - ranks[0] - ranks[1], d - ranks[1])


@given(square(1, 3, st.integers(-2, 2)), st.integers(-2, 2), st.integers(-3, 3), st.integers(-3, 3))
def test_finite_dimensional_index_vanishes(a, c, x, y):
    assert MatrixTuple(commuting_pair(a, c)).fiber_homology((x, y)).index == 0


def test_diagonal_pair_spectrum():
    T = MatrixTuple([QMatrix.diag([1, 1, 2]), QMatrix.diag([0, 0, 3])])
    assert sorted(T.taylor_spectrum()) == [(1, 0), (2, 3)]
    assert T.root_space_dims()[(1, 0)] == 2
    assert T.in_spectrum((2, 3)) and not T.in_spectrum((1, 3))
    assert T.fiber_homology((1, 0)).dims == (2, 4, 2)
    assert T.chi_prime((1, 0), ()) == 2
    assert T.chi_prime((1, 0), (0, 1)) == 0
    assert T.chi_prime((5, 5), ()) == 0


def test_nilpotent_stalk_is_root_space():
    N = QMatrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    T = MatrixTuple([N, N @ N])
    stalk = T.stalk_homology((0, 0))
    assert [h.vector_dim() for h in stalk] == [3, 0, 0]
    assert all(h.is_zero() for h in T.stalk_homology((1, 0)))


def test_matrix_errors():
    with pytest.raises(NonCommuting):
        MatrixTuple([QMatrix([[0, 1], [0, 0]]), QMatrix([[0, 0], [1, 0]])])
    with pytest.raises(ShapeMismatch):
        MatrixTuple([QMatrix.identity(2), QMatrix.identity(3)])
    with pytest.raises(ShapeMismatch):
        MatrixTuple([QMatrix.identity(2)]).fiber_homology((0, 0))


def test_matrix_pushforward_applies_polynomial():
    A = QMatrix([[1, 1], [0, 1]])
    T = MatrixTuple([A, A])
    pushed = T.pushforward([z1 * z2 - 1])
    assert pushed.ops[0] == A @ A - QMatrix.identity(2)
    assert pushed.ring.names == ("w",)
    assert evaluate_at_matrices(R.one(), [A, A]) == QMatrix.identity(2)


def test_module_chi_prime_examples():
    double = ModuleTuple(FPModule.cyclic(R, [z1**2]))
    assert double.chi_prime((0, 0), (1,)) == 2
    assert double.chi_prime((0, 7), (1,)) == 2
    assert double.chi_prime((1, 0), (1,)) == 0
    cross = ModuleTuple(FPModule.cyclic(R, [z1 * z2]))
    assert cross.chi_prime((0, 1), (1,)) == 1
    with pytest.raises(NotACoordinateSystem):
        cross.chi_prime((0, 0), (1,))
    with pytest.raises(NotACoordinateSystem):
        double.chi_prime((0, 0), (0,))


def test_module_fiber_homology_and_svep():
    M = ModuleTuple(FPModule.cyclic(R, [z1, z2]))
    assert M.fiber_homology((0, 0)).dims == (1, 2, 1)
    assert M.fiber_homology((0, 0)).index == 0
    assert M.svep_check()
    assert M.support_dimension() == 0
    line = ModuleTuple(FPModule.cyclic(R, [z1]))
    assert line.support_dimension() == 1 and line.in_spectrum((0, 3))
    with pytest.raises(Unsupported):
        ExplicitHomology([FPModule.cyclic(R, [z1])]).fiber_homology((0, 0))


def test_explicit_homology_signs():
    line = FPModule.cyclic(R, [z1])
    H = ExplicitHomology([FPModule.zero(R), line])
    assert not H.svep_check()
    assert H.chi_prime((0, 2), (1,)) == -1
    assert ExplicitHomology([line]).chi_prime((0, 2), (1,)) == 1
    with pytest.raises(ShapeMismatch):
        ExplicitHomology([line, line, line, line])


def test_explicit_pushforward_keeps_degree():
    pt = FPModule.cyclic(R, [z1, z2 - 1])
    H = ExplicitHomology([FPModule.zero(R), pt])
    pushed = H.pushforward([z2])
    assert pushed.modules[0].is_zero()
    assert pushed.modules[1].vector_dim() == 1
    with pytest.raises(Unsupported):
        ExplicitHomology([FPModule.zero(R), FPModule.zero(R), pt]).pushforward([z1])
