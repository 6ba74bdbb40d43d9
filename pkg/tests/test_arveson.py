from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import quotient_dim_by_truncation
from spic.arveson import degree_report, hilbert_function, is_homogeneous, phi_kernel_dim
from spic.errors import NotHomogeneous
from spic.fpmodule import FPModule
from spic.polyring import Ring
from strategies import RING2, monomial_polys

R = RING2
z1, z2 = R.gens()


def test_free_module_counts():
    F = FPModule.free(R)
    assert [hilbert_function(F, k) for k in range(5)] == [1, 2, 3, 4, 5]
    assert [phi_kernel_dim(F, k) for k in range(1, 6)] == [k * (k + 1) // 2 for k in range(1, 6)]
    S = Ring(["x", "y", "z"])
    assert [phi_kernel_dim(FPModule.free(S), k) for k in range(1, 5)] == [comb(k + 2, 3) for k in range(1, 5)]


def test_homogeneity():
    assert is_homogeneous(FPModule.cyclic(R, [z1 * z2, z1**2 - z2**2]))
    assert not is_homogeneous(FPModule.cyclic(R, [z1 - z2**2]))
    assert not is_homogeneous(FPModule(R, 2, [{(0, (1, 0)): 1, (1, (0, 0)): 1}]))
    with pytest.raises(NotHomogeneous):
        hilbert_function(FPModule.cyclic(R, [z1 + 1]), 1)


def test_degree_reports():
    cross = degree_report(FPModule.cyclic(R, [z1 * z2]))
    assert phi_kernel_dim(FPModule.cyclic(R, [z1 * z2]), 3) == 5
    assert cross.degree == 1 and cross.hs_leading == (2, 1) and cross.equal and cross.degree_bound
    emb = degree_report(FPModule.cyclic(R, [z1**2, z1 * z2]))
    assert emb.hs_leading == (1, 1) and emb.equal
    pt = degree_report(FPModule.cyclic(R, [z1, z2**3]))
    assert pt.degree == 0 and pt.hs_leading == (3, 0)
    assert pt.as_dict()["rank_leading"] == {"e": 3, "r": 0}


@given(st.lists(monomial_polys(max_deg=3), min_size=1, max_size=3), st.integers(1, 5))
def test_partial_sums_match_truncation_oracle(gens, k):
    M = FPModule.cyclic(R, gens)
    assert phi_kernel_dim(M, k, cross_check=False) == quotient_dim_by_truncation(gens, 2, k)


@given(st.lists(monomial_polys(max_deg=2), min_size=1, max_size=2))
def test_graded_degree_equals_hs(gens):
    rep = degree_report(FPModule.cyclic(R, gens))
    assert rep.equal and rep.degree_bound


def test_degree_report_waits_for_the_corner():
    rep = degree_report(FPModule.cyclic(R, [z1**3 * z2**3]))
    assert rep.degree == 1 and rep.rank_leading == (6, 1) and rep.equal
