"""Graded modules: Hilbert functions, dim M/m^k M as partial sums, and degree data."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .errors import NoStabilization, NotHomogeneous
from .fpmodule import DEFAULT_MAX_K, FPModule, fit_eventual_polynomial, hs_function, hs_polynomial, polynomial_from
from .groebner import std_monomials, vec_to_polys

__all__ = ["GradedModule", "is_homogeneous", "hilbert_function", "phi_kernel_dim", "degree_report", "DegreeReport"]


def is_homogeneous(M: FPModule) -> bool:
    """Every relation has homogeneous entries of one common degree (generators in degree 0)."""
    for rel in M.relations:
        degrees = set()
        for p in vec_to_polys(rel, M.ring, M.ngens):
            if p.is_zero():
                continue
            if not p.is_homogeneous():
                return False
            degrees.add(p.total_degree())
        if len(degrees) > 1:
            return False
    return True


class GradedModule:
    """An FPModule whose relations were checked to be homogeneous."""

    def __init__(self, module: FPModule):
        if not is_homogeneous(module):
            raise NotHomogeneous("module relations are not homogeneous")
        self.module = module
        self._counts: dict[int, int] = {}

    @property
    def ring(self):
        return self.module.ring

    def hilbert(self, k: int) -> int:
        if k < 0:
            return 0
        if k not in self._counts:
            monos = std_monomials(self.module.gb, k)
            self._counts[k] = sum(1 for _, e in monos if sum(e) == k)
        return self._counts[k]


def _graded(M) -> GradedModule:
    return M if isinstance(M, GradedModule) else GradedModule(M)


def hilbert_function(M, k: int) -> int:
    """Dimension of the degree-k piece, by counting standard monomials."""
    return _graded(M).hilbert(k)


def phi_kernel_dim(M, k: int, cross_check: bool = True) -> int:
    """dim M/m^k M at the origin as the sum of h(j) for j < k.

    With cross_check the value is recomputed from the quotient by the k-th
    power of the maximal ideal and the two must agree.
    """
    G = _graded(M)
    total = sum(G.hilbert(j) for j in range(k))
    if cross_check and k > 0 and not G.module.is_zero():
        other = hs_function(G.module, G.ring.gens(), k)
        if other != total:
            raise ArithmeticError(f"graded count {total} disagrees with quotient dimension {other} at k={k}")
    return total


@dataclass
class DegreeReport:
    degree: int
    hs_leading: tuple  # (e, r) of the Hilbert-Samuel polynomial at the origin
    rank_leading: tuple  # (e', r') of the partial-sum polynomial
    equal: bool
    degree_bound: bool  # degree >= local dimension at the origin

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "hs_leading": {"e": self.hs_leading[0], "r": self.hs_leading[1]},
            "rank_leading": {"e": self.rank_leading[0], "r": self.rank_leading[1]},
            "equal": self.equal,
            "degree_bound": self.degree_bound,
        }


def degree_report(M, max_k: int = DEFAULT_MAX_K) -> DegreeReport:
    """Compare the partial-sum polynomial with the Hilbert-Samuel polynomial at 0."""
    G = _graded(M)
    n = G.ring.n
    origin = [0] * n
    top = min(n, max(G.module.dimension(), 0))
    earliest = polynomial_from(G.module, G.ring.gens(), origin)
    values = []
    fit = None
    for k in range(1, max_k + 1):
        values.append(phi_kernel_dim(G, k, cross_check=False))
        fit = fit_eventual_polynomial(values, 1, top, confirm=3)
        if fit is not None and fit[2] >= earliest:
            break
        fit = None
    if fit is None:
        raise NoStabilization(f"partial sums not polynomial within k <= {max_k}")
    deg, coeffs, _ = fit
    lead = coeffs[deg] * factorial(deg)
    rank_leading = (int(lead), deg)
    rec = hs_polynomial(G.module, G.ring.gens(), point=origin, max_k=max_k)
    hs_leading = (rec.multiplicity, rec.degree)
    return DegreeReport(deg, hs_leading, rank_leading, hs_leading == rank_leading, deg >= rec.degree)
