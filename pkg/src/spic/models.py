"""Desk-scale stand-ins for a commuting operator tuple.

Three kinds are supported:

* :class:`MatrixTuple` -- commuting rational matrices on Q^d;
* :class:`ModuleTuple` -- multiplication by the coordinates on an FPModule;
* :class:`ExplicitHomology` -- a declared tuple (H_0, ..., H_n) of homology
  modules.  No multiplication model has nonzero higher homology, so this is
  the only way to represent tuples without the single-valued extension
  property.

Homology is indexed homologically throughout: H_0 is the cokernel
X / sum (T_i - l_i) X and H_n the joint kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import NotACoordinateSystem, ShapeMismatch, Unsupported, ZeroModule
from .exact import ZERO, QMatrix, _check_ops, as_scalar, joint_root_space, rank, rational_joint_spectrum
from .fpmodule import FPModule, koszul_homology, local_length, point_status, restrict_scalars, target_ring_for
from .groebner import Ideal, intersect_all, vec_from_polys, vec_to_polys
from .polyring import Poly, Ring


def default_ring(n: int) -> Ring:
    return Ring([f"z{i + 1}" for i in range(n)])


@dataclass(frozen=True)
class FiberHomology:
    point: tuple
    dims: tuple

    @property
    def index(self) -> int:
        return sum((-1) ** i * h for i, h in enumerate(self.dims))


def _frame_elems(ring: Ring, point: Sequence, frame: Sequence[int]) -> list[Poly]:
    return [ring.var(i) - as_scalar(point[i]) for i in frame]


def _check_point(ring: Ring, point: Sequence) -> tuple:
    if len(point) != ring.n:
        raise ShapeMismatch(f"point has {len(point)} coordinates, ring has {ring.n}")
    return tuple(as_scalar(x) for x in point)


def _check_frame(ring: Ring, frame: Sequence[int]) -> tuple:
    frame = tuple(frame)
    if any(not 0 <= i < ring.n for i in frame) or list(frame) != sorted(set(frame)):
        raise ShapeMismatch("frame must be a strictly increasing list of coordinate indices")
    return frame


class OperatorModel:
    kind = "abstract"
    ring: Ring

    @property
    def n(self) -> int:
        return self.ring.n

    # subclasses supply these
    def chi_terms(self) -> list[tuple[int, FPModule]]:
        """Signed modules whose coordinate Koszul data add up to chi'."""
        raise NotImplementedError

    def stalk_homology(self, point: Sequence) -> list[FPModule]:
        raise NotImplementedError

    def svep_check(self) -> bool:
        raise NotImplementedError

    def support_ideal(self) -> Ideal:
        """Ideal cutting out the (Fredholm) spectrum."""
        parts = [m.annihilator() for _, m in self.chi_terms() if not m.is_zero()]
        if not parts:
            return Ideal(self.ring, [self.ring.one()])
        return intersect_all(parts)

    def support_dimension(self) -> int:
        return self.support_ideal().dimension()

    def in_spectrum(self, point: Sequence) -> bool:
        point = _check_point(self.ring, point)
        return self.support_ideal().vanishes_at(point)

    def fiber_homology(self, point: Sequence) -> FiberHomology:
        raise Unsupported(f"fiber homology is not defined for {self.kind} models")

    def chi_prime(self, point: Sequence, frame: Sequence[int]) -> int:
        """Alternating sum of the local lengths at `point` of the Koszul homology
        of (z_i - point_i, i in frame) on the homology data."""
        point = _check_point(self.ring, point)
        frame = _check_frame(self.ring, frame)
        elems = _frame_elems(self.ring, point, frame)
        fiber = self.support_ideal() + elems
        status = point_status(fiber, point)
        if status == "absent":
            return 0
        if status == "embedded":
            raise NotACoordinateSystem(
                f"coordinates {[self.ring.names[i] for i in frame]} do not isolate {_fmt(point)} in the spectrum"
            )
        total = 0
        for sign, module in self.chi_terms():
            if module.is_zero():
                continue
            for j, h in enumerate(koszul_homology(module, elems)):
                total += sign * (-1) ** j * local_length(h, point)
        return total

    def pushforward(self, images: Sequence) -> "OperatorModel":
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


def _fmt(point) -> str:
    return "(" + ", ".join(str(x) for x in point) + ")"


# ---------------------------------------------------------------------------


class MatrixTuple(OperatorModel):
    kind = "matrix"

    def __init__(self, ops: Sequence, ring: Ring | None = None):
        ops = [op if isinstance(op, QMatrix) else QMatrix(op) for op in ops]
        self.dim = _check_ops(ops)
        self.ops = tuple(ops)
        self.ring = ring or default_ring(len(ops))
        if self.ring.n != len(ops):
            raise ShapeMismatch("one operator per ring variable required")
        self._module = None
        self._spectrum = None

    def as_module(self) -> FPModule:
        if self._module is None:
            self._module = FPModule.from_matrices(self.ring, self.ops)
        return self._module

    def chi_terms(self):
        return [(1, self.as_module())]

    def support_ideal(self) -> Ideal:
        return self.as_module().annihilator()

    def in_spectrum(self, point) -> bool:
        point = _check_point(self.ring, point)
        return any(p == point for p in self.taylor_spectrum())

    def koszul_matrix(self, point: Sequence, j: int) -> QMatrix:
        """Differential K_j -> K_{j-1} of the Koszul complex of T - point on Q^d."""
        n, d = self.n, self.dim
        src = _subsets(n, j)
        dst = {J: i for i, J in enumerate(_subsets(n, j - 1))}
        shifted = [t.shifted(c) for t, c in zip(self.ops, point)]
        rows = [[ZERO] * (len(src) * d) for _ in range(len(dst) * d)]
        for b, J in enumerate(src):
            for t, i in enumerate(J):
                a = dst[J[:t] + J[t + 1:]]
                sign = 1 if t % 2 == 0 else -1
                m = shifted[i]
                for r in range(d):
                    for c in range(d):
                        if m[r, c]:
                            rows[a * d + r][b * d + c] = sign * m[r, c]
        return QMatrix(rows, len(src) * d)

    def fiber_homology(self, point: Sequence) -> FiberHomology:
        point = _check_point(self.ring, point)
        n, d = self.n, self.dim
        ranks = [0] * (n + 2)
        for j in range(1, n + 1):
            ranks[j] = rank(self.koszul_matrix(point, j))
        dims = tuple(comb(n, j) * d - ranks[j] - ranks[j + 1] for j in range(n + 1))
        return FiberHomology(point, dims)

    def taylor_spectrum(self) -> list[tuple]:
        if self._spectrum is None:
            self._spectrum = rational_joint_spectrum(self.ops)
        return [p for p, _ in self._spectrum]

    def root_space_dims(self) -> dict:
        self.taylor_spectrum()
        return {p: s.dim for p, s in self._spectrum}

    def stalk_homology(self, point: Sequence) -> list[FPModule]:
        """Koszul homology of (z_i - l_i) on Q^d ⊗ Q[l] with z acting by T, cut to
        the root space at `point` and presented over the parameter ring."""
        point = _check_point(self.ring, point)
        n, d = self.n, self.dim
        params = tuple(f"l_{nm}" for nm in self.ring.names)
        double = Ring(tuple(self.ring.names) + params)
        rels = []
        for i, t in enumerate(self.ops):
            zi = double.var(i)
            for k in range(d):
                entries = [double.zero() for _ in range(d)]
                entries[k] = zi
                for m in range(d):
                    if t[m, k]:
                        entries[m] = entries[m] - t[m, k]
                rels.append(vec_from_polys(entries))
        big = FPModule(double, d, rels)
        elems = [double.var(i) - double.var(n + i) for i in range(n)]
        out = []
        for h in koszul_homology(big, elems):
            if h.is_zero():
                out.append(FPModule.zero(self.ring))
                continue
            real = h.realization()
            lam_actions = real.actions[n:]
            space = joint_root_space(lam_actions, point, check=False)
            mats = [space.restrict(a) for a in lam_actions]
            out.append(FPModule.from_matrices(self.ring, mats) if space.dim else FPModule.zero(self.ring))
        return out

    def svep_check(self) -> bool:
        return True

    def pushforward(self, images: Sequence) -> "MatrixTuple":
        images = [self.ring(f) for f in images]
        target = target_ring_for(self.ring, len(images))
        return MatrixTuple([evaluate_at_matrices(f, self.ops) for f in images], target)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "ring": list(self.ring.names),
            "dim": self.dim,
            "operators": [[[str(x) for x in row] for row in op.entries] for op in self.ops],
        }


def evaluate_at_matrices(p: Poly, ops: Sequence[QMatrix]) -> QMatrix:
    d = ops[0].rows
    total = QMatrix.zero(d)
    for e, c in p.terms.items():
        term = QMatrix.identity(d)
        for op, k in zip(ops, e):
            if k:
                term = term @ (op**k)
        total = total + term.scale(c)
    return total


def _subsets(n: int, j: int):
    if j < 0 or j > n:
        return []
    return list(combinations(range(n), j))


# ---------------------------------------------------------------------------


class ModuleTuple(OperatorModel):
    kind = "module"

    def __init__(self, module: FPModule):
        self.module = module
        self.ring = module.ring
        self._svep = None

    def chi_terms(self):
        return [(1, self.module)]

    def fiber_homology(self, point: Sequence) -> FiberHomology:
        point = _check_point(self.ring, point)
        elems = _frame_elems(self.ring, point, range(self.n))
        return FiberHomology(point, tuple(h.vector_dim() for h in koszul_homology(self.module, elems)))

    def stalk_homology(self, point: Sequence) -> list[FPModule]:
        _check_point(self.ring, point)
        if not self.svep_check():
            raise AssertionError("multiplication model failed its exactness check")
        return [self.module] + [FPModule.zero(self.ring) for _ in range(self.n)]

    def svep_check(self) -> bool:
        """Koszul homology of (z_i - l_i) on M ⊗ Q[l] vanishes in positive degrees."""
        if self._svep is None:
            n = self.n
            params = tuple(f"l_{nm}" for nm in self.ring.names)
            double = Ring(tuple(self.ring.names) + params)
            big = self.module.to_ring(double, list(range(n)))
            elems = [double.var(i) - double.var(n + i) for i in range(n)]
            hs = koszul_homology(big, elems)
            self._svep = all(h.is_zero() for h in hs[1:])
        return self._svep

    def pushforward(self, images: Sequence) -> "ModuleTuple":
        return ModuleTuple(restrict_scalars(self.module, images))

    def describe(self) -> dict:
        return {"kind": self.kind, "ring": list(self.ring.names), "module": module_text(self.module)}


# ---------------------------------------------------------------------------


class ExplicitHomology(OperatorModel):
    kind = "explicit"

    def __init__(self, modules: Sequence[FPModule], ring: Ring | None = None):
        modules = list(modules)
        if ring is None:
            if not modules:
                raise ShapeMismatch("ring required for an empty homology tuple")
            ring = modules[0].ring
        for m in modules:
            if m.ring != ring:
                raise ShapeMismatch("homology modules must share one ring")
        if len(modules) > ring.n + 1:
            raise ShapeMismatch(f"at most {ring.n + 1} homology modules for {ring.n} variables")
        modules += [FPModule.zero(ring) for _ in range(ring.n + 1 - len(modules))]
        self.ring = ring
        self.modules = tuple(modules)

    def chi_terms(self):
        return [((-1) ** j, m) for j, m in enumerate(self.modules)]

    def stalk_homology(self, point: Sequence) -> list[FPModule]:
        _check_point(self.ring, point)
        return list(self.modules)

    def svep_check(self) -> bool:
        return all(m.is_zero() for m in self.modules[1:])

    def pushforward(self, images: Sequence) -> "ExplicitHomology":
        """Each H_j is pushed separately, keeping its homological degree."""
        k = len(images)
        target = target_ring_for(self.ring, k)
        for j, m in enumerate(self.modules):
            if j > k and not m.is_zero():
                raise Unsupported(f"H_{j} is nonzero but the target has only {k} coordinates")
        pushed = [restrict_scalars(m, images, target) for m in self.modules[: k + 1]]
        return ExplicitHomology(pushed, target)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "ring": list(self.ring.names),
            "homology": [module_text(m) for m in self.modules],
        }


# ---------------------------------------------------------------------------


def module_text(m: FPModule) -> dict:
    return {
        "generators": m.ngens,
        "relations": [[str(p) for p in vec_to_polys(v, m.ring, m.ngens)] for v in m.relations],
    }


def require_nonzero(m: FPModule) -> None:
    if m.is_zero():
        raise ZeroModule("operation undefined on the zero module")
