from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spic.errors import ParseError
from spic.exact import QMatrix
from spic.models import ExplicitHomology, MatrixTuple, ModuleTuple
from spic.problem import ModuleSpec, Problem, Query, parse_problem, problem_from_model, write_problem
from strategies import RING2, polys

SAMPLE = """\
# two lines crossing
[ring]
vars: z1, z2

[module]
gens: 1
relations:
  z1*z2

[candidates]
z1
trusted: z2

[queries]
spectrum
chi (0, 1) {z2}
hs (z1, z2 - 1) at (0, 1)
pushforward (z1 + z2) at (1)
verify index-constancy, functoriality at (0, 1) frame {z2} map (z1 + z2) target (1)
"""


def test_parse_sample():
    p = parse_problem(SAMPLE)
    assert p.kind == "module" and p.ring.names == ("z1", "z2")
    assert isinstance(p.model(), ModuleTuple)
    assert [c.trusted for c in p.candidates] == [False, True]
    chi = p.queries[1]
    assert chi.point == (0, 1) and chi.frame == (1,)
    assert p.queries[2].at == (0, 1)
    assert p.queries[3].target == (Fraction(1),)
    v = p.queries[4]
    assert v.checks == ("index-constancy", "functoriality") and v.polys[0] == p.ring("z1 + z2")


def test_matrix_and_homology_sections():
    text = "[ring]\nvars: x\n[matrix]\nT1: [[1, 1/2], [0, 1]]\n[queries]\nfiber (1)\n"
    p = parse_problem(text)
    assert isinstance(p.model(), MatrixTuple)
    assert p.matrices[0] == QMatrix([[1, Fraction(1, 2)], [0, 1]])
    text = "[ring]\nvars: x, y\n[homology 1]\ngens: 2\nrelations:\n  [x, 0]\n  [0, x]\n[queries]\npicture\n"
    p = parse_problem(text)
    model = p.model()
    assert isinstance(model, ExplicitHomology)
    assert model.modules[0].is_zero() and model.modules[1].ngens == 2


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("[ring]\nvars: z1\n[module]\nrelations:\n  z1 +* 2\n", 5, 7),
        ("[ring]\nvars: z1\n[module]\n[queries]\nbogus (1)\n", 5, 1),
        ("[ring]\nvars: z1, z1\n[module]\n", 2, 11),
        ("[ring]\nvars: a\n[module]\n[queries]\nchi (0) {b}\n", 5, 10),
        ("[ring]\nvars: a\n[matrix]\nT1: [[1, 2]]\n", 4, 5),
        ("[ring]\nvars: a\n[module]\n[queries]\nfiber (1/0)\n", 5, 8),
        ("vars: a\n", 1, 1),
        ("[ring]\nvars: a\n[module]\n[module]\n", 4, 1),
        ("[ring]\nvars: a\n[module]\ngens: 2\nrelations:\n  a\n", 6, 3),
    ],
)
def test_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_problem(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_model_block_is_required_once():
    with pytest.raises(ParseError, match="exactly one"):
        parse_problem("[ring]\nvars: a\n")
    with pytest.raises(ParseError, match="exactly one"):
        parse_problem("[ring]\nvars: a\n[module]\n[matrix]\nT1: [[0]]\n")


def test_write_is_canonical():
    p = parse_problem(SAMPLE)
    text = write_problem(p)
    assert parse_problem(text) == p
    assert write_problem(parse_problem(text)) == text


points = st.tuples(st.fractions(-3, 3, max_denominator=3), st.fractions(-3, 3, max_denominator=3))


@given(st.lists(st.lists(polys(), min_size=2, max_size=2), max_size=3), points, st.booleans())
def test_round_trip_module_problems(rels, pt, with_frame):
    R = RING2
    spec = ModuleSpec(2, tuple(tuple(r) for r in rels))
    ideal = tuple(g for r in rels for g in r if not g.is_zero()) or (R("z1"),)
    queries = (
        Query("fiber", point=pt),
        Query("chi", point=pt, frame=(0,) if with_frame else (0, 1)),
        Query("mult", polys=ideal, at=pt),
        Query("verify", point=pt, checks=("all",)),
    )
    p = Problem(R, "module", module=spec, queries=queries)
    assert parse_problem(write_problem(p)) == p


@given(st.lists(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=2, max_size=2), min_size=2, max_size=2))
def test_round_trip_matrix_problems(rows):
    A = QMatrix(rows)
    p = problem_from_model(MatrixTuple([A, A @ A]), [Query("spectrum")])
    assert parse_problem(write_problem(p)) == p
