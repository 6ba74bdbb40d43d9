from fractions import Fraction

from hypothesis import strategies as st

from spic.polyring import Ring

small_ints = st.integers(min_value=-3, max_value=3)
small_fracs = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


def matrices(rows, cols, elems=small_ints):
    return st.lists(st.lists(elems, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def square(n_min=1, n_max=4, elems=small_ints):
    return st.integers(n_min, n_max).flatmap(lambda n: matrices(n, n, elems))


RING2 = Ring(["z1", "z2"])


@st.composite
def polys(draw, ring=RING2, max_terms=4, max_deg=3):
    n = ring.n
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        if sum(e) > max_deg:
            continue
        terms[e] = Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 2)))
    return ring.const(0) + type(ring.one())(ring, terms)


@st.composite
def monomial_polys(draw, ring=RING2, max_deg=3):
    e = tuple(draw(st.integers(0, max_deg)) for _ in range(ring.n))
    if not any(e):
        e = (1,) + e[1:]
    return ring.monomial(e)
