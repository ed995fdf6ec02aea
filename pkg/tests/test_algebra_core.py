import random

import pytest
from hypothesis import given, settings, strategies as st

from localduality import (
    BiDegree,
    Ring,
    cyclic,
    free,
    hilbert_table,
    parse_polynomial,
    reverse,
    shift,
    t_slice,
)
from localduality.linalg import QQ
from localduality.modules import make_presentation, piece
from localduality.polyio import PolynomialSyntaxError
from localduality.rings import NotBihomogeneousError, format_polynomial, poly_arith
from localduality.sampling import random_presentation


def P(ring, text):
    return parse_polynomial(ring, text)


def test_difference_of_squares():
    R = Ring(0, 2)
    prod = poly_arith(P(R, "t1 + t2"), P(R, "t1 - t2"), "mul")
    assert prod == P(R, "t1^2 - t2^2")


def test_additive_identity_and_rational_product():
    R = Ring(1, 1)
    assert poly_arith(P(R, "x1*t1"), P(R, "0"), "add") == P(R, "x1*t1")
    prod = P(R, "1/2*t1") * P(R, "2/3*t1")
    assert prod.terms == {(0, 2): QQ(1, 3)}
    assert format_polynomial(prod) == "1/3*t1^2"


@pytest.mark.parametrize("text,column", [("t1^", 4), ("x1**2", 4), ("t1 t2", 4), ("x3", 1), ("t1 +", 5)])
def test_parse_errors_report_column(text, column):
    with pytest.raises(PolynomialSyntaxError) as info:
        P(Ring(2, 2), text)
    assert info.value.column == column
    assert f"column {column}" in str(info.value)


def test_non_bihomogeneous_names_both_monomials():
    with pytest.raises(NotBihomogeneousError) as info:
        P(Ring(2, 2), "2*x1*t1 + t1").bidegree()
    msg = str(info.value)
    assert "x1*t1" in msg and "(0,1)" in msg


def test_parse_format_roundtrip():
    R = Ring(2, 2)
    for text in ["x1^2*t1 - 3/4*x1*x2*t2", "-t1*t2 + 5*t2^2", "7", "0"]:
        p = P(R, text)
        assert P(R, format_polynomial(p)) == p


def test_shift_examples():
    S = free(Ring(0, 1))
    assert hilbert_table(shift(S, 0), [0], range(-2, 3)) == hilbert_table(S, [0], range(-2, 3))
    assert shift(S, 1).dim(BiDegree(0, -1)) == 1
    assert shift(S, 1).dim(BiDegree(0, -2)) == 0


def test_reverse_examples():
    R = Ring(1, 1)
    G = cyclic(R, "t1")
    assert reverse(G).relations.columns[0] == {(0, (0, 1)): QQ(-1)}
    assert hilbert_table(reverse(G), range(3), range(3)) == hilbert_table(G, range(3), range(3))
    # polynomial-level substitution t_i -> -t_i
    R2 = Ring(1, 2)
    assert P(R2, "x1*t2 + t2^2").reverse() == P(R2, "-x1*t2 + t2^2")


@pytest.mark.parametrize("a,b", [(0, 0), (2, 3), (1, 0), (-1, 0), (0, -1)])
def test_piece_of_free(a, b):
    S = free(Ring(1, 1))
    assert piece(S, BiDegree(a, b)).dim == (1 if a >= 0 and b >= 0 else 0)


def test_piece_quotients():
    R = Ring(1, 1)
    G = cyclic(R, "x1")
    assert [G.dim(BiDegree(0, b)) for b in range(5)] == [1] * 5
    assert [G.dim(BiDegree(1, b)) for b in range(5)] == [0] * 5
    H = cyclic(Ring(0, 2), "t1", "t2")
    assert H.dim(BiDegree(0, 1)) == 0
    assert H.dim(BiDegree(0, 0)) == 1


def test_t_slice_examples():
    R = Ring(1, 1)
    sl = t_slice(cyclic(R, "x1"), 0)
    assert [sl.dim(BiDegree(a, 0)) for a in range(4)] == [1, 0, 0, 0]
    killed = t_slice(cyclic(R, "t1"), 1)
    assert all(killed.dim(BiDegree(a, 0)) == 0 for a in range(4))
    for k in range(4):
        sl = t_slice(free(R), k)
        assert sl.generators.rank == 1 and not sl.relations.columns


def test_bidegree_arithmetic():
    a, b = BiDegree(1, 2), BiDegree(-3, 4)
    assert a + b == BiDegree(-2, 6)
    assert b - a == BiDegree(-4, 2)


# -- properties over random presentations --------------------------------

seeds = st.integers(min_value=0, max_value=10**6)


def _random(seed, md=None):
    rng = random.Random(seed)
    md = md or rng.choice([1, 2])
    return rng, random_presentation(rng, md, md, max_deg=2)


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(-2, 2), st.integers(-2, 2))
def test_shift_composition(seed, a, b):
    _, G = _random(seed)
    xs, ts = range(0, 3), range(-3, 4)
    assert hilbert_table(shift(shift(G, a), b), xs, ts) == hilbert_table(shift(G, a + b), xs, ts)
    for x in xs:
        for t in ts:
            assert shift(G, a).dim(BiDegree(x, t)) == G.dim(BiDegree(x, a + t))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_reverse_involution_and_dims(seed):
    _, G = _random(seed)
    RR = reverse(reverse(G))
    assert RR.relations.columns == G.relations.columns
    assert hilbert_table(reverse(G), range(3), range(4)) == hilbert_table(G, range(3), range(4))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_relation_permutation_invariance(seed):
    rng, G = _random(seed)
    cols = list(G.relations.columns)
    rng.shuffle(cols)
    H = make_presentation(G.ring, G.shifts, cols, canonical=False)
    assert hilbert_table(H, range(3), range(4)) == hilbert_table(G, range(3), range(4))


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(0, 3))
def test_t_slice_matches_pieces(seed, k):
    _, G = _random(seed)
    sl = t_slice(G, k, x_cutoff=8)
    for a in range(4):
        assert sl.dim(BiDegree(a, 0)) == G.dim(BiDegree(a, k))
