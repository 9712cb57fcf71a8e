import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from oracles import column_space_rank
from vonstaudt.errors import FieldMismatch, MalformedInput, NotInvertible, ShapeMismatch
from vonstaudt.exactalg import (
    GF,
    QQ,
    BiPolynomial,
    BlockMatrix,
    ExactMatrix,
    FieldSpec,
    Fp,
    FpXY,
    RationalFunction,
    assemble_lemma_block,
    bareiss_rank,
    block_column_minor,
    gcd_bipoly,
    lemma_block_rank,
    parse_field,
    random_invertible,
    random_matrix,
    solve,
)

L, M = sp.symbols("l m")


def bipoly_strategy(p, max_deg=3):
    mono = st.tuples(st.integers(0, max_deg), st.integers(0, max_deg))
    return st.dictionaries(mono, st.integers(0, p - 1), max_size=5).map(lambda t: BiPolynomial(p, t))


def to_sympy(f):
    return sp.Poly(sum(c * L**i * M**j for (i, j), c in f.terms.items()) + 0 * L * M, L, M, modulus=f.p)


def from_sympy(poly, p):
    return BiPolynomial(p, {mono: int(c) % p for mono, c in poly.terms()})


# --- fields -------------------------------------------------------------------


def test_fp_arithmetic():
    a, b = Fp(3, 5), Fp(4, 5)
    assert a + b == 2 and a * b == 2 and a - b == 4
    assert a * a.inverse() == 1
    assert (a / b) * b == a
    with pytest.raises(ZeroDivisionError):
        Fp(0, 5).inverse()


@pytest.mark.parametrize("text,expected", [("Q", QQ), ("F5", GF(5)), ("F2(l,m)", FpXY(2))])
def test_parse_field(text, expected):
    assert parse_field(text) == expected
    assert FieldSpec.from_json(expected.to_json()) == expected


@pytest.mark.parametrize("bad", ["F4", "F1", "R", "F6(l,m)"])
def test_parse_field_rejects(bad):
    with pytest.raises(MalformedInput):
        parse_field(bad)


def test_field_element_text_roundtrip():
    F = FpXY(3)
    x = (F.gen(0) * F.gen(1) + 2) / (F.gen(0) + 1)
    assert F.parse(F.format(x)) == x
    assert F.format(F.parse("l*m")) == "l*m"
    assert QQ.format(QQ.parse("-3/6")) == "-1/2"


# --- bivariate polynomials ---------------------------------------------------------


def test_gcd_known_value():
    p = 5
    l, m = BiPolynomial.variable(p, 0), BiPolynomial.variable(p, 1)
    assert gcd_bipoly(l * l - m * m, l - m) == (l - m).monic()
    assert gcd_bipoly(l * m + 1, l).is_constant()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), bipoly_strategy(p), bipoly_strategy(p), bipoly_strategy(p, 2))))
def test_gcd_matches_sympy(data):
    p, a, b, c = data
    a, b = a * c, b * c
    if a.is_zero() and b.is_zero():
        return
    ours = gcd_bipoly(a, b)
    ref = from_sympy(to_sympy(a).gcd(to_sympy(b)), p)
    assert ours == ref.monic()


@settings(max_examples=60, deadline=None)
@given(bipoly_strategy(3), bipoly_strategy(3))
def test_exact_division_inverts_multiplication(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


@settings(max_examples=40, deadline=None)
@given(bipoly_strategy(3, 2), bipoly_strategy(3, 2), bipoly_strategy(3, 2), bipoly_strategy(3, 2))
def test_rational_function_field_axioms(a, b, c, d):
    if b.is_zero() or d.is_zero():
        return
    x, y = RationalFunction(a, b), RationalFunction(c, d)
    assert x + y == y + x
    assert (x + y) * y == x * y + y * y
    if not x.is_zero():
        assert x * x.inverse() == RationalFunction.constant(3, 1)
    assert RationalFunction.parse(3, x.format()) == x


# --- matrices and rank ----------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_mod_p_matches_column_space(r, c, data):
    p = data.draw(st.sampled_from([2, 3]))
    rows = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    assert ExactMatrix.from_rows(GF(p), rows).rank() == column_space_rank(rows, p)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_over_q_matches_sympy(r, c, data):
    rows = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r))
    assert ExactMatrix.from_rows(QQ, rows).rank() == sp.Matrix(rows).rank()


def _elementary_product(field, n, rng, steps=4):
    """Invertible matrix over F_p(l,m): a product of polynomial shears."""
    m = ExactMatrix.identity(field, n)
    gens = [field.gen(0), field.gen(1), field.one]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        entries = list(ExactMatrix.identity(field, n).entries)
        entries[i * n + j] = rng.choice(gens) * field(rng.randrange(1, field.p))
        m = m @ ExactMatrix(field, n, n, entries)
    return m


@pytest.mark.parametrize("p,n,r", [(2, 3, 1), (2, 4, 2), (3, 4, 3), (3, 5, 2), (5, 4, 0), (2, 4, 4)])
def test_function_field_rank_of_known_factorisation(p, n, r):
    field = FpXY(p)
    rng = random.Random(100 * p + 10 * n + r)
    u, v = _elementary_product(field, n, rng), _elementary_product(field, n, rng)
    d = ExactMatrix(field, n, n, [field.one if i == j and i < r else field.zero for i in range(n) for j in range(n)])
    assert (u @ d @ v).rank() == r


def test_bareiss_rank_direct():
    p = 2
    l, m = BiPolynomial.variable(p, 0), BiPolynomial.variable(p, 1)
    one = BiPolynomial.constant(p, 1)
    rows = [[l, m], [l * l, l * m]]
    assert bareiss_rank(rows) == 1
    assert bareiss_rank([[l, one], [one, m]]) == 2


def test_inverse_and_solve():
    rng = random.Random(7)
    for field in (QQ, GF(5), FpXY(3)):
        a = random_invertible(field, 3, rng)
        assert (a @ a.inverse()).is_identity()
        b = random_matrix(field, 3, 2, rng)
        assert a @ solve(a, b) == b
    with pytest.raises(NotInvertible):
        ExactMatrix.zeros(QQ, 2).inverse()


def test_matrix_errors():
    a = ExactMatrix.identity(QQ, 2)
    with pytest.raises(ShapeMismatch):
        a @ ExactMatrix.identity(QQ, 3)
    with pytest.raises(FieldMismatch):
        a + ExactMatrix.identity(GF(5), 2)


def test_trace_and_power():
    a = ExactMatrix.from_rows(QQ, [[1, 2], [3, 4]])
    assert a.trace() == 5
    assert a**2 == a @ a
    assert (a**-1) @ a == ExactMatrix.identity(QQ, 2)


def test_matrix_json_roundtrip():
    F = FpXY(2)
    a = ExactMatrix.from_rows(F, [[F.gen(0), F.one], [F.zero, F.gen(1) / (F.gen(0) + 1)]])
    assert ExactMatrix.from_json(a.to_json()) == a


def test_block_matrix_access():
    F = GF(5)
    eye, two = ExactMatrix.identity(F, 2), ExactMatrix.scalar(F, 2, 2)
    w = BlockMatrix.from_blocks([[eye, two], [two, eye]])
    assert (w.block_rows, w.block_cols) == (2, 2)
    assert w.block(0, 1) == two
    assert block_column_minor(w, [1]).shape == (4, 2)
    with pytest.raises(IndexError):
        block_column_minor(w, [2])


# --- block rank closed forms --------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.sampled_from(["i", "ii", "iii"]), st.integers(0, 10**6))
def test_lemma_block_rank_matches_direct(k, case, seed):
    rng = random.Random(seed)
    field = GF(5)
    mats = [random_invertible(field, k, rng) for _ in range(3)]
    assert lemma_block_rank(case, *mats) == assemble_lemma_block(case, *mats).rank()


def test_lemma_block_rank_rejects_singular():
    F = GF(5)
    with pytest.raises(NotInvertible):
        lemma_block_rank("i", ExactMatrix.zeros(F, 2), ExactMatrix.identity(F, 2))


def test_fraction_field_values():
    a = ExactMatrix.from_rows(QQ, [[Fraction(1, 2), 1], [1, 3]])
    assert a.rank() == 2
    assert a.inverse()[0, 0] == 6
    assert ExactMatrix.from_rows(QQ, [[Fraction(1, 2), 1], [1, 2]]).rank() == 1
