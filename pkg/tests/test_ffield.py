import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drinfeld_cm.errors import BadInputError
from drinfeld_cm.ffield import (
    FFElem,
    artin_schreier_solve,
    embedding_table,
    ff_arith,
    field,
    is_square,
    quadratic_extension,
    sqrt,
    sqrt_fq2,
)

DESCS = [field(2), field(3), field(2, 2), field(5), field(2, 1, 2), field(3, 1, 2), field(2, 2, 2), field(5, 1, 2)]


def test_arith_examples():
    f3 = field(3)
    assert ff_arith(f3.elem(2), f3.elem(2), "mul").code == 1  # (-1)^2 = 1
    f4 = field(2, 2)
    w = f4.gen
    assert (w * w).code == f4.add(w.code, 1)  # w^2 = w + 1 for the lex-least modulus
    f9 = field(3, 1, 2)
    for x in range(1, 9):
        assert ff_arith(f9.elem(x), f9.elem(x), "div").code == 1


def test_division_by_zero():
    f3 = field(3)
    with pytest.raises(ZeroDivisionError):
        ff_arith(f3.one, f3.zero, "div")


def test_mismatched_fields():
    with pytest.raises(BadInputError):
        ff_arith(field(3).one, field(2).one, "add")


@pytest.mark.parametrize("desc", DESCS)
def test_unit_group_order(desc):
    # x^(q^m - 1) = 1 exhaustively (all orders here are <= 81... small anyway)
    for x in range(1, desc.order):
        assert desc.pow(x, desc.order - 1) == 1


@pytest.mark.parametrize("desc", [field(3), field(5), field(3, 1, 2), field(5, 1, 2)])
def test_is_square_oracle(desc):
    squares = {desc.mul(y, y) for y in range(desc.order)}
    for x in range(desc.order):
        assert is_square(FFElem(desc, x)) == (x in squares)


def test_is_square_examples():
    f3 = field(3)
    assert not is_square(f3.elem(2))
    assert is_square(f3.elem(1))
    f9 = field(3, 1, 2)
    emb = embedding_table(f3, f9)
    for x in range(1, 3):
        assert is_square(f9.elem(emb[x]))


def test_is_square_even_q_rejected():
    with pytest.raises(BadInputError):
        is_square(field(2).one)


def test_sqrt_fq2():
    f3 = field(3)
    f9 = quadratic_extension(f3)
    emb = embedding_table(f3, f9)
    e1 = sqrt_fq2(f3.elem(1))
    assert (e1 * e1).code == 1
    e2 = sqrt_fq2(f3.elem(2))
    assert (e2 * e2).code == emb[2]
    assert e2.code not in set(emb)  # not in F_3
    for x in range(1, 3):
        r = sqrt_fq2(f3.elem(x))
        assert (r * r).code == emb[x]


def test_sqrt_canonical_is_min():
    f9 = field(3, 1, 2)
    for x in range(f9.order):
        r = sqrt(f9.elem(x))
        if r is None:
            continue
        other = -r
        assert r.code <= other.code


def test_artin_schreier_examples():
    f2 = field(2)
    roots = artin_schreier_solve(f2.zero)
    assert {r.code for r in roots} == {0, 1}
    assert artin_schreier_solve(f2.one) is None  # trace 1
    f4 = field(2, 2)
    r = artin_schreier_solve(f4.one)
    assert r is not None
    r1, r2 = r
    assert r2.code == r1.code ^ 1
    for root in (r1, r2):
        assert (root * root + root).code == 1


@pytest.mark.parametrize("desc", [field(2), field(2, 2), field(2, 1, 2), field(2, 2, 2)])
def test_artin_schreier_trace_criterion(desc):
    for c in range(desc.order):
        res = artin_schreier_solve(desc.elem(c))
        solvable = any(desc.add(desc.mul(y, y), y) == c for y in range(desc.order))
        assert (res is not None) == solvable
        assert solvable == (desc.trace_to_prime(c) == 0)
        if res:
            r1, r2 = res
            assert desc.add(desc.mul(r1.code, r1.code), r1.code) == c
            assert r2.code == desc.add(r1.code, 1)


def test_embedding_is_ring_hom():
    f3 = field(3)
    f9 = field(3, 1, 2)
    emb = embedding_table(f3, f9)
    for a in range(3):
        for b in range(3):
            assert emb[f3.add(a, b)] == f9.add(emb[a], emb[b])
            assert emb[f3.mul(a, b)] == f9.mul(emb[a], emb[b])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 24), st.integers(0, 24), st.integers(0, 24))
def test_field_axioms_f25(a, b, c):
    f = field(5, 1, 2)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(a, b) == f.mul(b, a)
    assert f.add(a, f.neg(a)) == 0


def test_header_roundtrip():
    d = field(2, 1, 2)
    assert d.header() == "2,1,2,[1,1,1]"


def test_size_guard():
    with pytest.raises(BadInputError):
        field(2, 17)
