"""Ring tower: axioms, grammar round-trips, ideals, excision/double/Rees."""

import itertools

import pytest

from conftest import Z, f4, ideal_of, zmod
from symwitt import (
    DoubleRing,
    ExcisionRing,
    ExtendedReesRing,
    Ideal,
    IntegerRing,
    LaurentRing,
    MalformedSpec,
    ModularRing,
    NotAUnit,
    PolynomialRing,
    ProductRing,
    QuotientRing,
    RationalField,
    ReesRing,
    RingMismatch,
    double_to_excision,
    excision_project,
    excision_section,
    excision_to_double,
    rees_contains,
    unit_ideal,
    zero_ideal,
)


def check_ring_axioms(ring):
    els = ring.elements()
    assert len(els) <= 16
    for a in els:
        assert ring.add(a, ring.zero) == a
        assert ring.mul(a, ring.one) == a
        assert ring.add(a, ring.neg(a)) == ring.zero
    for a, b in itertools.product(els, repeat=2):
        assert ring.add(a, b) == ring.add(b, a)
        assert ring.mul(a, b) == ring.mul(b, a)
    for a, b, c in itertools.product(els, repeat=3):
        assert ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c))
        assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
        lhs = ring.mul(a, ring.add(b, c))
        assert lhs == ring.add(ring.mul(a, b), ring.mul(a, c))


M4 = zmod(4)
M8 = zmod(8)
M9 = zmod(9)


@pytest.mark.parametrize("ring", [
    zmod(2),
    M4,
    M8,
    f4(),
    ProductRing((zmod(2), zmod(2))),
    ExcisionRing(M4, ideal_of(M4, 2)),
    DoubleRing(M4, ideal_of(M4, 2)),
])
def test_axioms_exhaustive(ring):
    check_ring_axioms(ring)


def test_sizes():
    assert zmod(2).size == 2
    assert f4().size == 4
    assert ProductRing((zmod(2), zmod(2))).size == 4
    assert ExcisionRing(M4, ideal_of(M4, 2)).size == 8
    assert DoubleRing(M4, ideal_of(M4, 2)).size == 8


def test_modular_basics():
    assert M9.inv(4) == 7
    assert M9.scalar_int(13) == 4
    assert not M9.is_unit(3)
    assert M8.is_nilpotent(2)
    assert not M8.is_nilpotent(3)
    with pytest.raises(NotAUnit):
        M8.inv(2)
    with pytest.raises(MalformedSpec):
        ModularRing(1)


def test_integers_and_rationals():
    assert Z.scalar_int(-3) == -3
    assert not Z.is_finite
    q = RationalField()
    x = q.parse("3/4")
    assert q.fmt(q.mul(x, q.inv(x))) == "1"
    assert q.fmt(q.add(x, x)) == "3/2"


def test_polynomial_grammar():
    p = PolynomialRing(Z, "t")
    x = p.parse("3*t^2+1")
    assert x == (1, 0, 3)
    assert p.fmt(x) == "3*t^2+1"
    assert p.parse(p.fmt(x)) == x
    y = p.mul(p.parse("t+1"), p.parse("t-1"))
    assert y == (-1, 0, 1)
    with pytest.raises(MalformedSpec):
        PolynomialRing(Z, "2bad")


def test_quotient_int_mode():
    r = QuotientRing(Z, (12,))
    assert r.size == 12
    assert r.mul(r.scalar_int(5), r.scalar_int(5)) == r.one
    with pytest.raises(MalformedSpec):
        QuotientRing(Z, (0,))


def test_laurent_arithmetic():
    l = LaurentRing(Z, "t")
    x = l.parse("t+t^-1")
    sq = l.mul(x, x)
    assert sq == (-2, (1, 0, 2, 0, 1))
    assert l.parse(l.fmt(sq)) == sq


@pytest.mark.parametrize("ring", [
    zmod(5),
    f4(),
    ExcisionRing(M4, ideal_of(M4, 2)),
    DoubleRing(M8, ideal_of(M8, 2)),
    ProductRing((zmod(2), zmod(3))),
])
def test_grammar_round_trip_exhaustive(ring):
    for x in ring.elements():
        assert ring.parse(ring.fmt(x)) == x


def test_excision_multiplication():
    exc = ExcisionRing(Z, ideal_of(Z, 2))
    prod = exc.mul((3, 2), (1, 4))
    # (rs, rj + si + ij) = (3, 12 + 2 + 8)
    assert prod == (3, 22)
    assert exc.one == (1, 0)


def test_excision_section_retract():
    exc = ExcisionRing(M8, ideal_of(M8, 2))
    for r in M8.elements():
        assert excision_project(exc, excision_section(exc, r)) == r
    assert excision_project(exc, (3, 2)) == 5
    assert excision_project(exc, (3, 2), "first") == 3


def test_double_membership():
    dbl = DoubleRing(M8, ideal_of(M8, 2))
    dbl.check((5, 3))
    with pytest.raises(RingMismatch):
        dbl.check((5, 2))


def test_double_to_excision_iso():
    ideal = ideal_of(M8, 2)
    dbl = DoubleRing(M8, ideal)
    exc, img = double_to_excision(dbl, (5, 3))
    assert img == (3, 2)
    assert excision_to_double(exc, img)[1] == (5, 3)
    # diagonal pairs map to zero ideal part
    for a in M8.elements():
        assert double_to_excision(dbl, (a, a))[1] == (a, 0)
    # exhaustive homomorphism + bijection check
    seen = set()
    for x in dbl.elements():
        _, fx = double_to_excision(dbl, x)
        seen.add(fx)
        assert excision_to_double(exc, fx)[1] == x
        for y in dbl.elements():
            _, fy = double_to_excision(dbl, y)
            assert double_to_excision(dbl, dbl.add(x, y))[1] == exc.add(fx, fy)
            assert double_to_excision(dbl, dbl.mul(x, y))[1] == exc.mul(fx, fy)
    assert len(seen) == dbl.size == exc.size


def test_ideal_closure():
    ideal = ideal_of(M8, 2)
    assert ideal.members() == (0, 2, 4, 6)
    again = Ideal(M8, ideal.members())
    assert again.members() == ideal.members()
    assert ideal.contains(6)
    assert not ideal.contains(3)


def test_ideal_power_and_vanishing():
    ideal = ideal_of(M8, 2)
    assert ideal.power(2).members() == (0, 4)
    assert not ideal.products_vanish()
    assert ideal_of(M4, 2).products_vanish()
    assert ideal.power(0).has_unit_generator()


def test_integer_ideal_gcd():
    ideal = ideal_of(Z, 4, 6)
    assert ideal.contains(2)
    assert not ideal.contains(3)
    assert zero_ideal(Z).is_zero()
    assert unit_ideal(Z).has_unit_generator()


def test_polynomial_ideal_membership():
    p = PolynomialRing(Z, "X")
    principal = Ideal(p, (p.parse("X"),))
    assert principal.contains(p.parse("X^2"))
    assert not principal.contains(p.one)
    constant = Ideal(p, ((2,),))
    assert constant.contains(p.parse("4*X+2"))
    assert not constant.contains(p.parse("2*X+1"))


def test_rees_grading():
    ideal = ideal_of(M9, 3)
    rees = ReesRing(M9, ideal, "t")
    x = rees.check((1, 3))
    assert rees.fmt(x) == "3*t+1"
    assert rees.parse("3*t+1") == (1, 3)
    # degree-2 coefficient must lie in I^2 = (0) over Z/9
    with pytest.raises(RingMismatch):
        rees.check((1, 3, 3))
    assert rees_contains(rees, (1, 3))
    assert not rees_contains(rees, (1, 1))


def test_rees_multiplicativity():
    ideal = ideal_of(Z, 2)
    rees = ReesRing(Z, ideal, "t")
    a = rees.check((1, 2))
    b = rees.check((3, 4, 8))
    prod = rees.mul(a, b)
    assert rees_contains(rees, prod)
    assert prod == (3, 10, 16, 16)


def test_extended_rees():
    ideal = ideal_of(Z, 2)
    ext = ExtendedReesRing(Z, ideal, "t")
    tinv = ext.check((-1, (1,)))
    two_t = ext.check((1, (2,)))
    assert ext.mul(tinv, two_t) == (0, (2,))
    assert rees_contains(ext, ext.mul(tinv, two_t))
    # positive-degree coefficients outside I^i are rejected
    with pytest.raises(RingMismatch):
        ext.check((1, (1,)))


def test_ring_identity_and_mismatch():
    assert zmod(5) == ModularRing(5)
    assert hash(zmod(5)) == hash(ModularRing(5))
    assert zmod(5) != zmod(7)
    with pytest.raises(MalformedSpec):
        DoubleRing(M8, ideal_of(M4, 2))
    with pytest.raises(MalformedSpec):
        ExcisionRing(M8, ideal_of(M4, 2))
