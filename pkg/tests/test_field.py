import numpy as np
import pytest

from oracles import RefField
from conftest import fields, ref_for
from pluckerdss.errors import DomainError, FieldMismatchError
from pluckerdss.field import (
    DEFAULT_MODULI,
    GF,
    FieldSpec,
    fadd,
    finv,
    fmul,
    fneg,
    is_irreducible,
    parse_field,
)


def test_small_examples():
    assert fadd(GF(2)(1), GF(2)(1)).value == 0
    assert fadd(GF(5)(3), GF(5)(4)).value == 2
    F4 = GF(4, 0b111)
    assert fadd(F4(0b10), F4(0b11)).value == 1
    assert finv(GF(5)(2)).value == 3
    assert fmul(GF(2)(1), GF(2)(1)).value == 1
    assert fmul(F4(0b10), F4(0b10)).value == 0b11


def test_mismatched_fields_rejected():
    with pytest.raises(FieldMismatchError):
        fadd(GF(5)(1), GF(7)(1))
    with pytest.raises(FieldMismatchError):
        fmul(GF(4)(1), GF(2)(1))


def test_inverse_of_zero():
    for q in (2, 5, 16):
        with pytest.raises(DomainError):
            finv(GF(q)(0))


@pytest.mark.parametrize("F", fields(2, 3, 4, 5, 7, 8, 16, 251, 256))
def test_axioms_random(F):
    rng = np.random.default_rng(F.q)
    a, b, c = (F.random(rng, 10_000) for _ in range(3))
    assert np.array_equal(F.add(a, F.add(b, c)), F.add(F.add(a, b), c))
    assert np.array_equal(F.mul(a, F.mul(b, c)), F.mul(F.mul(a, b), c))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    assert np.array_equal(F.add(a, b), F.add(b, a))
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.all(F.add(a, F.neg(a)) == 0)
    assert np.array_equal(F.sub(F.add(a, b), b), a)
    nz = a[a != 0]
    assert np.all(F.mul(nz, F.inv(nz)) == 1)


@pytest.mark.parametrize("F", fields(2, 3, 4, 5, 8, 16, 256))
def test_against_schoolbook(F):
    R = ref_for(F)
    pairs = [(a, b) for a in range(F.q) for b in range(F.q)]
    if len(pairs) > 5000:
        pairs = pairs[::13]
    A = np.array([p[0] for p in pairs])
    B = np.array([p[1] for p in pairs])
    assert list(F.mul(A, B)) == [R.mul(a, b) for a, b in pairs]
    assert list(F.add(A, B)) == [R.add(a, b) for a, b in pairs]
    assert [F.mul(int(a), int(b)) for a, b in pairs[:50]] == [R.mul(a, b) for a, b in pairs[:50]]


@pytest.mark.parametrize("F", fields(2, 3, 4, 5, 7, 8, 16, 251, 256))
def test_double_inverse_exhaustive(F):
    for a in range(1, F.q):
        e = F(a)
        assert finv(finv(e)) == e
        assert (finv(e) * e).value == 1
        assert (fneg(e) + e).value == 0


def test_default_moduli_irreducible():
    for m, mod in DEFAULT_MODULI.items():
        assert mod.bit_length() - 1 == m
        assert is_irreducible(mod)


def test_non_primitive_modulus_still_works():
    # x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5.
    F = FieldSpec(2, 4, 0b11111)
    R = RefField(2, 4, 0b11111)
    for a in range(16):
        for b in range(16):
            assert F.mul(a, b) == R.mul(a, b)
    assert F.mul(0b10, F.inv(0b10)) == 1


def test_bad_fields():
    with pytest.raises(ValueError):
        GF(6)
    with pytest.raises(ValueError):
        FieldSpec(2, 4, 0b10101)  # (x^2+x+1)^2
    with pytest.raises(ValueError):
        parse_field("gf(q)")


def test_parse_field():
    assert parse_field("gf(16)") == GF(16)
    assert parse_field("GF(2^4)") == GF(16)
    assert parse_field("gf(16)", "1f") == FieldSpec(2, 4, 0x1F)
    assert parse_field("gf(7)").spec_string() == "gf(7)"


def test_pow_and_div():
    F = GF(16)
    for a in range(1, 16):
        assert F.pow(a, 15) == 1
        assert F.div(F.mul(a, 7), 7) == a
    assert GF(13).pow(2, 12) == 1
