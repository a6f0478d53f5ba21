"""
有限域与有理数域算术测试
"""
import random

import pytest

from app.core.errors import FieldArithmeticError, FieldTooLargeError, ModelFormatError
from app.utils.field import (
    QQ,
    FiniteField,
    enumerate_field,
    ff_arith,
    get_field,
    parse_field_literal,
    parse_field_spec,
)


def test_gf4_generator_satisfies_conway_relation(gf4):
    # ω² = ω + 1，ω 的整数编码为 2
    omega = gf4.generator
    assert omega == 2
    assert gf4.mul(omega, omega) == gf4.add(omega, 1) == 3


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (5, 1), (7, 2)])
def test_multiplication_matches_galois(p, k):
    field = get_field(p, k)
    GF = field.galois_field
    rng = random.Random(p * 100 + k)
    for _ in range(200):
        a, b = rng.randrange(field.order), rng.randrange(field.order)
        assert field.mul(a, b) == int(GF(a) * GF(b))
        assert field.add(a, b) == int(GF(a) + GF(b))


@pytest.mark.parametrize("p,k", [(2, 4), (3, 2), (5, 2)])
def test_inverse_and_division(p, k):
    field = get_field(p, k)
    for a in range(1, field.order):
        assert field.mul(a, field.inv(a)) == 1
        assert field.div(a, a) == 1


def test_division_by_zero_raises(gf3):
    with pytest.raises(FieldArithmeticError):
        gf3.inv(0)
    with pytest.raises(FieldArithmeticError):
        QQ.inv(0)


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (3, 3)])
def test_pth_root_inverts_frobenius(p, k):
    field = get_field(p, k)
    for a in range(field.order):
        assert field.pow(field.pth_root(a), p) == a


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2)])
def test_frobenius_is_additive(p, k):
    field = get_field(p, k)
    for a in range(field.order):
        for b in range(field.order):
            assert field.pow(field.add(a, b), p) == field.add(field.pow(a, p), field.pow(b, p))


def test_embedding_respects_multiplication(gf4):
    gf16 = get_field(2, 4)
    table = gf4.embed_table(gf16)
    assert table[0] == 0 and table[1] == 1
    for a in range(4):
        for b in range(4):
            assert table[gf4.mul(a, b)] == gf16.mul(table[a], table[b])
            assert table[gf4.add(a, b)] == gf16.add(table[a], table[b])


def test_embedding_requires_divisible_degree():
    with pytest.raises(FieldArithmeticError):
        get_field(2, 2).embed_table(get_field(2, 3))


def test_invalid_field_parameters():
    with pytest.raises(FieldArithmeticError):
        FiniteField(4)
    with pytest.raises(FieldTooLargeError):
        get_field(2, 17)


def test_ff_arith_operations(gf4):
    omega = gf4.element(2)
    assert ff_arith(omega, omega, "add") == 0
    assert ff_arith(omega, omega, "mul") == gf4.element(3)
    # inv 表示 a·b⁻¹
    assert ff_arith(omega, omega, "inv") == 1
    assert ff_arith(omega, 3, "pow") == 1
    assert ff_arith(omega, None, "pth_root") == gf4.element(3)
    with pytest.raises(FieldArithmeticError):
        ff_arith(omega, gf4.element(0), "inv")
    with pytest.raises(FieldArithmeticError):
        ff_arith(omega, get_field(2, 4).element(2), "add")


def test_enumerate_field_order(gf4):
    elements = enumerate_field(gf4)
    assert [e.value for e in elements] == [0, 1, 2, 3]
    assert sum(1 for e in elements if e.is_zero()) == 1


def test_enumerate_field_respects_limit(monkeypatch, gf4):
    from app.core.config import settings

    monkeypatch.setattr(settings, "max_field_order", 2)
    with pytest.raises(FieldTooLargeError):
        enumerate_field(gf4)


def test_field_literals(gf4):
    assert parse_field_spec("2^2") == gf4
    assert parse_field_spec("3") == get_field(3)
    assert gf4.parse_coefficient("2^2:1,1") == 3
    assert gf4.format(3) == "2^2:1,1"
    assert parse_field_literal("2^2:0,1") == gf4.element(2)
    with pytest.raises(ModelFormatError):
        parse_field_spec("two")
    with pytest.raises(ModelFormatError):
        gf4.parse_coefficient("3^2:1")
    with pytest.raises(ModelFormatError):
        parse_field_literal("2^2")


def test_prime_field_coefficients(gf3):
    assert gf3.parse_coefficient("2") == 2
    assert gf3.parse_coefficient("1/2") == 2
    assert gf3.from_int(-1) == 2
    assert gf3.neg(1) == 2


def test_rational_field():
    assert QQ.parse_coefficient("-2/6") == QQ.from_int(-1) / 3
    assert QQ.characteristic == 0
    with pytest.raises(FieldArithmeticError):
        QQ.pth_root(QQ.one)
