"""
一元多项式、赋值与求根测试
"""
import random
from fractions import Fraction

import pytest

from app.core.errors import DegreeBoundError, ModelFormatError, ValuationError
from app.utils.field import QQ, get_field
from app.utils.poly import (
    VAL_INF,
    Place,
    UniPoly,
    chart_at_infinity,
    mobius_substitute,
    parse_poly,
    rational_roots,
    reverse_form,
    split_places,
    translate_parameter,
    valuation,
)


def _random_poly(rng: random.Random, field, degree: int) -> UniPoly:
    return UniPoly(field, [rng.randrange(field.order) for _ in range(degree + 1)])


def test_valuation_at_finite_places(gf3):
    # f = t²(t − 1)³
    t = UniPoly.gen(gf3)
    f = t * t * (t - 1) ** 3
    assert valuation(f, Place(gf3, 0)) == 2
    assert valuation(f, Place(gf3, 1)) == 3
    assert valuation(f, Place(gf3, 2)) == 0
    assert valuation(UniPoly.zero(gf3), Place(gf3, 0)) == VAL_INF


def test_valuation_at_infinity_needs_ambient_degree(gf2):
    f = UniPoly(gf2, [1, 0, 1])
    assert valuation(f, Place.infinity(gf2), ambient_degree=12) == 10
    with pytest.raises(ValuationError):
        valuation(f, Place.infinity(gf2))
    with pytest.raises(DegreeBoundError):
        valuation(f, Place.infinity(gf2), ambient_degree=1)


def test_valuation_in_extension_field(gf2):
    # t² + t + 1 的根在 GF(4) 中
    f = UniPoly(gf2, [1, 1, 1]) ** 2
    gf4 = get_field(2, 2)
    assert valuation(f, Place(gf4, 2)) == 2
    assert valuation(f, Place(gf4, 1)) == 0


@pytest.mark.parametrize("p,k", [(2, 2), (3, 1), (5, 1)])
def test_valuation_is_additive(p, k):
    field = get_field(p, k)
    rng = random.Random(17 + p + k)
    place = Place(field, 1)
    for _ in range(100):
        f = _random_poly(rng, field, rng.randrange(1, 8))
        g = _random_poly(rng, field, rng.randrange(1, 8))
        if f.is_zero() or g.is_zero():
            continue
        assert valuation(f * g, place) == valuation(f, place) + valuation(g, place)


def test_translate_parameter(gf3):
    t = UniPoly.gen(gf3)
    assert translate_parameter(t * t, 1) == t * t + t * 2 + 1


def test_reverse_form_and_chart(gf2):
    f = UniPoly(gf2, [1, 1])
    assert reverse_form(f, 4) == UniPoly(gf2, [0, 0, 0, 1, 1])
    with pytest.raises(DegreeBoundError):
        reverse_form(UniPoly.monomial(gf2, 1, 5), 4)
    a1, a2, a3, a4, a6 = chart_at_infinity([UniPoly.monomial(gf2, 1, 2)] + [UniPoly.zero(gf2)] * 3 + [UniPoly.one(gf2)])
    assert a1 == UniPoly.one(gf2)
    assert a6 == UniPoly.monomial(gf2, 1, 12)


def test_mobius_substitute_special_cases(gf3):
    rng = random.Random(5)
    for _ in range(20):
        f = _random_poly(rng, gf3, 4)
        assert mobius_substitute(f, 4, (1, 0, 0, 1)) == f
        assert mobius_substitute(f, 4, (0, 1, 1, 0)) == reverse_form(f, 4)
        assert mobius_substitute(f, 4, (1, 2, 0, 1)) == translate_parameter(f, 2)


def test_divmod_and_gcd():
    field = get_field(5)
    t = UniPoly.gen(field)
    f = t * t - 1
    g = (t - 1) ** 2
    q, r = divmod(f, t - 1)
    assert q == t + 1 and r.is_zero()
    assert f.gcd(g) == t - 1
    with pytest.raises(ValuationError):
        divmod(f, UniPoly.zero(field))


def test_split_places_groups_conjugates(gf2):
    # t⁶ + 1 = (t+1)²(t²+t+1)²
    split = split_places(UniPoly(gf2, [1, 0, 0, 0, 0, 0, 1]))
    assert split.complete
    assert [(g.factor_degree, g.multiplicity, len(g.places)) for g in split.groups] == [(1, 2, 1), (2, 2, 2)]
    assert split.groups[0].places[0].value == 1
    assert {p.value for p in split.groups[1].places} == {2, 3}
    assert all(p.degree == 2 for p in split.groups[1].places)


def test_split_places_reports_unsplit_factors(gf2):
    split = split_places(UniPoly(gf2, [1, 1, 1]), search_ext=1)
    assert not split.complete
    assert split.unsplit == [(2, 1)]


def test_parse_poly_literals(gf2):
    assert parse_poly("1 + t^3 + t^4", gf2) == UniPoly(gf2, [1, 0, 0, 1, 1])
    assert parse_poly("t + t", gf2).is_zero()
    assert parse_poly("-s - 2*s^3", QQ, var="s") == UniPoly(QQ, [0, -1, 0, -2])


def test_parse_poly_reports_position(gf2):
    with pytest.raises(ModelFormatError) as exc:
        parse_poly("1 + * t", gf2, line=3, column=4)
    assert exc.value.line == 3
    assert exc.value.column == 8


def test_to_literal_round_trip():
    f = UniPoly(QQ, [Fraction(c) for c in (0, -1, 0, -2)])
    assert f.to_literal("s") == "-s - 2*s^3"
    assert parse_poly(f.to_literal("s"), QQ, var="s") == f


def test_rational_roots():
    t = UniPoly.gen(QQ)
    assert rational_roots(t * t - 1) == [Fraction(-1), Fraction(1)]
    assert rational_roots(t ** 6 - 27) == []
    assert rational_roots((t * 2 - 1) * t) == [Fraction(0), Fraction(1, 2)]
    with pytest.raises(ValuationError):
        rational_roots(UniPoly(get_field(3), [1, 1]))
