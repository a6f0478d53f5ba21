"""
Tate 算法与全局纤维分类测试
"""
import random

import pytest

from app.core.errors import LatticeInputError, SingularFibrationError
from app.schemas.fibre import KodairaType
from app.services.families import get_template
from app.services.tate_service import classify_all, reduction_kind, tate_classify
from app.services.weierstrass_service import (
    CoordChange,
    WeierstrassModel,
    apply_change,
    discriminant,
    load_model,
    reduce_mod,
)
from app.utils.field import get_field
from app.utils.poly import Place, UniPoly


def _gf2(lists) -> WeierstrassModel:
    return WeierstrassModel.from_lists(get_field(2), lists)


def test_kodaira_symbols():
    assert KodairaType.parse("I18").components == 18
    assert KodairaType.parse("I13*").components == 18
    assert KodairaType.parse("I0*").root_lattice == "D4"
    assert KodairaType.parse("IV*").root_lattice == "E6"
    assert KodairaType.parse("I1").root_lattice is None
    assert KodairaType.parse("II").euler_number(2) == 2
    assert KodairaType.parse("I7").euler_number(7) == 7
    assert str(KodairaType(family="I*", n=14)) == "I14*"
    with pytest.raises(LatticeInputError):
        KodairaType.parse("I-3")


def test_char3_i14star(char3_model):
    report = classify_all(char3_model)
    (fibre,) = [f for f in report.fibres if f.place == "s=0"]
    assert fibre.line() == "s=0 | I14* | 20 | 19 | 0"
    assert report.total_v_delta == 24
    assert report.configuration == ["I1", "I1", "I1", "I1", "I14*"]
    assert sorted(f.v_delta for f in report.fibres) == [1, 1, 1, 1, 20]
    assert report.max_additive == "I14*"
    assert report.max_additive_components == 19
    assert report.euler_ok and report.complete


def test_i18_witness(i18_witness):
    report = classify_all(i18_witness)
    assert report.configuration == ["I2", "I2", "I2", "I18"]
    assert report.max_multiplicative == 18
    assert report.fibres[-1].place == "t=∞"
    assert report.euler_sum == 24 and report.wild_sum == 0
    assert report.euler_ok


def test_rational_base_change(fixture_path):
    model = load_model(fixture_path("char0_i18_basechange.model"))
    report = classify_all(model)
    assert report.configuration == ["I1"] * 6 + ["I18"]
    assert report.total_v_delta == 24
    assert report.complete


@pytest.mark.parametrize(
    "lists,symbol,v_delta",
    [
        ([[], [0, 1], [0, 0, 0, 0, 0, 1], [], []], "I7*", 20),
        ([[], [0, 1], [0, 0, 0, 0, 0, 0, 1], [], []], "I9*", 24),
        ([[0, 0, 1], [0, 1], [], [], [0] * 12 + [1]], "I12*", 24),
    ],
)
def test_char2_additive_terminations(lists, symbol, v_delta):
    fibre = tate_classify(_gf2(lists), Place(get_field(2), 0))
    assert fibre.kodaira.symbol == symbol
    assert fibre.v_delta == v_delta
    assert fibre.wild_defect == v_delta - fibre.components - 1
    assert fibre.reduction == "additive"


@pytest.mark.parametrize("values,symbol,v_delta", [([1, 1, 1, 0, 0], "I13*", 21), ([1, 0, 1, 0, 0], "I12*", 20)])
def test_iii_star_family_terminations(values, symbol, v_delta):
    field = get_field(2)
    model = WeierstrassModel.from_coefficients(get_template("case_iii_star").specialize(values, field))
    fibre = tate_classify(model, Place(field, 0))
    assert (fibre.kodaira.symbol, fibre.v_delta) == (symbol, v_delta)


def test_i13star_witness(fixture_path):
    model = load_model(fixture_path("char2_i13star_witness.model"))
    fibre = tate_classify(model, Place(model.ring, 0))
    assert fibre.line() == "t=0 | I13* | 21 | 18 | 2"


def test_good_and_multiplicative_places(i18_witness, char3_model):
    field = i18_witness.ring
    good = tate_classify(i18_witness, Place(field, 0))
    assert good.kodaira.symbol == "I0"
    assert good.v_delta == 0 and good.reduction == "good"
    assert reduction_kind(i18_witness, Place(field, 0)) == "good"
    assert reduction_kind(i18_witness, Place(field, 1)) == "multiplicative"
    assert reduction_kind(char3_model, Place(char3_model.ring, 0)) == "additive"


def test_singular_fibration_raises():
    with pytest.raises(SingularFibrationError):
        classify_all(_gf2([[], [0, 0, 0, 1], [], [], []]))


def test_non_minimal_point_is_reduced():
    field = get_field(5)
    m = WeierstrassModel.from_lists(field, [[], [], [], [], [0] * 6 + [1] + [0] * 5 + [1]])
    fibre = tate_classify(m, Place(field, 0))
    assert fibre.minimality_reductions == 1
    assert fibre.kodaira.symbol == "I0"


@pytest.mark.parametrize(
    "values,symbol,v_delta",
    [([2, 2, 1, 0, 0], "I12*", 20), ([3, 2, 2, 0, 0], "I13*", 21), ([2, 3, 3, 0, 0], "I13*", 21)],
)
def test_iii_star_over_gf4_needs_c_squared_equal_e(values, symbol, v_delta):
    field = get_field(2, 2)
    model = WeierstrassModel.from_coefficients(get_template("case_iii_star").specialize(values, field))
    fibre = tate_classify(model, Place(field, 0))
    e, c = values[:2]
    assert (field.mul(c, c) == e) == (v_delta == 21)
    assert (fibre.kodaira.symbol, fibre.v_delta) == (symbol, v_delta)


def test_quadratic_base_change_and_its_reduction(fixture_path):
    model = load_model(fixture_path("char0_i16_basechange.model"))
    report = classify_all(model)
    assert report.configuration == ["I1"] * 4 + ["I4", "I16"]
    assert report.total_v_delta == 24

    reduced = classify_all(reduce_mod(model, 2))
    assert reduced.configuration == ["I16", "I1*"]
    assert reduced.total_v_delta == 24
    (star,) = [f for f in reduced.fibres if f.kodaira.symbol == "I1*"]
    assert star.place == "s=∞"
    assert star.v_delta == 8
    assert star.wild_defect == 1


@pytest.mark.parametrize("p", [5, 7])
def test_no_wild_ramification_in_large_characteristic(p):
    field = get_field(p)
    rng = random.Random(p)
    checked = 0
    for _ in range(40):
        # 每个 a_i 都被 t 整除：t=0 处必为加性
        lists = [[0] + [rng.randrange(p) for _ in range(2 * w)] for w in (1, 2, 3, 4, 6)]
        m = WeierstrassModel.from_lists(field, lists)
        if discriminant(m).is_zero():
            continue
        fibre = tate_classify(m, Place(field, 0))
        if fibre.minimality_reductions:
            continue
        assert fibre.reduction == "additive"
        assert all(f.wild_defect == 0 for f in classify_all(m).fibres)
        checked += 1
    assert checked > 30


def _change(rng: random.Random, field, u) -> CoordChange:
    def poly(degree):
        return UniPoly(field, [rng.randrange(field.order) for _ in range(degree + 1)])

    return CoordChange(u, poly(1), poly(0), poly(2))


@pytest.mark.parametrize(
    "name,u",
    [("char2_i18_witness.model", 1), ("char2_i13star_witness.model", 1), ("char3_i14star.model", 2)],
)
def test_classification_is_invariant_under_coordinate_change(fixture_path, name, u):
    model = load_model(fixture_path(name))
    expected = [f.line() for f in classify_all(model).fibres]
    rng = random.Random(len(name))
    for _ in range(5):
        changed = apply_change(model, _change(rng, model.ring, u))
        assert [f.line() for f in classify_all(changed).fibres] == expected


def test_discriminant_degree_is_accounted_for_on_random_models():
    field = get_field(2)
    rng = random.Random(24)
    complete = 0
    for _ in range(20):
        lists = [[rng.randrange(2) for _ in range(2 * w + 1)] for w in (1, 2, 3, 4, 6)]
        m = WeierstrassModel.from_lists(field, lists)
        if discriminant(m).is_zero():
            continue
        report = classify_all(m, search_ext=16)
        if not report.complete:
            continue
        complete += 1
        assert report.total_v_delta + 12 * report.minimality_reductions == 24
    assert complete >= 3
