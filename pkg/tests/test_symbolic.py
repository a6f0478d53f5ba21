"""
GF(2) 符号多项式、规范形族与分支消元测试
"""
import random

import pytest

from app.core.errors import SymbolicError
from app.services.families import FAMILY_NAMES, get_family, get_template
from app.services.symbolic_service import (
    ConstraintSystem,
    Equation,
    char2_discriminant,
    eliminate,
    impose_valuation,
    residual_discriminants,
    sym_specialize,
    symbolic_c4,
    symbolic_discriminant,
)
from app.services.weierstrass_service import WeierstrassModel, discriminant, universal_discriminant
from app.utils.field import get_field
from app.utils.poly import Place, UniPoly, valuation
from app.utils.symbolic import SymPoly, symbols


def test_sympoly_arithmetic_in_characteristic_two():
    a, b = symbols("a", "b")
    assert (a + a).is_zero()
    assert (a + b) ** 2 == a ** 2 + b ** 2
    assert (a + b) * (a + b) == (a + b).square()
    assert (a ** 4 + b ** 2).frobenius_root(1) == a ** 2 + b
    assert (a ** 2 + b).frobenius_root(1) is None
    assert (a * b + a).substitute({"a": SymPoly.one()}) == b + 1


def test_sympoly_coefficients_in_variable():
    a, t = symbols("a", "t")
    f = a * t ** 3 + t ** 3 + a ** 2
    coeffs = f.as_poly_in("t")
    assert coeffs[3] == a + 1
    assert coeffs[0] == a ** 2
    assert f.coefficient_in("t", 1).is_zero()


def test_case_ii_discriminant_coefficients():
    delta = symbolic_discriminant("case_ii")
    a, b, d, a2t_0 = symbols("a", "b", "d", "a2t_0")
    coeffs = delta.as_poly_in("t")
    assert coeffs[0] == b ** 4
    assert coeffs[4] == a ** 4
    assert 5 not in coeffs
    assert coeffs[6] == b ** 3
    assert coeffs[7] == a * b ** 2
    assert coeffs[8] == d ** 2 + a ** 2 * b
    assert coeffs[9] == a ** 3 + b ** 2 * a2t_0


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_char2_formula_matches_universal_discriminant(k):
    field = get_field(2, k)
    rng = random.Random(k)
    for _ in range(200):
        lists = [[rng.randrange(field.order) for _ in range(2 * w + 1)] for w in (1, 2, 3, 4, 6)]
        m = WeierstrassModel.from_lists(field, lists)
        assert discriminant(m) == universal_discriminant(m)


@pytest.mark.slow
def test_char2_formula_matches_universal_discriminant_many():
    rng = random.Random(2024)
    for _ in range(10_000):
        field = get_field(2, rng.randrange(1, 5))
        lists = [[rng.randrange(field.order) for _ in range(2 * w + 1)] for w in (1, 2, 3, 4, 6)]
        m = WeierstrassModel.from_lists(field, lists)
        assert discriminant(m) == universal_discriminant(m)


def test_family_templates_specialize_like_symbols(gf4):
    rng = random.Random(9)
    for name in FAMILY_NAMES:
        family = get_family(name)
        values = [rng.randrange(gf4.order) for _ in family.parameters]
        coefficients = get_template(name).specialize(values, gf4)
        assignment = dict(zip(family.parameters, values))
        for symbolic, concrete in zip(family.coefficients, coefficients):
            assert sym_specialize(symbolic, assignment, gf4) == concrete
        assert char2_discriminant(*coefficients) == sym_specialize(symbolic_discriminant(name), assignment, gf4)


def test_sym_specialize_errors(gf2, gf3):
    a, t = symbols("a", "t")
    with pytest.raises(SymbolicError):
        sym_specialize(a * t, {}, gf2)
    with pytest.raises(SymbolicError):
        sym_specialize(a * t, {"a": 1}, gf3)
    assert sym_specialize(a * t + 1, {"a": gf2.element(1)}) == UniPoly(gf2, [1, 1])


def test_impose_valuation_equations():
    delta = symbolic_discriminant("case_ii")
    system = impose_valuation(delta, "0", 5)
    assert [eq.label for eq in system.equations] == ["d0", "d4"]
    at_infinity = impose_valuation(delta, "inf", 1)
    assert [eq.label for eq in at_infinity.equations] == ["d24"]
    with pytest.raises(SymbolicError):
        impose_valuation(delta, "0", 25)
    with pytest.raises(SymbolicError):
        impose_valuation(delta, "2", 3)


def test_impose_valuation_at_one_translates():
    # (t+1)³ = t³ + t² + t + 1
    t = SymPoly.symbol("t")
    delta = t ** 3 + t ** 2 + t + 1 + SymPoly.symbol("x") * t ** 4
    system = impose_valuation(delta, "1", 3)
    # 平移后 Δ(t+1) = t³ + x·t⁴ + x
    assert [(eq.label, str(eq.poly)) for eq in system.equations] == [("e0", "x")]


def test_eliminate_simple_rules():
    a, b, c = symbols("a", "b", "c")
    system = ConstraintSystem(
        equations=[Equation("e0", b ** 4), Equation("e1", a + b * c), Equation("e2", c ** 2 + b)],
        universe=frozenset({"a", "b", "c"}),
    )
    verdict = eliminate(system)
    assert verdict.status == "all_parameters_killed"
    assert verdict.survivors == []
    (leaf,) = verdict.solved_leaves
    assert all(leaf.assignments[name].is_zero() for name in "abc")


def test_eliminate_branches_on_monomials():
    a, b = symbols("a", "b")
    system = ConstraintSystem(equations=[Equation("e0", a * b)], universe=frozenset({"a", "b"}))
    verdict = eliminate(system)
    assert verdict.status == "all_parameters_killed"
    assert [leaf.branch for leaf in verdict.solved_leaves] == ["root/a=0", "root/b=0"]
    assert verdict.survivors == ["a", "b"]
    assert verdict.branches_used == 2


def test_eliminate_detects_inconsistency():
    a = SymPoly.symbol("a")
    system = ConstraintSystem(equations=[Equation("e0", a), Equation("e1", a + 1)], universe=frozenset({"a"}))
    verdict = eliminate(system)
    assert not verdict.solved_leaves
    assert verdict.leaves[0].status == "inconsistent"


def test_eliminate_budget():
    a, b = symbols("a", "b")
    system = ConstraintSystem(equations=[Equation("e0", a * b)], universe=frozenset({"a", "b"}))
    with pytest.raises(SymbolicError):
        eliminate(system, budget=0)
    verdict = eliminate(system, budget=1)
    assert verdict.exhausted
    assert verdict.status == "residual"


def test_case_ii_small_valuation_at_zero_forces_a_b():
    verdict = eliminate(impose_valuation(symbolic_discriminant("case_ii"), "0", 5))
    assert verdict.status == "all_parameters_killed"
    for leaf in verdict.solved_leaves:
        assert leaf.assignments["a"].is_zero()
        assert leaf.assignments["b"].is_zero()


@pytest.mark.parametrize("n", [19, 20])
def test_case_ii_high_valuation_at_infinity_is_singular(n):
    delta = symbolic_discriminant("case_ii")
    verdict = eliminate(impose_valuation(delta, "inf", n))
    assert verdict.status == "all_parameters_killed"
    assert all(name.startswith("a2t_") for name in verdict.survivors)
    assert all(r.is_zero() for r in residual_discriminants(delta, verdict))


@pytest.mark.parametrize("n", [19, 20])
def test_case_iii_high_valuation_at_one_is_singular(n):
    delta = symbolic_discriminant("case_iii")
    verdict = eliminate(impose_valuation(delta, "1", n))
    assert verdict.status == "all_parameters_killed"
    assert all(name.startswith("a2_") for name in verdict.survivors)
    assert all(r.is_zero() for r in residual_discriminants(delta, verdict))


def test_case_iii_with_a_normalized_leaves_iii_star_shape():
    delta = symbolic_discriminant("case_iii").substitute({"a": SymPoly.one()})
    verdict = eliminate(impose_valuation(delta, "0", 20))
    assert verdict.status == "all_parameters_killed"
    e, c = symbols("a2_4", "c")
    for leaf, residual in zip(verdict.solved_leaves, residual_discriminants(delta, verdict)):
        coeffs = residual.as_poly_in("t")
        assert coeffs.get(20, SymPoly.zero()) == (e + c * c).substitute(leaf.assignments)
        assert coeffs[21].is_one()


def test_c4_of_general_model_is_a1_to_the_fourth():
    general = get_family("general_char2")
    a1 = general.coefficients[0]
    c4 = symbolic_c4("general_char2")
    assert c4 == a1 ** 4
    killed = c4.substitute({name: SymPoly.zero() for name in general.parameters if name.startswith("a1_")})
    assert killed.is_zero()


def _place(field, label: str) -> Place:
    return Place.infinity(field) if label == "inf" else Place(field, int(label))


def _evaluate_leaf(leaf, free_values, field):
    """把分支赋值在自由符号的取值上求值，得到全部参数的取值"""
    values = dict(free_values)
    for name, poly in leaf.assignments.items():
        values[name] = sym_specialize(poly, free_values, field).coefficient(0)
    return values


def _on_branch(leaf, values, field) -> bool:
    return all(
        sym_specialize(poly, values, field).coefficient(0) == values[name]
        for name, poly in leaf.assignments.items()
    )


@pytest.mark.parametrize("family,place,n", [("case_ii", "0", 9), ("case_iii", "0", 1), ("case_iii", "inf", 1)])
def test_every_high_valuation_tuple_lies_on_a_branch(family, place, n):
    field = get_field(2)
    delta = symbolic_discriminant(family)
    verdict = eliminate(impose_valuation(delta, place, n))
    leaves = [leaf for leaf in verdict.leaves if leaf.status != "inconsistent"]
    parameters = get_family(family).parameters
    rng = random.Random(n)
    hits = 0
    for _ in range(300):
        values = {name: rng.randrange(2) for name in parameters}
        specialized = sym_specialize(delta, values, field)
        if valuation(specialized, _place(field, place), 24) < n:
            continue
        hits += 1
        assert any(_on_branch(leaf, values, field) for leaf in leaves)
    assert hits > 10


@pytest.mark.parametrize("family,place,n", [("case_ii", "inf", 13), ("case_ii", "0", 9)])
def test_solved_branches_reach_the_imposed_valuation(family, place, n, gf4):
    delta = symbolic_discriminant(family)
    verdict = eliminate(impose_valuation(delta, place, n))
    assert verdict.solved_leaves
    parameters = get_family(family).parameters
    rng = random.Random(n)
    for leaf in verdict.solved_leaves:
        free = [name for name in parameters if name not in leaf.assignments]
        for _ in range(10):
            values = _evaluate_leaf(leaf, {name: rng.randrange(gf4.order) for name in free}, gf4)
            specialized = sym_specialize(delta, values, gf4)
            assert valuation(specialized, _place(gf4, place), 24) >= n
