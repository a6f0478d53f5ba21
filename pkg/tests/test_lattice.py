"""
格判别式、高度贡献、Artin 相容性与同余证明测试
"""
from fractions import Fraction

import pytest

from app.core.errors import LatticeInputError, ModelFormatError
from app.schemas.fibre import KodairaType
from app.schemas.lattice import LatticeConfig
from app.services.lattice_service import (
    artin_compatible,
    compatible_primes,
    congruence_proof,
    contribution,
    describe_artin,
    load_config,
    odd_prime_powers_mod8,
    root_discriminant,
    shioda_tate_discr,
)


def K(symbol: str) -> KodairaType:
    return KodairaType.parse(symbol)


@pytest.mark.parametrize(
    "symbol,value",
    [("I2", 2), ("I20", 20), ("I0*", 4), ("I16*", 4), ("IV", 3), ("III", 2), ("IV*", 3), ("III*", 2), ("II*", 1)],
)
def test_root_discriminants(symbol, value):
    assert root_discriminant(K(symbol)) == value


def test_irreducible_fibre_has_no_root_lattice():
    with pytest.raises(LatticeInputError):
        root_discriminant(K("I1"))
    with pytest.raises(LatticeInputError):
        root_discriminant(K("II"))


def test_multiplicative_contribution_is_symmetric():
    fibre = K("I20")
    for i in range(20):
        assert contribution(fibre, i) == contribution(fibre, (20 - i) % 20)
    assert contribution(fibre, 10) == 5
    assert contribution(fibre, 0) == 0


def test_star_and_exceptional_contributions():
    assert contribution(K("I15*"), "identity") == 0
    assert contribution(K("I15*"), "near") == 1
    assert contribution(K("I15*"), "far") == Fraction(19, 4)
    assert contribution(K("IV*"), 1) == Fraction(4, 3)
    assert contribution(K("III"), 1) == Fraction(1, 2)
    assert contribution(K("II"), None) == 0


@pytest.mark.parametrize("symbol,contact", [("I5", 5), ("I5", "far"), ("I3*", 2), ("II*", 1), ("IV", 3)])
def test_invalid_contacts(symbol, contact):
    with pytest.raises(LatticeInputError):
        contribution(K(symbol), contact)


def test_rank_zero_discriminants():
    assert shioda_tate_discr(LatticeConfig(fibres=["I20", "I2"])).value == 40
    assert shioda_tate_discr(LatticeConfig(fibres=["I20", "I2"], torsion_order=2)).value == 10
    assert shioda_tate_discr(LatticeConfig(fibres=["I21", "I1", "I1", "I1"])).value == 21
    assert shioda_tate_discr(LatticeConfig(fibres=["I16*"])).value == 4


def test_rank_one_discriminant():
    cfg = LatticeConfig(fibres=["I15*", "I1"], mw_rank=1, section_contact=["far", None], p_o=1)
    d = shioda_tate_discr(cfg)
    assert d.value == 5
    assert d.height == "5/4"
    assert not d.uses_extension
    cfg = LatticeConfig(fibres=["IV*", "I1"], mw_rank=1, section_contact=[1, None], p_o=0)
    d = shioda_tate_discr(cfg)
    assert d.value == 3 * (4 - Fraction(4, 3))
    assert d.uses_extension


def test_rank_one_errors():
    with pytest.raises(LatticeInputError):
        shioda_tate_discr(LatticeConfig(fibres=["I15*"], mw_rank=1))
    with pytest.raises(LatticeInputError):
        shioda_tate_discr(LatticeConfig(fibres=["I16*"], mw_rank=1, section_contact=["far"], p_o=0))


def test_config_validation():
    with pytest.raises(LatticeInputError):
        LatticeConfig(fibres=["I20"], section_contact=[0])
    with pytest.raises(LatticeInputError):
        LatticeConfig(fibres=["I20", "I2"], mw_rank=1, section_contact=[0], p_o=0)
    with pytest.raises(LatticeInputError):
        LatticeConfig(fibres=["J3"])


def test_artin_compatibility():
    cert = artin_compatible(4, 2)
    assert cert.compatible and (cert.sigma0, cert.k) == (1, 0)
    cert = artin_compatible(16, 2)
    assert (cert.sigma0, cert.k) == (2, 0)
    cert = artin_compatible(1, 3)
    assert cert.compatible and (cert.sigma0, cert.k) == (1, 1)
    assert not artin_compatible(8, 2).compatible
    assert not artin_compatible(40, 2).compatible
    assert not artin_compatible(Fraction(5, 4), 5).compatible
    assert not artin_compatible(0, 3).compatible
    assert [c.p for c in compatible_primes(4)] == [2]
    assert compatible_primes(40) == []
    assert compatible_primes(1) == []


def test_describe_artin(fixture_path):
    i16 = shioda_tate_discr(load_config(fixture_path("i16star.cfg")))
    assert describe_artin(i16) == "|discr| = 4 (up to 2^{2k}); artin: compatible only for p=2, σ₀=1"
    far = shioda_tate_discr(load_config(fixture_path("i15star_far.cfg")))
    assert far.value == 5
    assert describe_artin(far).startswith("|discr| = 5 (up to p^{2k}); artin: incompatible for every p")
    i20 = shioda_tate_discr(load_config(fixture_path("i20_i2.cfg")))
    assert "incompatible for every p" in describe_artin(i20)


def test_odd_prime_powers_mod8():
    table = odd_prime_powers_mod8(4)
    assert len(table) == 16
    assert all(value == 1 for _, _, value in table)


@pytest.mark.parametrize("scenario,cases", [("I20_odd_char", 20 * 11), ("I15star_far_odd_char", 3 * 11)])
def test_congruence_proofs_exclude_everything(scenario, cases):
    proof = congruence_proof(scenario)
    assert proof.cases == cases
    assert proof.all_excluded
    assert sum(line.startswith("[EXCLUDED]") for line in proof.lines) == cases


def test_i15star_far_residue_is_five():
    proof = congruence_proof("I15star_far_odd_char")
    far = [line for line in proof.lines if line.startswith("[EXCLUDED] far")]
    assert all("≡ 5 mod 8" in line for line in far)


def test_unknown_scenario():
    with pytest.raises(LatticeInputError):
        congruence_proof("I21")


def test_load_config_errors(tmp_path):
    with pytest.raises(ModelFormatError):
        load_config(tmp_path / "missing.cfg")
    broken = tmp_path / "broken.cfg"
    broken.write_text('{"fibres": [\n', encoding="utf-8")
    with pytest.raises(ModelFormatError) as exc:
        load_config(broken)
    assert exc.value.line == 2
    invalid = tmp_path / "invalid.cfg"
    invalid.write_text('{"fibres": ["I20"], "torsion_order": 0}', encoding="utf-8")
    with pytest.raises(LatticeInputError):
        load_config(invalid)
