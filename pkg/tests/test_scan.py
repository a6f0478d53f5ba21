"""
参数族扫描测试
"""
from pathlib import Path

import pytest

from app.core.errors import FieldTooLargeError, SymbolicError
from app.services.scan_service import ChunkResult, _better, _digits, scan_service
from app.services.tate_service import classify_all
from app.services.weierstrass_service import load_model
from app.utils.field import get_field

# 固定 a6 = 0 的 case_ii 子族：8 个自由参数，共 256 个元组
_NO_A6 = {f"a6_{j}": 0 for j in range(13)}


def test_digits_are_big_endian():
    assert _digits(6, 2, 4) == [0, 1, 1, 0]
    assert _digits(5, 4, 2) == [1, 1]


def test_better_prefers_value_then_smaller_index():
    a = (18, 5, "I18", ())
    b = (18, 3, "I18", ())
    c = (17, 0, "I17", ())
    assert _better(a, b) == b
    assert _better(c, a) == a
    assert _better(None, c) == c
    merged = ChunkResult(tested=2, best_multiplicative=a).merge(ChunkResult(tested=3, best_multiplicative=b))
    assert merged.tested == 5
    assert merged.best_multiplicative == b


def test_restricted_case_ii_scan_reaches_i18():
    field = get_field(2)
    report = scan_service.scan_family_sync("case_ii", field, target="max_multiplicative", fixed=_NO_A6)
    assert report.mode == "exhaustive"
    assert report.total == report.tested == 256
    assert report.max_multiplicative == 18
    witness = report.max_multiplicative_witness
    assert "I18" in witness.configuration
    model = scan_service.witness_model("case_ii", field, witness)
    assert classify_all(model).max_multiplicative == 18


def test_freeze_writes_reloadable_witness(isolated_dirs):
    field = get_field(2)
    report = scan_service.scan_family_sync(
        "case_ii", field, target="max_multiplicative", fixed=_NO_A6, freeze=True
    )
    path = Path(report.max_multiplicative_witness.path)
    assert path.parent == isolated_dirs / "witnesses"
    assert path.name == "case_ii_2^1_I18.model"
    reloaded = load_model(path)
    assert classify_all(reloaded).max_multiplicative == 18
    assert path.read_text(encoding="utf-8").startswith("# case_ii 元组 #")


def test_parallel_scan_matches_serial():
    field = get_field(2)
    kwargs = dict(exhaustive=True, min_valuation=0)
    serial = scan_service.scan_family_sync("case_iii_star", field, jobs=1, **kwargs)
    parallel = scan_service.scan_family_sync("case_iii_star", field, jobs=2, **kwargs)
    assert parallel.jobs == 2
    assert serial.model_dump(exclude={"jobs"}) == parallel.model_dump(exclude={"jobs"})
    assert serial.tested == 32


def test_sampled_scan():
    report = scan_service.scan_family_sync(
        "case_iii_star", get_field(2, 2), exhaustive=False, sample_size=10, seed=1, min_valuation=0
    )
    assert report.mode == "sampled"
    assert report.tested == 10
    assert report.total == 4 ** 5


def test_collect_records_matching_tuples():
    report = scan_service.scan_family_sync(
        "case_iii_star", get_field(2), exhaustive=True, min_valuation=0, collect="I13*"
    )
    assert all(item.symbol == "I13*" for item in report.collected)
    assert all("I13*" in item.configuration for item in report.collected)


def test_scan_errors():
    with pytest.raises(FieldTooLargeError):
        scan_service.scan_family_sync("case_iii_star", get_field(2, 5), exhaustive=True)
    with pytest.raises(SymbolicError):
        scan_service.scan_family_sync("case_iii_star", get_field(3))
    with pytest.raises(SymbolicError):
        scan_service.scan_family_sync("case_iii_star", get_field(2), fixed={"z": 0})
    with pytest.raises(SymbolicError):
        scan_service.scan_family_sync("no_such_family", get_field(2))


def test_restricted_case_iii_scan_stays_below_i19():
    fixed = {"a": 1, **_NO_A6}
    report = scan_service.scan_family_sync("case_iii", get_field(2), target="max_multiplicative", fixed=fixed)
    assert report.mode == "exhaustive"
    assert report.total == report.tested == 256
    assert report.max_multiplicative < 19


def test_additive_maximum_grows_with_the_field_but_stops_at_i13_star():
    kwargs = dict(target="max_additive", exhaustive=True, min_valuation=0)
    small = scan_service.scan_family_sync("case_iii_star", get_field(2), **kwargs)
    large = scan_service.scan_family_sync("case_iii_star", get_field(2, 2), **kwargs)
    assert small.max_additive_components <= large.max_additive_components <= 18


@pytest.mark.slow
def test_full_case_ii_scan_reaches_exactly_i18():
    report = scan_service.scan_family_sync(
        "case_ii", get_field(2), target="max_multiplicative", exhaustive=True, jobs=4
    )
    assert report.total == report.tested == 1 << 21
    assert report.max_multiplicative == 18


@pytest.mark.slow
def test_full_case_iii_scan_with_normalized_a_stays_below_i19():
    report = scan_service.scan_family_sync(
        "case_iii", get_field(2), target="max_multiplicative", exhaustive=True, fixed={"a": 1}, jobs=4
    )
    assert report.total == report.tested == 1 << 21
    assert report.max_multiplicative <= 18
