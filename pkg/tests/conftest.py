"""
测试共享夹具
"""
from pathlib import Path

import pytest

from app.core.config import settings
from app.services.weierstrass_service import WeierstrassModel, load_model
from app.utils.field import QQ, get_field

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(autouse=True)
def isolated_dirs(tmp_path, monkeypatch):
    """夹具从仓库读取，见证与记录写到临时目录"""
    monkeypatch.setattr(settings, "fixture_dir", str(FIXTURES))
    monkeypatch.setattr(settings, "witness_dir", str(tmp_path / "witnesses"))
    monkeypatch.setattr(settings, "transcript_dir", str(tmp_path / "transcripts"))
    return tmp_path


@pytest.fixture
def gf2():
    return get_field(2)


@pytest.fixture
def gf3():
    return get_field(3)


@pytest.fixture
def gf4():
    return get_field(2, 2)


@pytest.fixture
def fixture_path():
    return lambda name: FIXTURES / name


@pytest.fixture
def char3_model():
    return load_model(FIXTURES / "char3_i14star.model")


@pytest.fixture
def i18_witness():
    return load_model(FIXTURES / "char2_i18_witness.model")


@pytest.fixture
def constant_curve():
    """y² = x³ + 1 over Q"""
    return WeierstrassModel.from_lists(QQ, [[], [], [], [], [1]])
