"""
命令行前端测试
"""
import json
import logging
import sys

import pytest

from app.cli.router import main, run
from app.core.config import settings


def test_classify_prints_table(capsys, fixture_path):
    code = main(["classify", str(fixture_path("char3_i14star.model"))])
    out = capsys.readouterr().out
    assert code == 0
    assert "place | type | vΔ | m | δ" in out
    assert "s=0 | I14* | 20 | 19 | 0" in out
    assert "K3: yes" in out


def test_classify_json(capsys, fixture_path):
    assert main(["classify", str(fixture_path("char2_i18_witness.model")), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["configuration"] == ["I2", "I2", "I2", "I18"]
    assert payload["k3"]["value"] is True


def test_classify_malformed_model(capsys, tmp_path):
    bad = tmp_path / "bad.model"
    bad.write_text("char=2\nfoo\n", encoding="utf-8")
    code = main(["classify", str(bad)])
    out = capsys.readouterr().out
    assert code == 2
    assert out.startswith("error: 第 2 行")


def test_lattice_from_fixture_dir(capsys):
    assert main(["lattice", "--config", "i16star.cfg"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "|discr| = 4 (up to 2^{2k}); artin: compatible only for p=2, σ₀=1"


def test_verify_congruences(capsys, isolated_dirs):
    code = main(["verify", "congruences"])
    out = capsys.readouterr().out
    assert code == 0
    assert "verify congruences: PASS" in out
    assert (isolated_dirs / "transcripts" / "congruences.txt").exists()


def test_verify_corollary_skipped_exits_zero(capsys):
    assert main(["verify", "corollary"]) == 0
    assert "verify corollary: SKIPPED" in capsys.readouterr().out


def test_scan_small_family(capsys, isolated_dirs):
    code = main(["scan", "--family", "case_iii_star", "--exhaustive", "--min-valuation", "0", "--no-freeze"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("case_iii_star over ")
    assert not (isolated_dirs / "witnesses").exists()


def test_scan_bad_fix(capsys):
    assert main(["scan", "--family", "case_ii", "--fix", "a"]) == 2
    assert "error:" in capsys.readouterr().out


def test_bad_arguments():
    assert main(["frobnicate"]) == 2
    assert main([]) == 2
    assert main(["verify", "thm99"]) == 2


def test_console_entry_configures_logging(monkeypatch, capsys):
    root = logging.getLogger()
    saved = (root.handlers[:], root.level)
    monkeypatch.setattr(sys, "argv", ["k3-fibre-toolkit", "lattice", "--config", "i16star.cfg"])
    try:
        with pytest.raises(SystemExit) as exc:
            run()
        assert exc.value.code == 0
        assert any(isinstance(h, logging.StreamHandler) and h.stream is sys.stderr for h in root.handlers)
        assert root.level == logging.getLevelName(settings.log_level.upper())
    finally:
        root.handlers[:] = saved[0]
        root.setLevel(saved[1])
    assert capsys.readouterr().out.startswith("|discr| = 4")
