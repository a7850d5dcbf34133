import json
from fractions import Fraction as F

import pytest

from eulercount.chain import MixingReport, mixing_report
from eulercount.config import CONFIG_ENV, RunConfig, calibrated_constant, load_config
from eulercount.counting import count_vr
from eulercount.gadgets import build_xyy
from eulercount.report import render_csv, render_json, render_report
from eulercount.signature import Signature


def test_signature_rendering():
    out = json.loads(render_report(Signature(F(1, 2), F(1, 4), F(1, 4))))
    assert (out["alpha"], out["beta"], out["gamma"]) == ("1/2", "1/4", "1/4")
    assert out["alpha_float"] == 0.5


def test_keys_sorted_and_stable():
    t = count_vr(build_xyy(3))
    a, b = render_report(t), render_report(count_vr(build_xyy(3)))
    assert a == b
    assert a == json.dumps(json.loads(a), sort_keys=True, separators=(",", ":"))


def test_big_counts_are_strings():
    out = json.loads(render_json({"count": 3 ** 80, "small": 7}))
    assert out["count"] == str(3 ** 80) and out["small"] == 7


def test_mixing_report_round_trip():
    rep = mixing_report(3, 0.1, 0.5)
    assert MixingReport.from_dict(json.loads(render_report(rep))) == rep


def test_csv_table():
    text = render_report(count_vr(build_xyy(2)), fmt="csv")
    lines = text.strip().splitlines()
    assert lines[0] == "type,count" and len(lines) == 4


def test_csv_rows():
    text = render_csv([{"alpha": F(1, 3), "class": "inside"}], ["alpha", "class"])
    assert text.splitlines()[1] == "1/3,inside"


def test_unknown_format():
    with pytest.raises(ValueError):
        render_report({}, fmt="xml")


class TestConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.precision == 128 and cfg.tol == 2.0 ** -64 and cfg.seed == 0 and cfg.budget == 24
        assert cfg.threads >= 1
        assert cfg.C == calibrated_constant()

    def test_file_then_overrides(self, tmp_path, monkeypatch):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"seed": 5, "precision": 256}))
        monkeypatch.setenv(CONFIG_ENV, str(path))
        cfg = load_config(seed=9)
        assert cfg.precision == 256 and cfg.seed == 9

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"colour": "red"}))
        with pytest.raises(ValueError, match="unknown"):
            load_config(str(path))

    def test_positive(self):
        with pytest.raises(ValueError):
            RunConfig(threads=0)
        with pytest.raises(ValueError):
            RunConfig(tol=0)
