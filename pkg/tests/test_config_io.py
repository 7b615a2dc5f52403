import json
import math

import pytest

from sideband_stats import IdealParams, SystemParams
from sideband_stats.config import load_config
from sideband_stats.errors import ConfigError
from sideband_stats.io import csv_text, format_value, json_text, read_csv


def _write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestLoadConfig:
    def test_ideal_block(self, tmp_path):
        cfg = load_config(_write(tmp_path, "[ideal]\nbeta = 1.0\nn_m = 0.5\n"))
        assert cfg.mode == "ideal"
        assert cfg.params == IdealParams(1.0, 0.5, 0.05, 1.0)

    def test_physical_cooperativity_form(self, tmp_path):
        text = "[physical]\ngamma = 0.005\nomega_m = 4.0\ndelta = 0.05\nc_r = 20.0\nbeta = 0.25\nn_th = 0.5\n"
        cfg = load_config(_write(tmp_path, text))
        assert isinstance(cfg.params, SystemParams)
        assert cfg.params.beta == pytest.approx(0.25)

    def test_overrides_win(self, tmp_path):
        cfg = load_config(_write(tmp_path, "[ideal]\nbeta = 1.0\nn_m = 0.5\n"), {"n_m": 0.1, "delta": 2.0})
        assert (cfg.params.n_m, cfg.params.delta) == (0.1, 2.0)

    def test_flags_only(self):
        assert load_config(None, {"beta": 0.3, "n_m": 0.2}).params.beta == 0.3

    @pytest.mark.parametrize("text", [
        "[ideal]\nbeta = 1.0\nn_m = 0.5\n[physical]\ngamma = 1.0\n",
        "[ideal]\nbeta = 1.0\n",
        "[ideal]\nbeta = 1.0\nn_m = 0.5\ncolour = 2\n",
        "[plot]\nx = 1\n",
        "[ideal]\nbeta = 1.0\nn_m = -0.5\n",
        "[ideal]\nbeta = 1.0\nn_m = 0.5\n[tolerances]\noracle_rel = 0.0\n",
        "[physical]\ngamma = 0.1\nomega_m = 4.0\ndelta = 0.05\ng_r = 0.1\nc_r = 2.0\n",
        "[ideal]\nbeta = 1.0\nn_m = 0.5\n[scan]\ncriterion = \"k7\"\n",
        "[ideal\nbeta = 1.0\n",
    ])
    def test_rejects(self, tmp_path, text):
        with pytest.raises(ConfigError):
            load_config(_write(tmp_path, text))

    def test_missing_params(self):
        with pytest.raises(ConfigError):
            load_config(None, {})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "absent.toml"))

    def test_nm_flag_on_physical(self, tmp_path):
        text = "[physical]\ngamma = 0.005\nomega_m = 4.0\ndelta = 0.05\nc_r = 20.0\nbeta = 0.25\n"
        with pytest.raises(ConfigError):
            load_config(_write(tmp_path, text), {"n_m": 0.3})


class TestHash:
    def test_defaults_are_hashed(self, tmp_path):
        bare = load_config(_write(tmp_path, "[ideal]\nbeta = 1.0\nn_m = 0.5\n"))
        spelled = load_config(_write(tmp_path, "[ideal]\nbeta = 1.0\nn_m = 0.5\ngamma_eff = 0.05\n"
                                               "[scan]\npoints = 401\n", "b.toml"))
        assert bare.config_hash == spelled.config_hash

    def test_output_path_not_hashed(self, tmp_path):
        a = load_config(None, {"beta": 1.0, "n_m": 0.5})
        b = load_config(None, {"beta": 1.0, "n_m": 0.5, "out": str(tmp_path / "x.csv")})
        assert a.config_hash == b.config_hash

    def test_parameter_change_changes_hash(self):
        a = load_config(None, {"beta": 1.0, "n_m": 0.5})
        b = load_config(None, {"beta": 1.0, "n_m": 0.50001})
        assert a.config_hash != b.config_hash


class TestIO:
    def test_float_round_trip(self):
        x = 0.1 + 0.2
        assert float(format_value(x)) == x
        assert format_value(True) == "true" and format_value(None) == ""

    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text(csv_text(["a", "b"], [(1.0 / 3.0, "x")], "abc"))
        h, header, rows = read_csv(path)
        assert (h, header) == ("abc", ["a", "b"])
        assert rows == [[1.0 / 3.0, "x"]]

    def test_csv_width_checked(self):
        with pytest.raises(ValueError):
            csv_text(["a", "b"], [(1.0,)], "h")

    def test_json_nan_and_complex(self):
        data = json.loads(json_text({"v": math.nan, "z": 1 + 2j}, "h"))
        assert data == {"config_hash": "h", "data": {"v": None, "z": [1.0, 2.0]}}
