import io
import json
import logging

import pytest

from posreal.config import DEFAULT_CONFIG, Config, load_config
from posreal.errors import ConfigError
from posreal.logging_setup import configure_logging


def test_defaults():
    assert DEFAULT_CONFIG.feas_tol == 1e-9
    assert DEFAULT_CONFIG.n_max == 64
    assert DEFAULT_CONFIG.horizon_for(3) == 100
    assert DEFAULT_CONFIG.horizon_for(10) == 200


def test_positivity_horizon_override():
    assert Config(positivity_horizon=30).horizon_for(10) == 30


def test_load_from_file(tmp_path):
    path = tmp_path / "posreal.env"
    path.write_text("FEAS_TOL=1e-8\nPOSREAL_N_MAX=96\n")
    config = load_config(str(path))
    assert config.feas_tol == 1e-8
    assert config.n_max == 96


def test_env_var_selects_file(tmp_path, monkeypatch):
    path = tmp_path / "custom.env"
    path.write_text("grid_steps=51\n")
    monkeypatch.setenv("POSREAL_CONFIG", str(path))
    assert load_config().grid_steps == 51


def test_overrides_win(tmp_path):
    path = tmp_path / "posreal.env"
    path.write_text("N_MAX=96\n")
    assert load_config(str(path), {"n_max": "12"}).n_max == 12


@pytest.mark.parametrize("content", ["UNKNOWN_KEY=1\n", "FEAS_TOL=-1\n", "N_MAX=abc\n"])
def test_invalid_file(tmp_path, content):
    path = tmp_path / "bad.env"
    path.write_text(content)
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/posreal.env")


def test_with_overrides_validates():
    assert DEFAULT_CONFIG.with_overrides(workers=4).workers == 4
    with pytest.raises(ConfigError):
        DEFAULT_CONFIG.with_overrides(workers=0)


def test_json_logging_includes_extra_data():
    stream = io.StringIO()
    logger = configure_logging("INFO", stream=stream)
    # Un segundo llamado no duplica el handler
    configure_logging("INFO", stream=stream)
    logging.getLogger("posreal.test").info("certificado", extra={"extra_data": {"N": 5}})
    lines = stream.getvalue().strip().splitlines()
    assert len(lines) == 1
    record = json.loads(lines[0])
    assert record["message"] == "certificado"
    assert record["N"] == 5
    assert record["level"] == "INFO"
    assert sum(getattr(h, "_posreal_json", False) for h in logger.handlers) == 1
    configure_logging("WARNING")
