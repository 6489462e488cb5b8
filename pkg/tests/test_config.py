import json

import pytest

from mppencode import config
from mppencode.config import default_map, load_config


class TestLoadConfig:
    def test_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"seed": 4, "cluster": {"eps": 0.9}}))
        assert load_config(str(path)) == {"seed": 4, "cluster": {"eps": 0.9}}

    def test_missing_default_is_empty(self, tmp_path, monkeypatch):
        missing = str(tmp_path / "nowhere" / "config.json")
        monkeypatch.setattr(config, "default_config_path", lambda: missing)
        assert load_config() == {}

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{seed: 4")
        with pytest.raises(ValueError, match="not valid JSON"):
            load_config(str(path))

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("[1, 2]")
        with pytest.raises(ValueError, match="JSON object"):
            load_config(str(path))

    def test_default_path(self):
        assert config.default_config_path().endswith(config.CONFIG_FILENAME)


class TestDefaultMap:
    def test_sections_override_shared_keys(self):
        loaded = {"seed": 1, "min-pts": 3, "cluster": {"seed": 2}}
        maps = default_map(loaded, ["cluster", "encode"])
        assert maps["cluster"] == {"seed": 2, "min_pts": 3}
        assert maps["encode"] == {"seed": 1, "min_pts": 3}

    def test_bad_section(self):
        with pytest.raises(ValueError):
            default_map({"cluster": 5}, ["cluster"])
