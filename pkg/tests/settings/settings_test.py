import pathlib

import pytest

from masker.settings.settings import Settings


class TestSettings:
    def test_should_read_flat_values(self, tmp_path: pathlib.Path):
        path = tmp_path / "run.ini"
        path.write_text("lr = 0.01\nmode = cross-domain\n", encoding="utf-8")

        settings = Settings(str(path))

        assert settings.contains(Settings.Key.LR)
        assert not settings.contains(Settings.Key.SEED)
        assert settings.values() == {Settings.Key.LR: "0.01", Settings.Key.MODE: "cross-domain"}

    def test_should_join_comma_separated_values(self, tmp_path: pathlib.Path):
        path = tmp_path / "run.ini"
        path.write_text("disable = shared-mask,private-mask\n", encoding="utf-8")

        assert Settings(str(path)).value(Settings.Key.DISABLE) == "shared-mask,private-mask"

    def test_should_list_unknown_keys(self, tmp_path: pathlib.Path):
        path = tmp_path / "run.ini"
        path.write_text("lr = 0.01\nwarmup = 10\n", encoding="utf-8")

        assert Settings(str(path)).unknown_keys() == ["warmup"]

    def test_should_reject_missing_file(self, tmp_path: pathlib.Path):
        with pytest.raises(FileNotFoundError):
            Settings(str(tmp_path / "missing.ini"))
