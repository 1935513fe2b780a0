import pathlib

import pytest

from masker.settings.settings import Settings
from masker.train.config import (
    Mode,
    Optimizer,
    TrainConfig,
    config_fingerprint,
    default_value,
    resolve_config,
)


def write_config(tmp_path: pathlib.Path, text: str) -> str:
    path = tmp_path / "run.ini"
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestResolveConfig:
    def test_should_use_defaults(self):
        config = resolve_config()

        assert config.lr == 0.0003
        assert config.batch_size == 8
        assert config.epochs == 15
        assert (config.phase1_steps, config.phase2_steps) == (2000, 3000)
        assert config.optimizer == Optimizer.SGD
        assert config.mode == Mode.MULTI_DOMAIN

    def test_should_prefer_flags_over_file_over_defaults(self, tmp_path: pathlib.Path):
        path = write_config(tmp_path, "lr = 0.01\nbatch-size = 4\n")

        config = resolve_config(path, {Settings.Key.LR: "0.5"})

        assert config.lr == 0.5
        assert config.batch_size == 4
        assert config.epochs == 15

    def test_should_read_nested_and_list_values(self, tmp_path: pathlib.Path):
        path = write_config(
            tmp_path,
            "hidden-dim = 32\nlambda-ds = 0.01\ndisable = shared-mask, private-mask\nsynth-domains = 4\nseed = 9\n",
        )

        config = resolve_config(path)

        assert config.encoder.hidden_dim == 32
        assert config.weights.lambda_ds == 0.01
        assert config.disable == ["shared-mask", "private-mask"]
        assert config.synthetic.domains == 4
        assert config.synthetic.seed == 9

    def test_should_reject_unknown_keys(self, tmp_path: pathlib.Path):
        path = write_config(tmp_path, "learning-rate = 0.1\n")

        with pytest.raises(ValueError):
            resolve_config(path)

    def test_should_reject_missing_file(self, tmp_path: pathlib.Path):
        with pytest.raises(FileNotFoundError):
            resolve_config(str(tmp_path / "missing.ini"))

    @pytest.mark.parametrize(
        "overrides",
        [
            {Settings.Key.LR: "fast"},
            {Settings.Key.BATCH_SIZE: "0"},
            {Settings.Key.MODE: "single-domain"},
            {Settings.Key.MODE: "cross-domain"},
            {Settings.Key.TARGET: "books"},
            {Settings.Key.DISABLE: "everything"},
            {Settings.Key.LAMBDA_DS: "-1"},
        ],
    )
    def test_should_reject_invalid_values(self, overrides):
        with pytest.raises(ValueError):
            resolve_config(None, overrides)

    def test_should_accept_cross_domain_target(self):
        config = resolve_config(
            None, {Settings.Key.MODE: "cross-domain", Settings.Key.TARGET: "dvd"}
        )

        assert config.mode == Mode.CROSS_DOMAIN
        assert config.target == "dvd"


class TestDefaultValue:
    def test_should_format_defaults_for_help(self):
        assert default_value(Settings.Key.LR) == "0.0003"
        assert default_value(Settings.Key.MODE) == "multi-domain"
        assert default_value(Settings.Key.TARGET) == ""


class TestConfigFingerprint:
    def test_should_identify_equal_configs(self):
        assert config_fingerprint(TrainConfig()) == config_fingerprint(TrainConfig())
        assert len(config_fingerprint(TrainConfig())) == 12

    def test_should_change_with_any_value(self):
        assert config_fingerprint(TrainConfig()) != config_fingerprint(TrainConfig(lr=0.001))

    def test_should_round_trip_through_json(self):
        config = TrainConfig(mode=Mode.CROSS_DOMAIN, target="dvd", disable=["shared-part"])

        assert TrainConfig.from_json(config.to_json()) == config


CONFIGS_DIR = pathlib.Path(__file__).parent.parent.parent / "configs"


class TestBundledPresets:
    def test_should_use_published_sequence_length_for_full_size_preset(self):
        config = resolve_config(str(CONFIGS_DIR / "multi-domain.ini"))

        assert config.max_len == 128
        assert config.optimizer == Optimizer.SGD
        assert config.mode == Mode.MULTI_DOMAIN

    def test_should_load_synthetic_preset(self):
        config = resolve_config(str(CONFIGS_DIR / "synthetic.ini"))

        assert config.optimizer == Optimizer.ADAM
        assert config.seed == config.synthetic.seed == 7
