import enum
import logging
import os
import typing

from PyQt6.QtCore import QSettings

APP_NAME = "DomainMasker"


class Settings:
    """Flat `key = value` run configuration read from an INI file."""

    def __init__(self, path: str):
        if not os.path.isfile(path):
            raise FileNotFoundError(f"Config file not found: {path}")
        self.settings = QSettings(path, QSettings.Format.IniFormat)
        self.settings.sync()
        if self.settings.status() != QSettings.Status.NoError:
            raise ValueError(f"Could not parse config file: {path}")
        logging.debug("settings filename: %s", self.settings.fileName())

    class Key(enum.Enum):
        LR = "lr"
        BATCH_SIZE = "batch-size"
        EPOCHS = "epochs"
        LAMBDA_DS = "lambda-ds"
        LAMBDA_DP = "lambda-dp"
        GAMMA = "gamma"
        GAMMA_SS = "gamma-ss"
        GAMMA_SP = "gamma-sp"
        LAMBDA_REG = "lambda-reg"
        PHASE1_STEPS = "phase1-steps"
        PHASE2_STEPS = "phase2-steps"
        MAX_LEN = "max-len"
        SEED = "seed"
        MODE = "mode"
        TARGET = "target"
        DESCRIPTOR_DIM = "descriptor-dim"
        HIDDEN_DIM = "hidden-dim"
        LAYERS = "layers"
        HEADS = "heads"
        FF_DIM = "ff-dim"
        DROPOUT = "dropout"
        TEMPERATURE = "temperature"
        GRAD_CLIP = "grad-clip"
        OPTIMIZER = "optimizer"
        MIN_FREQ = "min-freq"
        DATA_DIR = "data-dir"
        LEXICON_DIR = "lexicon-dir"
        DISABLE = "disable"

        SYNTH_DOMAINS = "synth-domains"
        SYNTH_EXAMPLES = "synth-examples"
        SYNTH_MARKER_VOCAB = "synth-marker-vocab"
        SYNTH_SENTIMENT_WORDS = "synth-sentiment-words"
        SYNTH_FILLERS = "synth-fillers"
        SYNTH_MIN_LEN = "synth-min-len"
        SYNTH_MAX_LEN = "synth-max-len"
        SYNTH_MARKERS = "synth-markers"

    def contains(self, key: Key) -> bool:
        return self.settings.contains(key.value)

    def value(self, key: Key, default_value: typing.Any = None) -> typing.Any:
        """Raw string value of `key`. QSettings splits unquoted commas into a
        list; those are joined back."""
        value = self.settings.value(key.value, default_value)
        if isinstance(value, list):
            return ",".join(str(item) for item in value)
        return value

    def unknown_keys(self) -> typing.List[str]:
        known = {key.value for key in Settings.Key}
        return sorted(key for key in self.settings.allKeys() if key not in known)

    def values(self) -> typing.Dict["Settings.Key", str]:
        return {
            key: str(self.value(key)) for key in Settings.Key if self.contains(key)
        }
