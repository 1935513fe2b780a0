import enum
import hashlib
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from dataclasses_json import dataclass_json

from masker.classify.losses import LossWeights
from masker.data.synthetic import SyntheticSpec
from masker.encoder.encoder import EncoderConfig
from masker.model import DISABLED_LEXICON, Ablation, parse_ablations
from masker.settings.settings import Settings


class Mode(enum.Enum):
    MULTI_DOMAIN = "multi-domain"
    CROSS_DOMAIN = "cross-domain"


class Optimizer(enum.Enum):
    SGD = "sgd"
    ADAM = "adam"


@dataclass_json
@dataclass
class TrainConfig:
    lr: float = 0.0003
    batch_size: int = 8
    epochs: int = 15
    weights: LossWeights = field(default_factory=LossWeights)
    phase1_steps: int = 2000
    phase2_steps: int = 3000
    seed: int = 0
    mode: Mode = Mode.MULTI_DOMAIN
    target: Optional[str] = None
    descriptor_dim: int = 200
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    disable: List[str] = field(default_factory=list)
    temperature: float = 1.0
    grad_clip: float = 5.0
    optimizer: Optimizer = Optimizer.SGD
    min_freq: int = 1
    data_dir: Optional[str] = None
    lexicon_dir: Optional[str] = None
    synthetic: SyntheticSpec = field(default_factory=SyntheticSpec)

    @property
    def max_len(self) -> int:
        return self.encoder.max_len

    @property
    def ablations(self):
        return parse_ablations(self.disable)

    @property
    def disabled_lexicons(self) -> Tuple[str, ...]:
        return tuple(
            DISABLED_LEXICON[ablation]
            for ablation in sorted(self.ablations, key=lambda a: a.value)
            if ablation in DISABLED_LEXICON
        )

    def validate(self):
        for name in ("batch_size", "epochs", "descriptor_dim", "min_freq"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("phase1_steps", "phase2_steps", "grad_clip"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must not be negative, got {getattr(self, name)}")
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if self.temperature <= 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if not 0 <= self.encoder.dropout < 1:
            raise ValueError(f"dropout must be in [0, 1), got {self.encoder.dropout}")
        if self.mode == Mode.CROSS_DOMAIN and not self.target:
            raise ValueError("target is required in cross-domain mode")
        if self.mode == Mode.MULTI_DOMAIN and self.target:
            raise ValueError("target is only allowed in cross-domain mode")
        self.weights.validate()
        parse_ablations(self.disable)


def parse_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip() != ""]


def parse_optional(value: str) -> Optional[str]:
    return value if value != "" else None


# key -> (dotted attribute path on TrainConfig, converter)
KEY_FIELDS: Dict[Settings.Key, Tuple[str, Callable[[str], Any]]] = {
    Settings.Key.LR: ("lr", float),
    Settings.Key.BATCH_SIZE: ("batch_size", int),
    Settings.Key.EPOCHS: ("epochs", int),
    Settings.Key.LAMBDA_DS: ("weights.lambda_ds", float),
    Settings.Key.LAMBDA_DP: ("weights.lambda_dp", float),
    Settings.Key.GAMMA: ("weights.gamma", float),
    Settings.Key.GAMMA_SS: ("weights.gamma_ss", float),
    Settings.Key.GAMMA_SP: ("weights.gamma_sp", float),
    Settings.Key.LAMBDA_REG: ("weights.lambda_reg", float),
    Settings.Key.PHASE1_STEPS: ("phase1_steps", int),
    Settings.Key.PHASE2_STEPS: ("phase2_steps", int),
    Settings.Key.MAX_LEN: ("encoder.max_len", int),
    Settings.Key.SEED: ("seed", int),
    Settings.Key.MODE: ("mode", Mode),
    Settings.Key.TARGET: ("target", parse_optional),
    Settings.Key.DESCRIPTOR_DIM: ("descriptor_dim", int),
    Settings.Key.HIDDEN_DIM: ("encoder.hidden_dim", int),
    Settings.Key.LAYERS: ("encoder.layers", int),
    Settings.Key.HEADS: ("encoder.heads", int),
    Settings.Key.FF_DIM: ("encoder.ff_dim", int),
    Settings.Key.DROPOUT: ("encoder.dropout", float),
    Settings.Key.TEMPERATURE: ("temperature", float),
    Settings.Key.GRAD_CLIP: ("grad_clip", float),
    Settings.Key.OPTIMIZER: ("optimizer", Optimizer),
    Settings.Key.MIN_FREQ: ("min_freq", int),
    Settings.Key.DATA_DIR: ("data_dir", parse_optional),
    Settings.Key.LEXICON_DIR: ("lexicon_dir", parse_optional),
    Settings.Key.DISABLE: ("disable", parse_list),
    Settings.Key.SYNTH_DOMAINS: ("synthetic.domains", int),
    Settings.Key.SYNTH_EXAMPLES: ("synthetic.examples_per_domain", int),
    Settings.Key.SYNTH_MARKER_VOCAB: ("synthetic.marker_vocab", int),
    Settings.Key.SYNTH_SENTIMENT_WORDS: ("synthetic.sentiment_words", int),
    Settings.Key.SYNTH_FILLERS: ("synthetic.fillers", int),
    Settings.Key.SYNTH_MIN_LEN: ("synthetic.min_len", int),
    Settings.Key.SYNTH_MAX_LEN: ("synthetic.max_len", int),
    Settings.Key.SYNTH_MARKERS: ("synthetic.markers_per_sentence", int),
}

KEY_HELP = {
    Settings.Key.LR: "Learning rate",
    Settings.Key.BATCH_SIZE: "Mini-batch size",
    Settings.Key.EPOCHS: "Passes over the training data after the two warm-up phases",
    Settings.Key.LAMBDA_DS: "Weight of the adversarial shared domain loss",
    Settings.Key.LAMBDA_DP: "Weight of the private domain loss",
    Settings.Key.GAMMA: "Weight of the main sentiment loss",
    Settings.Key.GAMMA_SS: "Weight of the shared-feature sentiment loss",
    Settings.Key.GAMMA_SP: "Weight of the private-feature sentiment loss",
    Settings.Key.LAMBDA_REG: "L2 coefficient",
    Settings.Key.PHASE1_STEPS: "Steps trained on the domain losses only",
    Settings.Key.PHASE2_STEPS: "Steps trained on the sentiment losses only",
    Settings.Key.MAX_LEN: "Maximum sequence length, [CLS] and [SEP] included",
    Settings.Key.SEED: "Root random seed",
    Settings.Key.MODE: f"Training protocol. Allowed: {', '.join(m.value for m in Mode)}",
    Settings.Key.TARGET: "Target domain in cross-domain mode, or 'all'",
    Settings.Key.DESCRIPTOR_DIM: "Domain descriptor dimension",
    Settings.Key.HIDDEN_DIM: "Encoder hidden dimension",
    Settings.Key.LAYERS: "Encoder layers",
    Settings.Key.HEADS: "Encoder attention heads",
    Settings.Key.FF_DIM: "Encoder feed-forward dimension",
    Settings.Key.DROPOUT: "Encoder dropout",
    Settings.Key.TEMPERATURE: "Gumbel-Softmax temperature",
    Settings.Key.GRAD_CLIP: "Global gradient norm clip, 0 to disable",
    Settings.Key.OPTIMIZER: f"Optimizer. Allowed: {', '.join(o.value for o in Optimizer)}",
    Settings.Key.MIN_FREQ: "Minimum word frequency for the vocabulary",
    Settings.Key.DATA_DIR: "Dataset directory",
    Settings.Key.LEXICON_DIR: "Directory with the constraint lexicons",
    Settings.Key.DISABLE: f"Comma-separated ablations. Allowed: {', '.join(a.value for a in Ablation)}",
    Settings.Key.SYNTH_DOMAINS: "Synthetic domains",
    Settings.Key.SYNTH_EXAMPLES: "Synthetic examples per domain",
    Settings.Key.SYNTH_MARKER_VOCAB: "Marker words per synthetic domain",
    Settings.Key.SYNTH_SENTIMENT_WORDS: "Synthetic sentiment words per polarity",
    Settings.Key.SYNTH_FILLERS: "Synthetic filler words",
    Settings.Key.SYNTH_MIN_LEN: "Shortest synthetic sentence",
    Settings.Key.SYNTH_MAX_LEN: "Longest synthetic sentence",
    Settings.Key.SYNTH_MARKERS: "Domain markers per synthetic sentence",
}


def get_field(config: TrainConfig, path: str) -> Any:
    value = config
    for name in path.split("."):
        value = getattr(value, name)
    return value


def set_field(config: TrainConfig, path: str, value: Any):
    *parents, name = path.split(".")
    target = config
    for parent in parents:
        target = getattr(target, parent)
    setattr(target, name, value)


def default_value(key: Settings.Key) -> str:
    value = get_field(TrainConfig(), KEY_FIELDS[key][0])
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, list):
        return ",".join(value)
    return "" if value is None else str(value)


def apply_value(config: TrainConfig, key: Settings.Key, raw: str):
    path, convert = KEY_FIELDS[key]
    try:
        value = convert(raw.strip())
    except ValueError:
        raise ValueError(f"Invalid value for {key.value}: {raw!r}") from None
    set_field(config, path, value)


def resolve_config(
    config_path: Optional[str] = None, overrides: Optional[Dict[Settings.Key, str]] = None
) -> TrainConfig:
    """Built-in defaults, then the config file, then `overrides` (CLI flags)."""
    config = TrainConfig()
    if config_path:
        settings = Settings(config_path)
        unknown = settings.unknown_keys()
        if len(unknown) > 0:
            raise ValueError(f"Unknown config keys in {config_path}: {', '.join(unknown)}")
        for key, raw in settings.values().items():
            apply_value(config, key, raw)
    for key, raw in (overrides or {}).items():
        apply_value(config, key, raw)

    config.synthetic.seed = config.seed
    config.validate()
    return config


def config_fingerprint(config: TrainConfig) -> str:
    digest = hashlib.sha256(config.to_json(sort_keys=True).encode("utf-8")).hexdigest()
    fingerprint = digest[:12]
    logging.debug("config fingerprint = %s", fingerprint)
    return fingerprint
