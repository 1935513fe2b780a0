from masker.train.checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from masker.train.config import Mode, TrainConfig, config_fingerprint, resolve_config
from masker.train.evaluate import EvalReport, EvaluationError
from masker.train.phases import phase_of
from masker.train.trainer import DivergenceError, TrainResult, train
