import enum
from typing import FrozenSet

from masker.classify.losses import Loss
from masker.train.config import TrainConfig

DOMAIN_LOSSES = frozenset({Loss.SHARED_DOMAIN, Loss.PRIVATE_DOMAIN})
SENTIMENT_LOSSES = frozenset({Loss.SENTIMENT, Loss.SHARED_SENTIMENT, Loss.PRIVATE_SENTIMENT})


class Phase(enum.Enum):
    DOMAIN = "domain"
    SENTIMENT = "sentiment"
    JOINT = "joint"


ACTIVE_LOSSES = {
    Phase.DOMAIN: DOMAIN_LOSSES,
    Phase.SENTIMENT: SENTIMENT_LOSSES,
    Phase.JOINT: DOMAIN_LOSSES | SENTIMENT_LOSSES,
}


def phase_at(step: int, config: TrainConfig) -> Phase:
    if step < 0:
        raise ValueError(f"step must not be negative, got {step}")
    if step < config.phase1_steps:
        return Phase.DOMAIN
    if step < config.phase1_steps + config.phase2_steps:
        return Phase.SENTIMENT
    return Phase.JOINT


def phase_of(step: int, config: TrainConfig) -> FrozenSet[Loss]:
    return ACTIVE_LOSSES[phase_at(step, config)]
