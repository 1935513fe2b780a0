import pytest

from masker.classify.losses import Loss
from masker.train.config import TrainConfig
from masker.train.phases import DOMAIN_LOSSES, SENTIMENT_LOSSES, Phase, phase_at, phase_of


class TestPhaseOf:
    @pytest.mark.parametrize(
        "step,expected",
        [
            (0, DOMAIN_LOSSES),
            (1999, DOMAIN_LOSSES),
            (2000, SENTIMENT_LOSSES),
            (4999, SENTIMENT_LOSSES),
            (5000, frozenset(Loss)),
            (100_000, frozenset(Loss)),
        ],
    )
    def test_should_follow_default_schedule(self, step, expected):
        assert phase_of(step, TrainConfig()) == expected

    def test_should_name_phases(self):
        config = TrainConfig(phase1_steps=1, phase2_steps=1)

        assert [phase_at(step, config) for step in range(3)] == [
            Phase.DOMAIN,
            Phase.SENTIMENT,
            Phase.JOINT,
        ]

    def test_should_skip_empty_phases(self):
        assert phase_at(0, TrainConfig(phase1_steps=0, phase2_steps=0)) == Phase.JOINT

    def test_should_reject_negative_step(self):
        with pytest.raises(ValueError):
            phase_of(-1, TrainConfig())
