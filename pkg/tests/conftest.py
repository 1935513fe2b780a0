import pytest
import torch

from masker.data.batching import Collator
from masker.data.synthetic import SyntheticSpec, generate_synthetic
from masker.encoder.encoder import EncoderConfig
from masker.encoder.vocabulary import build_vocab
from masker.masking.constraints import default_constraints
from masker.train.config import Optimizer, TrainConfig
from masker.train.trainer import build_model, training_vocab


def tiny_encoder_config(vocab_size: int = 0) -> EncoderConfig:
    return EncoderConfig(
        hidden_dim=16, layers=1, heads=2, ff_dim=32, max_len=16, dropout=0.0, vocab_size=vocab_size
    )


@pytest.fixture()
def synthetic_spec() -> SyntheticSpec:
    return SyntheticSpec(
        domains=2,
        examples_per_domain=20,
        marker_vocab=4,
        sentiment_words=3,
        fillers=10,
        min_len=5,
        max_len=8,
        markers_per_sentence=1,
        seed=3,
    )


@pytest.fixture()
def synthetic_dataset(synthetic_spec):
    return generate_synthetic(synthetic_spec)


@pytest.fixture()
def splits(synthetic_dataset):
    return synthetic_dataset.splits


@pytest.fixture()
def tiny_config(synthetic_spec) -> TrainConfig:
    config = TrainConfig(
        lr=0.01,
        batch_size=4,
        epochs=1,
        phase1_steps=2,
        phase2_steps=2,
        descriptor_dim=8,
        encoder=tiny_encoder_config(),
        optimizer=Optimizer.ADAM,
        seed=3,
        synthetic=synthetic_spec,
    )
    config.validate()
    return config


@pytest.fixture(scope="session")
def constraints():
    return default_constraints()


@pytest.fixture()
def vocab(splits, tiny_config):
    return training_vocab(splits, tiny_config.min_freq)


@pytest.fixture()
def collator(vocab, constraints, tiny_config) -> Collator:
    return Collator(vocab, constraints, tiny_config.max_len)


@pytest.fixture()
def tiny_model(tiny_config, splits, vocab):
    model = build_model(tiny_config, [split.domain for split in splits], vocab)
    model.eval()
    return model


@pytest.fixture()
def word_vocab():
    return build_vocab(["i love this helmet", "good bad movie"])


@pytest.fixture()
def torch_generator() -> torch.Generator:
    return torch.Generator().manual_seed(1234)
