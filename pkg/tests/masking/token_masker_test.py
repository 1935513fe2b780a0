import pytest
import torch
from torch import nn

from masker.encoder.encoder import TransformerEncoder, encode
from masker.encoder.tokenizer import tokenize
from masker.masking.constraints import LexiconConstraints
from masker.masking.token_masker import (
    MASK_CLASS,
    MaskDecision,
    MaskingError,
    TokenMasker,
    private_mask,
    shared_mask,
)
from tests.conftest import tiny_encoder_config


def always_mask(masker: TokenMasker) -> TokenMasker:
    for parameter in masker.parameters():
        nn.init.zeros_(parameter)
    with torch.no_grad():
        masker.scorer[-1].bias[MASK_CLASS] = 10.0
        masker.scorer[-1].bias[1 - MASK_CLASS] = -10.0
    return masker


@pytest.fixture()
def encoder(word_vocab):
    torch.manual_seed(0)
    encoder = TransformerEncoder(tiny_encoder_config(word_vocab.size))
    encoder.eval()
    return encoder


class TestTokenMasker:
    def test_should_mask_half_the_time_with_zero_parameters(self, torch_generator):
        masker = TokenMasker(hidden_dim=4, descriptor_dim=3)
        for parameter in masker.parameters():
            nn.init.zeros_(parameter)

        decision = masker(
            torch.randn(10_000, 1, 4),
            torch.zeros(10_000, 3),
            torch.zeros(10_000, 1, dtype=torch.bool),
            generator=torch_generator,
        )

        assert decision.hard.float().mean().item() == pytest.approx(0.5, abs=0.02)

    def test_should_keep_constrained_positions(self, torch_generator):
        masker = always_mask(TokenMasker(hidden_dim=4, descriptor_dim=3))
        constrained = torch.tensor([[True, False, True, False]])

        decision = masker(
            torch.randn(1, 4, 4), torch.zeros(1, 3), constrained, generator=torch_generator
        )

        assert decision.hard.tolist() == [[False, True, False, True]]
        assert decision.counts.tolist() == [2]

    def test_should_keep_everything_when_fully_constrained(self, torch_generator):
        masker = always_mask(TokenMasker(hidden_dim=4, descriptor_dim=3))

        decision = masker(
            torch.randn(2, 5, 4),
            torch.zeros(2, 3),
            torch.ones(2, 5, dtype=torch.bool),
            generator=torch_generator,
        )

        assert not decision.hard.any()
        assert torch.equal(decision.gate, torch.zeros(2, 5))

    def test_should_use_argmax_without_sampling(self):
        masker = always_mask(TokenMasker(hidden_dim=4, descriptor_dim=3))

        decision = masker(
            torch.randn(1, 3, 4), torch.zeros(1, 3), torch.zeros(1, 3, dtype=torch.bool), sample=False
        )

        assert decision.hard.all()

    def test_should_reject_dimension_mismatch(self):
        masker = TokenMasker(hidden_dim=4, descriptor_dim=3)

        with pytest.raises(MaskingError):
            masker(torch.randn(1, 3, 4), torch.zeros(1, 5), torch.zeros(1, 3, dtype=torch.bool))

    def test_should_pass_gradient_through_gate(self, torch_generator):
        masker = TokenMasker(hidden_dim=4, descriptor_dim=3)

        decision = masker(
            torch.randn(2, 6, 4),
            torch.randn(2, 3),
            torch.zeros(2, 6, dtype=torch.bool),
            generator=torch_generator,
        )
        decision.gate.sum().backward()

        assert masker.scorer[0].weight.grad is not None


class TestMaskDecision:
    def test_should_build_keep_all_decision(self):
        constrained = torch.tensor([[True, False, False, True]])

        decision = MaskDecision.keep_all(constrained)

        assert decision.counts.tolist() == [0]
        assert torch.equal(decision.constrained, constrained)


class TestSharedMask:
    def test_should_only_mask_unconstrained_words(self, encoder, word_vocab, torch_generator):
        sequence = tokenize("i love this helmet", word_vocab, 16)
        constraints = LexiconConstraints(sentiment={"love"}, stopwords={"this", "i"})
        masker = always_mask(TokenMasker(hidden_dim=16, descriptor_dim=3))

        decision = shared_mask(
            encode(sequence, encoder),
            sequence,
            torch.zeros(3),
            masker,
            constraints,
            generator=torch_generator,
        )

        assert decision.hard.tolist() == [False, False, False, False, True, False]

    def test_should_reject_encoding_of_other_sequence(self, encoder, word_vocab):
        sequence = tokenize("i love this helmet", word_vocab, 16)
        other = tokenize("good movie", word_vocab, 16)
        masker = TokenMasker(hidden_dim=16, descriptor_dim=3)

        with pytest.raises(MaskingError):
            shared_mask(encode(other, encoder), sequence, torch.zeros(3), masker, LexiconConstraints())


class TestPrivateMask:
    def test_should_keep_everything_when_all_words_constrained(self, encoder, word_vocab):
        sequence = tokenize("good bad movie", word_vocab, 16)
        constraints = LexiconConstraints(sentiment={"good", "bad", "movie"})
        masker = always_mask(TokenMasker(hidden_dim=16, descriptor_dim=3))

        decision = private_mask(
            encode(sequence, encoder), sequence, torch.zeros(3), masker, constraints, sample=False
        )

        assert not decision.hard.any()
