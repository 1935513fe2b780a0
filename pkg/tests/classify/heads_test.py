import numpy as np
import pytest
import torch
from torch import nn

from masker.classify.heads import SentimentHead, sentiment_logits


class TestSentimentLogits:
    def test_should_be_uniform_for_zero_head(self):
        head = SentimentHead(4)
        for parameter in head.parameters():
            nn.init.zeros_(parameter)

        assert sentiment_logits(torch.randn(3, 4), head).tolist() == [[0.5, 0.5]] * 3

    def test_should_match_hand_softmax(self):
        head = SentimentHead(2)
        with torch.no_grad():
            head.linear.weight.copy_(torch.tensor([[1.0, -1.0], [0.5, 2.0]]))
            head.linear.bias.copy_(torch.tensor([0.1, -0.2]))

        probabilities = sentiment_logits(torch.tensor([[2.0, 1.0]]), head)

        logits = np.array([2.0 - 1.0 + 0.1, 1.0 + 2.0 - 0.2])
        expected = np.exp(logits) / np.exp(logits).sum()
        assert probabilities[0].detach().numpy() == pytest.approx(expected, abs=1e-6)
