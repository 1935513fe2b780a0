import torch
from torch import nn

NUM_SENTIMENT_CLASSES = 2


class SentimentHead(nn.Module):
    def __init__(self, input_dim: int):
        super().__init__()
        self.linear = nn.Linear(input_dim, NUM_SENTIMENT_CLASSES)

    def forward(self, features: torch.Tensor) -> torch.Tensor:
        return self.linear(features)


def sentiment_logits(h: torch.Tensor, head: SentimentHead) -> torch.Tensor:
    """Class probabilities p_s (the softmax of the head's logits)."""
    return torch.softmax(head(h), dim=-1)
