from typing import Optional, Tuple

import torch
import torch.nn.functional as F

EPS = 1e-20


def sample_gumbel(
    shape: torch.Size, generator: Optional[torch.Generator] = None, dtype=torch.float32
) -> torch.Tensor:
    uniform = torch.rand(shape, generator=generator, dtype=dtype)
    return -torch.log(-torch.log(uniform + EPS) + EPS)


def straight_through(soft: torch.Tensor) -> torch.Tensor:
    """One-hot argmax of `soft` in the forward pass, gradient of `soft` in the
    backward pass. The forward value is exactly one-hot."""
    index = soft.argmax(dim=-1, keepdim=True)
    one_hot = torch.zeros_like(soft).scatter_(-1, index, 1.0)
    return one_hot + (soft - soft.detach())


def gumbel_softmax(
    logits: torch.Tensor,
    temperature: float = 1.0,
    hard: bool = True,
    generator: Optional[torch.Generator] = None,
) -> Tuple[torch.Tensor, torch.Tensor]:
    """Samples from the Gumbel-Softmax distribution over the last dimension.

    Returns (soft, sample): soft = softmax((logits + g) / temperature) and
    sample is the straight-through one-hot of soft when `hard`, else soft.
    """
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")

    noise = sample_gumbel(logits.shape, generator=generator, dtype=logits.dtype).to(
        logits.device
    )
    soft = F.softmax((logits + noise) / temperature, dim=-1)
    if hard:
        return soft, straight_through(soft)
    return soft, soft
