from typing import Tuple

import torch

from masker.encoder.encoder import EncodedSequence
from masker.masking.token_masker import MaskDecision


def domain_clue(
    encoded: EncodedSequence, decision: MaskDecision
) -> Tuple[torch.Tensor, torch.Tensor]:
    """Mean of the original hidden states at the privately masked positions.

    Returns (h_j [batch, H], K [batch]). Rows with K = 0 fall back to the
    [CLS] vector.
    """
    if decision.gate.shape != encoded.hidden.shape[:2]:
        raise ValueError(
            f"Decision shape {tuple(decision.gate.shape)} does not match encoding "
            f"{tuple(encoded.hidden.shape[:2])}"
        )
    counts = decision.hard.sum(dim=-1)
    summed = (decision.gate.unsqueeze(-1) * encoded.hidden).sum(dim=1)
    mean = summed / counts.clamp(min=1).unsqueeze(-1).to(summed.dtype)
    h_clue = torch.where((counts > 0).unsqueeze(-1), mean, encoded.cls)
    return h_clue, counts


def domain_attention(
    h_clue: torch.Tensor, encoded: EncodedSequence
) -> Tuple[torch.Tensor, torch.Tensor]:
    """Inner-product attention over the non-PAD positions with h_clue as the
    query. Returns (h_private [batch, H], alpha [batch, positions])."""
    if h_clue.size(-1) != encoded.hidden.size(-1):
        raise ValueError(
            f"Query dim {h_clue.size(-1)} does not match hidden dim {encoded.hidden.size(-1)}"
        )
    scores = torch.einsum("bh,bth->bt", h_clue, encoded.hidden)
    scores = scores.masked_fill(~encoded.attention_mask, float("-inf"))
    alpha = torch.softmax(scores, dim=-1)
    h_private = torch.einsum("bt,bth->bh", alpha, encoded.hidden)
    return h_private, alpha
