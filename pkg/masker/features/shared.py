from dataclasses import dataclass

import torch

from masker.encoder.encoder import TransformerEncoder
from masker.encoder.tokenizer import TokenSequence, apply_mask
from masker.masking.token_masker import MaskDecision


@dataclass
class FeaturePair:
    h_shared: torch.Tensor
    h_private: torch.Tensor
    h_clue: torch.Tensor
    masked_count: torch.Tensor  # K


def shared_features(
    sequence: TokenSequence, decision: MaskDecision, encoder: TransformerEncoder
) -> torch.Tensor:
    """[CLS] slot of the re-encoded masked sequence."""
    masked = apply_mask(sequence, decision)
    ids = torch.tensor([list(masked.ids)], dtype=torch.long)
    return encoder(ids).cls[0]


def shared_features_batch(
    ids: torch.Tensor,
    attention_mask: torch.Tensor,
    decision: MaskDecision,
    encoder: TransformerEncoder,
) -> torch.Tensor:
    """Batched form used in training: the gate carries the straight-through
    gradient back into the shared masking network."""
    if decision.gate.shape != ids.shape:
        raise ValueError(
            f"Decision shape {tuple(decision.gate.shape)} does not match ids {tuple(ids.shape)}"
        )
    return encoder(ids, attention_mask, mask_gate=decision.gate).cls
