from dataclasses import dataclass
from typing import Optional

import torch
from torch import nn

from masker.encoder.encoder import EncodedSequence
from masker.encoder.tokenizer import TokenSequence
from masker.masking.constraints import LexiconConstraints
from masker.masking.gumbel import gumbel_softmax

MASK_CLASS = 1


class MaskingError(Exception):
    pass


@dataclass
class MaskDecision:
    hard: torch.Tensor  # [batch, positions] bool, True = mask
    soft: torch.Tensor  # [batch, positions] probability of masking
    constrained: torch.Tensor  # [batch, positions] bool, forced to keep
    gate: torch.Tensor  # hard as float, carrying the straight-through gradient

    @property
    def counts(self) -> torch.Tensor:
        return self.hard.sum(dim=-1)

    @classmethod
    def keep_all(cls, constrained: torch.Tensor) -> "MaskDecision":
        zeros = torch.zeros(constrained.shape, dtype=torch.float32, device=constrained.device)
        return cls(
            hard=torch.zeros_like(constrained),
            soft=zeros,
            constrained=constrained,
            gate=zeros,
        )

    def __getitem__(self, index) -> "MaskDecision":
        return MaskDecision(
            hard=self.hard[index],
            soft=self.soft[index],
            constrained=self.constrained[index],
            gate=self.gate[index],
        )


class TokenMasker(nn.Module):
    """Scores [h_i ; d] for every position with a one-hidden-layer tanh
    network and turns the two logits (keep, mask) into a discrete decision."""

    def __init__(self, hidden_dim: int, descriptor_dim: int, scorer_dim: int = 256):
        super().__init__()
        self.input_dim = hidden_dim + descriptor_dim
        self.scorer = nn.Sequential(
            nn.Linear(self.input_dim, scorer_dim),
            nn.Tanh(),
            nn.Linear(scorer_dim, 2),
        )

    def logits(self, hidden: torch.Tensor, descriptor: torch.Tensor) -> torch.Tensor:
        if hidden.size(-1) + descriptor.size(-1) != self.input_dim:
            raise MaskingError(
                f"Scorer expects {self.input_dim} input features, got "
                f"{hidden.size(-1)} (hidden) + {descriptor.size(-1)} (descriptor)"
            )
        descriptor = descriptor.unsqueeze(1).expand(-1, hidden.size(1), -1)
        return self.scorer(torch.cat([hidden, descriptor], dim=-1))

    def forward(
        self,
        hidden: torch.Tensor,
        descriptor: torch.Tensor,
        constrained: torch.Tensor,
        temperature: float = 1.0,
        generator: Optional[torch.Generator] = None,
        sample: bool = True,
    ) -> MaskDecision:
        """hidden [batch, positions, H], descriptor [batch, D], constrained
        [batch, positions] bool. With `sample` the choice is a hard
        Gumbel-Softmax draw; otherwise the argmax of the logits."""
        logits = self.logits(hidden, descriptor)
        if sample:
            soft, choice = gumbel_softmax(
                logits, temperature=temperature, hard=True, generator=generator
            )
        else:
            soft = torch.softmax(logits, dim=-1)
            choice = (logits[..., MASK_CLASS] > logits[..., 1 - MASK_CLASS]).to(logits.dtype)
            choice = torch.stack([1 - choice, choice], dim=-1)

        keep = (~constrained).to(logits.dtype)
        gate = choice[..., MASK_CLASS] * keep
        return MaskDecision(
            hard=gate > 0.5,
            soft=soft[..., MASK_CLASS],
            constrained=constrained,
            gate=gate,
        )


def _mask_single(
    encoded: EncodedSequence,
    sequence: TokenSequence,
    descriptor: torch.Tensor,
    masker: TokenMasker,
    constraints: LexiconConstraints,
    generator: Optional[torch.Generator],
    temperature: float,
    sample: bool,
) -> MaskDecision:
    if encoded.hidden.size(1) != sequence.padded_length:
        raise MaskingError(
            f"Encoding has {encoded.hidden.size(1)} positions, sequence has {sequence.padded_length}"
        )
    decision = masker(
        encoded.hidden,
        descriptor.reshape(1, -1),
        constraints.keep_mask(sequence).unsqueeze(0),
        temperature=temperature,
        generator=generator,
        sample=sample,
    )
    return decision[0]


def shared_mask(
    encoded: EncodedSequence,
    sequence: TokenSequence,
    descriptor: torch.Tensor,
    masker: TokenMasker,
    constraints: LexiconConstraints,
    generator: Optional[torch.Generator] = None,
    temperature: float = 1.0,
    sample: bool = True,
) -> MaskDecision:
    """Shared-path decision for one sequence, conditioned on its own domain
    descriptor d_j."""
    return _mask_single(
        encoded, sequence, descriptor, masker, constraints, generator, temperature, sample
    )


def private_mask(
    encoded: EncodedSequence,
    sequence: TokenSequence,
    mixed: torch.Tensor,
    masker: TokenMasker,
    constraints: LexiconConstraints,
    generator: Optional[torch.Generator] = None,
    temperature: float = 1.0,
    sample: bool = True,
) -> MaskDecision:
    """Private-path decision for one sequence, conditioned on the mixed
    descriptor; `masker` is the private network's own parameter set."""
    return _mask_single(
        encoded, sequence, mixed, masker, constraints, generator, temperature, sample
    )
