from dataclasses import dataclass
from typing import Optional

import torch
from dataclasses_json import dataclass_json
from torch import nn

from masker.encoder.tokenizer import TokenSequence
from masker.encoder.vocabulary import MASK_ID, PAD_ID


class EncoderError(Exception):
    pass


@dataclass_json
@dataclass
class EncoderConfig:
    hidden_dim: int = 64
    layers: int = 2
    heads: int = 4
    ff_dim: int = 128
    max_len: int = 64
    dropout: float = 0.1
    vocab_size: int = 0

    def validate(self):
        if self.hidden_dim % self.heads != 0:
            raise EncoderError(
                f"hidden_dim ({self.hidden_dim}) must be divisible by heads ({self.heads})"
            )
        if self.max_len < 4:
            raise EncoderError(f"max_len must be at least 4, got {self.max_len}")
        if self.vocab_size <= 0:
            raise EncoderError("vocab_size must be set before building the encoder")


@dataclass
class EncodedSequence:
    hidden: torch.Tensor  # [batch, positions, hidden_dim]
    cls: torch.Tensor  # [batch, hidden_dim]
    attention_mask: torch.Tensor  # [batch, positions], True for non-PAD


class TransformerEncoder(nn.Module):
    """Compact bidirectional encoder in the role BERT plays for the masker:
    token + position embeddings, post-norm transformer layers, [CLS] slot at
    position 0.

    Pretrained weights can be plugged in through `load_state_dict` as long as
    parameter names and shapes match `state_dict()`.
    """

    def __init__(self, config: EncoderConfig):
        super().__init__()
        config.validate()
        self.config = config
        self.token_embedding = nn.Embedding(config.vocab_size, config.hidden_dim)
        self.position_embedding = nn.Embedding(config.max_len, config.hidden_dim)
        self.embedding_norm = nn.LayerNorm(config.hidden_dim)
        self.embedding_dropout = nn.Dropout(config.dropout)
        layer = nn.TransformerEncoderLayer(
            d_model=config.hidden_dim,
            nhead=config.heads,
            dim_feedforward=config.ff_dim,
            dropout=config.dropout,
            batch_first=True,
        )
        self.layers = nn.TransformerEncoder(
            layer, num_layers=config.layers, enable_nested_tensor=False
        )

    def forward(
        self,
        ids: torch.Tensor,
        attention_mask: Optional[torch.Tensor] = None,
        mask_gate: Optional[torch.Tensor] = None,
    ) -> EncodedSequence:
        """Encodes a batch of token ids.

        mask_gate, when given, is a per-position 0/1 tensor (possibly carrying a
        straight-through gradient). Gated positions are embedded as [MASK],
        which in the forward pass is exactly what encoding the ids produced by
        apply_mask gives.
        """
        if ids.dim() == 1:
            ids = ids.unsqueeze(0)
        if ids.size(1) > self.config.max_len:
            raise EncoderError(
                f"Sequence length {ids.size(1)} exceeds max_len {self.config.max_len}"
            )
        if int(ids.max()) >= self.config.vocab_size or int(ids.min()) < 0:
            raise EncoderError(
                f"Token id {int(ids.max())} out of range for vocabulary of size {self.config.vocab_size}"
            )
        if attention_mask is None:
            attention_mask = ids != PAD_ID

        embedded = self.token_embedding(ids)
        if mask_gate is not None:
            mask_embedded = self.token_embedding.weight[MASK_ID].expand_as(embedded)
            gate = mask_gate.unsqueeze(-1)
            embedded = torch.where(gate > 0.5, mask_embedded, embedded) + (
                gate - gate.detach()
            ) * (mask_embedded - embedded)

        positions = torch.arange(ids.size(1), device=ids.device)
        embedded = embedded + self.position_embedding(positions).unsqueeze(0)
        embedded = self.embedding_dropout(self.embedding_norm(embedded))

        hidden = self.layers(embedded, src_key_padding_mask=~attention_mask)
        return EncodedSequence(hidden=hidden, cls=hidden[:, 0], attention_mask=attention_mask)


def sequences_to_tensor(sequences: list, device=None) -> torch.Tensor:
    padded_length = max(sequence.padded_length for sequence in sequences)
    return torch.tensor(
        [list(sequence.pad(padded_length).ids) for sequence in sequences],
        dtype=torch.long,
        device=device,
    )


def encode(sequence: TokenSequence, encoder: TransformerEncoder) -> EncodedSequence:
    """Encodes one sequence; the result has a batch dimension of 1."""
    ids = torch.tensor([list(sequence.ids)], dtype=torch.long)
    return encoder(ids)
