from dataclasses import dataclass
from typing import List, Optional, Sequence

import torch

from masker.encoder.vocabulary import (
    CLS,
    CLS_ID,
    MASK_ID,
    PAD,
    PAD_ID,
    SEP,
    SEP_ID,
    Vocabulary,
    split_words,
    UNK_ID,
)


class ConstraintViolation(Exception):
    pass


@dataclass(frozen=True)
class TokenSequence:
    ids: tuple
    surface: tuple
    is_special: tuple
    length: int  # N, count of non-PAD positions

    @property
    def padded_length(self) -> int:
        return len(self.ids)

    @property
    def words(self) -> List[str]:
        """Surface strings of the real (non-special) positions."""
        return [self.surface[i] for i in range(1, self.length - 1)]

    def is_unk(self, position: int) -> bool:
        return self.ids[position] == UNK_ID and not self.is_special[position]

    def pad(self, padded_length: int) -> "TokenSequence":
        if padded_length < self.padded_length:
            raise ValueError(
                f"Cannot pad a sequence of length {self.padded_length} to {padded_length}"
            )
        extra = padded_length - self.padded_length
        return TokenSequence(
            ids=self.ids + (PAD_ID,) * extra,
            surface=self.surface + (PAD,) * extra,
            is_special=self.is_special + (True,) * extra,
            length=self.length,
        )


def from_words(
    words: Sequence[str], vocab: Vocabulary, max_len: int, pad_to: Optional[int] = None
) -> TokenSequence:
    if max_len < 3:
        raise ValueError(f"max_len must be at least 3, got {max_len}")

    words = list(words)[: max_len - 2]
    ids = (CLS_ID,) + tuple(vocab.id_of(word) for word in words) + (SEP_ID,)
    surface = (CLS,) + tuple(words) + (SEP,)
    is_special = (True,) + (False,) * len(words) + (True,)
    sequence = TokenSequence(ids=ids, surface=surface, is_special=is_special, length=len(ids))
    if pad_to is not None:
        sequence = sequence.pad(pad_to)
    return sequence


def tokenize(
    text: str, vocab: Vocabulary, max_len: int, pad_to: Optional[int] = None
) -> TokenSequence:
    return from_words(split_words(text), vocab, max_len, pad_to)


def apply_mask(sequence: TokenSequence, decision) -> TokenSequence:
    """Replaces the positions selected by a mask decision with [MASK]. Surface
    strings are kept for reporting.

    `decision` is a MaskDecision or a plain sequence of per-position flags.
    """
    hard = getattr(decision, "hard", decision)
    if isinstance(hard, torch.Tensor):
        hard = hard.reshape(-1).tolist()
    hard = [bool(flag) for flag in hard]
    if len(hard) != sequence.padded_length:
        raise ConstraintViolation(
            f"Mask decision has length {len(hard)}, sequence has {sequence.padded_length}"
        )
    for position, selected in enumerate(hard):
        if selected and sequence.is_special[position]:
            raise ConstraintViolation(
                f"Mask decision selects special position {position} ({sequence.surface[position]})"
            )
    return TokenSequence(
        ids=tuple(MASK_ID if selected else token_id for token_id, selected in zip(sequence.ids, hard)),
        surface=sequence.surface,
        is_special=sequence.is_special,
        length=sequence.length,
    )
