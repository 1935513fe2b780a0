from dataclasses import dataclass
from typing import Callable, Collection, Iterable, List, Optional

import torch
from torch.utils.data import DataLoader

from masker.data.example import Example
from masker.encoder.tokenizer import TokenSequence, tokenize
from masker.encoder.vocabulary import PAD_ID, Vocabulary
from masker.masking.constraints import LexiconConstraints

UNLABELED = -1


@dataclass
class Batch:
    ids: torch.Tensor  # [batch, positions]
    attention_mask: torch.Tensor  # [batch, positions], True for non-PAD
    constrained: torch.Tensor  # [batch, positions], specials and lexicon hits
    domain_ids: torch.Tensor  # [batch]
    sentiment: torch.Tensor  # [batch], UNLABELED where hidden or missing
    sentiment_mask: torch.Tensor  # [batch] float, 1 where the label is usable
    sequences: List[TokenSequence]
    examples: List[Example]

    def __len__(self) -> int:
        return self.ids.size(0)


class Collator:
    """Turns a list of examples into a padded Batch.

    Sentiment labels of examples whose domain id is in `hidden_domains` are
    never read; those rows carry UNLABELED and a zero sentiment weight.
    """

    def __init__(
        self,
        vocab: Vocabulary,
        constraints: LexiconConstraints,
        max_len: int,
        hidden_domains: Collection[int] = (),
    ):
        self.vocab = vocab
        self.constraints = constraints
        self.max_len = max_len
        self.hidden_domains = frozenset(hidden_domains)

    def __call__(self, examples: List[Example]) -> Batch:
        sequences = [tokenize(example.text, self.vocab, self.max_len) for example in examples]
        padded_length = max(sequence.padded_length for sequence in sequences)
        sequences = [sequence.pad(padded_length) for sequence in sequences]

        ids = torch.tensor([list(sequence.ids) for sequence in sequences], dtype=torch.long)
        constrained = torch.stack(
            [self.constraints.keep_mask(sequence) for sequence in sequences]
        )
        labels = [
            UNLABELED
            if example.domain_id in self.hidden_domains or example.sentiment is None
            else example.sentiment
            for example in examples
        ]
        sentiment = torch.tensor(labels, dtype=torch.long)
        return Batch(
            ids=ids,
            attention_mask=ids != PAD_ID,
            constrained=constrained,
            domain_ids=torch.tensor([example.domain_id for example in examples], dtype=torch.long),
            sentiment=sentiment,
            sentiment_mask=(sentiment != UNLABELED).to(torch.float32),
            sequences=sequences,
            examples=list(examples),
        )


def batches(
    examples: List[Example],
    batch_size: int,
    shuffle: bool = False,
    seed: int = 0,
    collate_fn: Optional[Callable] = None,
) -> Iterable:
    """Mini-batches over `examples`; the last partial batch is kept. With
    `shuffle` the order depends only on `seed`."""
    if batch_size <= 0:
        raise ValueError(f"batch_size must be positive, got {batch_size}")
    generator = torch.Generator().manual_seed(seed) if shuffle else None
    return DataLoader(
        examples,
        batch_size=batch_size,
        shuffle=shuffle,
        generator=generator,
        collate_fn=collate_fn if collate_fn is not None else list,
        drop_last=False,
    )
