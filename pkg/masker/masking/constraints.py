import logging
import os
from dataclasses import dataclass, field, replace
from typing import FrozenSet, Iterable, Optional

import torch

from masker.assets import get_lexicon_path
from masker.encoder.tokenizer import TokenSequence
from masker.encoder.vocabulary import RESERVED_TOKENS

LEXICON_NAMES = ("stopwords", "sentiment", "negation", "intensifier")


class LexiconNotFound(Exception):
    def __init__(self, lexicon: str, path: str):
        super().__init__(f"{lexicon} lexicon not found: {path}")
        self.lexicon = lexicon
        self.path = path


@dataclass(frozen=True)
class LexiconConstraints:
    stopwords: FrozenSet[str] = field(default_factory=frozenset)
    sentiment: FrozenSet[str] = field(default_factory=frozenset)
    negation: FrozenSet[str] = field(default_factory=frozenset)
    intensifier: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self):
        for name in LEXICON_NAMES:
            words = frozenset(getattr(self, name)) - set(RESERVED_TOKENS)
            object.__setattr__(self, name, words)

    def is_constrained(self, word: str) -> bool:
        return (
            word in self.stopwords
            or word in self.sentiment
            or word in self.negation
            or word in self.intensifier
        )

    def without(self, *lexicons: str) -> "LexiconConstraints":
        for name in lexicons:
            if name not in LEXICON_NAMES:
                raise ValueError(f"Unknown lexicon: {name}")
        return replace(self, **{name: frozenset() for name in lexicons})

    def keep_mask(self, sequence: TokenSequence) -> torch.Tensor:
        """Per-position keep override: special positions plus lexicon hits."""
        return torch.tensor(
            [
                special or self.is_constrained(word)
                for word, special in zip(sequence.surface, sequence.is_special)
            ],
            dtype=torch.bool,
        )

    def counts(self) -> dict:
        return {name: len(getattr(self, name)) for name in LEXICON_NAMES}


def read_lexicon(lexicon: str, path: str) -> FrozenSet[str]:
    if not os.path.isfile(path):
        raise LexiconNotFound(lexicon, path)

    words = set()
    with open(path, encoding="utf-8") as file:
        for line in file:
            word = line.strip().lower()
            if word == "" or word.startswith("#"):
                continue
            words.add(word)
    return frozenset(words)


def load_lexicons(
    stopword_path: str, sentiment_path: str, negation_path: str, intensifier_path: str
) -> LexiconConstraints:
    constraints = LexiconConstraints(
        stopwords=read_lexicon("stopwords", stopword_path),
        sentiment=read_lexicon("sentiment", sentiment_path),
        negation=read_lexicon("negation", negation_path),
        intensifier=read_lexicon("intensifier", intensifier_path),
    )
    logging.info("Loaded masking constraints, counts = %s", constraints.counts())
    return constraints


def default_constraints(
    lexicon_dir: Optional[str] = None, disabled: Iterable[str] = ()
) -> LexiconConstraints:
    constraints = load_lexicons(
        *(get_lexicon_path(name, lexicon_dir) for name in LEXICON_NAMES)
    )
    disabled = tuple(disabled)
    if len(disabled) > 0:
        constraints = constraints.without(*disabled)
        logging.info("Disabled constraint lexicons: %s", ", ".join(disabled))
    return constraints
