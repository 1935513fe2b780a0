import collections
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List

PAD = "[PAD]"
UNK = "[UNK]"
CLS = "[CLS]"
SEP = "[SEP]"
MASK = "[MASK]"

RESERVED_TOKENS = (PAD, UNK, CLS, SEP, MASK)

PAD_ID = 0
UNK_ID = 1
CLS_ID = 2
SEP_ID = 3
MASK_ID = 4

# Whole words; apostrophes stay inside a word so "don't" is one token.
TOKEN_PATTERN = re.compile(r"[^\W_]+(?:'[^\W_]+)*")


class VocabularyError(Exception):
    pass


def split_words(text: str) -> List[str]:
    return TOKEN_PATTERN.findall(text.lower())


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple
    token_to_id: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if tuple(self.tokens[: len(RESERVED_TOKENS)]) != RESERVED_TOKENS:
            raise VocabularyError(
                f"First {len(RESERVED_TOKENS)} tokens must be {', '.join(RESERVED_TOKENS)}"
            )
        mapping = {token: index for index, token in enumerate(self.tokens)}
        if len(mapping) != len(self.tokens):
            raise VocabularyError("Vocabulary contains duplicate tokens")
        object.__setattr__(self, "token_to_id", mapping)

    @property
    def size(self) -> int:
        return len(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def id_of(self, token: str) -> int:
        return self.token_to_id.get(token, UNK_ID)

    def token_of(self, token_id: int) -> str:
        return self.tokens[token_id]


def build_vocab(corpus: Iterable[str], min_freq: int = 1) -> Vocabulary:
    corpus = list(corpus)
    if len(corpus) == 0:
        raise VocabularyError("Cannot build a vocabulary from an empty corpus")

    counts = collections.Counter()
    for text in corpus:
        counts.update(split_words(text))

    words = sorted(
        (word for word, count in counts.items() if count >= min_freq and word not in RESERVED_TOKENS),
        key=lambda word: (-counts[word], word),
    )
    vocab = Vocabulary(tokens=RESERVED_TOKENS + tuple(words))

    logging.debug(
        "Built vocabulary, texts = %s, distinct words = %s, min_freq = %s, size = %s",
        len(corpus),
        len(counts),
        min_freq,
        vocab.size,
    )
    return vocab


def save_vocab(vocab: Vocabulary, path: str):
    with open(path, "w", encoding="utf-8") as file:
        for token in vocab.tokens:
            file.write(token)
            file.write("\n")


def load_vocab_file(path: str) -> Vocabulary:
    """Reads one token per line, line number = id. Word-piece continuation
    entries ("##ing") are dropped since tokenization is whole-word."""
    with open(path, encoding="utf-8") as file:
        lines = [line.rstrip("\n") for line in file]

    reserved = tuple(lines[: len(RESERVED_TOKENS)])
    if reserved != RESERVED_TOKENS:
        raise VocabularyError(
            f"{path}: first {len(RESERVED_TOKENS)} lines must be {', '.join(RESERVED_TOKENS)}"
        )

    words = []
    seen = set(RESERVED_TOKENS)
    for line in lines[len(RESERVED_TOKENS):]:
        if line == "" or line.startswith("##") or line in seen:
            continue
        seen.add(line)
        words.append(line)

    vocab = Vocabulary(tokens=RESERVED_TOKENS + tuple(words))
    logging.debug("Loaded vocabulary, path = %s, size = %s", path, vocab.size)
    return vocab
