import enum
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
from dataclasses_json import dataclass_json

from masker.data.example import NEGATIVE, POSITIVE, DomainSplit, Example
from masker.data.splits import DEFAULT_RATIOS, split
from masker.seeding import derive_seed, numpy_rng

DOMAIN_NAMES = (
    "books",
    "electronics",
    "dvd",
    "kitchen",
    "apparel",
    "camera",
    "health",
    "music",
    "toys",
    "video",
    "baby",
    "magazines",
    "software",
    "sports",
    "imdb",
    "mr",
)

# Every word here is in the bundled sentiment lexicon.
POSITIVE_WORDS = (
    "good",
    "great",
    "excellent",
    "amazing",
    "wonderful",
    "perfect",
    "love",
    "best",
    "nice",
    "awesome",
    "fantastic",
    "brilliant",
    "superb",
    "delightful",
    "enjoyable",
    "pleasant",
    "beautiful",
    "favorite",
    "impressive",
    "outstanding",
)
NEGATIVE_WORDS = (
    "bad",
    "terrible",
    "awful",
    "poor",
    "worst",
    "horrible",
    "disappointing",
    "broken",
    "useless",
    "boring",
    "annoying",
    "cheap",
    "defective",
    "disappointed",
    "dull",
    "frustrating",
    "hate",
    "mediocre",
    "junk",
    "flimsy",
)


class TokenRole(enum.Enum):
    MARKER = "MARKER"
    SENTIMENT = "SENTIMENT"
    FILLER = "FILLER"


@dataclass_json
@dataclass
class SyntheticSpec:
    domains: int = 3
    examples_per_domain: int = 600
    marker_vocab: int = 20
    sentiment_words: int = 10
    fillers: int = 150
    min_len: int = 8
    max_len: int = 20
    markers_per_sentence: int = 2
    seed: int = 0

    def validate(self):
        for name in (
            "domains",
            "examples_per_domain",
            "marker_vocab",
            "sentiment_words",
            "fillers",
            "min_len",
            "max_len",
            "markers_per_sentence",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.sentiment_words > min(len(POSITIVE_WORDS), len(NEGATIVE_WORDS)):
            raise ValueError(
                f"At most {min(len(POSITIVE_WORDS), len(NEGATIVE_WORDS))} sentiment words "
                f"per polarity are available, got {self.sentiment_words}"
            )
        if self.min_len > self.max_len:
            raise ValueError(f"min_len {self.min_len} is greater than max_len {self.max_len}")
        if self.min_len < self.markers_per_sentence + 1:
            raise ValueError(
                f"min_len {self.min_len} cannot hold {self.markers_per_sentence} markers "
                f"and a sentiment word"
            )
        if self.examples_per_domain < 3:
            raise ValueError("examples_per_domain must be at least 3 to split")


@dataclass
class SyntheticDataset:
    splits: List[DomainSplit]
    roles: Dict[str, TokenRole]
    markers: Dict[str, List[str]] = field(default_factory=dict)

    def role_of(self, word: str) -> TokenRole:
        return self.roles[word]

    def roles_to_json(self) -> Dict[str, str]:
        return {word: role.value for word, role in sorted(self.roles.items())}


def domain_names(count: int) -> List[str]:
    if count <= len(DOMAIN_NAMES):
        return list(DOMAIN_NAMES[:count])
    return list(DOMAIN_NAMES) + [f"domain{i}" for i in range(len(DOMAIN_NAMES), count)]


def generate_synthetic(
    spec: SyntheticSpec, ratios: Sequence[float] = DEFAULT_RATIOS
) -> SyntheticDataset:
    """Planted-token corpus: every sentence is fillers plus exactly
    `markers_per_sentence` markers of its domain plus one sentiment word that
    decides the label. The returned role map covers every generated word."""
    spec.validate()
    rng = numpy_rng(spec.seed, "synth")

    names = domain_names(spec.domains)
    fillers = [f"w{i:03d}" for i in range(spec.fillers)]
    polarity_words = {
        POSITIVE: list(POSITIVE_WORDS[: spec.sentiment_words]),
        NEGATIVE: list(NEGATIVE_WORDS[: spec.sentiment_words]),
    }
    markers = {name: [f"{name}{i:02d}" for i in range(spec.marker_vocab)] for name in names}

    roles: Dict[str, TokenRole] = {word: TokenRole.FILLER for word in fillers}
    for words in polarity_words.values():
        roles.update({word: TokenRole.SENTIMENT for word in words})
    for words in markers.values():
        roles.update({word: TokenRole.MARKER for word in words})

    splits = []
    for domain_id, name in enumerate(names):
        labels = rng.permutation(np.arange(spec.examples_per_domain) % 2)
        examples = []
        for label in labels:
            length = int(rng.integers(spec.min_len, spec.max_len + 1))
            filler_count = length - spec.markers_per_sentence - 1
            words = (
                list(rng.choice(fillers, size=filler_count))
                + list(rng.choice(markers[name], size=spec.markers_per_sentence))
                + [rng.choice(polarity_words[int(label)])]
            )
            words = [str(words[i]) for i in rng.permutation(len(words))]
            examples.append(
                Example(
                    text=" ".join(words),
                    sentiment=int(label),
                    domain=name,
                    domain_id=domain_id,
                )
            )
        domain_split = split(examples, ratios, derive_seed(spec.seed, f"split:{name}"))
        splits.append(domain_split)

    logging.info(
        "Generated synthetic dataset: %s domains x %s examples, %s words",
        spec.domains,
        spec.examples_per_domain,
        len(roles),
    )
    return SyntheticDataset(splits=splits, roles=roles, markers=markers)
