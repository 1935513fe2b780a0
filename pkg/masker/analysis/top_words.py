import collections
import enum
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from dataclasses_json import dataclass_json

from masker.analysis.mask_stats import MaskRecord, mask_records
from masker.data.batching import Collator
from masker.data.example import DomainSplit
from masker.model import DomainMasker

ALL_DOMAINS = "all"


class Scope(enum.Enum):
    ALL = "all"
    PER_DOMAIN = "per-domain"


@dataclass_json
@dataclass
class WordRanking:
    """Ranked (word, frequency) lists keyed by domain, or by "all"."""

    masked: Dict[str, List[Tuple[str, int]]] = field(default_factory=dict)
    remaining: Dict[str, List[Tuple[str, int]]] = field(default_factory=dict)


def rank(counts: collections.Counter, k: int) -> List[Tuple[str, int]]:
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))[:k]


def rank_words(records: List[MaskRecord], k: int, scope: Scope = Scope.ALL) -> WordRanking:
    """Words at privately masked positions and words the shared path kept."""
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")

    masked: Dict[str, collections.Counter] = collections.defaultdict(collections.Counter)
    remaining: Dict[str, collections.Counter] = collections.defaultdict(collections.Counter)
    for record in records:
        key = ALL_DOMAINS if scope == Scope.ALL else record.domain
        for word, shared, private in zip(record.tokens, record.shared, record.private):
            if private:
                masked[key][word] += 1
            if not shared:
                remaining[key][word] += 1

    keys = sorted(set(masked) | set(remaining))
    if scope == Scope.ALL:
        keys = [ALL_DOMAINS]
    return WordRanking(
        masked={key: rank(masked[key], k) for key in keys},
        remaining={key: rank(remaining[key], k) for key in keys},
    )


def top_masked_words(
    model: DomainMasker,
    splits: List[DomainSplit],
    collator: Collator,
    k: int,
    scope: Scope = Scope.ALL,
    which: str = "test",
) -> WordRanking:
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    return rank_words(mask_records(model, splits, collator, which), k, scope)
