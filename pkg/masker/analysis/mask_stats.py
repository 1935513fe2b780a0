import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
from dataclasses_json import dataclass_json

from masker.data.batching import Collator
from masker.data.example import DomainSplit, Example
from masker.data.synthetic import TokenRole
from masker.model import DomainMasker
from masker.train.evaluate import predict

# Share of tokens masked per path by the full-size model on review data.
TYPICAL_MASK_RATES = (0.05, 0.35)


@dataclass_json
@dataclass
class MaskRecord:
    """Per-example masking dump over the real tokens ([CLS], [SEP] and PAD
    left out). Every aggregate in this package is computed from these."""

    domain: str
    tokens: List[str]
    shared: List[bool]
    private: List[bool]
    constrained: List[bool]
    is_unk: List[bool]
    prediction: int
    gold: Optional[int]
    index: int = 0

    @property
    def length(self) -> int:
        return len(self.tokens)

    @property
    def shared_count(self) -> int:
        return sum(self.shared)

    @property
    def private_count(self) -> int:
        return sum(self.private)

    @property
    def shared_rate(self) -> float:
        return self.shared_count / self.length if self.length > 0 else 0.0

    @property
    def private_rate(self) -> float:
        return self.private_count / self.length if self.length > 0 else 0.0

    @property
    def correct(self) -> Optional[bool]:
        return None if self.gold is None else self.prediction == self.gold


@dataclass_json
@dataclass
class DomainMaskStats:
    domain: str
    examples: int
    shared_count: float
    private_count: float
    shared_rate: float
    private_rate: float
    mean_length: float


@dataclass_json
@dataclass
class MaskStats:
    domains: List[DomainMaskStats] = field(default_factory=list)
    average: Optional[DomainMaskStats] = None

    def of(self, domain: str) -> DomainMaskStats:
        for stats in self.domains:
            if stats.domain == domain:
                return stats
        raise KeyError(domain)


def example_records(
    model: DomainMasker, examples: List[Example], collator: Collator
) -> List[MaskRecord]:
    """One record per example, in input order; `index` is the position in
    `examples`."""
    records = []
    for batch, output in predict(model, examples, collator):
        predictions = output.logits.argmax(dim=-1).tolist()
        for row, sequence in enumerate(batch.sequences):
            real = range(1, sequence.length - 1)
            example = batch.examples[row]
            records.append(
                MaskRecord(
                    domain=example.domain,
                    tokens=[sequence.surface[i] for i in real],
                    shared=[bool(output.shared_decision.hard[row, i]) for i in real],
                    private=[bool(output.private_decision.hard[row, i]) for i in real],
                    constrained=[bool(batch.constrained[row, i]) for i in real],
                    is_unk=[sequence.is_unk(i) for i in real],
                    prediction=predictions[row],
                    gold=example.sentiment,
                    index=len(records),
                )
            )
    return records


def mask_records(
    model: DomainMasker,
    splits: List[DomainSplit],
    collator: Collator,
    which: str = "test",
) -> List[MaskRecord]:
    """Records of every domain's `which` part, numbered per domain."""
    records = []
    for domain_split in splits:
        records.extend(example_records(model, domain_split.part(which), collator))
    return records


def summarize(domain: str, records: List[MaskRecord]) -> DomainMaskStats:
    def mean(values) -> float:
        return float(np.mean(values)) if len(values) > 0 else 0.0

    return DomainMaskStats(
        domain=domain,
        examples=len(records),
        shared_count=mean([record.shared_count for record in records]),
        private_count=mean([record.private_count for record in records]),
        shared_rate=mean([record.shared_rate for record in records]),
        private_rate=mean([record.private_rate for record in records]),
        mean_length=mean([record.length for record in records]),
    )


def stats_from_records(records: List[MaskRecord]) -> MaskStats:
    by_domain: Dict[str, List[MaskRecord]] = {}
    for record in records:
        by_domain.setdefault(record.domain, []).append(record)
    return MaskStats(
        domains=[summarize(domain, domain_records) for domain, domain_records in by_domain.items()],
        average=summarize("all", records),
    )


def mask_stats(
    model: DomainMasker,
    splits: List[DomainSplit],
    collator: Collator,
    which: str = "test",
) -> MaskStats:
    stats = stats_from_records(mask_records(model, splits, collator, which))
    logging.info(
        "Masking on %s: shared %.2f/%.2f, private %.2f/%.2f (count/rate)",
        which,
        stats.average.shared_count,
        stats.average.shared_rate,
        stats.average.private_count,
        stats.average.private_rate,
    )
    return stats


@dataclass_json
@dataclass
class RoleMaskRate:
    role: str
    tokens: int
    shared_rate: float
    private_rate: float


def role_mask_rates(
    records: List[MaskRecord], roles: Mapping[str, TokenRole]
) -> List[RoleMaskRate]:
    """Masking rate of each planted token role, over every occurrence in
    `records`. Words without a role are skipped."""
    counts: Dict[TokenRole, List[int]] = {role: [0, 0, 0] for role in TokenRole}
    for record in records:
        for token, shared, private in zip(record.tokens, record.shared, record.private):
            role = roles.get(token)
            if role is None:
                continue
            counts[role][0] += 1
            counts[role][1] += int(shared)
            counts[role][2] += int(private)

    rates = []
    for role, (tokens, shared, private) in counts.items():
        rates.append(
            RoleMaskRate(
                role=role.value,
                tokens=tokens,
                shared_rate=shared / tokens if tokens > 0 else 0.0,
                private_rate=private / tokens if tokens > 0 else 0.0,
            )
        )
        logging.debug("Masking of %s tokens: %s", role.value, rates[-1])
    return rates


def atypical_rates(
    stats: MaskStats, band: Tuple[float, float] = TYPICAL_MASK_RATES
) -> List[str]:
    """Notes for each path whose average masking rate falls outside `band`.

    A path that masks nearly every unconstrained token still separates the
    domains, but its masks no longer single out the domain words.
    """
    low, high = band
    notes = []
    for path, rate in (
        ("shared", stats.average.shared_rate),
        ("private", stats.average.private_rate),
    ):
        if not low <= rate <= high:
            notes.append(
                f"The {path} path masks {rate:.0%} of tokens, outside the typical "
                f"{low:.0%} to {high:.0%}"
            )
    return notes
