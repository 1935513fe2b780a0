import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
import torch
from dataclasses_json import dataclass_json

from masker.data.batching import Batch, Collator, batches
from masker.data.example import DomainSplit, Example
from masker.model import DomainMasker, ModelOutput

EVAL_BATCH_SIZE = 32


class EvaluationError(Exception):
    pass


@dataclass_json
@dataclass
class EvalReport:
    split: str
    accuracy: Dict[str, float]
    average: float
    step: int = 0
    losses: Dict[str, float] = field(default_factory=dict)
    masking: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_accuracies(
        cls, accuracy: Dict[str, float], split: str = "test", **kwargs
    ) -> "EvalReport":
        if len(accuracy) == 0:
            raise EvaluationError("No domains to average")
        for domain, value in accuracy.items():
            if not 0.0 <= value <= 1.0:
                raise EvaluationError(f"Accuracy of {domain} out of range: {value}")
        return cls(
            split=split,
            accuracy=dict(accuracy),
            average=float(np.mean(list(accuracy.values()))),
            **kwargs,
        )


def eval_mode_forward(model: DomainMasker, batch: Batch) -> ModelOutput:
    return model(batch.ids, batch.attention_mask, batch.constrained, batch.domain_ids)


def predict(
    model: DomainMasker,
    examples: List[Example],
    collator: Collator,
    batch_size: int = EVAL_BATCH_SIZE,
) -> Iterator[Tuple[Batch, ModelOutput]]:
    """Deterministic inference: eval mode (argmax masks, no dropout), no
    gradients. The model's previous mode is restored afterwards."""
    was_training = model.training
    model.eval()
    try:
        with torch.no_grad():
            for batch in batches(examples, batch_size, collate_fn=collator):
                yield batch, eval_mode_forward(model, batch)
    finally:
        model.train(was_training)


def masking_rate(decision_hard: torch.Tensor, batch: Batch) -> torch.Tensor:
    """Masked share of the real (non-special, non-PAD) tokens per example."""
    real = torch.tensor(
        [[not special for special in sequence.is_special] for sequence in batch.sequences]
    )
    counts = real.sum(dim=-1).clamp(min=1)
    return (decision_hard & real).sum(dim=-1) / counts


def evaluate(
    model: DomainMasker,
    splits: List[DomainSplit],
    which: str,
    collator: Collator,
    batch_size: int = EVAL_BATCH_SIZE,
    step: int = 0,
) -> EvalReport:
    accuracy = {}
    shared_rates: List[float] = []
    private_rates: List[float] = []
    for domain_split in splits:
        examples = domain_split.part(which)
        if len(examples) == 0:
            raise EvaluationError(f"Empty {which} split for domain {domain_split.domain}")
        if any(not example.labeled for example in examples):
            raise EvaluationError(
                f"{which} split of domain {domain_split.domain} has unlabeled examples"
            )

        correct = 0
        for batch, output in predict(model, examples, collator, batch_size):
            gold = torch.tensor([example.sentiment for example in batch.examples])
            correct += int((output.logits.argmax(dim=-1) == gold).sum())
            shared_rates.extend(masking_rate(output.shared_decision.hard, batch).tolist())
            private_rates.extend(masking_rate(output.private_decision.hard, batch).tolist())
        accuracy[domain_split.domain] = correct / len(examples)

    report = EvalReport.from_accuracies(
        accuracy,
        split=which,
        step=step,
        masking={
            "shared_rate": float(np.mean(shared_rates)),
            "private_rate": float(np.mean(private_rates)),
        },
    )
    logging.debug(
        "Evaluated %s at step %s: average = %.4f, accuracy = %s",
        which,
        step,
        report.average,
        report.accuracy,
    )
    return report


def best_report(history: List[EvalReport]) -> Optional[EvalReport]:
    """First report with the highest macro average."""
    best = None
    for report in history:
        if best is None or report.average > best.average:
            best = report
    return best
