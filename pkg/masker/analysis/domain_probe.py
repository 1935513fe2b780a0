import dataclasses
import enum
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import torch
import torch.nn.functional as F
from dataclasses_json import dataclass_json
from sklearn.metrics import confusion_matrix
from torch import nn
from tqdm import tqdm

from masker.data.batching import Collator, batches
from masker.data.example import DomainSplit, Example, pooled
from masker.encoder.encoder import EncoderConfig, TransformerEncoder, sequences_to_tensor
from masker.encoder.tokenizer import TokenSequence, apply_mask, from_words, tokenize
from masker.encoder.vocabulary import PAD_ID
from masker.features.domain_probe import DomainProbeHead
from masker.model import DomainMasker
from masker.seeding import derive_seed
from masker.train.evaluate import predict


class ProbeVariant(enum.Enum):
    ORIGINAL = "original"
    MASKED = "masked"
    MASKED_WORDS = "masked-words-only"


@dataclass_json
@dataclass
class ProbeConfig:
    epochs: int = 30  # upper bound; see patience and stop_accuracy
    patience: int = 3
    stop_accuracy: float = 0.995
    batch_size: int = 16
    lr: float = 1e-3
    seed: int = 0
    encoder: EncoderConfig = field(default_factory=EncoderConfig)


@dataclass_json
@dataclass
class ProbeResult:
    variant: ProbeVariant
    domains: List[str]
    accuracy: float
    confusion: List[List[int]]  # rows = true domain, columns = predicted
    epochs: int = 0
    train_accuracy: float = 0.0


class DomainClassifier(nn.Module):
    """Independent domain classifier on the [CLS] slot, no gradient reversal."""

    def __init__(self, encoder_config: EncoderConfig, num_domains: int):
        super().__init__()
        self.encoder = TransformerEncoder(encoder_config)
        self.head = DomainProbeHead(encoder_config.hidden_dim, num_domains)

    def forward(self, ids: torch.Tensor) -> torch.Tensor:
        return self.head(self.encoder(ids, ids != PAD_ID).cls)


def variant_sequences(
    variant: ProbeVariant,
    examples: List[Example],
    collator: Collator,
    model: Optional[DomainMasker] = None,
) -> List[TokenSequence]:
    """Probe inputs: the original text, the text with the shared path's
    masked positions replaced by [MASK], or only the masked-out words in
    their original order."""
    if variant == ProbeVariant.ORIGINAL:
        return [tokenize(example.text, collator.vocab, collator.max_len) for example in examples]
    if model is None:
        raise ValueError(f"The {variant.value} variant needs a trained model")

    sequences = []
    for batch, output in predict(model, examples, collator):
        for row, sequence in enumerate(batch.sequences):
            hard = output.shared_decision.hard[row]
            if variant == ProbeVariant.MASKED:
                sequences.append(apply_mask(sequence, hard))
            else:
                words = [
                    sequence.surface[i] for i in range(sequence.length) if bool(hard[i])
                ]
                sequences.append(from_words(words, collator.vocab, collator.max_len))
    return sequences


def train_probe(
    sequences: List[TokenSequence],
    labels: List[int],
    num_domains: int,
    config: ProbeConfig,
    progress: bool = False,
) -> Tuple[DomainClassifier, List[float]]:
    """Trains until the training accuracy reaches `config.stop_accuracy` or
    has not improved for `config.patience` epochs, at most `config.epochs`.

    Returns the classifier and its training accuracy after each epoch.
    """
    torch.manual_seed(derive_seed(config.seed, "probe"))
    classifier = DomainClassifier(config.encoder, num_domains)
    optimizer = torch.optim.Adam(classifier.parameters(), lr=config.lr)
    classifier.train()

    indices = list(range(len(sequences)))
    history: List[float] = []
    best, stale = -1.0, 0
    with tqdm(total=config.epochs, unit=" epochs", disable=not progress) as progress_bar:
        for epoch in range(config.epochs):
            shuffle_seed = derive_seed(config.seed, f"probe-shuffle:{epoch}")
            correct = 0
            for batch in batches(indices, config.batch_size, True, shuffle_seed):
                ids = sequences_to_tensor([sequences[i] for i in batch])
                targets = torch.tensor([labels[i] for i in batch], dtype=torch.long)
                logits = classifier(ids)
                loss = F.cross_entropy(logits, targets)
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()
                correct += int((logits.argmax(dim=-1) == targets).sum())

            accuracy = correct / max(len(indices), 1)
            history.append(accuracy)
            progress_bar.update(1)
            progress_bar.set_postfix(accuracy=f"{accuracy:.3f}")

            if accuracy > best + 1e-3:
                best, stale = accuracy, 0
            else:
                stale += 1
            if accuracy >= config.stop_accuracy or stale >= config.patience:
                break

    logging.debug(
        "Domain probe trained for %d of %d epochs, train accuracy = %.4f",
        len(history),
        config.epochs,
        history[-1] if history else 0.0,
    )
    classifier.eval()
    return classifier, history


def probe_predictions(
    classifier: DomainClassifier, sequences: List[TokenSequence], batch_size: int
) -> List[int]:
    predictions = []
    with torch.no_grad():
        for batch in batches(sequences, batch_size):
            predictions.extend(classifier(sequences_to_tensor(batch)).argmax(dim=-1).tolist())
    return predictions


def probe_result(
    variant: ProbeVariant, domains: List[str], gold: List[int], predicted: List[int]
) -> ProbeResult:
    matrix = confusion_matrix(gold, predicted, labels=list(range(len(domains))))
    total = int(matrix.sum())
    return ProbeResult(
        variant=variant,
        domains=list(domains),
        accuracy=float(np.trace(matrix)) / total if total > 0 else 0.0,
        confusion=matrix.astype(int).tolist(),
    )


def domain_probe(
    variant: ProbeVariant,
    splits: List[DomainSplit],
    collator: Collator,
    config: ProbeConfig,
    model: Optional[DomainMasker] = None,
    progress: bool = False,
) -> ProbeResult:
    """Trains a fresh domain classifier on the variant's training texts and
    tests it on the same variant of the test texts."""
    domains = [split.domain for split in splits]
    train_examples = pooled(splits, "train")
    test_examples = pooled(splits, "test")

    encoder_config = dataclasses.replace(
        config.encoder, vocab_size=collator.vocab.size, max_len=collator.max_len
    )
    config = dataclasses.replace(config, encoder=encoder_config)

    train_sequences = variant_sequences(variant, train_examples, collator, model)
    test_sequences = variant_sequences(variant, test_examples, collator, model)
    classifier, history = train_probe(
        train_sequences,
        [example.domain_id for example in train_examples],
        len(domains),
        config,
        progress,
    )
    result = probe_result(
        variant,
        domains,
        [example.domain_id for example in test_examples],
        probe_predictions(classifier, test_sequences, config.batch_size),
    )
    result = dataclasses.replace(
        result, epochs=len(history), train_accuracy=history[-1] if history else 0.0
    )
    logging.info(
        "Domain probe on %s texts: accuracy = %.4f after %d epochs",
        variant.value,
        result.accuracy,
        result.epochs,
    )
    return result


def chance_level(result: ProbeResult) -> float:
    return 1.0 / len(result.domains)