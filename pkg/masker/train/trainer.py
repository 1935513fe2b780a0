import dataclasses
import datetime
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import humanize
import numpy as np
import torch
from tqdm import tqdm

from masker.classify.losses import total_loss
from masker.data.batching import Collator, batches
from masker.data.example import DatasetError, DomainSplit, pooled
from masker.data.loader import find_domain
from masker.encoder.vocabulary import Vocabulary, build_vocab
from masker.masking.constraints import LexiconConstraints
from masker.model import DomainMasker, ModelConfig, ablated_weights
from masker.seeding import derive_seed, generator, seed_everything
from masker.train.checkpoint import save_checkpoint
from masker.train.config import Mode, Optimizer, TrainConfig, config_fingerprint
from masker.train.evaluate import EvalReport, best_report, evaluate
from masker.train.metrics_log import MetricsLog
from masker.train.phases import phase_at, phase_of


class DivergenceError(Exception):
    def __init__(self, step: int, losses: Dict[str, float]):
        super().__init__(f"Non-finite loss at step {step}: {losses}")
        self.step = step
        self.losses = losses


@dataclass
class TrainResult:
    model: DomainMasker
    history: List[EvalReport]
    best: EvalReport
    test: EvalReport
    fingerprint: str
    loss_trace: List[Dict[str, float]] = field(default_factory=list)


def training_vocab(splits: List[DomainSplit], min_freq: int = 1) -> Vocabulary:
    return build_vocab([example.text for example in pooled(splits, "train")], min_freq)


def build_model(config: TrainConfig, domains: List[str], vocab: Vocabulary) -> DomainMasker:
    seed_everything(config.seed)
    model_config = ModelConfig(
        domains=list(domains),
        encoder=dataclasses.replace(config.encoder, vocab_size=vocab.size),
        descriptor_dim=config.descriptor_dim,
        disable=sorted(config.disable),
    )
    return DomainMasker(model_config)


def make_optimizer(config: TrainConfig, model: DomainMasker) -> torch.optim.Optimizer:
    if config.optimizer == Optimizer.ADAM:
        return torch.optim.Adam(model.parameters(), lr=config.lr)
    return torch.optim.SGD(model.parameters(), lr=config.lr)


def total_steps(config: TrainConfig, train_size: int) -> int:
    steps_per_epoch = math.ceil(train_size / config.batch_size)
    return config.phase1_steps + config.phase2_steps + config.epochs * steps_per_epoch


def protocol_domains(config: TrainConfig, splits: List[DomainSplit]):
    """(domains used for model selection, domains evaluated on test, domain
    ids whose sentiment labels stay hidden)."""
    if config.mode == Mode.CROSS_DOMAIN:
        target = find_domain(splits, config.target)
        sources = [split for split in splits if split.domain_id != target.domain_id]
        if len(sources) == 0:
            raise DatasetError("Cross-domain training needs at least one source domain")
        return sources, [target], {target.domain_id}
    return splits, splits, set()


def mean_losses(trace: List[Dict[str, float]]) -> Dict[str, float]:
    if len(trace) == 0:
        return {}
    return {name: float(np.mean([losses[name] for losses in trace])) for name in trace[0]}


def snapshot(model: DomainMasker) -> Dict[str, torch.Tensor]:
    return {name: tensor.detach().clone() for name, tensor in model.state_dict().items()}


def train(
    config: TrainConfig,
    splits: List[DomainSplit],
    vocab: Vocabulary,
    constraints: LexiconConstraints,
    metrics: Optional[MetricsLog] = None,
    checkpoint_path: Optional[str] = None,
    progress: bool = True,
) -> TrainResult:
    """Three-phase training: domain losses, then sentiment losses, then all
    of them for `epochs` passes. The parameters with the best dev macro
    average are kept."""
    config.validate()
    fingerprint = config_fingerprint(config)
    logging.info(
        "Training %s on %s domains, fingerprint = %s",
        config.mode.value,
        len(splits),
        fingerprint,
    )

    selection_splits, test_splits, hidden_domains = protocol_domains(config, splits)
    model = build_model(config, [split.domain for split in splits], vocab)
    model.train()
    optimizer = make_optimizer(config, model)
    weights = ablated_weights(config.weights, model.disabled)
    train_collator = Collator(vocab, constraints, config.max_len, hidden_domains)
    eval_collator = Collator(vocab, constraints, config.max_len)
    gumbel = generator(config.seed, "gumbel")

    train_examples = pooled(splits, "train")
    if len(train_examples) == 0:
        raise DatasetError("No training examples")
    steps = total_steps(config, len(train_examples))

    if metrics is not None:
        metrics.write(
            "start",
            fingerprint=fingerprint,
            mode=config.mode.value,
            target=config.target,
            steps=steps,
            domains=[split.domain for split in splits],
        )

    history: List[EvalReport] = []
    loss_trace: List[Dict[str, float]] = []
    best_state = None
    started = time.time()
    step = 0
    epoch = 0
    phase = None
    window: List[Dict[str, float]] = []

    def record(report: EvalReport):
        nonlocal best_state
        history.append(report)
        if best_report(history) is report:
            best_state = snapshot(model)
        logging.info(
            "Step %s: dev average = %.4f (best %.4f)",
            report.step,
            report.average,
            best_report(history).average,
        )
        if metrics is not None:
            metrics.write(
                "eval",
                step=report.step,
                split=report.split,
                accuracy=report.accuracy,
                average=report.average,
                losses=report.losses,
                masking=report.masking,
            )

    with tqdm(total=steps, unit=" steps", disable=not progress) as progress_bar:
        while step < steps:
            shuffle_seed = derive_seed(config.seed, f"data-shuffle:{epoch}")
            for batch in batches(
                train_examples, config.batch_size, True, shuffle_seed, train_collator
            ):
                if step >= steps:
                    break
                if phase_at(step, config) != phase:
                    phase = phase_at(step, config)
                    logging.info("Step %s: entering %s phase", step, phase.value)

                output = model(
                    batch.ids,
                    batch.attention_mask,
                    batch.constrained,
                    batch.domain_ids,
                    temperature=config.temperature,
                    generator=gumbel,
                )
                parts = model.loss_parts(
                    output, batch.domain_ids, batch.sentiment, batch.sentiment_mask
                )
                bundle = total_loss(
                    parts,
                    weights.only(phase_of(step, config)),
                    model.regularized_parameters(),
                )
                losses = bundle.to_dict()
                if not all(math.isfinite(value) for value in losses.values()):
                    raise DivergenceError(step, losses)

                optimizer.zero_grad()
                bundle.L_all.backward()
                if config.grad_clip > 0:
                    torch.nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip)
                optimizer.step()

                loss_trace.append(losses)
                window.append(losses)
                step += 1
                progress_bar.update(1)

            epoch += 1
            if step > config.phase1_steps:
                report = evaluate(model, selection_splits, "dev", eval_collator, step=step)
                report.losses = mean_losses(window)
                window = []
                record(report)

    if len(history) == 0:
        record(evaluate(model, selection_splits, "dev", eval_collator, step=step))

    model.load_state_dict(best_state)
    model.eval()
    best = best_report(history)
    test = evaluate(model, test_splits, "test", eval_collator, step=best.step)
    logging.info(
        "Finished training in %s: best dev average = %.4f at step %s, test average = %.4f",
        humanize.naturaldelta(datetime.timedelta(seconds=time.time() - started)),
        best.average,
        best.step,
        test.average,
    )

    if metrics is not None:
        metrics.write("best", step=best.step, average=best.average, fingerprint=fingerprint)
        metrics.write(
            "test",
            step=best.step,
            split="test",
            accuracy=test.accuracy,
            average=test.average,
            masking=test.masking,
        )
    if checkpoint_path is not None:
        save_checkpoint(model, config, checkpoint_path)

    return TrainResult(
        model=model,
        history=history,
        best=best,
        test=test,
        fingerprint=fingerprint,
        loss_trace=loss_trace,
    )
