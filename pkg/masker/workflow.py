import dataclasses
import logging
import os
from dataclasses import dataclass
from typing import Collection, Dict, List, Optional

from masker.analysis import reports
from masker.analysis.domain_probe import ProbeConfig, ProbeResult, ProbeVariant, domain_probe
from masker.analysis.mask_stats import (
    MaskStats,
    atypical_rates,
    mask_records,
    role_mask_rates,
    stats_from_records,
)
from masker.analysis.top_words import ALL_DOMAINS, Scope, rank_words
from masker.analysis.visualize import visualize_masks, write_records
from masker.data.batching import Collator
from masker.data.example import DomainSplit
from masker.data.loader import dataset_summary, load_dataset, write_dataset
from masker.data.synthetic import generate_synthetic
from masker.encoder.vocabulary import Vocabulary, load_vocab_file, save_vocab
from masker.masking.constraints import LexiconConstraints, default_constraints
from masker.model import DomainMasker
from masker.paths import RunPaths
from masker.train.checkpoint import load_checkpoint
from masker.train.config import Mode, TrainConfig
from masker.train.evaluate import EvalReport, evaluate
from masker.train.metrics_log import MetricsLog
from masker.train.trainer import TrainResult, protocol_domains, train, training_vocab

ALL_TARGETS = "all"


def load_data(config: TrainConfig, unlabeled: Collection[str] = ()) -> List[DomainSplit]:
    """The dataset under `data_dir`, or the synthetic corpus when no
    directory is configured."""
    if config.data_dir:
        return load_dataset(config.data_dir, seed=config.seed, unlabeled=unlabeled)
    return generate_synthetic(config.synthetic).splits


def constraints_for(config: TrainConfig) -> LexiconConstraints:
    return default_constraints(config.lexicon_dir, config.disabled_lexicons)


def run_vocab_build(config: TrainConfig, output_path: str) -> Vocabulary:
    vocab = training_vocab(load_data(config), config.min_freq)
    reports.ensure_parent(output_path)
    save_vocab(vocab, output_path)
    logging.info("Wrote vocabulary of %s tokens to %s", vocab.size, output_path)
    return vocab


def run_synth_gen(config: TrainConfig, output_dir: str):
    dataset = generate_synthetic(config.synthetic)
    write_dataset(dataset.splits, output_dir)
    reports.write_json(dataset.roles_to_json(), os.path.join(output_dir, "roles.json"))
    reports.write_dataset_summary(
        dataset_summary(dataset.splits), os.path.join(output_dir, "dataset.csv")
    )
    return dataset


def run_training(config: TrainConfig, paths: RunPaths, progress: bool = True) -> TrainResult:
    os.makedirs(os.path.join(paths.root, "checkpoints"), exist_ok=True)
    with open(paths.config, "w", encoding="utf-8") as file:
        file.write(config.to_json(indent=2, sort_keys=True))

    unlabeled = [config.target] if config.mode == Mode.CROSS_DOMAIN else []
    splits = load_data(config, unlabeled)
    reports.write_dataset_summary(dataset_summary(splits), paths.dataset)

    vocab = training_vocab(splits, config.min_freq)
    save_vocab(vocab, paths.vocab)

    result = train(
        config,
        splits,
        vocab,
        constraints_for(config),
        metrics=MetricsLog(paths.metrics),
        checkpoint_path=paths.checkpoint,
        progress=progress,
    )
    reports.write_json(result.test.to_dict(encode_json=True), paths.report("test.json"))
    return result


def run_cross_domain_all(
    config: TrainConfig, paths: RunPaths, progress: bool = True
) -> Dict[str, float]:
    """One cross-domain run per target under `<run>/<target>/`, then a
    per-target accuracy table."""
    with open(paths.config, "w", encoding="utf-8") as file:
        file.write(config.to_json(indent=2, sort_keys=True))

    domains = [split.domain for split in load_data(config)]
    accuracy = {}
    for domain in domains:
        target_config = dataclasses.replace(config, mode=Mode.CROSS_DOMAIN, target=domain)
        target_paths = RunPaths(os.path.join(paths.root, domain))
        os.makedirs(os.path.join(target_paths.root, "reports"), exist_ok=True)
        result = run_training(target_config, target_paths, progress)
        accuracy[domain] = result.test.accuracy[domain]
        logging.info("Cross-domain target %s: accuracy = %.4f", domain, accuracy[domain])

    reports.write_accuracy_table(accuracy, paths.report("cross-domain.csv"))
    return accuracy


@dataclass
class RunContext:
    paths: RunPaths
    config: TrainConfig
    vocab: Vocabulary
    model: DomainMasker
    splits: List[DomainSplit]
    constraints: LexiconConstraints

    @property
    def collator(self) -> Collator:
        return Collator(self.vocab, self.constraints, self.config.max_len)


def load_run(run_dir: str) -> RunContext:
    """Everything needed to re-evaluate a run, read from its directory."""
    paths = RunPaths(run_dir)
    if not os.path.isfile(paths.config):
        raise FileNotFoundError(f"No run configuration in {run_dir}")
    with open(paths.config, encoding="utf-8") as file:
        config = TrainConfig.from_json(file.read())
    vocab = load_vocab_file(paths.vocab)
    model, _ = load_checkpoint(
        paths.checkpoint, expected=dataclasses.replace(config.encoder, vocab_size=vocab.size)
    )
    unlabeled = [config.target] if config.mode == Mode.CROSS_DOMAIN else []
    return RunContext(
        paths=paths,
        config=config,
        vocab=vocab,
        model=model,
        splits=load_data(config, unlabeled),
        constraints=constraints_for(config),
    )


def run_eval(run_dir: str, which: str = "test") -> EvalReport:
    context = load_run(run_dir)
    selection, test, _ = protocol_domains(context.config, context.splits)
    report = evaluate(
        context.model, test if which == "test" else selection, which, context.collator
    )
    reports.write_json(report.to_dict(encode_json=True), context.paths.report(f"eval-{which}.json"))
    logging.info("Evaluated %s: average = %.4f", which, report.average)
    return report


def run_analyze_masks(run_dir: str, k: int = 20, which: str = "test") -> MaskStats:
    context = load_run(run_dir)
    records = mask_records(context.model, context.splits, context.collator, which)
    stats = stats_from_records(records)

    write_records(records, context.paths.report("mask_records.jsonl"))
    reports.write_mask_stats(stats, context.paths.report("mask_stats.csv"))

    notes = atypical_rates(stats)
    for note in notes:
        logging.warning(note)
    summary = {"average": stats.average.to_dict(), "notes": notes}
    if not context.config.data_dir:
        roles = generate_synthetic(context.config.synthetic).roles
        summary["roles"] = [rate.to_dict() for rate in role_mask_rates(records, roles)]
    reports.write_json(summary, context.paths.report("mask_summary.json"))

    overall = rank_words(records, k, Scope.ALL)
    per_domain = rank_words(records, k, Scope.PER_DOMAIN)
    reports.write_json(
        {"all": overall.to_dict(), "per_domain": per_domain.to_dict()},
        context.paths.report("top_words.json"),
    )
    reports.word_frequency_chart(
        overall.remaining[ALL_DOMAINS],
        "Remaining words (shared path)",
        context.paths.report("words-remaining.svg"),
    )
    reports.word_frequency_chart(
        overall.masked[ALL_DOMAINS],
        "Masked words (private path)",
        context.paths.report("words-masked.svg"),
    )
    for domain, words in per_domain.masked.items():
        reports.word_frequency_chart(
            words, f"Masked words in {domain}", context.paths.report(f"words-masked-{domain}.svg")
        )
    return stats


def run_probe(
    variants: List[ProbeVariant],
    probe_config: ProbeConfig,
    output: RunPaths,
    context: Optional[RunContext] = None,
    config: Optional[TrainConfig] = None,
    progress: bool = True,
) -> List[ProbeResult]:
    """Domain probes for `variants`. Masked variants need `context` (a
    trained run); the original variant also runs from a bare `config`."""
    if context is not None:
        config = context.config
        splits, collator, model = context.splits, context.collator, context.model
    else:
        splits = load_data(config)
        vocab = training_vocab(splits, config.min_freq)
        collator = Collator(vocab, constraints_for(config), config.max_len)
        model = None

    probe_config = dataclasses.replace(probe_config, seed=config.seed, encoder=config.encoder)
    results = []
    for variant in variants:
        result = domain_probe(variant, splits, collator, probe_config, model, progress)
        reports.write_confusion(result, output.report(f"confusion-{variant.value}.json"))
        reports.confusion_heatmap(result, output.report(f"confusion-{variant.value}.svg"))
        results.append(result)
    reports.write_probe_results(results, output.report("probe.csv"))
    return results


def run_visualize(run_dir: str, limit: int = 5, which: str = "test"):
    context = load_run(run_dir)
    examples = [
        example for split in context.splits for example in split.part(which)[:limit]
    ]
    return visualize_masks(
        context.model, examples, context.collator, context.paths.report("visualize")
    )
