import json
import logging
import os
from dataclasses import dataclass
from typing import Collection, List, Optional, Sequence

import numpy as np
from dataclasses_json import dataclass_json

from masker.data.example import SENTIMENT_LABELS, DatasetError, DomainSplit, Example
from masker.data.splits import DEFAULT_RATIOS, split
from masker.encoder.vocabulary import split_words
from masker.seeding import derive_seed

SPLIT_PARTS = ("train", "dev", "test")
RECORD_EXTENSION = ".jsonl"
ALL_RECORDS_FILE = "all" + RECORD_EXTENSION


@dataclass_json
@dataclass
class DomainSummary:
    domain: str
    train: int
    dev: int
    test: int
    avg_length: float


def read_records(
    path: str, domain: str, domain_id: int, allow_unlabeled: bool = False
) -> List[Example]:
    examples = []
    with open(path, encoding="utf-8") as file:
        for line_number, line in enumerate(file, start=1):
            if line.strip() == "":
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"Malformed record: {exc.msg}", path, line_number) from exc
            if not isinstance(record, dict):
                raise DatasetError("Record is not a JSON object", path, line_number)

            text = record.get("text")
            if not isinstance(text, str) or text.strip() == "":
                raise DatasetError("Record has no text", path, line_number)

            label = record.get("label")
            if label is None:
                if not allow_unlabeled:
                    raise DatasetError("Record has no label", path, line_number)
            elif isinstance(label, bool) or label not in SENTIMENT_LABELS:
                raise DatasetError(f"Unknown label: {label!r}", path, line_number)

            examples.append(
                Example(text=text, sentiment=label, domain=domain, domain_id=domain_id)
            )
    return examples


def list_domains(root: str) -> List[str]:
    if not os.path.isdir(root):
        raise DatasetError("Dataset directory not found", root)
    domains = sorted(
        name
        for name in os.listdir(root)
        if os.path.isdir(os.path.join(root, name)) and not name.startswith(".")
    )
    seen = {}
    for name in domains:
        key = name.lower()
        if key in seen:
            raise DatasetError(f"Duplicate domain directories: {seen[key]}, {name}", root)
        seen[key] = name
    if len(domains) == 0:
        raise DatasetError("No domain directories", root)
    return domains


def load_dataset(
    root: str,
    ratios: Sequence[float] = DEFAULT_RATIOS,
    seed: int = 0,
    unlabeled: Collection[str] = (),
) -> List[DomainSplit]:
    """Loads `<root>/<domain>/{train,dev,test}.jsonl`, or `<root>/<domain>/all.jsonl`
    split with `ratios`. Domain ids follow the sorted domain names.

    Records of domains named in `unlabeled` (case-insensitive) may omit their
    label.
    """
    domains = list_domains(root)
    by_key = {domain.lower(): domain for domain in domains}
    unknown = sorted(name for name in unlabeled if name.lower() not in by_key)
    if len(unknown) > 0:
        raise DatasetError(f"Unknown unlabeled domains: {', '.join(unknown)}", root)
    unlabeled = {by_key[name.lower()] for name in unlabeled}

    splits = []
    for domain_id, domain in enumerate(domains):
        directory = os.path.join(root, domain)
        allow_unlabeled = domain in unlabeled
        part_paths = [os.path.join(directory, part + RECORD_EXTENSION) for part in SPLIT_PARTS]
        present = [os.path.isfile(path) for path in part_paths]

        if all(present):
            parts = [
                read_records(path, domain, domain_id, allow_unlabeled) for path in part_paths
            ]
            domain_split = DomainSplit(domain, domain_id, *parts)
        elif any(present):
            missing = [part for part, exists in zip(SPLIT_PARTS, present) if not exists]
            raise DatasetError(f"Missing split files: {', '.join(missing)}", directory)
        else:
            all_path = os.path.join(directory, ALL_RECORDS_FILE)
            if not os.path.isfile(all_path):
                raise DatasetError("No record files", directory)
            examples = read_records(all_path, domain, domain_id, allow_unlabeled)
            domain_split = split(examples, ratios, derive_seed(seed, f"split:{domain}"))
            domain_split.domain, domain_split.domain_id = domain, domain_id

        splits.append(domain_split)

    for summary in dataset_summary(splits):
        logging.debug(
            "Loaded domain %s: train = %s, dev = %s, test = %s, avg length = %.1f",
            summary.domain,
            summary.train,
            summary.dev,
            summary.test,
            summary.avg_length,
        )
    logging.info(
        "Loaded %s domains, %s examples from %s",
        len(splits),
        sum(sum(split.sizes) for split in splits),
        root,
    )
    return splits


def write_dataset(splits: List[DomainSplit], root: str):
    for domain_split in splits:
        directory = os.path.join(root, domain_split.domain)
        os.makedirs(directory, exist_ok=True)
        for part in SPLIT_PARTS:
            with open(
                os.path.join(directory, part + RECORD_EXTENSION), "w", encoding="utf-8"
            ) as file:
                for example in domain_split.part(part):
                    record = {"text": example.text}
                    if example.sentiment is not None:
                        record["label"] = example.sentiment
                    file.write(json.dumps(record, ensure_ascii=False) + "\n")
    logging.debug("Wrote %s domains to %s", len(splits), root)


def dataset_summary(splits: List[DomainSplit]) -> List[DomainSummary]:
    """Per-domain train/dev/test counts and mean token length."""
    summaries = []
    for domain_split in splits:
        lengths = [len(split_words(example.text)) for example in domain_split.all()]
        summaries.append(
            DomainSummary(
                domain=domain_split.domain,
                train=len(domain_split.train),
                dev=len(domain_split.dev),
                test=len(domain_split.test),
                avg_length=float(np.mean(lengths)) if len(lengths) > 0 else 0.0,
            )
        )
    return summaries


def find_domain(splits: List[DomainSplit], name: Optional[str]) -> DomainSplit:
    for domain_split in splits:
        if domain_split.domain.lower() == (name or "").lower():
            return domain_split
    raise DatasetError(
        f"Unknown domain: {name}. Available: {', '.join(s.domain for s in splits)}"
    )
