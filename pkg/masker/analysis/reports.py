import json
import os
from typing import Any, Dict, List, Tuple

import numpy as np
import pandas as pd
from matplotlib.figure import Figure

from masker.analysis.domain_probe import ProbeResult
from masker.analysis.mask_stats import MaskStats
from masker.data.loader import DomainSummary


def ensure_parent(path: str):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)


def write_json(value: Any, path: str):
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as file:
        json.dump(value, file, indent=2, sort_keys=True)
        file.write("\n")


def write_dataset_summary(summaries: List[DomainSummary], path: str):
    ensure_parent(path)
    frame = pd.DataFrame([summary.to_dict() for summary in summaries])
    frame.to_csv(path, index=False, float_format="%.2f")


def write_mask_stats(stats: MaskStats, path: str):
    ensure_parent(path)
    rows = [domain.to_dict() for domain in stats.domains]
    if stats.average is not None:
        rows.append(stats.average.to_dict())
    pd.DataFrame(rows).to_csv(path, index=False, float_format="%.4f")


def write_probe_results(results: List[ProbeResult], path: str):
    ensure_parent(path)
    frame = pd.DataFrame(
        [
            {
                "variant": result.variant.value,
                "accuracy": result.accuracy,
                "epochs": result.epochs,
                "train_accuracy": result.train_accuracy,
            }
            for result in results
        ]
    )
    frame.to_csv(path, index=False, float_format="%.4f")


def write_confusion(result: ProbeResult, path: str):
    write_json(
        {
            "variant": result.variant.value,
            "domains": result.domains,
            "accuracy": result.accuracy,
            "confusion": result.confusion,
        },
        path,
    )


def write_accuracy_table(accuracy: Dict[str, float], path: str):
    """Per-domain accuracy (%) with an "Avg" row, the layout of the
    per-target cross-domain table."""
    ensure_parent(path)
    rows = [{"domain": domain, "accuracy": 100 * value} for domain, value in accuracy.items()]
    rows.append({"domain": "Avg", "accuracy": 100 * float(np.mean(list(accuracy.values())))})
    pd.DataFrame(rows).to_csv(path, index=False, float_format="%.2f")


def word_frequency_chart(words: List[Tuple[str, int]], title: str, path: str):
    ensure_parent(path)
    figure = Figure(figsize=(6, max(2.0, 0.3 * len(words) + 1)))
    axes = figure.add_subplot()
    labels = [word for word, _ in words][::-1]
    counts = [count for _, count in words][::-1]
    axes.barh(labels, counts, color="#4c72b0")
    axes.set_title(title)
    axes.set_xlabel("frequency")
    figure.tight_layout()
    figure.savefig(path, format="svg")


def confusion_heatmap(result: ProbeResult, path: str):
    ensure_parent(path)
    matrix = np.array(result.confusion, dtype=float)
    totals = matrix.sum(axis=1, keepdims=True)
    normalized = np.divide(matrix, totals, out=np.zeros_like(matrix), where=totals > 0)

    size = max(4.0, 0.5 * len(result.domains) + 2)
    figure = Figure(figsize=(size, size))
    axes = figure.add_subplot()
    image = axes.imshow(normalized, cmap="Blues", vmin=0, vmax=1)
    axes.set_xticks(range(len(result.domains)), result.domains, rotation=45, ha="right")
    axes.set_yticks(range(len(result.domains)), result.domains)
    axes.set_xlabel("predicted domain")
    axes.set_ylabel("true domain")
    axes.set_title(f"{result.variant.value} (accuracy {result.accuracy:.2%})")
    figure.colorbar(image, ax=axes)
    figure.tight_layout()
    figure.savefig(path, format="svg")
