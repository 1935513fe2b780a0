import logging
import os
from typing import List

from matplotlib.figure import Figure

from masker.analysis.mask_stats import MaskRecord, example_records
from masker.data.batching import Collator
from masker.data.example import Example
from masker.model import DomainMasker

RECORDS_FILE = "masks.jsonl"
SVG_DIR = "svg"

SHARED_COLOR = "#f4a6a6"
PRIVATE_COLOR = "#1f5fbf"
CONSTRAINED_COLOR = "#2e8b57"
TOKENS_PER_LINE = 12


def render_record(record: MaskRecord, path: str):
    """Draws the sentence with shared-masked tokens on a red background,
    private-masked tokens in bold blue and constrained tokens in green."""
    lines = max(1, -(-record.length // TOKENS_PER_LINE))
    figure = Figure(figsize=(10, 0.5 * lines + 0.8))
    line_height = 1.0 / (lines + 2)

    outcome = "?" if record.correct is None else ("correct" if record.correct else "wrong")
    figure.text(
        0.01,
        1 - line_height,
        f"{record.domain} #{record.index}  gold={record.gold}  prediction={record.prediction} ({outcome})",
        fontsize=9,
        family="monospace",
    )
    for position, word in enumerate(record.tokens):
        line, column = divmod(position, TOKENS_PER_LINE)
        style = {"fontsize": 10, "family": "monospace"}
        if record.shared[position]:
            style["bbox"] = {"facecolor": SHARED_COLOR, "edgecolor": "none", "pad": 1}
        if record.private[position]:
            style.update(color=PRIVATE_COLOR, weight="bold")
        elif record.constrained[position]:
            style["color"] = CONSTRAINED_COLOR
        if record.is_unk[position]:
            style["style"] = "italic"
        figure.text(
            0.01 + column / TOKENS_PER_LINE,
            1 - (line + 2) * line_height,
            word,
            **style,
        )
    figure.savefig(path, format="svg")


def write_records(records: List[MaskRecord], path: str):
    with open(path, "w", encoding="utf-8") as file:
        for record in records:
            file.write(record.to_json(sort_keys=True) + "\n")


def visualize_masks(
    model: DomainMasker,
    examples: List[Example],
    collator: Collator,
    output_dir: str,
) -> List[MaskRecord]:
    """Writes one JSONL record and one SVG per example under `output_dir`."""
    os.makedirs(os.path.join(output_dir, SVG_DIR), exist_ok=True)
    records = example_records(model, examples, collator)

    write_records(records, os.path.join(output_dir, RECORDS_FILE))
    for record in records:
        render_record(
            record, os.path.join(output_dir, SVG_DIR, f"{record.index:04d}-{record.domain}.svg")
        )
    logging.info("Wrote %s mask visualizations to %s", len(records), output_dir)
    return records
