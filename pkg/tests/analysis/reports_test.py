import json
import pathlib

import pandas as pd
import pytest

from masker.analysis.domain_probe import ProbeVariant, probe_result
from masker.analysis.mask_stats import MaskStats, DomainMaskStats
from masker.analysis.reports import (
    confusion_heatmap,
    word_frequency_chart,
    write_accuracy_table,
    write_confusion,
    write_mask_stats,
    write_probe_results,
)


class TestReports:
    def test_should_append_average_row_to_accuracy_table(self, tmp_path: pathlib.Path):
        path = tmp_path / "reports" / "cross-domain.csv"

        write_accuracy_table({"books": 0.9, "dvd": 0.8}, str(path))

        frame = pd.read_csv(path)
        assert frame["domain"].tolist() == ["books", "dvd", "Avg"]
        assert frame["accuracy"].tolist() == pytest.approx([90.0, 80.0, 85.0])

    def test_should_write_mask_stats_with_average(self, tmp_path: pathlib.Path):
        row = DomainMaskStats("books", 2, 1.0, 2.0, 0.1, 0.2, 10.0)
        stats = MaskStats(domains=[row], average=DomainMaskStats("all", 2, 1.0, 2.0, 0.1, 0.2, 10.0))
        path = tmp_path / "mask_stats.csv"

        write_mask_stats(stats, str(path))

        frame = pd.read_csv(path)
        assert frame["domain"].tolist() == ["books", "all"]
        assert frame["private_rate"].tolist() == pytest.approx([0.2, 0.2])

    def test_should_write_probe_outputs(self, tmp_path: pathlib.Path):
        result = probe_result(ProbeVariant.MASKED, ["books", "dvd"], [0, 1, 1], [0, 1, 0])

        write_confusion(result, str(tmp_path / "confusion.json"))
        write_probe_results([result], str(tmp_path / "probe.csv"))
        confusion_heatmap(result, str(tmp_path / "confusion.svg"))

        stored = json.loads((tmp_path / "confusion.json").read_text())
        assert stored["confusion"] == [[1, 0], [1, 1]]
        assert stored["variant"] == "masked"
        frame = pd.read_csv(tmp_path / "probe.csv")
        assert frame["variant"].tolist() == ["masked"]
        assert list(frame.columns) == ["variant", "accuracy", "epochs", "train_accuracy"]
        assert (tmp_path / "confusion.svg").stat().st_size > 0

    def test_should_draw_word_frequency_chart(self, tmp_path: pathlib.Path):
        path = tmp_path / "words.svg"

        word_frequency_chart([("plot", 3), ("author", 1)], "Masked words", str(path))

        assert "<svg" in path.read_text()
