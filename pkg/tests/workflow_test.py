import json
import os
import pathlib

import pandas as pd
import pytest

from masker import workflow
from masker.analysis.domain_probe import ProbeConfig, ProbeVariant
from masker.paths import create_run_dir
from masker.train.metrics_log import read_metrics


@pytest.fixture()
def trained_run(tmp_path: pathlib.Path, tiny_config):
    paths = create_run_dir(str(tmp_path), tiny_config.seed)
    workflow.run_training(tiny_config, paths, progress=False)
    return paths


class TestRunSynthGen:
    def test_should_write_dataset_and_roles(self, tmp_path: pathlib.Path, tiny_config):
        workflow.run_synth_gen(tiny_config, str(tmp_path))

        assert (tmp_path / "books" / "train.jsonl").is_file()
        assert (tmp_path / "electronics" / "test.jsonl").is_file()
        roles = json.loads((tmp_path / "roles.json").read_text())
        assert roles["books00"] == "MARKER"
        assert pd.read_csv(tmp_path / "dataset.csv")["train"].tolist() == [14, 14]


class TestRunVocabBuild:
    def test_should_write_vocabulary(self, tmp_path: pathlib.Path, tiny_config):
        path = tmp_path / "out" / "vocab.txt"

        vocab = workflow.run_vocab_build(tiny_config, str(path))

        assert path.read_text().splitlines()[: vocab.size] == list(vocab.tokens)


class TestRunTraining:
    def test_should_fill_run_directory(self, trained_run):
        for path in (
            trained_run.config,
            trained_run.metrics,
            trained_run.checkpoint,
            trained_run.vocab,
            trained_run.dataset,
            trained_run.report("test.json"),
        ):
            assert os.path.isfile(path)
        assert read_metrics(trained_run.metrics)[-1]["event"] == "test"

    def test_should_reload_run_for_evaluation(self, trained_run):
        stored = json.loads(pathlib.Path(trained_run.report("test.json")).read_text())

        report = workflow.run_eval(trained_run.root, "test")

        assert report.accuracy == pytest.approx(stored["accuracy"])
        assert os.path.isfile(trained_run.report("eval-test.json"))

    def test_should_analyze_masks(self, trained_run):
        stats = workflow.run_analyze_masks(trained_run.root, k=5)

        assert {domain.domain for domain in stats.domains} == {"books", "electronics"}
        for name in ("mask_records.jsonl", "mask_stats.csv", "top_words.json", "words-masked.svg"):
            assert os.path.isfile(trained_run.report(name))
        summary = json.loads(pathlib.Path(trained_run.report("mask_summary.json")).read_text())
        assert [rate["role"] for rate in summary["roles"]] == ["MARKER", "SENTIMENT", "FILLER"]
        assert summary["average"]["examples"] == 8
        assert isinstance(summary["notes"], list)

    def test_should_probe_domains(self, trained_run):
        context = workflow.load_run(trained_run.root)

        results = workflow.run_probe(
            [ProbeVariant.ORIGINAL, ProbeVariant.MASKED],
            ProbeConfig(epochs=1),
            context.paths,
            context=context,
            progress=False,
        )

        assert [result.variant for result in results] == [ProbeVariant.ORIGINAL, ProbeVariant.MASKED]
        assert os.path.isfile(trained_run.report("probe.csv"))
        assert os.path.isfile(trained_run.report("confusion-masked.json"))

    def test_should_visualize(self, trained_run):
        records = workflow.run_visualize(trained_run.root, limit=2)

        assert len(records) == 4
        assert os.path.isfile(os.path.join(trained_run.report("visualize"), "masks.jsonl"))

    def test_should_reject_directory_without_run(self, tmp_path: pathlib.Path):
        with pytest.raises(FileNotFoundError):
            workflow.load_run(str(tmp_path))
