import pathlib
from dataclasses import dataclass
from typing import Dict, List

import numpy as np
import pytest

from masker import workflow
from masker.analysis.domain_probe import ProbeConfig, ProbeResult, ProbeVariant, chance_level
from masker.analysis.mask_stats import RoleMaskRate, mask_records, role_mask_rates
from masker.data.synthetic import SyntheticSpec, generate_synthetic
from masker.paths import create_run_dir
from masker.settings.settings import Settings
from masker.train.config import resolve_config
from masker.train.trainer import TrainResult

SYNTHETIC_CONFIG = pathlib.Path(__file__).parent.parent / "configs" / "synthetic.ini"
SEEDS = (7, 8, 9)


@dataclass
class SeedRun:
    result: TrainResult
    probes: Dict[ProbeVariant, ProbeResult]
    roles: Dict[str, RoleMaskRate]


def mean(values) -> float:
    return float(np.mean(list(values)))


@pytest.mark.slow
class TestSyntheticCorpus:
    @pytest.fixture(scope="class")
    def runs(self, tmp_path_factory) -> List[SeedRun]:
        out = str(tmp_path_factory.mktemp("runs"))
        runs = []
        for seed in SEEDS:
            config = resolve_config(str(SYNTHETIC_CONFIG), {Settings.Key.SEED: str(seed)})
            assert config.synthetic == SyntheticSpec(seed=seed)

            paths = create_run_dir(out, seed)
            result = workflow.run_training(config, paths, progress=False)
            context = workflow.load_run(paths.root)
            probes = workflow.run_probe(
                list(ProbeVariant), ProbeConfig(), context.paths, context=context, progress=False
            )
            records = mask_records(context.model, context.splits, context.collator, "test")
            roles = role_mask_rates(records, generate_synthetic(config.synthetic).roles)
            runs.append(
                SeedRun(
                    result=result,
                    probes={probe.variant: probe for probe in probes},
                    roles={rate.role: rate for rate in roles},
                )
            )
        return runs

    def test_should_classify_held_out_sentiment(self, runs):
        assert mean(run.result.test.average for run in runs) >= 0.95

    def test_should_recognize_domains_from_original_texts(self, runs):
        assert mean(run.probes[ProbeVariant.ORIGINAL].accuracy for run in runs) >= 0.95

    def test_should_hide_domain_after_shared_masking(self, runs):
        original = mean(run.probes[ProbeVariant.ORIGINAL].accuracy for run in runs)
        masked = mean(run.probes[ProbeVariant.MASKED].accuracy for run in runs)

        assert original - masked >= 0.15

    def test_should_keep_domain_in_masked_words(self, runs):
        masked_words = mean(run.probes[ProbeVariant.MASKED_WORDS].accuracy for run in runs)
        chance = chance_level(runs[0].probes[ProbeVariant.MASKED_WORDS])

        assert masked_words >= chance + 0.30

    def test_should_mask_markers_more_than_sentiment_on_private_path(self, runs):
        marker = mean(run.roles["MARKER"].private_rate for run in runs)
        sentiment = mean(run.roles["SENTIMENT"].private_rate for run in runs)

        assert marker > 0
        assert marker >= 2 * sentiment
