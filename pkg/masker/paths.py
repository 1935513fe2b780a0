import datetime
import os
from dataclasses import dataclass
from typing import Optional

from platformdirs import user_data_dir

from masker.settings.settings import APP_NAME


def default_output_dir() -> str:
    return os.path.join(user_data_dir(appname=APP_NAME), "runs")


def run_id(seed: int, now: Optional[datetime.datetime] = None) -> str:
    now = now or datetime.datetime.now()
    return f"{now:%Y%m%d-%H%M%S}-seed{seed}"


@dataclass(frozen=True)
class RunPaths:
    root: str

    @property
    def config(self) -> str:
        return os.path.join(self.root, "config.json")

    @property
    def metrics(self) -> str:
        return os.path.join(self.root, "metrics.jsonl")

    @property
    def checkpoint(self) -> str:
        return os.path.join(self.root, "checkpoints", "best.safetensors")

    @property
    def vocab(self) -> str:
        return os.path.join(self.root, "vocab.txt")

    @property
    def dataset(self) -> str:
        return os.path.join(self.root, "dataset.csv")

    def report(self, name: str) -> str:
        return os.path.join(self.root, "reports", name)


def create_run_dir(
    output_dir: str, seed: int, now: Optional[datetime.datetime] = None
) -> RunPaths:
    """`<output_dir>/<timestamp>-seed<seed>`, suffixed with -1, -2, ... when
    the name is taken."""
    base = os.path.join(output_dir, run_id(seed, now))
    path = base
    suffix = 0
    while os.path.exists(path):
        suffix += 1
        path = f"{base}-{suffix}"
    os.makedirs(os.path.join(path, "checkpoints"))
    os.makedirs(os.path.join(path, "reports"))
    return RunPaths(path)
