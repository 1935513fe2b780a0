import datetime
import os
import pathlib

from masker.paths import RunPaths, create_run_dir, run_id

NOW = datetime.datetime(2024, 3, 5, 14, 30, 9)


class TestRunPaths:
    def test_should_name_run_after_time_and_seed(self):
        assert run_id(7, NOW) == "20240305-143009-seed7"

    def test_should_create_layout_and_avoid_collisions(self, tmp_path: pathlib.Path):
        first = create_run_dir(str(tmp_path), 7, NOW)
        second = create_run_dir(str(tmp_path), 7, NOW)

        assert os.path.basename(first.root) == "20240305-143009-seed7"
        assert os.path.basename(second.root) == "20240305-143009-seed7-1"
        assert os.path.isdir(os.path.join(first.root, "checkpoints"))
        assert os.path.isdir(os.path.join(first.root, "reports"))

    def test_should_place_run_files(self):
        paths = RunPaths("run")

        assert paths.checkpoint == os.path.join("run", "checkpoints", "best.safetensors")
        assert paths.report("probe.csv") == os.path.join("run", "reports", "probe.csv")
