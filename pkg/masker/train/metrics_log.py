import json
import os
from typing import Any, Dict, List


class MetricsLog:
    """Append-only JSON Lines file, one object per event. Keys are sorted and
    nothing time-dependent is written, so identical runs give identical
    files."""

    def __init__(self, path: str):
        self.path = path
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)

    def write(self, event: str, **fields: Any):
        record = {"event": event, **fields}
        with open(self.path, "a", encoding="utf-8") as file:
            file.write(json.dumps(record, sort_keys=True) + "\n")


def read_metrics(path: str) -> List[Dict[str, Any]]:
    with open(path, encoding="utf-8") as file:
        return [json.loads(line) for line in file if line.strip() != ""]
