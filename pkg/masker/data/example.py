from dataclasses import dataclass, field
from typing import List, Optional

from dataclasses_json import dataclass_json

NEGATIVE = 0
POSITIVE = 1
SENTIMENT_LABELS = (NEGATIVE, POSITIVE)


class DatasetError(Exception):
    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line = line


@dataclass_json
@dataclass
class Example:
    text: str
    sentiment: Optional[int]  # None for unlabeled target-domain records
    domain: str
    domain_id: int = 0

    def __post_init__(self):
        if self.text.strip() == "":
            raise ValueError("Example text must not be empty")
        if self.sentiment is not None and self.sentiment not in SENTIMENT_LABELS:
            raise ValueError(f"Invalid sentiment label: {self.sentiment}")

    @property
    def labeled(self) -> bool:
        return self.sentiment is not None


@dataclass
class DomainSplit:
    domain: str
    domain_id: int = 0
    train: List[Example] = field(default_factory=list)
    dev: List[Example] = field(default_factory=list)
    test: List[Example] = field(default_factory=list)

    def part(self, name: str) -> List[Example]:
        if name not in ("train", "dev", "test"):
            raise ValueError(f"Unknown split: {name}")
        return getattr(self, name)

    @property
    def sizes(self) -> tuple:
        return len(self.train), len(self.dev), len(self.test)

    def all(self) -> List[Example]:
        return self.train + self.dev + self.test


def pooled(splits: List[DomainSplit], part: str) -> List[Example]:
    """All examples of one split part across domains, in domain order."""
    return [example for split in splits for example in split.part(part)]
