from masker.data.batching import Batch, Collator, batches
from masker.data.example import DatasetError, DomainSplit, Example
from masker.data.loader import dataset_summary, load_dataset, write_dataset
from masker.data.splits import DEFAULT_RATIOS, split
from masker.data.synthetic import (
    SyntheticDataset,
    SyntheticSpec,
    TokenRole,
    generate_synthetic,
)
