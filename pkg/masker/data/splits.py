from typing import List, Sequence, Tuple

import numpy as np

from masker.data.example import DatasetError, DomainSplit, Example

DEFAULT_RATIOS = (0.7, 0.1, 0.2)


def check_ratios(ratios: Sequence[float]) -> Tuple[float, float, float]:
    if len(ratios) != 3:
        raise ValueError(f"Expected train/dev/test ratios, got {list(ratios)}")
    if any(ratio <= 0 for ratio in ratios):
        raise ValueError(f"Ratios must be positive, got {list(ratios)}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"Ratios must sum to 1, got {sum(ratios)}")
    return ratios[0], ratios[1], ratios[2]


def split_sizes(count: int, ratios: Sequence[float] = DEFAULT_RATIOS) -> Tuple[int, int, int]:
    """(train, dev, test) sizes; dev and test are rounded, train takes the
    remainder."""
    _, dev_ratio, test_ratio = check_ratios(ratios)
    dev = max(1, int(round(count * dev_ratio)))
    test = max(1, int(round(count * test_ratio)))
    train = count - dev - test
    if train < 1:
        raise DatasetError(f"Cannot split {count} examples with ratios {list(ratios)}")
    return train, dev, test


def split(
    examples: List[Example],
    ratios: Sequence[float] = DEFAULT_RATIOS,
    seed: int = 0,
) -> DomainSplit:
    if len(examples) < 3:
        raise DatasetError(f"Need at least 3 examples to split, got {len(examples)}")
    train_size, dev_size, _ = split_sizes(len(examples), ratios)

    order = np.random.default_rng(seed).permutation(len(examples))
    shuffled = [examples[index] for index in order]
    first = examples[0]
    return DomainSplit(
        domain=first.domain,
        domain_id=first.domain_id,
        train=shuffled[:train_size],
        dev=shuffled[train_size : train_size + dev_size],
        test=shuffled[train_size + dev_size :],
    )
