import hashlib
import random

import numpy as np
import torch

SEED_MODULUS = 2**63 - 1


def derive_seed(root_seed: int, stream: str) -> int:
    """Seed of a named random stream ("init", "data-shuffle", "gumbel", ...)
    derived from the run's root seed. Stable across processes and platforms."""
    digest = hashlib.sha256(f"{root_seed}:{stream}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % SEED_MODULUS


def generator(root_seed: int, stream: str) -> torch.Generator:
    return torch.Generator().manual_seed(derive_seed(root_seed, stream))


def numpy_rng(root_seed: int, stream: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(root_seed, stream))


def seed_everything(root_seed: int):
    seed = derive_seed(root_seed, "init")
    random.seed(seed)
    np.random.seed(seed % 2**32)
    torch.manual_seed(seed)
