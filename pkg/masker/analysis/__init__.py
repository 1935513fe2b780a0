from masker.analysis.domain_probe import (
    ProbeConfig,
    ProbeResult,
    ProbeVariant,
)
from masker.analysis.mask_stats import MaskRecord, MaskStats, mask_records, mask_stats
from masker.analysis.top_words import Scope, WordRanking, rank_words, top_masked_words
from masker.analysis.visualize import visualize_masks
