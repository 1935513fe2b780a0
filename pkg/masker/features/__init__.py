from masker.features.domain_clue import domain_attention
from masker.features.domain_probe import (
    DomainProbeHead,
    adversarial_domain_loss,
    private_domain_loss,
)
from masker.features.gradient_reversal import grad_reverse
from masker.features.shared import FeaturePair, shared_features
