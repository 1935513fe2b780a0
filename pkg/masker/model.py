import enum
from dataclasses import dataclass, field
from typing import Collection, Dict, FrozenSet, Iterator, List, Optional

import torch
from dataclasses_json import dataclass_json
from torch import nn

from masker.classify.heads import SentimentHead
from masker.classify.losses import (
    Loss,
    LossWeights,
    aux_sentiment_losses,
    main_sentiment_loss,
)
from masker.encoder.encoder import EncodedSequence, EncoderConfig, TransformerEncoder
from masker.features.domain_clue import domain_attention, domain_clue
from masker.features.domain_probe import (
    DomainProbeHead,
    adversarial_domain_loss,
    private_domain_loss,
)
from masker.features.shared import FeaturePair, shared_features_batch
from masker.masking.descriptors import DescriptorMixer, DomainDescriptorTable
from masker.masking.token_masker import MaskDecision, TokenMasker


class Ablation(enum.Enum):
    SHARED_PART = "shared-part"
    PRIVATE_PART = "private-part"
    SHARED_MASK = "shared-mask"
    PRIVATE_MASK = "private-mask"
    SENTIMENT_CONSTRAINT = "sentiment-constraint"
    STOPWORD_CONSTRAINT = "stopword-constraint"


# Constraint switches act on the lexicons, not on the network.
DISABLED_LEXICON = {
    Ablation.SENTIMENT_CONSTRAINT: "sentiment",
    Ablation.STOPWORD_CONSTRAINT: "stopwords",
}


def parse_ablations(values: Collection[str]) -> FrozenSet[Ablation]:
    ablations = set()
    for value in values:
        try:
            ablations.add(Ablation(value))
        except ValueError:
            raise ValueError(
                f"Unknown ablation: {value}. Allowed: {', '.join(a.value for a in Ablation)}"
            ) from None
    return frozenset(ablations)


def ablated_weights(weights: LossWeights, disabled: Collection[Ablation]) -> LossWeights:
    """Zeroes the loss terms of removed components."""
    active = set(Loss)
    if Ablation.SHARED_PART in disabled:
        active -= {Loss.SHARED_SENTIMENT, Loss.SHARED_DOMAIN}
    if Ablation.PRIVATE_PART in disabled:
        active -= {Loss.PRIVATE_SENTIMENT, Loss.PRIVATE_DOMAIN}
    return weights.only(active)


@dataclass_json
@dataclass
class ModelConfig:
    domains: List[str]
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    descriptor_dim: int = 200
    scorer_dim: int = 256
    probe_dim: int = 256
    disable: List[str] = field(default_factory=list)

    @property
    def ablations(self) -> FrozenSet[Ablation]:
        return parse_ablations(self.disable)


@dataclass
class ModelOutput:
    encoded: EncodedSequence
    shared_decision: MaskDecision
    private_decision: MaskDecision
    features: FeaturePair
    mixture_weights: Optional[torch.Tensor]  # [batch, M]
    attention: Optional[torch.Tensor]  # [batch, positions]
    logits: torch.Tensor  # sentiment logits on [h_shared ; h_private]

    @property
    def h_shared(self) -> torch.Tensor:
        return self.features.h_shared

    @property
    def h_private(self) -> torch.Tensor:
        return self.features.h_private

    @property
    def h_clue(self) -> torch.Tensor:
        return self.features.h_clue

    @property
    def masked_count(self) -> torch.Tensor:
        return self.features.masked_count


class DomainMasker(nn.Module):
    """Shared-private masking sentiment classifier.

    The shared path masks domain-related tokens with its own descriptor and
    re-encodes the masked text; the private path masks with a mixed
    descriptor and attends over the original encoding with the mean of the
    masked positions as query.
    """

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        self.disabled = config.ablations
        hidden_dim = config.encoder.hidden_dim
        num_domains = len(config.domains)

        self.encoder = TransformerEncoder(config.encoder)
        self.descriptors = DomainDescriptorTable(config.domains, config.descriptor_dim)
        self.shared_masker = TokenMasker(hidden_dim, config.descriptor_dim, config.scorer_dim)
        self.private_masker = TokenMasker(hidden_dim, config.descriptor_dim, config.scorer_dim)
        self.mixer = DescriptorMixer(hidden_dim, config.descriptor_dim)
        self.shared_probe = DomainProbeHead(hidden_dim, num_domains, config.probe_dim)
        self.private_probe = DomainProbeHead(hidden_dim, num_domains, config.probe_dim)
        self.head = SentimentHead(2 * hidden_dim)
        self.head_ss = SentimentHead(hidden_dim)
        self.head_sp = SentimentHead(hidden_dim)

    @property
    def domains(self) -> List[str]:
        return self.descriptors.domains

    def forward(
        self,
        ids: torch.Tensor,
        attention_mask: torch.Tensor,
        constrained: torch.Tensor,
        domain_ids: torch.Tensor,
        temperature: float = 1.0,
        generator: Optional[torch.Generator] = None,
    ) -> ModelOutput:
        """In training mode mask decisions are Gumbel samples; in eval mode
        they are the argmax of the scorer logits."""
        sample = self.training
        encoded = self.encoder(ids, attention_mask)
        keep_all = MaskDecision.keep_all(constrained)

        if Ablation.SHARED_PART in self.disabled:
            shared_decision = keep_all
            h_shared = torch.zeros_like(encoded.cls)
        elif Ablation.SHARED_MASK in self.disabled:
            shared_decision = keep_all
            h_shared = encoded.cls
        else:
            shared_decision = self.shared_masker(
                encoded.hidden,
                self.descriptors(domain_ids),
                constrained,
                temperature=temperature,
                generator=generator,
                sample=sample,
            )
            h_shared = shared_features_batch(ids, attention_mask, shared_decision, self.encoder)

        mixture_weights = None
        attention = None
        if Ablation.PRIVATE_PART in self.disabled:
            private_decision = keep_all
            h_clue = encoded.cls
            h_private = torch.zeros_like(encoded.cls)
        else:
            if Ablation.PRIVATE_MASK in self.disabled:
                private_decision = keep_all
            else:
                mixed, mixture_weights = self.mixer(
                    encoded.cls, self.descriptors.weight, domain_ids
                )
                private_decision = self.private_masker(
                    encoded.hidden,
                    mixed,
                    constrained,
                    temperature=temperature,
                    generator=generator,
                    sample=sample,
                )
            h_clue, _ = domain_clue(encoded, private_decision)
            h_private, attention = domain_attention(h_clue, encoded)

        return ModelOutput(
            encoded=encoded,
            shared_decision=shared_decision,
            private_decision=private_decision,
            features=FeaturePair(
                h_shared=h_shared,
                h_private=h_private,
                h_clue=h_clue,
                masked_count=private_decision.counts,
            ),
            mixture_weights=mixture_weights,
            attention=attention,
            logits=self.head(torch.cat([h_shared, h_private], dim=-1)),
        )

    def loss_parts(
        self,
        output: ModelOutput,
        domain_ids: torch.Tensor,
        sentiment: torch.Tensor,
        sentiment_mask: torch.Tensor,
    ) -> Dict[Loss, torch.Tensor]:
        """Component losses of one batch. Rows with sentiment_mask 0 take no
        part in any sentiment loss."""
        l_s = main_sentiment_loss(
            output.h_shared, output.h_private, sentiment, self.head, sentiment_mask
        )
        l_ss, l_sp = aux_sentiment_losses(
            output.h_shared,
            output.h_private,
            sentiment,
            self.head_ss,
            self.head_sp,
            sentiment_mask,
        )
        parts = {
            Loss.SENTIMENT: l_s,
            Loss.SHARED_SENTIMENT: l_ss,
            Loss.PRIVATE_SENTIMENT: l_sp,
        }
        if Ablation.SHARED_PART not in self.disabled:
            parts[Loss.SHARED_DOMAIN] = adversarial_domain_loss(
                output.h_shared, domain_ids, self.shared_probe
            )
        if Ablation.PRIVATE_PART not in self.disabled:
            parts[Loss.PRIVATE_DOMAIN] = private_domain_loss(
                output.h_clue, domain_ids, self.private_probe
            )
        return parts

    def regularized_parameters(self) -> Iterator[nn.Parameter]:
        """Every trainable parameter except the embedding tables and the
        domain descriptors."""
        excluded = {
            id(self.encoder.token_embedding.weight),
            id(self.encoder.position_embedding.weight),
            id(self.descriptors.weight),
        }
        for parameter in self.parameters():
            if parameter.requires_grad and id(parameter) not in excluded:
                yield parameter
