import enum
from dataclasses import dataclass, fields
from typing import Dict, Iterable, Optional, Tuple

import torch
import torch.nn.functional as F
from dataclasses_json import dataclass_json

from masker.classify.heads import NUM_SENTIMENT_CLASSES, SentimentHead
from masker.features.domain_probe import check_labels


class Loss(enum.Enum):
    SENTIMENT = "L_s"
    SHARED_SENTIMENT = "L_ss"
    PRIVATE_SENTIMENT = "L_sp"
    SHARED_DOMAIN = "L_ds"
    PRIVATE_DOMAIN = "L_dp"


@dataclass_json
@dataclass
class LossWeights:
    lambda_ds: float = 0.002
    lambda_dp: float = 0.002
    gamma: float = 0.4
    gamma_ss: float = 0.3
    gamma_sp: float = 0.3
    lambda_reg: float = 1e-5

    def __post_init__(self):
        self.validate()

    def validate(self):
        for weight in fields(self):
            if getattr(self, weight.name) < 0:
                raise ValueError(f"Loss weight {weight.name} must be non-negative")

    def weight_of(self, loss: Loss) -> float:
        return {
            Loss.SENTIMENT: self.gamma,
            Loss.SHARED_SENTIMENT: self.gamma_ss,
            Loss.PRIVATE_SENTIMENT: self.gamma_sp,
            Loss.SHARED_DOMAIN: self.lambda_ds,
            Loss.PRIVATE_DOMAIN: self.lambda_dp,
        }[loss]

    def only(self, active: Iterable[Loss]) -> "LossWeights":
        """Copy with the coefficients of inactive losses set to zero."""
        active = set(active)
        return LossWeights(
            lambda_ds=self.lambda_ds if Loss.SHARED_DOMAIN in active else 0.0,
            lambda_dp=self.lambda_dp if Loss.PRIVATE_DOMAIN in active else 0.0,
            gamma=self.gamma if Loss.SENTIMENT in active else 0.0,
            gamma_ss=self.gamma_ss if Loss.SHARED_SENTIMENT in active else 0.0,
            gamma_sp=self.gamma_sp if Loss.PRIVATE_SENTIMENT in active else 0.0,
            lambda_reg=self.lambda_reg,
        )


@dataclass
class LossBundle:
    L_s: torch.Tensor
    L_ss: torch.Tensor
    L_sp: torch.Tensor
    L_ds: torch.Tensor
    L_dp: torch.Tensor
    L_reg: torch.Tensor
    L_all: torch.Tensor

    def to_dict(self) -> Dict[str, float]:
        return {
            name: float(getattr(self, name).detach())
            for name in ("L_s", "L_ss", "L_sp", "L_ds", "L_dp", "L_reg", "L_all")
        }


def sentiment_cross_entropy(
    logits: torch.Tensor, labels: torch.Tensor, weights: Optional[torch.Tensor] = None
) -> torch.Tensor:
    """Mean cross-entropy over the rows whose weight is 1. Rows with weight 0
    (unlabeled examples) get exactly zero gradient."""
    if weights is None:
        check_labels(labels, NUM_SENTIMENT_CLASSES, kind="sentiment")
        return F.cross_entropy(logits, labels)

    usable = weights > 0
    check_labels(labels[usable], NUM_SENTIMENT_CLASSES, kind="sentiment")
    safe_labels = torch.where(usable, labels, torch.zeros_like(labels))
    per_example = F.cross_entropy(logits, safe_labels, reduction="none")
    per_example = torch.where(usable, per_example, torch.zeros_like(per_example))
    return per_example.sum() / usable.sum().clamp(min=1)


def main_sentiment_loss(
    h_shared: torch.Tensor,
    h_private: torch.Tensor,
    labels: torch.Tensor,
    head: SentimentHead,
    weights: Optional[torch.Tensor] = None,
) -> torch.Tensor:
    h_concat = torch.cat([h_shared, h_private], dim=-1)
    return sentiment_cross_entropy(head(h_concat), labels, weights)


def aux_sentiment_losses(
    h_shared: torch.Tensor,
    h_private: torch.Tensor,
    labels: torch.Tensor,
    head_ss: SentimentHead,
    head_sp: SentimentHead,
    weights: Optional[torch.Tensor] = None,
) -> Tuple[torch.Tensor, torch.Tensor]:
    return (
        sentiment_cross_entropy(head_ss(h_shared), labels, weights),
        sentiment_cross_entropy(head_sp(h_private), labels, weights),
    )


def l2_penalty(parameters: Iterable[torch.Tensor]) -> torch.Tensor:
    penalty = None
    for parameter in parameters:
        term = parameter.pow(2).sum()
        penalty = term if penalty is None else penalty + term
    return penalty if penalty is not None else torch.tensor(0.0)


def total_loss(
    parts: Dict[Loss, torch.Tensor],
    weights: LossWeights,
    parameters: Iterable[torch.Tensor] = (),
) -> LossBundle:
    """L_all = sum of weighted component losses + lambda_reg * sum(theta^2).
    Missing components count as zero."""
    zero = torch.tensor(0.0)
    component = {loss: parts.get(loss, zero) for loss in Loss}
    l_reg = l2_penalty(parameters)

    l_all = weights.lambda_reg * l_reg
    for loss in Loss:
        l_all = l_all + weights.weight_of(loss) * component[loss]

    return LossBundle(
        L_s=component[Loss.SENTIMENT],
        L_ss=component[Loss.SHARED_SENTIMENT],
        L_sp=component[Loss.PRIVATE_SENTIMENT],
        L_ds=component[Loss.SHARED_DOMAIN],
        L_dp=component[Loss.PRIVATE_DOMAIN],
        L_reg=l_reg,
        L_all=l_all,
    )
