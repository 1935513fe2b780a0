import torch
import torch.nn.functional as F
from torch import nn

from masker.features.gradient_reversal import grad_reverse


class DomainProbeHead(nn.Module):
    """Feed-forward domain classifier: H -> 256 (tanh) -> M logits."""

    def __init__(self, input_dim: int, num_domains: int, hidden_dim: int = 256):
        super().__init__()
        self.num_domains = num_domains
        self.net = nn.Sequential(
            nn.Linear(input_dim, hidden_dim),
            nn.Tanh(),
            nn.Linear(hidden_dim, num_domains),
        )

    def forward(self, features: torch.Tensor) -> torch.Tensor:
        return self.net(features)


def check_labels(labels: torch.Tensor, num_classes: int, kind: str = "domain"):
    if labels.numel() == 0:
        return
    if int(labels.min()) < 0 or int(labels.max()) >= num_classes:
        raise ValueError(
            f"Invalid {kind} label {labels.tolist()} for {num_classes} classes"
        )


def adversarial_domain_loss(
    h_shared: torch.Tensor, domain_labels: torch.Tensor, probe: DomainProbeHead
) -> torch.Tensor:
    """L_ds: the probe learns to classify domains while everything below the
    reversal receives the negated gradient."""
    check_labels(domain_labels, probe.num_domains)
    return F.cross_entropy(probe(grad_reverse(h_shared)), domain_labels)


def private_domain_loss(
    h_clue: torch.Tensor, domain_labels: torch.Tensor, probe: DomainProbeHead
) -> torch.Tensor:
    """L_dp: plain domain classification on the domain clue, no reversal."""
    check_labels(domain_labels, probe.num_domains)
    return F.cross_entropy(probe(h_clue), domain_labels)
