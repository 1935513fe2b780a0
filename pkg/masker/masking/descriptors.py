from typing import Dict, List, Tuple

import torch
from torch import nn


class DomainDescriptorTable(nn.Module):
    """One trainable descriptor vector per domain, shared by the shared and
    private masking networks."""

    def __init__(self, domains: List[str], dim: int = 200, init_std: float = 0.1):
        super().__init__()
        if len(domains) == 0:
            raise ValueError("At least one domain is required")
        if len(set(domains)) != len(domains):
            raise ValueError(f"Duplicate domain names: {domains}")
        self.domains = list(domains)
        self.domain_to_index: Dict[str, int] = {
            name: index for index, name in enumerate(self.domains)
        }
        self.weight = nn.Parameter(torch.randn(len(domains), dim) * init_std)

    @property
    def num_domains(self) -> int:
        return self.weight.size(0)

    @property
    def dim(self) -> int:
        return self.weight.size(1)

    def index_of(self, domain: str) -> int:
        return self.domain_to_index[domain]

    def forward(self, domain_ids: torch.Tensor) -> torch.Tensor:
        return self.weight[domain_ids]


class DescriptorMixer(nn.Module):
    """Projects [h_cls ; d_j] into descriptor space and attends over all
    descriptors with inner-product scores, giving the private path its mixed
    descriptor."""

    def __init__(self, hidden_dim: int, descriptor_dim: int):
        super().__init__()
        self.projection = nn.Linear(hidden_dim + descriptor_dim, descriptor_dim)

    def forward(
        self, cls: torch.Tensor, descriptors: torch.Tensor, domain_ids: torch.Tensor
    ) -> Tuple[torch.Tensor, torch.Tensor]:
        """cls [batch, H], descriptors [M, D], domain_ids [batch] ->
        (mixed descriptors [batch, D], attention weights [batch, M])."""
        z = torch.cat([cls, descriptors[domain_ids]], dim=-1)
        z_hat = torch.tanh(self.projection(z))
        scores = z_hat @ descriptors.t()
        weights = torch.softmax(scores, dim=-1)
        return weights @ descriptors, weights


def mixed_descriptor(
    cls: torch.Tensor,
    table: DomainDescriptorTable,
    domain_index: int,
    mixer: DescriptorMixer,
) -> Tuple[torch.Tensor, torch.Tensor]:
    """Mixed descriptor for a single sentence representation `cls` [H]."""
    if not 0 <= domain_index < table.num_domains:
        raise ValueError(
            f"Domain index {domain_index} out of range for {table.num_domains} domains"
        )
    mixed, weights = mixer(
        cls.reshape(1, -1), table.weight, torch.tensor([domain_index])
    )
    return mixed[0], weights[0]
