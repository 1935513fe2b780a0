import torch


class GradientReversal(torch.autograd.Function):
    """Identity in the forward pass, negated gradient in the backward pass."""

    @staticmethod
    def forward(ctx, x):
        return x.view_as(x)

    @staticmethod
    def backward(ctx, grad_output):
        return grad_output.neg()


def grad_reverse(x: torch.Tensor) -> torch.Tensor:
    return GradientReversal.apply(x)
