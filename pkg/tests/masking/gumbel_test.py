import pytest
import torch

from masker.masking.gumbel import gumbel_softmax, straight_through
from masker.masking.token_masker import MASK_CLASS


class TestGumbelSoftmax:
    def test_should_mask_half_the_time_for_symmetric_logits(self, torch_generator):
        _, sample = gumbel_softmax(torch.zeros(100_000, 2), generator=torch_generator)

        assert sample[:, MASK_CLASS].mean().item() == pytest.approx(0.5, abs=0.01)

    def test_should_sample_at_softmax_frequencies(self, torch_generator):
        logits = torch.tensor([1.0, -1.0]).expand(100_000, 2)

        _, sample = gumbel_softmax(logits, generator=torch_generator)

        expected = torch.softmax(torch.tensor([1.0, -1.0]), dim=-1)
        assert sample.mean(dim=0).tolist() == pytest.approx(expected.tolist(), abs=0.01)

    def test_should_not_change_under_logit_shift(self):
        logits = torch.randn(30, 2, generator=torch.Generator().manual_seed(0))

        soft, _ = gumbel_softmax(logits, generator=torch.Generator().manual_seed(4))
        shifted, _ = gumbel_softmax(logits + 7.5, generator=torch.Generator().manual_seed(4))

        assert torch.allclose(soft, shifted, atol=1e-6)

    def test_should_almost_always_follow_dominant_logit(self, torch_generator):
        logits = torch.zeros(100_000, 2)
        logits[:, MASK_CLASS] = 10.0
        logits[:, 1 - MASK_CLASS] = -10.0

        _, sample = gumbel_softmax(logits, generator=torch_generator)

        assert sample[:, MASK_CLASS].mean().item() > 0.999

    def test_should_return_one_hot_samples(self, torch_generator):
        soft, sample = gumbel_softmax(torch.randn(50, 7, 2), generator=torch_generator)

        assert torch.equal(sample.sum(dim=-1), torch.ones(50, 7))
        assert ((sample == 0) | (sample == 1)).all()
        assert torch.allclose(soft.sum(dim=-1), torch.ones(50, 7))

    def test_should_return_soft_sample_when_not_hard(self, torch_generator):
        soft, sample = gumbel_softmax(torch.randn(4, 2), hard=False, generator=torch_generator)

        assert torch.equal(soft, sample)

    def test_should_reject_non_positive_temperature(self):
        with pytest.raises(ValueError):
            gumbel_softmax(torch.zeros(3, 2), temperature=0.0)

    def test_should_be_reproducible_with_seeded_generator(self):
        logits = torch.randn(10, 2)

        _, first = gumbel_softmax(logits, generator=torch.Generator().manual_seed(5))
        _, second = gumbel_softmax(logits, generator=torch.Generator().manual_seed(5))

        assert torch.equal(first, second)


class TestStraightThrough:
    def test_should_pass_soft_gradient(self):
        logits = torch.tensor([[0.3, -0.2]], requires_grad=True)
        soft = torch.softmax(logits, dim=-1)

        straight_through(soft)[0, 1].backward()

        assert logits.grad is not None
        assert logits.grad.abs().sum() > 0

    def test_should_give_hard_path_the_soft_path_gradient(self):
        logits = torch.randn(20, 2, generator=torch.Generator().manual_seed(0), dtype=torch.float64)
        weights = torch.randn(20, 2, generator=torch.Generator().manual_seed(1), dtype=torch.float64)

        gradients = []
        for hard in (True, False):
            leaf = logits.clone().requires_grad_()
            _, sample = gumbel_softmax(leaf, hard=hard, generator=torch.Generator().manual_seed(2))
            (sample * weights).sum().backward()
            gradients.append(leaf.grad)

        assert torch.allclose(gradients[0], gradients[1], rtol=0, atol=1e-6)

    def test_should_match_finite_difference_gradient(self):
        logits = torch.randn(20, 2, generator=torch.Generator().manual_seed(0), dtype=torch.float64)
        weights = torch.randn(20, 2, generator=torch.Generator().manual_seed(1), dtype=torch.float64)

        def objective(values: torch.Tensor) -> torch.Tensor:
            soft, _ = gumbel_softmax(values, hard=False, generator=torch.Generator().manual_seed(2))
            return (soft * weights).sum()

        leaf = logits.clone().requires_grad_()
        objective(leaf).backward()

        step = 1e-4
        for row in range(20):
            for column in range(2):
                plus, minus = logits.clone(), logits.clone()
                plus[row, column] += step
                minus[row, column] -= step
                numerical = (objective(plus) - objective(minus)).item() / (2 * step)

                assert numerical == pytest.approx(leaf.grad[row, column].item(), rel=1e-3, abs=1e-9)
