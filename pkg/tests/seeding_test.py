import torch
from hypothesis import given
from hypothesis import strategies as st

from masker.seeding import SEED_MODULUS, derive_seed, generator, numpy_rng


class TestDeriveSeed:
    def test_should_be_stable(self):
        assert derive_seed(7, "gumbel") == derive_seed(7, "gumbel")

    def test_should_separate_streams_and_roots(self):
        assert derive_seed(7, "gumbel") != derive_seed(7, "init")
        assert derive_seed(7, "gumbel") != derive_seed(8, "gumbel")

    @given(root=st.integers(0, 2**32), stream=st.text(max_size=20))
    def test_should_stay_in_range(self, root, stream):
        assert 0 <= derive_seed(root, stream) < SEED_MODULUS

    def test_should_seed_generators(self):
        assert torch.equal(
            torch.rand(3, generator=generator(1, "synth")),
            torch.rand(3, generator=generator(1, "synth")),
        )

    def test_should_seed_numpy_streams(self):
        assert numpy_rng(1, "synth").integers(0, 1000, 5).tolist() == (
            numpy_rng(1, "synth").integers(0, 1000, 5).tolist()
        )
        assert numpy_rng(1, "synth").random() != numpy_rng(1, "split").random()
