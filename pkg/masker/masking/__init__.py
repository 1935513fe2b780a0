from masker.masking.constraints import (
    LexiconConstraints,
    LexiconNotFound,
    default_constraints,
    load_lexicons,
)
from masker.masking.descriptors import (
    DescriptorMixer,
    DomainDescriptorTable,
    mixed_descriptor,
)
from masker.masking.gumbel import gumbel_softmax
from masker.masking.token_masker import (
    MaskDecision,
    MaskingError,
    TokenMasker,
    private_mask,
    shared_mask,
)
