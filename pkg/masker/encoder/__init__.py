from masker.encoder.encoder import (
    EncodedSequence,
    EncoderConfig,
    EncoderError,
    TransformerEncoder,
    encode,
)
from masker.encoder.tokenizer import (
    ConstraintViolation,
    TokenSequence,
    apply_mask,
    tokenize,
)
from masker.encoder.vocabulary import (
    Vocabulary,
    VocabularyError,
    build_vocab,
    load_vocab_file,
    save_vocab,
)
