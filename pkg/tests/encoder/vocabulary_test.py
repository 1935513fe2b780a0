import pathlib

import pytest

from masker.encoder.vocabulary import (
    RESERVED_TOKENS,
    UNK_ID,
    VocabularyError,
    build_vocab,
    load_vocab_file,
    save_vocab,
    split_words,
)


class TestBuildVocab:
    def test_should_add_words_after_reserved_tokens(self):
        vocab = build_vocab(["good good bad"])

        assert vocab.size == 7
        assert vocab.tokens[: len(RESERVED_TOKENS)] == RESERVED_TOKENS
        assert vocab.tokens[5:] == ("good", "bad")

    def test_should_drop_rare_words(self):
        vocab = build_vocab(["a b", "a"], min_freq=2)

        assert vocab.size == 6
        assert "a" in vocab
        assert "b" not in vocab

    def test_should_reject_empty_corpus(self):
        with pytest.raises(VocabularyError):
            build_vocab([])

    def test_should_map_unknown_words_to_unk(self):
        vocab = build_vocab(["good"])

        assert vocab.id_of("helmet") == UNK_ID
        assert vocab.token_of(vocab.id_of("good")) == "good"


class TestSplitWords:
    def test_should_lowercase_and_split_punctuation(self):
        assert split_words("Don't stop, GOOD!") == ["don't", "stop", "good"]

    def test_should_return_nothing_for_empty_text(self):
        assert split_words("") == []


class TestVocabFile:
    def test_should_round_trip(self, tmp_path: pathlib.Path):
        vocab = build_vocab(["the helmet fits", "the strap broke"])
        path = str(tmp_path / "vocab.txt")

        save_vocab(vocab, path)

        assert load_vocab_file(path) == vocab

    def test_should_skip_word_piece_entries(self, tmp_path: pathlib.Path):
        path = tmp_path / "vocab.txt"
        path.write_text("\n".join(RESERVED_TOKENS + ("run", "##ing", "fast")) + "\n")

        vocab = load_vocab_file(str(path))

        assert vocab.tokens[len(RESERVED_TOKENS):] == ("run", "fast")

    def test_should_reject_missing_reserved_tokens(self, tmp_path: pathlib.Path):
        path = tmp_path / "vocab.txt"
        path.write_text("hello\nworld\n")

        with pytest.raises(VocabularyError):
            load_vocab_file(str(path))
