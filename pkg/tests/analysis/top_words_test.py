import pytest

from masker.analysis.mask_stats import MaskRecord
from masker.analysis.top_words import ALL_DOMAINS, Scope, rank_words, top_masked_words


def record(domain, tokens, shared, private) -> MaskRecord:
    return MaskRecord(
        domain=domain,
        tokens=tokens,
        shared=shared,
        private=private,
        constrained=[False] * len(tokens),
        is_unk=[False] * len(tokens),
        prediction=0,
        gold=0,
    )


RECORDS = [
    record("books", ["plot", "good", "author"], [True, False, True], [True, False, False]),
    record("books", ["author", "plot", "great"], [True, True, False], [True, True, False]),
    record("dvd", ["film", "good"], [True, False], [True, False]),
]


class TestRankWords:
    def test_should_rank_masked_and_remaining_words(self):
        ranking = rank_words(RECORDS, 10)

        assert ranking.masked[ALL_DOMAINS] == [("plot", 2), ("author", 1), ("film", 1)]
        assert ranking.remaining[ALL_DOMAINS] == [("good", 2), ("great", 1)]

    def test_should_rank_per_domain(self):
        ranking = rank_words(RECORDS, 1, Scope.PER_DOMAIN)

        assert ranking.masked == {"books": [("plot", 2)], "dvd": [("film", 1)]}
        assert ranking.remaining == {"books": [("good", 1)], "dvd": [("good", 1)]}

    def test_should_return_empty_lists_without_records(self):
        ranking = rank_words([], 5)

        assert ranking.masked == {ALL_DOMAINS: []}
        assert ranking.remaining == {ALL_DOMAINS: []}

    def test_should_reject_non_positive_k(self):
        with pytest.raises(ValueError):
            rank_words(RECORDS, 0)


class TestTopMaskedWords:
    def test_should_never_list_constrained_words(self, tiny_model, collator, splits, constraints):
        ranking = top_masked_words(tiny_model, splits, collator, 50, Scope.PER_DOMAIN, "test")

        for words in ranking.masked.values():
            assert not any(constraints.is_constrained(word) for word, _ in words)
