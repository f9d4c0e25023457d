import numpy as np
import pytest

from src.braid import (
    BraidError,
    BraidWord,
    NamedBraid,
    WordSketch,
    alphabet,
    compose,
    enumerate_words,
    free_reduce,
    inverse,
    named_braid,
    prefix_shards,
    reduced_word_count,
)


def random_word(rng, length: int, strands: int = 6) -> BraidWord:
    letters = alphabet(strands)
    return BraidWord(strands, [letters[i] for i in rng.integers(0, len(letters), size=length)])


class TestBraidWord:
    def test_free_reduction_cascades(self):
        assert free_reduce((1, 2, -2, -1, 3)) == (3,)
        assert BraidWord(6, (1, 2, -2, -1)).letters == ()

    def test_invalid_letters(self):
        with pytest.raises(BraidError):
            BraidWord(6, (6,))
        with pytest.raises(BraidError):
            BraidWord(6, (0,))
        with pytest.raises(BraidError):
            BraidWord(1, ())

    def test_parse_and_format(self):
        word = BraidWord.parse("3 2 1 1 2 3")
        assert word.letters == (3, 2, 1, 1, 2, 3)
        assert str(word) == "3 2 1 1 2 3"
        assert BraidWord.parse("", strands=3).letters == ()
        assert BraidWord.parse("-1 2", strands=3).letters == (-1, 2)

    def test_parse_errors(self):
        with pytest.raises(BraidError):
            BraidWord.parse("1 x")
        with pytest.raises(BraidError):
            BraidWord.parse("6")

    def test_power(self):
        assert (BraidWord(6, (1,)) ** -2).letters == (-1, -1)
        assert (BraidWord(6, (2, 1)) ** 3).letters == (2, 1) * 3
        assert (BraidWord(6, (2, 1)) ** 0).letters == ()


class TestCompose:
    def test_cancellation_to_empty(self):
        assert len(compose(BraidWord(6, (1,)), BraidWord(6, (-1,)))) == 0

    def test_sigma_from_halves(self):
        assert compose(BraidWord(6, (3, 2, 1)), BraidWord(6, (1, 2, 3))) == named_braid("Sigma")

    def test_cascaded_cancellation(self):
        assert (BraidWord(6, (1, 2)) * BraidWord(6, (-2, 5))).letters == (1, 5)

    def test_mismatched_strands(self):
        with pytest.raises(BraidError):
            compose(BraidWord(6, (1,)), BraidWord(3, (1,)))

    def test_inverse_cancels(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            w = random_word(rng, int(rng.integers(0, 20)))
            assert len(w * inverse(w)) == 0
            assert len(inverse(w) * w) == 0


class TestNamedBraids:
    def test_delta(self):
        delta = named_braid(NamedBraid.DELTA)
        assert len(delta) == 15
        assert delta.strands == 6
        assert str(delta) == "1 2 1 3 2 1 4 3 2 1 5 4 3 2 1"

    def test_sigma(self):
        assert str(named_braid("Sigma")) == "3 2 1 1 2 3"

    def test_half_twist_triple(self):
        assert str(named_braid("HalfTwistTriple")) == "3 2 1 4 3 2 5 4 3"

    def test_unknown(self):
        with pytest.raises(BraidError):
            named_braid("Theta")


class TestEnumeration:
    def test_counts(self):
        assert len(list(enumerate_words(6, 0))) == 1
        assert len(list(enumerate_words(6, 1))) == 10
        assert len(list(enumerate_words(6, 2))) == 90
        assert len(list(enumerate_words(6, 3))) == 810
        assert reduced_word_count(6, 7) == 5_314_410
        assert sum(reduced_word_count(6, length) for length in range(1, 8)) == 5_978_710

    def test_words_reduced_and_distinct(self):
        words = [w.letters for w in enumerate_words(6, 3)]
        assert len(set(words)) == len(words)
        for letters in words:
            assert all(a != -b for a, b in zip(letters, letters[1:]))

    def test_lexicographic_order(self):
        words = [w.letters for w in enumerate_words(6, 2)]
        assert words[:3] == [(1, 1), (1, 2), (1, -2)]
        assert words == sorted(words, key=lambda ls: BraidWord(6, ls).sort_key())

    def test_normalize_commuting(self):
        words = [w.letters for w in enumerate_words(6, 2, normalize_commuting=True)]
        assert len(words) == 66
        assert (1, 3) in words
        assert (3, 1) not in words
        assert (2, 1) in words

    def test_prefix_streams_partition(self):
        full = [w.letters for w in enumerate_words(6, 3)]
        sharded = []
        for prefix in prefix_shards(6, 2):
            sharded.extend(w.letters for w in enumerate_words(6, 3, prefix=prefix))
        assert len(prefix_shards(6, 2)) == 90
        assert sorted(sharded) == sorted(full)
        assert len(list(enumerate_words(6, 3, prefix=(1,)))) == 81

    def test_bad_prefix(self):
        with pytest.raises(BraidError):
            list(enumerate_words(6, 3, prefix=(1, -1)))
        with pytest.raises(BraidError):
            list(enumerate_words(6, -1))


def sketch_without_word(word: BraidWord, window: int) -> WordSketch:
    full = WordSketch.of(word, window)
    return WordSketch(full.strands, full.length, full.head, full.tail)


class TestWordSketch:
    def test_of_and_inverse(self):
        word = BraidWord(6, (1, 2, 3, 4, 5, -1))
        sketch = WordSketch.of(word, 2)
        assert sketch.head == (1, 2)
        assert sketch.tail == (5, -1)
        inv_sketch = sketch.inverse()
        assert inv_sketch.head == (1, -5)
        assert inv_sketch.tail == (-2, -1)
        assert inv_sketch.to_word() == word.inverse()

    def test_compose_matches_explicit_words(self):
        rng = np.random.default_rng(3)
        window = 16
        for _ in range(50):
            u = random_word(rng, 60)
            overlap = int(rng.integers(0, 6))
            v = BraidWord(6, u.inverse().letters[:overlap]) * random_word(rng, 30)
            expected = u * v
            got = sketch_without_word(u, window).compose(
                sketch_without_word(v, window), window, max_letters=10**6
            )
            assert got.length == len(expected)
            assert got.head == expected.letters[:window]
            assert got.tail == expected.letters[-window:]
            assert not got.is_explicit

    def test_explicit_until_limit(self):
        u = WordSketch.of(BraidWord(6, (1, 2, 3)), 4)
        v = WordSketch.of(BraidWord(6, (4, 5)), 4)
        assert u.compose(v, 4, max_letters=5).to_word().letters == (1, 2, 3, 4, 5)
        dropped = u.compose(v, 4, max_letters=4)
        assert dropped.length == 5
        with pytest.raises(BraidError):
            dropped.to_word()

    def test_cancellation_beyond_window(self):
        u = BraidWord(6, (1, 2, 3, 4, 5) * 6)
        with pytest.raises(BraidError):
            sketch_without_word(u, 4).compose(sketch_without_word(u.inverse(), 4), 4, 10**6)

    def test_fully_cancelled_factor_shortens_tail(self):
        u = BraidWord(6, (1, 2, 3, 4, 5) * 6)
        v = WordSketch.of(BraidWord(6, (-5, -4)), 4)
        got = sketch_without_word(u, 4).compose(v, 4, 10**6)
        assert got.length == 28
        assert got.head == (1, 2, 3, 4)
        assert got.tail == (2, 3)
        assert got.letter(27) == 3
        with pytest.raises(BraidError):
            got.letter(25)
