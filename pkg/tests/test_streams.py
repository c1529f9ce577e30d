import pytest

from herman_lab.streams import MASK64, CoinStream, scramble64, stream_key


def test_scramble_is_deterministic_64_bit():
    assert scramble64(0) == scramble64(0)
    assert 0 <= scramble64(123456789) <= MASK64
    # distinct nearby inputs scatter
    outputs = {scramble64(i) for i in range(1000)}
    assert len(outputs) == 1000


def test_stream_key_distinct_per_index():
    keys = {stream_key(42, i) for i in range(10000)}
    assert len(keys) == 10000


def test_stream_key_rejects_negative_index():
    with pytest.raises(ValueError):
        stream_key(0, -1)


def test_words_reproducible():
    a = CoinStream.from_seed(7, 3)
    b = CoinStream.from_seed(7, 3)
    assert [a.next_word() for _ in range(20)] == [b.next_word() for _ in range(20)]


def test_coin_fairness_three_sigma():
    stream = CoinStream.from_seed(2024, 0)
    draws = 100_000
    ones = sum(stream.coin_word(1) for _ in range(draws))
    sigma = 0.5 * draws**0.5
    assert abs(ones - draws / 2) <= 3 * sigma


def test_bools_width():
    stream = CoinStream.from_seed(1, 0)
    bits = stream.bools(7)
    assert len(bits) == 7 and all(isinstance(b, bool) for b in bits)
    with pytest.raises(ValueError):
        stream.coin_word(0)
    with pytest.raises(ValueError):
        stream.coin_word(65)
