from itertools import product

import pytest

from conftest import random_gaps
from herman_lab.ring import (
    BitRing,
    Configuration,
    GapVector,
    apply_step,
    bit_step,
    bits_from_config,
    canonical_rotation,
    config_from_bits,
    config_from_gaps,
    format_gap_literal,
    gap_vector,
    parse_configuration,
    parse_gap_vector,
    random_step,
    token_positions,
)
from herman_lab.streams import CoinStream


def all_masks(k):
    return list(product((False, True), repeat=k))


# --- configurations and gap vectors -------------------------------------

def test_gap_vector_wraparound_first():
    assert gap_vector(Configuration(7, (2, 3, 6))).gaps == (3, 1, 3)


def test_gap_vector_unit_gaps():
    assert gap_vector(Configuration(5, (1, 2, 3, 4, 5))).gaps == (1, 1, 1, 1, 1)


def test_gap_vector_single_token():
    assert gap_vector(Configuration(4, (3,))).gaps == (4,)


def test_config_round_trip_through_gaps(rng):
    for _ in range(200):
        n = rng.randint(3, 20)
        k = rng.randint(1, n)
        positions = tuple(sorted(rng.sample(range(1, n + 1), k)))
        c = Configuration(n, positions)
        g = gap_vector(c)
        assert sum(g.gaps) == n
        back = config_from_gaps(g)
        # same gap vector up to rotation
        assert canonical_rotation(gap_vector(back)) == canonical_rotation(g)


def test_configuration_validation():
    with pytest.raises(ValueError):
        Configuration(2, (1,))
    with pytest.raises(ValueError):
        Configuration(5, ())
    with pytest.raises(ValueError):
        Configuration(5, (1, 1))
    with pytest.raises(ValueError):
        Configuration(5, (0, 2))
    with pytest.raises(ValueError):
        GapVector(6, (1, 2, 2))
    with pytest.raises(ValueError):
        GapVector(6, (0, 3, 3))


# --- the synchronous step ------------------------------------------------

def test_apply_step_all_stay_is_identity():
    c = Configuration(9, (1, 4, 7))
    assert apply_step(c, (False,) * 3) == c


def test_apply_step_all_move_preserves_gaps():
    c = Configuration(5, (1, 3, 4))
    stepped = apply_step(c, (True,) * 3)
    assert stepped.positions == (2, 4, 5)
    assert canonical_rotation(gap_vector(stepped)) == canonical_rotation(gap_vector(c))


def test_apply_step_annihilation():
    c = Configuration(5, (1, 2, 5))
    assert apply_step(c, (True, False, False)).positions == (5,)


def test_apply_step_mask_length_checked():
    with pytest.raises(ValueError):
        apply_step(Configuration(5, (1, 2)), (True,))


def test_step_invariants_random(rng):
    for _ in range(300):
        n = rng.randint(3, 15)
        k = rng.randint(1, n)
        c = Configuration(n, tuple(sorted(rng.sample(range(1, n + 1), k))))
        mask = tuple(rng.random() < 0.5 for _ in range(k))
        try:
            stepped = apply_step(c, mask)
        except ValueError:
            assert k % 2 == 0  # only even K can annihilate everything
            continue
        # gap sum conservation, parity conservation, monotone token count
        assert sum(gap_vector(stepped).gaps) == n
        assert stepped.token_count % 2 == k % 2
        assert stepped.token_count <= k


def test_rotation_equivariance(rng):
    for _ in range(200):
        n = rng.randint(3, 12)
        k = rng.randint(1, n - 1)
        positions = tuple(sorted(rng.sample(range(1, n + 1), k)))
        c = Configuration(n, positions)
        mask = tuple(rng.random() < 0.5 for _ in range(k))
        shift = rng.randint(1, n - 1)
        rotated = Configuration(n, tuple(sorted((p - 1 + shift) % n + 1 for p in positions)))
        # rotating relabels token order; rotate the mask along with the tokens
        order = sorted(range(k), key=lambda i: (positions[i] - 1 + shift) % n + 1)
        rotated_mask = tuple(mask[i] for i in order)
        try:
            lhs = apply_step(rotated, rotated_mask)
            rhs = apply_step(c, mask)
        except ValueError:
            continue
        expected = tuple(sorted((p - 1 + shift) % n + 1 for p in rhs.positions))
        assert lhs.positions == expected


def test_random_step_single_token_fixed():
    c = Configuration(6, (4,))
    stream = CoinStream.from_seed(0, 0)
    for _ in range(50):
        c2 = random_step(c, stream)
        assert c2.token_count == 1
        c = c2


def test_random_step_collision_rate_matches_enumeration():
    # oracle: enumerate all 8 masks with apply_step
    c = Configuration(3, (1, 2, 3))
    collapsed = sum(apply_step(c, m).token_count == 1 for m in all_masks(3))
    assert collapsed == 6
    stream = CoinStream.from_seed(11, 0)
    runs = 20000
    hits = sum(random_step(c, stream).token_count == 1 for _ in range(runs))
    sigma = (runs * 0.75 * 0.25) ** 0.5
    assert abs(hits - runs * 0.75) <= 4 * sigma


# --- bit representation --------------------------------------------------

def test_config_from_bits_examples():
    assert config_from_bits(BitRing((False, False, False))).positions == (1, 2, 3)
    assert config_from_bits(BitRing((False, True, True))).positions == (3,)


def test_bits_round_trip_random(rng):
    for _ in range(10_000):
        n = rng.choice((3, 5, 7, 9, 11, 13, 15))
        k = rng.choice(range(1, n + 1, 2))
        c = Configuration(n, tuple(sorted(rng.sample(range(1, n + 1), k))))
        assert config_from_bits(bits_from_config(c)) == c


def test_bits_complement_degeneracy():
    c = Configuration(5, (2, 4, 5))
    bits = bits_from_config(c)
    flipped = BitRing(tuple(not b for b in bits.bits))
    assert config_from_bits(flipped) == c


def test_bits_from_config_rejects_even_ring():
    with pytest.raises(ValueError):
        bits_from_config(Configuration(4, (1, 2, 3)))


def test_bit_ring_needs_a_token():
    with pytest.raises(ValueError):
        BitRing((True, False, True, False))


def test_bit_step_no_flips_keeps_configuration():
    bits = bits_from_config(Configuration(7, (1, 4, 6)))
    stepped = bit_step(bits, (False, False, False))
    assert config_from_bits(stepped).positions == (1, 4, 6)


def test_bit_step_global_flip_keeps_tokens():
    bits = BitRing((False, False, False))
    stepped = bit_step(bits, (True, True, True))
    assert stepped.bits == (True, True, True)
    assert config_from_bits(stepped).positions == (1, 2, 3)


@pytest.mark.parametrize("n", (3, 5))
def test_bit_step_coupling_exhaustive(n):
    # every bit state, every flip vector: bit stepping implements token passing
    for word in range(1 << n):
        bits = BitRing(tuple(bool((word >> i) & 1) for i in range(n)))
        config = config_from_bits(bits)
        k = config.token_count
        for mask in all_masks(k):
            assert config_from_bits(bit_step(bits, mask)) == apply_step(config, mask)


def test_bit_step_coupling_random(rng):
    for _ in range(10_000):
        n = rng.choice((3, 5, 7, 9, 11, 13, 15))
        word = rng.getrandbits(n)
        bits = BitRing(tuple(bool((word >> i) & 1) for i in range(n)))
        config = config_from_bits(bits)
        mask = tuple(rng.random() < 0.5 for _ in range(config.token_count))
        assert config_from_bits(bit_step(bits, mask)) == apply_step(config, mask)


def test_odd_ring_forces_odd_token_count(rng):
    for _ in range(500):
        n = rng.choice((3, 5, 7, 9, 11))
        word = rng.getrandbits(n)
        bits = BitRing(tuple(bool((word >> i) & 1) for i in range(n)))
        assert config_from_bits(bits).token_count % 2 == 1


def test_token_positions_matches_definition():
    bits = BitRing((True, False, False, True, True))
    expected = tuple(
        i + 1 for i in range(5) if bits.bits[i] == bits.bits[i - 1]
    )
    assert token_positions(bits) == expected


# --- canonical rotation and literals -------------------------------------

def test_canonical_rotation_examples():
    assert canonical_rotation(GapVector(5, (1, 3, 1))).gaps == (1, 1, 3)
    assert canonical_rotation(GapVector(6, (2, 2, 2))).gaps == (2, 2, 2)
    assert canonical_rotation(GapVector(5, (5,))).gaps == (5,)


def test_canonical_rotation_is_rotation_invariant(rng):
    for _ in range(200):
        n = rng.randint(3, 20)
        k = rng.randint(1, min(n, 9))
        g = random_gaps(rng, k, n) if k > 1 else GapVector(n, (n,))
        shift = rng.randrange(k)
        rotated = GapVector(n, g.gaps[shift:] + g.gaps[:shift])
        assert canonical_rotation(g) == canonical_rotation(rotated)


def test_parse_literals():
    assert parse_gap_vector("N=7;gaps=3,1,3").gaps == (3, 1, 3)
    assert parse_gap_vector("N=7;tokens=2,3,6").gaps == (3, 1, 3)
    assert parse_configuration("N=7;tokens=2,3,6").positions == (2, 3, 6)
    assert parse_configuration("N=7;gaps=3,1,3").positions == (3, 4, 7)
    assert format_gap_literal(GapVector(7, (3, 1, 3))) == "N=7;gaps=3,1,3"


@pytest.mark.parametrize(
    "bad",
    ["", "N=7", "gaps=1,2;N=7", "N=x;gaps=1,2", "N=7;gaps=", "N=7;stuff=1,2", "N=7;gaps=1,a"],
)
def test_parse_literal_errors(bad):
    with pytest.raises(ValueError):
        parse_gap_vector(bad)
