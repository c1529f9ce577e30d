# A tour of the token ring itself: positions, gaps, bits, and one
# synchronous step.  Run as: python demos/01_token_ring_basics.py

from herman_lab import (
    Configuration,
    CoinStream,
    apply_step,
    bit_step,
    bits_from_config,
    canonical_rotation,
    config_from_bits,
    gap_vector,
    random_step,
)

# Three tokens on a ring of seven processes.
config = Configuration(7, (2, 3, 6))
print("positions:", config.positions)
print("gap vector:", gap_vector(config).gaps)  # (3, 1, 3): the wraparound gap comes first

# One deterministic step: only the middle token moves clockwise.
moved = apply_step(config, (False, True, False))
print("after (stay, move, stay):", moved.positions)

# Tokens that land on each other annihilate in pairs: here the token at 2
# moves onto the staying token at 3 and both disappear.
stepped = apply_step(config, (True, False, False))
print("after (move, stay, stay):", stepped.positions)

# Random steps draw one fair coin per token from a seeded stream.
stream = CoinStream.from_seed(42, 0)
state = Configuration(9, (3, 6, 9))
for t in range(5):
    state = random_step(state, stream)
    print(f"step {t + 1}: tokens at {state.positions}")

# The original formulation stores one bit per process; a process holds a
# token exactly when its bit equals its counterclockwise neighbor's bit,
# and passing a token is flipping a bit.
bits = bits_from_config(config)
print("bits:", "".join("1" if b else "0" for b in bits.bits))
flipped = bit_step(bits, (True, False, False))
print("extracted after flip:", config_from_bits(flipped).positions)
print("same as position step:", config_from_bits(flipped) == stepped)

# Gap vectors are compared up to rotation; the canonical form is the
# lexicographically smallest one.
print("canonical (1,3,1):", canonical_rotation(gap_vector(Configuration(5, (1, 2, 5)))).gaps)
