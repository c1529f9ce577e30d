"""Token-ring configurations and the synchronous randomized step.

A ring of N processes (numbered 1..N clockwise) holds K tokens.  Each
step, every token independently stays or moves one position clockwise;
two tokens landing on one process annihilate.  The module provides the
position view (`Configuration`), the gap view (`GapVector`), the bit
view (`BitRing`) of the original protocol, and the conversions and step
operators connecting them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .streams import CoinStream

# A move mask is one boolean per token, in position-sorted token order.
MoveMask = Sequence[bool]


@dataclass(frozen=True, slots=True)
class Configuration:
    """Token positions z(1) < ... < z(K) on a ring of `ring_size` processes."""

    ring_size: int
    positions: tuple[int, ...]

    def __post_init__(self):
        n = self.ring_size
        pos = tuple(self.positions)
        object.__setattr__(self, "positions", pos)
        if n < 3:
            raise ValueError("ring_size must be at least 3")
        if not pos:
            raise ValueError("configuration needs at least one token")
        if any(not 1 <= p <= n for p in pos):
            raise ValueError("token positions must lie in 1..N")
        if any(a >= b for a, b in zip(pos, pos[1:])):
            raise ValueError("token positions must be strictly increasing")

    @property
    def token_count(self) -> int:
        return len(self.positions)


@dataclass(frozen=True, slots=True)
class GapVector:
    """K cyclic gaps between consecutive tokens; positive, summing to N.

    The empty vector (K = 0) is allowed as the terminal state of even-K
    dynamics where every token has annihilated; it never occurs for odd K.
    """

    ring_size: int
    gaps: tuple[int, ...]

    def __post_init__(self):
        n = self.ring_size
        gaps = tuple(self.gaps)
        object.__setattr__(self, "gaps", gaps)
        if n < 3:
            raise ValueError("ring_size must be at least 3")
        if gaps:
            if any(g < 1 for g in gaps):
                raise ValueError("all gaps must be >= 1")
            if sum(gaps) != n:
                raise ValueError("gaps must sum to ring_size")

    @property
    def token_count(self) -> int:
        return len(self.gaps)


@dataclass(frozen=True, slots=True)
class BitRing:
    """One bit per process; process i holds a token iff bit_i == bit_{i-1}."""

    bits: tuple[bool, ...]

    def __post_init__(self):
        bits = tuple(bool(b) for b in self.bits)
        object.__setattr__(self, "bits", bits)
        if len(bits) < 3:
            raise ValueError("bit ring needs at least 3 processes")
        if not any(bits[i] == bits[i - 1] for i in range(len(bits))):
            raise ValueError("bit ring encodes no token")

    @property
    def ring_size(self) -> int:
        return len(self.bits)


def gap_vector(config: Configuration) -> GapVector:
    """Gap view: gaps[0] wraps around (N + z(1) - z(K)), gaps[i] = z(i+1) - z(i)."""
    pos = config.positions
    n = config.ring_size
    gaps = [n + pos[0] - pos[-1]]
    gaps.extend(pos[i + 1] - pos[i] for i in range(len(pos) - 1))
    return GapVector(n, tuple(gaps))


def config_from_gaps(g: GapVector) -> Configuration:
    """A configuration with the given gaps, anchored so the last token sits at N."""
    if not g.gaps:
        raise ValueError("cannot place tokens for an empty gap vector")
    pos = []
    acc = 0
    for gap in g.gaps:
        acc += gap
        pos.append(acc)
    return Configuration(g.ring_size, tuple(pos))


def canonical_rotation(g: GapVector) -> GapVector:
    """Lexicographically minimal cyclic rotation of the gaps."""
    gaps = g.gaps
    if len(gaps) <= 1:
        return g
    best = min(gaps[i:] + gaps[:i] for i in range(len(gaps)))
    return GapVector(g.ring_size, best)


def apply_step(config: Configuration, mask: MoveMask) -> Configuration:
    """Advance every token whose mask bit is set; annihilate collisions.

    Annihilation is occupancy count mod 2 per process: a process can end
    the step with at most two tokens (one kept, one received), and a pair
    removes both.
    """
    pos = config.positions
    n = config.ring_size
    if len(mask) != len(pos):
        raise ValueError("mask length must equal the token count")
    occupancy: set[int] = set()
    for p, move in zip(pos, mask):
        q = p % n + 1 if move else p
        if q in occupancy:
            occupancy.discard(q)
        else:
            occupancy.add(q)
    if not occupancy:
        raise ValueError("all tokens annihilated; no configuration remains")
    return Configuration(n, tuple(sorted(occupancy)))


def random_step(config: Configuration, rng: CoinStream) -> Configuration:
    """One synchronous step with each token moving independently w.p. 1/2."""
    return apply_step(config, rng.bools(config.token_count))


def token_positions(bits: BitRing) -> tuple[int, ...]:
    """Positions of processes whose bit equals their counterclockwise neighbor's."""
    b = bits.bits
    n = len(b)
    return tuple(i + 1 for i in range(n) if b[i] == b[i - 1])


def config_from_bits(bits: BitRing) -> Configuration:
    """Canonical map from the bit representation to token positions."""
    return Configuration(bits.ring_size, token_positions(bits))


def bits_from_config(config: Configuration) -> BitRing:
    """A bit ring whose extracted configuration is `config` (process 1 bit = 0).

    Requires N odd; the bit representation then forces an odd token count,
    and the returned ring is one of the two complementary encodings.
    """
    n = config.ring_size
    if n % 2 == 0:
        raise ValueError("bit representation requires an odd number of processes")
    if config.token_count % 2 == 0:
        raise ValueError("odd process count forces an odd token count")
    tokens = set(config.positions)
    bits = [False] * n
    for p in range(2, n + 1):
        same = p in tokens
        bits[p - 1] = bits[p - 2] if same else not bits[p - 2]
    return BitRing(tuple(bits))


def bit_step(bits: BitRing, flips: MoveMask) -> BitRing:
    """Flip the bit of each token-holding process whose coin is set.

    `flips` is indexed like a move mask: one coin per token, in sorted
    token-position order.  A flip passes that token clockwise.
    """
    tokens = token_positions(bits)
    if len(flips) != len(tokens):
        raise ValueError("flip vector length must equal the token count")
    new_bits = list(bits.bits)
    for p, flip in zip(tokens, flips):
        if flip:
            new_bits[p - 1] = not new_bits[p - 1]
    return BitRing(tuple(new_bits))


def parse_gap_vector(text: str) -> GapVector:
    """Parse the state literal grammar, e.g. "N=7;gaps=3,1,3" or "N=7;tokens=2,3,6"."""
    n, kind, values = _parse_literal(text)
    if kind == "gaps":
        return GapVector(n, values)
    return gap_vector(Configuration(n, values))


def parse_configuration(text: str) -> Configuration:
    """Parse a state literal into a Configuration (gap form is anchored at N)."""
    n, kind, values = _parse_literal(text)
    if kind == "tokens":
        return Configuration(n, values)
    return config_from_gaps(GapVector(n, values))


def format_gap_literal(g: GapVector) -> str:
    return f"N={g.ring_size};gaps={','.join(str(x) for x in g.gaps)}"


def _parse_literal(text: str) -> tuple[int, str, tuple[int, ...]]:
    parts = text.strip().split(";")
    if len(parts) != 2:
        raise ValueError(f"bad state literal {text!r}: expected 'N=<int>;tokens=...' or 'N=<int>;gaps=...'")
    left, right = parts
    if not left.startswith("N="):
        raise ValueError(f"bad state literal {text!r}: first field must be N=<int>")
    try:
        n = int(left[2:])
    except ValueError:
        raise ValueError(f"bad ring size in {text!r}") from None
    kind, eq, payload = right.partition("=")
    if eq != "=" or kind not in ("tokens", "gaps"):
        raise ValueError(f"bad state literal {text!r}: second field must be tokens=... or gaps=...")
    try:
        values = tuple(int(tok) for tok in payload.split(",") if tok != "")
    except ValueError:
        raise ValueError(f"bad integer list in {text!r}") from None
    if not values:
        raise ValueError(f"empty {kind} list in {text!r}")
    return n, kind, values
