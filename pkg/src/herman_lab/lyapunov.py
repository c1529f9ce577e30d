"""The Lyapunov polynomials f3, f5, f and their derivative quantities.

f3 sums x_{i0} x_{i1} x_{i2} over index triples whose consecutive
differences are odd; f5 does the same for quintuples; f = f3 - 24 f5.
Scaled by 4 N^2 and evaluated at the normalized gap vector these give
the Lyapunov functions V3, V5, V whose one-step drift bounds the
expected stabilization time of the ring.

Every function is backend-polymorphic: feed it Fractions (or ints) for
exact rational results, floats for IEEE doubles.  Simplex points are
validated by default; pass check=False to evaluate the underlying
polynomial at an arbitrary vector (used by drift identities, which work
on raw integer gap vectors, and by finite-difference oracles that step
off the simplex).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .ring import GapVector

ALPHA = 24  # coefficient of f5 in f; the protocol analysis needs exactly 24

SIMPLEX_TOL = 1e-12


@lru_cache(maxsize=None)
def f3_index_triples(k: int) -> tuple[tuple[int, int, int], ...]:
    """Triples 0 <= i0 < i1 < i2 < k with i1-i0 and i2-i1 odd."""
    out = []
    for i0 in range(k):
        for i1 in range(i0 + 1, k):
            if (i1 - i0) % 2 == 0:
                continue
            for i2 in range(i1 + 1, k):
                if (i2 - i1) % 2 == 1:
                    out.append((i0, i1, i2))
    return tuple(out)


@lru_cache(maxsize=None)
def f5_index_quintuples(k: int) -> tuple[tuple[int, ...], ...]:
    """Quintuples with all four consecutive differences odd."""
    out = []

    def extend(prefix: tuple[int, ...]):
        if len(prefix) == 5:
            out.append(prefix)
            return
        for nxt in range(prefix[-1] + 1, k):
            if (nxt - prefix[-1]) % 2 == 1:
                extend(prefix + (nxt,))

    for i0 in range(k):
        extend((i0,))
    return tuple(out)


def _is_exact(x: Sequence) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in x)


def check_simplex(x: Sequence) -> None:
    """Reject vectors off the standard simplex (no silent renormalizing)."""
    k = len(x)
    if k < 3 or k % 2 == 0:
        raise ValueError("simplex points need odd dimension K >= 3")
    if any(v < 0 for v in x):
        raise ValueError("simplex coordinates must be nonnegative")
    total = sum(x)
    if _is_exact(x):
        if total != 1:
            raise ValueError("exact simplex coordinates must sum to exactly 1")
    elif abs(total - 1.0) > SIMPLEX_TOL:
        raise ValueError(f"simplex coordinates sum to {total!r}, off by more than {SIMPLEX_TOL}")


def f3(x: Sequence, check: bool = True):
    if check:
        check_simplex(x)
    return sum(x[a] * x[b] * x[c] for a, b, c in f3_index_triples(len(x)))


def f5(x: Sequence, check: bool = True):
    if check:
        check_simplex(x)
    total = 0
    for a, b, c, d, e in f5_index_quintuples(len(x)):
        total += x[a] * x[b] * x[c] * x[d] * x[e]
    return total


def f(x: Sequence, check: bool = True, alpha=ALPHA):
    if check:
        check_simplex(x)
    return f3(x, check=False) - alpha * f5(x, check=False)


def scalar_rotation_product(x: Sequence, j: int):
    """S_j: the scalar product of x with itself rotated j places."""
    k = len(x)
    if not 1 <= j < k:
        raise ValueError("rotation offset must satisfy 1 <= j < K")
    return sum(x[i] * x[(i + j) % k] for i in range(k))


def _check_gap_vector(g: GapVector) -> None:
    if g.token_count % 2 == 0:
        raise ValueError("Lyapunov functions are defined for odd token counts")


def V3(g: GapVector, exact: bool = True):
    """4 N^2 f3(g/N); by homogeneity equals 4 f3(g)/N on integer gaps."""
    _check_gap_vector(g)
    n = g.ring_size
    val = Fraction(4 * f3(g.gaps, check=False), n)
    return val if exact else float(val)


def V5(g: GapVector, exact: bool = True):
    """4 N^2 f5(g/N) = 4 f5(g)/N^3 on integer gaps."""
    _check_gap_vector(g)
    n = g.ring_size
    val = Fraction(4 * f5(g.gaps, check=False), n**3)
    return val if exact else float(val)


def V(g: GapVector, exact: bool = True, alpha=ALPHA):
    _check_gap_vector(g)
    val = V3(g) - alpha * V5(g)
    return val if exact else float(val)


def c_value(x: Sequence, k: int = 0, alpha=ALPHA):
    """First-order critical value at rotation offset k.

    Linear part sums x over even indices in (1, K); the cubic correction
    runs over 1 < i2 < i3 < i4 < K with i2, i4 even and i3 odd, all
    indices shifted by k mod K.  At an interior local maximum of f this
    value is the same for every k.
    """
    K = len(x)
    if not 0 <= k < K:
        raise ValueError("rotation offset must satisfy 0 <= k < K")
    linear = sum(x[(i2 + k) % K] for i2 in range(2, K, 2))
    cubic = 0
    for i2 in range(2, K, 2):
        for i3 in range(i2 + 1, K, 2):
            for i4 in range(i3 + 1, K, 2):
                cubic += x[(i2 + k) % K] * x[(i3 + k) % K] * x[(i4 + k) % K]
    return linear - alpha * cubic


def second_order_sum(x: Sequence, k: int = 0):
    """Sum of x_{i3} x_{i4} over 3 <= i3 < i4 < K, i3 odd, i4 even, shifted by k."""
    K = len(x)
    if not 0 <= k < K:
        raise ValueError("rotation offset must satisfy 0 <= k < K")
    total = 0
    for i3 in range(3, K, 2):
        for i4 in range(i3 + 1, K, 2):
            total += x[(i3 + k) % K] * x[(i4 + k) % K]
    return total


def _partial_at_zero(x: Sequence, alpha=ALPHA):
    """P = df/dx_0: pair sum minus alpha times the alternating quadruple sum."""
    K = len(x)
    pairs = 0
    for i1 in range(1, K, 2):
        for i2 in range(i1 + 1, K, 2):
            pairs += x[i1] * x[i2]
    quads = 0
    for i1 in range(1, K, 2):
        for i2 in range(i1 + 1, K, 2):
            for i3 in range(i2 + 1, K, 2):
                for i4 in range(i3 + 1, K, 2):
                    quads += x[i1] * x[i2] * x[i3] * x[i4]
    return pairs - alpha * quads


def derivative_terms(x: Sequence, alpha=ALPHA):
    """(P, Q, R) from the second-order expansion of f along d = (-1,0,1,0,...,0).

    P is df/dx_0; Q = P(x rotated by 2) - P(x) is the first-order
    coefficient along d; R = -x_1 + alpha x_1 * sum over 2 < i3 < i4 < K
    (i3 odd, i4 even) of x_{i3} x_{i4} is the second-order coefficient.
    """
    K = len(x)
    if K < 5:
        raise ValueError("derivative terms need K >= 5")
    p = _partial_at_zero(x, alpha)
    rotated = tuple(x[(i + 2) % K] for i in range(K))
    q = _partial_at_zero(rotated, alpha) - p
    pair_sum = 0
    for i3 in range(3, K, 2):
        for i4 in range(i3 + 1, K, 2):
            pair_sum += x[i3] * x[i4]
    r = -x[1] + alpha * x[1] * pair_sum
    return p, q, r
