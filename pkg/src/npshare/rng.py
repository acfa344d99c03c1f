"""Deterministic randomness built on SplitMix64.

Every random draw in the library flows through a :class:`Stream` so that
dealings, experiments and reports reproduce bit-exactly from a single
64-bit master seed, independent of Python's own RNG.  Per-trial streams
are derived as ``Stream(derive_seed(master_seed, trial_index))``, which
makes trials order-independent and safe to fan out.

SplitMix64 constants (increment and the two finalizer multipliers) are
fixed here and reused by the commitment expansion functions.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """One SplitMix64 output for initial state ``x``."""
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Per-trial seed: SplitMix64 of (master XOR index)."""
    return mix64((master_seed ^ index) & MASK64)


class Stream:
    """A SplitMix64 word stream with small draw helpers."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def bits(self, nbits: int) -> int:
        """``nbits`` uniform bits, 64-bit words concatenated little-endian."""
        out = 0
        shift = 0
        while shift < nbits:
            out |= self.next64() << shift
            shift += 64
        return out & ((1 << nbits) - 1)

    def bit(self) -> int:
        return self.next64() & 1

    def bytes(self, nbytes: int) -> bytes:
        return self.bits(8 * nbytes).to_bytes(nbytes, "little")

    def randrange(self, bound: int) -> int:
        """Uniform integer in [0, bound), rejection-sampled (unbiased)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound == 1:
            return 0
        span = (1 << 64) - ((1 << 64) % bound)
        while True:
            w = self.next64()
            if w < span:
                return w % bound

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def spawn(self, index: int) -> "Stream":
        """Child stream keyed by ``index``; does not advance this stream."""
        return Stream(derive_seed(self.state, index))
