"""Perfectly binding commitments in the common-random-string model.

The construction is the classic PRG-based bitwise commitment: to commit
to an ``ell``-bit value under a CRS of ``ell`` blocks of ``3k`` bits, each
value bit ``b_j`` is committed as ``PRG(seed_j) XOR (b_j * crs_block_j)``
with a fresh ``k``-bit seed per bit.  Committed values live in
``[2n] = {1, .., 2n}``, so ``ell = ceil(log2(2n+1))``.

Binding is statistical over the CRS (for a random block, the sets
``{PRG(s)}`` and ``{PRG(s) XOR crs_block}`` are disjoint except with
probability about ``2^-k``); hiding is only as good as the pinned toy
expansion.  This is desk-scale experiment material, not production
cryptography.

Two expansion functions are shipped:

* ``"splitmix64"`` (default) - the first ``3k`` bits of the SplitMix64
  output stream seeded with the seed zero-extended to 64 bits, output
  words concatenated little-endian.
* ``"toy"`` - three SplitMix64-style mix rounds truncated to ``k``-bit
  words, one output word per round.  This variant is small enough to
  compile into a Boolean circuit and is what the CNF pipeline uses; the
  commitment API is expansion-agnostic so both paths agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import serde
from .rng import GOLDEN, MIX1, MIX2, Stream


def value_bit_length(n: int) -> int:
    """Bits needed for committed values in [2n] (plus the padding slot)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (2 * n).bit_length()


def prg_splitmix64(seed: int, k: int) -> int:
    """First 3k bits of the SplitMix64 stream seeded with ``seed``."""
    stream = Stream(seed)
    out = 0
    shift = 0
    while shift < 3 * k:
        out |= stream.next64() << shift
        shift += 64
    return out & ((1 << (3 * k)) - 1)


def prg_toy(seed: int, k: int) -> int:
    """Circuit-friendly expansion: 3 mix rounds on k-bit words.

    Each round adds the (truncated) SplitMix64 increment, then applies
    xorshift / multiply / xorshift with the truncated finalizer
    constants.  Output words are concatenated little-endian, word t at
    bit offset t*k.  Must stay in lockstep with the circuit in
    :mod:`npshare.circuits`.
    """
    mask = (1 << k) - 1
    inc = GOLDEN & mask
    mults = (MIX1 & mask, MIX2 & mask, MIX1 & mask)
    s1 = max(1, k // 2)
    s2 = max(1, k // 2 + 1)
    state = seed & mask
    out = 0
    for t in range(3):
        state = (state + inc) & mask
        z = state ^ (state >> s1)
        z = (z * mults[t]) & mask
        z = z ^ (z >> s2)
        out |= z << (t * k)
    return out


EXPANSIONS = {"splitmix64": prg_splitmix64, "toy": prg_toy}


@dataclass(frozen=True)
class CRS:
    """Public random string: ``ell`` blocks of ``3k`` bits each."""

    n: int
    k: int
    bits: int
    expansion: str = "splitmix64"

    def __post_init__(self):
        if self.expansion not in EXPANSIONS:
            raise ValueError(f"unknown expansion {self.expansion!r}")
        if self.bits >> self.total_bits:
            raise ValueError("CRS bits exceed declared length")

    @property
    def ell(self) -> int:
        return value_bit_length(self.n)

    @property
    def block_bits(self) -> int:
        return 3 * self.k

    @property
    def total_bits(self) -> int:
        return self.ell * self.block_bits

    def block(self, j: int) -> int:
        return (self.bits >> (j * self.block_bits)) & ((1 << self.block_bits) - 1)

    def prg(self, seed: int) -> int:
        if self.k <= 12:
            return _prg_table(self.expansion, self.k)[0][seed]
        return EXPANSIONS[self.expansion](seed, self.k)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "expansion": self.expansion,
            "bits": serde.int_to_hex(self.bits, self.total_bits),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CRS":
        n, k = int(obj["n"]), int(obj["k"])
        nbits = value_bit_length(n) * 3 * k
        return cls(n=n, k=k, expansion=obj["expansion"], bits=serde.hex_to_int(obj["bits"], nbits))


@dataclass(frozen=True)
class Opening:
    """Per-bit PRG seeds; the absent opening is represented by ``None``."""

    seeds: tuple[int, ...]

    def to_json(self, crs: CRS) -> str:
        packed = 0
        for j, seed in enumerate(self.seeds):
            packed |= seed << (j * crs.k)
        return serde.int_to_hex(packed, crs.ell * crs.k)

    @classmethod
    def from_json(cls, text: str, crs: CRS) -> "Opening":
        packed = serde.hex_to_int(text, crs.ell * crs.k)
        mask = (1 << crs.k) - 1
        return cls(tuple((packed >> (j * crs.k)) & mask for j in range(crs.ell)))


def opening_to_json(opening: Opening | None, crs: CRS) -> str | None:
    """``None`` (the absent opening) serializes as JSON null, never as bits."""
    return None if opening is None else opening.to_json(crs)


def opening_from_json(obj: str | None, crs: CRS) -> Opening | None:
    return None if obj is None else Opening.from_json(obj, crs)


@dataclass(frozen=True)
class Commitment:
    """``ell`` blocks of ``3k`` bits, block j at bit offset ``j*3k``."""

    bits: int

    def block(self, j: int, crs: CRS) -> int:
        return (self.bits >> (j * crs.block_bits)) & ((1 << crs.block_bits) - 1)

    def to_json(self, crs: CRS) -> str:
        return serde.int_to_hex(self.bits, crs.total_bits)

    @classmethod
    def from_json(cls, text: str, crs: CRS) -> "Commitment":
        return cls(serde.hex_to_int(text, crs.total_bits))


def crs_gen(n: int, k: int, rng: Stream, expansion: str = "splitmix64") -> CRS:
    if n < 1:
        raise ValueError("n must be >= 1")
    if k < 4:
        raise ValueError("seed length k must be >= 4")
    nbits = value_bit_length(n) * 3 * k
    return CRS(n=n, k=k, bits=rng.bits(nbits), expansion=expansion)


def sample_opening(crs: CRS, rng: Stream) -> Opening:
    return Opening(tuple(rng.bits(crs.k) for _ in range(crs.ell)))


def commit(value: int, opening: Opening, crs: CRS) -> Commitment:
    """Commit to ``value`` in [2n]; deterministic in (value, opening, crs)."""
    if not 1 <= value <= 2 * crs.n:
        raise ValueError(f"value {value} outside [2n] = [1, {2 * crs.n}]")
    if len(opening.seeds) != crs.ell:
        raise ValueError(f"opening has {len(opening.seeds)} seeds, expected {crs.ell}")
    bits = 0
    for j, seed in enumerate(opening.seeds):
        if seed >> crs.k:
            raise ValueError("opening seed wider than k bits")
        block = crs.prg(seed)
        if (value >> j) & 1:
            block ^= crs.block(j)
        bits |= block << (j * crs.block_bits)
    return Commitment(bits)


def verify_opening(value: int, opening: Opening | None, crs: CRS, com: Commitment) -> bool:
    """True iff the opening is present and recommits to ``com`` exactly."""
    if opening is None:
        return False
    try:
        return commit(value, opening, crs) == com
    except ValueError:
        return False


@lru_cache(maxsize=32)
def _prg_table(expansion: str, k: int) -> tuple[tuple[int, ...], dict]:
    """All 2^k expansion outputs plus a preimage map (first seed wins)."""
    fn = EXPANSIONS[expansion]
    outs = tuple(fn(seed, k) for seed in range(1 << k))
    pre: dict[int, int] = {}
    for seed in range((1 << k) - 1, -1, -1):
        pre[outs[seed]] = seed
    return outs, pre


def block_preimage(crs: CRS, target: int) -> int | None:
    """A seed with PRG(seed) == target, or None (exhaustive, k <= 12)."""
    if crs.k > 12:
        raise ValueError("exhaustive block search limited to k <= 12")
    _, pre = _prg_table(crs.expansion, crs.k)
    return pre.get(target)


def find_opening(value: int, com: Commitment, crs: CRS) -> Opening | None:
    """Exhaustively invert a commitment to ``value``, block by block.

    Sound and complete because blocks are independent: an opening exists
    iff every block's PRG target has a preimage.
    """
    seeds = []
    for j in range(crs.ell):
        target = com.block(j, crs)
        if (value >> j) & 1:
            target ^= crs.block(j)
        seed = block_preimage(crs, target)
        if seed is None:
            return None
        seeds.append(seed)
    return Opening(tuple(seeds))


def supports_disjoint(crs: CRS, v1: int, v2: int, k: int | None = None) -> bool:
    """True iff no opening pair makes commit(v1) collide with commit(v2).

    Checked per differing bit position: the supports of block j are
    ``{PRG(s)}`` and ``{PRG(s) XOR crs_j}``, and the commitments can only
    collide if *every* differing block admits a collision.  Equal values
    trivially share their own support, so the answer there is False.
    """
    if k is not None and k != crs.k:
        raise ValueError("k disagrees with the CRS")
    if crs.k > 12:
        raise ValueError("exhaustive support check limited to k <= 12")
    for v in (v1, v2):
        if not 1 <= v <= 2 * crs.n:
            raise ValueError(f"value {v} outside [2n]")
    if v1 == v2:
        return False
    outs, _ = _prg_table(crs.expansion, crs.k)
    image = set(outs)
    for j in range(crs.ell):
        if ((v1 ^ v2) >> j) & 1:
            crs_block = crs.block(j)
            if all((out ^ crs_block) not in image for out in image):
                return True
    return False
