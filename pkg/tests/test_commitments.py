"""Commitment layer: golden vectors, sizes, binding, hiding smoke test."""

import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chi2

from npshare.commitments import (
    CRS,
    Commitment,
    Opening,
    commit,
    crs_gen,
    find_opening,
    opening_from_json,
    opening_to_json,
    prg_splitmix64,
    prg_toy,
    sample_opening,
    supports_disjoint,
    verify_opening,
)
from npshare.rng import Stream

M64 = (1 << 64) - 1


def reference_splitmix64_stream(seed, nwords):
    """Independent oracle, written straight from the published constants."""
    out = []
    state = seed & M64
    for _ in range(nwords):
        state = (state + 0x9E3779B97F4A7C15) & M64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
        z ^= z >> 31
        out.append(z)
    return out


def reference_prg(seed, k):
    words = reference_splitmix64_stream(seed, (3 * k + 63) // 64)
    value = 0
    for t, w in enumerate(words):
        value |= w << (64 * t)
    return value & ((1 << (3 * k)) - 1)


# Golden vectors, frozen from the reference implementation above.
GOLDEN_PRG = {(0, 8): 0x1DCDAF, (1, 8): 0x025CC1, (255, 8): 0x283FB4}
GOLDEN_CRS_HEX = "fad05890fa1682ca790487ce"
GOLDEN_COMMIT3_HEX = "551d453f370bafcd1dafcd1d"
GOLDEN_TOY = {(0, 8): 0x5EBD77, (1, 8): 0x25A69B, (63, 6): 0x329A4}


def test_prg_matches_reference_oracle():
    for (seed, k), expected in GOLDEN_PRG.items():
        assert prg_splitmix64(seed, k) == expected
        assert reference_prg(seed, k) == expected
    for seed in range(0, 256, 17):
        assert prg_splitmix64(seed, 8) == reference_prg(seed, 8)
        assert prg_splitmix64(seed, 21) == reference_prg(seed, 21)


def test_toy_prg_golden():
    for (seed, k), expected in GOLDEN_TOY.items():
        assert prg_toy(seed, k) == expected


def test_crs_sizes():
    assert crs_gen(4, 8, Stream(0)).total_bits == 96
    assert crs_gen(1, 8, Stream(0)).total_bits == 48
    assert crs_gen(4, 8, Stream(0)).ell == 4
    assert crs_gen(1, 8, Stream(0)).ell == 2


def test_crs_deterministic_under_seed():
    assert crs_gen(5, 8, Stream(123)).bits == crs_gen(5, 8, Stream(123)).bits
    assert crs_gen(5, 8, Stream(123)).bits != crs_gen(5, 8, Stream(124)).bits


def test_golden_commitment_vector():
    crs = crs_gen(4, 8, Stream(0xC0FFEE))
    assert crs.to_json()["bits"] == GOLDEN_CRS_HEX
    com = commit(3, Opening((0, 0, 0, 0)), crs)
    assert com.to_json(crs) == GOLDEN_COMMIT3_HEX
    # re-derive from the independent oracle
    words = reference_splitmix64_stream(0xC0FFEE, 2)
    crs_bits = (words[0] | (words[1] << 64)) & ((1 << 96) - 1)
    expected = 0
    for j in range(4):
        block = reference_prg(0, 8)
        if (3 >> j) & 1:
            block ^= (crs_bits >> (24 * j)) & 0xFFFFFF
        expected |= block << (24 * j)
    assert com.bits == expected


def test_bit_rules():
    crs = crs_gen(4, 8, Stream(5))
    op = sample_opening(crs, Stream(6))
    com = commit(4, op, crs)  # 4 = 0b100: bits j=0,1 zero, j=2 one
    for j in range(crs.ell):
        block = com.block(j, crs)
        if (4 >> j) & 1:
            assert block ^ crs.block(j) == crs.prg(op.seeds[j])
        else:
            assert block == crs.prg(op.seeds[j])


def test_commit_errors():
    crs = crs_gen(4, 8, Stream(1))
    op = sample_opening(crs, Stream(2))
    with pytest.raises(ValueError):
        commit(0, op, crs)
    with pytest.raises(ValueError):
        commit(9, op, crs)
    with pytest.raises(ValueError):
        commit(1, Opening(op.seeds[:-1]), crs)


def test_verify_opening_round_trip_and_bottom():
    crs = crs_gen(4, 8, Stream(7))
    op = sample_opening(crs, Stream(8))
    com = commit(2, op, crs)
    assert verify_opening(2, op, crs, com)
    assert not verify_opening(2, None, crs, com)
    assert not verify_opening(9, op, crs, com)  # out-of-range is False, not an error


def test_cross_value_opening_rejected_for_binding_crs():
    # If the supports of 2 and 5 are disjoint, *no* opening can cross over.
    crs = crs_gen(4, 8, Stream(99))
    assert supports_disjoint(crs, 2, 5)
    op = sample_opening(crs, Stream(100))
    com = commit(2, op, crs)
    assert find_opening(5, com, crs) is None
    assert not verify_opening(5, op, crs, com)


def test_supports_disjoint_same_value_false():
    crs = crs_gen(4, 8, Stream(3))
    assert supports_disjoint(crs, 3, 3) is False


def test_supports_disjoint_zero_crs_false():
    crs = CRS(n=4, k=8, bits=0)
    assert supports_disjoint(crs, 1, 2) is False


def test_supports_disjoint_refuses_large_k():
    crs = crs_gen(2, 16, Stream(0))
    with pytest.raises(ValueError):
        supports_disjoint(crs, 1, 2)


def test_supports_disjoint_mostly_holds_over_random_crs():
    hits = sum(
        supports_disjoint(crs_gen(4, 8, Stream(1000 + i)), 1, 2) for i in range(100)
    )
    assert hits >= 99


def test_supports_disjoint_against_pair_enumeration():
    # Independent oracle at k=4: commitments to v1 and v2 can collide iff
    # *every* differing block admits a colliding seed pair.
    for draw in range(12):
        crs = crs_gen(2, 4, Stream(4000 + draw))
        outs = [crs.prg(s) for s in range(16)]
        for v1 in range(1, 5):
            for v2 in range(v1 + 1, 5):
                collidable = True
                for j in range(crs.ell):
                    if ((v1 ^ v2) >> j) & 1:
                        blk = crs.block(j)
                        if not any(a ^ blk == b for a in outs for b in outs):
                            collidable = False
                assert supports_disjoint(crs, v1, v2) == (not collidable)


def test_find_opening_inverts_commit():
    crs = crs_gen(3, 8, Stream(11))
    for value in (1, 4, 6):
        op = sample_opening(crs, Stream(50 + value))
        com = commit(value, op, crs)
        recovered = find_opening(value, com, crs)
        assert recovered is not None
        assert commit(value, recovered, crs) == com


def test_opening_serialization_round_trip():
    crs = crs_gen(4, 8, Stream(21))
    op = sample_opening(crs, Stream(22))
    assert opening_from_json(opening_to_json(op, crs), crs) == op
    assert opening_to_json(None, crs) is None  # tagged-absent, not a bit pattern
    assert opening_from_json(None, crs) is None


def test_crs_json_round_trip():
    crs = crs_gen(6, 8, Stream(31), expansion="toy")
    assert CRS.from_json(crs.to_json()) == crs
    com = commit(5, sample_opening(crs, Stream(32)), crs)
    assert Commitment.from_json(com.to_json(crs), crs) == com


@settings(max_examples=50, deadline=None)
@given(value=st.integers(min_value=1, max_value=8), seed=st.integers(min_value=0, max_value=2**32))
def test_commit_verify_property(value, seed):
    crs = crs_gen(4, 8, Stream(0xABCDEF))
    op = sample_opening(crs, Stream(seed))
    assert verify_opening(value, op, crs, commit(value, op, crs))


def two_sample_chi2(counts_a, counts_b):
    stat = 0.0
    bins = 0
    for a, b in zip(counts_a, counts_b):
        if a + b:
            stat += (a - b) ** 2 / (a + b)
            bins += 1
    return stat, bins - 1


def _hiding_chi2_stat(k, samples=10_000):
    crs = crs_gen(4, k, Stream(0x11DE))
    counts = [[0] * 256, [0] * 256]
    rng = Stream(0x5EED)
    for idx, value in enumerate((1, 2)):
        for _ in range(samples):
            com = commit(value, sample_opening(crs, rng), crs)
            counts[idx][com.block(0, crs) & 0xFF] += 1
    return two_sample_chi2(counts[0], counts[1])


def test_hiding_chi2_smoke():
    # First block of commit(1, .) vs commit(2, .): the marginals should be
    # statistically indistinguishable for the pinned PRG.  Not a security
    # proof; a sanity check at significance 0.001.  Meaningful only when
    # the seed space dwarfs the sample count, hence k=24 here.
    stat, dof = _hiding_chi2_stat(24)
    assert stat < chi2.ppf(1 - 0.001, dof)


def test_hiding_fails_at_tiny_seed_space():
    # The flip side of statistical binding: with only 2^8 seeds the two
    # block distributions are sparse permuted histograms and the same
    # test rightly rejects.  Documented, expected behavior at k=8.
    stat, dof = _hiding_chi2_stat(8)
    assert stat > chi2.ppf(1 - 0.001, dof)
