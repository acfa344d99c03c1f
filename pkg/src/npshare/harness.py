"""Executable security experiments for the scheme.

This module turns the two security definitions (indistinguishability and
unlearnability of the secret) and the whole reduction into runnable,
seeded Monte-Carlo procedures:

* :func:`dver` - one distinguishing trial: flip b, rebuild commitments
  for the parties of X, keep the input commitments elsewhere, re-encrypt
  secret b, and score whether D recovers b.
* :func:`mest` - the Chernoff-style bias estimator: ceil(4n/eps)
  iterations, each running dver once on fresh commitments to 1..n and
  once on fresh commitments to n+1..2n; answers 1 iff |q0 - q1| > n
  (strictly).
* :func:`dprime` - the outer distinguisher: up to ceil(n/eps) rounds of
  (sample, mest), answering with dver's verdict on the first round where
  mest fires, and 0 otherwise.
* :func:`bias_estimate` - the bias functional dver maximizes, estimated
  directly.
* :func:`hybrid_locate` - the hybrid-argument lemma as an index locator
  over an abstract per-position sample source.
* :func:`sem_to_ind` / :func:`ind_to_sem` - the definition-equivalence
  transformations, as executable adversary rewrites.

Samplers and distinguishers are plain callables:

* ind-sampler: ``rng -> (s0, s1, X, sigma)`` with |s0| = |s1|;
* sem-sampler: ``rng -> (s, X, sigma)``;
* distinguisher: ``(s0, s1, shares, sigma, rng) -> bit``;
* learner: ``(shares, sigma, rng) -> value``;
* simulator: ``(X, sigma, rng) -> value``.

Everything is a deterministic function of a 64-bit master seed; trial t
runs on ``Stream(derive_seed(master_seed, t))``, so reports reproduce
byte-identically and trials are order-independent.  The M(X)=0 side
conditions in the game definitions are decided by exhaustive search
(and cached), which the games must do even though D' itself never does
- that is the entire point of mest.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import serde
from .commitments import CRS, Commitment, commit, crs_gen, find_opening, sample_opening
from .induced import MPrimeInstance
from .rng import Stream, derive_seed
from .scheme import Dealing, Share, ShareHeader, relation_for, setup, shares_of
from .structures import AccessStructure, PartySet, evaluate
from .we import leak_message, we_encrypt


def hoeffding_radius(trials: int, delta: float) -> float:
    return math.sqrt(math.log(2.0 / delta) / (2.0 * trials))


_qualified_cache: dict = {}


def qualified(structure: AccessStructure, X: PartySet) -> bool:
    """Ground-truth M(X), decided exhaustively and cached."""
    key = (structure, X.members)
    hit = _qualified_cache.get(key)
    if hit is None:
        hit = evaluate(structure, X, expensive=True)
        _qualified_cache[key] = hit
    return hit


@dataclass
class SchemeContext:
    """A scheme pinned to one CRS, as the commitment games require."""

    structure: AccessStructure
    crs: CRS
    lam: int = 16
    backend: str = "idealized"

    def __post_init__(self):
        if self.crs.n != self.structure.n:
            raise ValueError("CRS and structure disagree on n")
        self._header = ShareHeader(
            n=self.structure.n, structure_digest=self.structure.digest(), crs=self.crs
        )

    @classmethod
    def create(cls, structure: AccessStructure, seed: int, *, k: int = 8,
               backend: str = "idealized", lam: int = 16,
               expansion: str | None = None) -> "SchemeContext":
        if expansion is None:
            expansion = "toy" if backend == "cnf" else "splitmix64"
        crs = crs_gen(structure.n, k, Stream(derive_seed(seed, 0xC125)), expansion=expansion)
        return cls(structure=structure, crs=crs, lam=lam, backend=backend)

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def header(self) -> ShareHeader:
        return self._header

    def deal(self, secret: bytes, rng: Stream) -> Dealing:
        return setup(
            self.structure, secret, rng,
            lam=self.lam, backend=self.backend, crs=self.crs,
        )

    def fresh_commitment(self, value: int, rng: Stream) -> Commitment:
        return commit(value, sample_opening(self.crs, rng), self.crs)

    def commitment_list(self, values, rng: Stream) -> tuple[Commitment, ...]:
        return tuple(self.fresh_commitment(v, rng) for v in values)

    def a0_commitments(self, rng: Stream) -> tuple[Commitment, ...]:
        return self.commitment_list(range(1, self.n + 1), rng)

    def a1_commitments(self, rng: Stream) -> tuple[Commitment, ...]:
        return self.commitment_list(range(self.n + 1, 2 * self.n + 1), rng)

    def encrypt(self, inst: MPrimeInstance, secret: bytes, rng: Stream):
        return we_encrypt(self.backend, self.lam, relation_for(inst, self.backend), secret, rng)


def build_substituted_shares(commitments, X: PartySet, secret: bytes,
                             scheme: SchemeContext, rng: Stream):
    """The share-construction inside dver.

    Samples openings for all n parties, commits party i afresh when
    p_i is in X, keeps the input commitment otherwise, encrypts
    ``secret`` against the substituted instance, and returns
    (instance, all openings, shares of X).  Draw order is pinned:
    openings for parties 1..n, then the encryption randomness.
    """
    n = scheme.n
    commitments = tuple(commitments)
    if len(commitments) != n:
        raise ValueError(f"expected {n} input commitments")
    openings = [sample_opening(scheme.crs, rng) for _ in range(n)]
    coms = tuple(
        commit(i, openings[i - 1], scheme.crs) if i in X else commitments[i - 1]
        for i in range(1, n + 1)
    )
    inst = MPrimeInstance(crs=scheme.crs, commitments=coms, structure=scheme.structure)
    ct = scheme.encrypt(inst, secret, rng)
    shares_x = tuple(
        Share(party=i, opening=openings[i - 1], ciphertext=ct, header=scheme.header)
        for i in X.sorted()
    )
    return inst, openings, shares_x


def dver(commitments, s0: bytes, s1: bytes, X: PartySet, scheme: SchemeContext,
         D, rng: Stream, sigma: bytes = b"") -> int:
    """One distinguishing trial; 1 iff D recovers the encrypted index b."""
    b = rng.bit()
    _, _, shares_x = build_substituted_shares(
        commitments, X, s1 if b else s0, scheme, rng
    )
    return 1 if D(s0, s1, shares_x, sigma, rng) == b else 0


def mest(s0: bytes, s1: bytes, X: PartySet, eps: float, n: int,
         scheme: SchemeContext, D, rng: Stream, sigma: bytes = b"") -> int:
    """Bias estimator: 1 iff |q0 - q1| > n strictly after ceil(4n/eps) rounds."""
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    if n != scheme.n:
        raise ValueError("n disagrees with the scheme context")
    iterations = math.ceil(4 * n / eps)
    q0 = q1 = 0
    for _ in range(iterations):
        q0 += dver(scheme.a0_commitments(rng), s0, s1, X, scheme, D, rng, sigma)
        q1 += dver(scheme.a1_commitments(rng), s0, s1, X, scheme, D, rng, sigma)
    return 1 if abs(q0 - q1) > n else 0


def mest_iterations(eps: float, n: int) -> int:
    return math.ceil(4 * n / eps)


def dprime(commitments, eps: float, n: int, sampler, D,
           scheme: SchemeContext, rng: Stream) -> int:
    """The outer commitment-list distinguisher of the reduction."""
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    if n != scheme.n:
        raise ValueError("n disagrees with the scheme context")
    for _ in range(math.ceil(n / eps)):
        s0, s1, X, sigma = sampler(rng)
        if mest(s0, s1, X, eps, n, scheme, D, rng, sigma) == 1:
            return dver(commitments, s0, s1, X, scheme, D, rng, sigma)
    return 0


@dataclass
class BiasEstimate:
    value: float
    radius: float
    trials: int
    count0: int
    count1: int
    delta: float
    master_seed: int

    def to_json(self) -> dict:
        return {
            "value": self.value, "radius": self.radius, "trials": self.trials,
            "count0": self.count0, "count1": self.count1,
            "delta": self.delta, "master_seed": self.master_seed,
        }


def bias_estimate(s0: bytes, s1: bytes, X: PartySet, scheme: SchemeContext, D,
                  trials: int, master_seed: int, delta: float = 0.01,
                  sigma: bytes = b"") -> BiasEstimate:
    """Monte-Carlo estimate of dver's advantage for recognizing Z = A0."""
    if trials < 100:
        raise ValueError("bias estimation needs at least 100 trials")
    count0 = count1 = 0
    for t in range(trials):
        rng = Stream(derive_seed(master_seed, t))
        count0 += dver(scheme.a0_commitments(rng), s0, s1, X, scheme, D, rng, sigma)
        count1 += dver(scheme.a1_commitments(rng), s0, s1, X, scheme, D, rng, sigma)
    return BiasEstimate(
        value=abs(count0 - count1) / trials,
        radius=hoeffding_radius(trials, delta),
        trials=trials, count0=count0, count1=count1,
        delta=delta, master_seed=master_seed,
    )


@dataclass
class GameReport:
    """Empirical advantage estimate with its Hoeffding confidence radius."""

    game: str
    trials: int
    count0: int
    count1: int
    advantage: float
    radius: float
    delta: float
    master_seed: int
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "game": self.game, "trials": self.trials,
            "count0": self.count0, "count1": self.count1,
            "advantage": self.advantage, "radius": self.radius,
            "delta": self.delta, "master_seed": self.master_seed,
            "extra": self.extra,
        }


def _report(game: str, trials: int, count0: int, count1: int, delta: float,
            master_seed: int, extra: dict) -> GameReport:
    return GameReport(
        game=game, trials=trials, count0=count0, count1=count1,
        advantage=abs(count0 - count1) / trials,
        radius=hoeffding_radius(trials, delta),
        delta=delta, master_seed=master_seed, extra=extra,
    )


def ind_game(scheme: SchemeContext, sampler, D, trials: int, master_seed: int,
             delta: float = 0.01) -> GameReport:
    """Indistinguishability game: the gap between D's acceptance of
    shares(s0, X) and shares(s1, X), conjoined with M(X) = 0.

    Paired design: each trial draws the sampler once and runs D on both
    dealings.  The report also carries the estimate conditioned on
    M(X) = 0 in ``extra`` (the definition's quantity is the
    unconditioned conjunction).
    """
    if trials < 100:
        raise ValueError("games need at least 100 trials")
    qualified(scheme.structure, PartySet.empty(scheme.n))  # refuse infeasible decisions early
    count0 = count1 = mx0 = 0
    for t in range(trials):
        rng = Stream(derive_seed(master_seed, t))
        s0, s1, X, sigma = sampler(rng)
        if len(s0) != len(s1):
            raise ValueError("sampler must emit equal-length secrets")
        unqualified = not qualified(scheme.structure, X)
        mx0 += unqualified
        dealing0 = scheme.deal(s0, rng)
        if D(s0, s1, shares_of(dealing0, X), sigma, rng) == 1 and unqualified:
            count0 += 1
        dealing1 = scheme.deal(s1, rng)
        if D(s0, s1, shares_of(dealing1, X), sigma, rng) == 1 and unqualified:
            count1 += 1
    extra = {
        "mx0_trials": mx0,
        "advantage_conditioned": (abs(count0 - count1) / mx0) if mx0 else 0.0,
    }
    return _report("ind", trials, count0, count1, delta, master_seed, extra)


def sem_game(scheme: SchemeContext, sampler, learner, simulator, f, trials: int,
             master_seed: int, delta: float = 0.01) -> GameReport:
    """Unlearnability game: how much better the learner predicts f(S)
    from the shares of X than the simulator does from X alone."""
    if trials < 100:
        raise ValueError("games need at least 100 trials")
    qualified(scheme.structure, PartySet.empty(scheme.n))
    count0 = count1 = mx0 = 0
    for t in range(trials):
        rng = Stream(derive_seed(master_seed, t))
        s, X, sigma = sampler(rng)
        unqualified = not qualified(scheme.structure, X)
        mx0 += unqualified
        target = f(s)
        dealing = scheme.deal(s, rng)
        if learner(shares_of(dealing, X), sigma, rng) == target and unqualified:
            count0 += 1
        if simulator(X, sigma, rng) == target and unqualified:
            count1 += 1
    extra = {
        "mx0_trials": mx0,
        "advantage_conditioned": (abs(count0 - count1) / mx0) if mx0 else 0.0,
    }
    return _report("sem", trials, count0, count1, delta, master_seed, extra)


# ---------------------------------------------------------------------------
# Hybrid-argument locator (the list-to-pair lemma, executable form).


def hybrid_values(n: int, i: int) -> tuple[int, ...]:
    """Values of the i-th hybrid: (1..n-i, 2n-i+1..2n)."""
    if not 0 <= i <= n:
        raise ValueError("hybrid index out of range")
    return tuple(p if p <= n - i else n + p for p in range(1, n + 1))


@dataclass
class HybridLocation:
    index: int                      # i in 1..n with maximal adjacent gap
    gap: float                      # |p[i-1] - p[i]| at that index
    value_x: int                    # the pair the wrapped distinguisher separates
    value_y: int
    probs: tuple[float, ...]        # acceptance estimate per hybrid 0..n
    signed_gaps: tuple[float, ...]  # p[i-1] - p[i] for i = 1..n
    radius: float
    trials: int
    master_seed: int
    distinguisher: object = field(repr=False)

    def to_json(self) -> dict:
        return {
            "index": self.index, "gap": self.gap,
            "value_x": self.value_x, "value_y": self.value_y,
            "probs": list(self.probs), "signed_gaps": list(self.signed_gaps),
            "radius": self.radius, "trials": self.trials,
            "master_seed": self.master_seed,
        }


def hybrid_locate(list_D, n: int, eps: float, trials: int, master_seed: int,
                  sample_source, delta: float = 0.01) -> HybridLocation:
    """Locate the adjacent hybrid with maximal estimated gap.

    ``sample_source(value, rng)`` yields one sample for any value in
    1..2n; ``list_D(samples, rng)`` judges an n-sample list.  The
    returned pairwise distinguisher embeds its single input sample at
    the differing position of the located hybrid pair and draws the
    rest from the source, separating values n-i+1 and 2n-i+1.  Signed
    gaps telescope exactly to probs[0] - probs[n].
    """
    probs = []
    for i in range(n + 1):
        values = hybrid_values(n, i)
        hits = 0
        for t in range(trials):
            rng = Stream(derive_seed(master_seed, i * trials + t))
            samples = [sample_source(v, rng) for v in values]
            hits += 1 if list_D(samples, rng) == 1 else 0
        probs.append(hits / trials)
    signed = tuple(probs[i - 1] - probs[i] for i in range(1, n + 1))
    best = max(range(1, n + 1), key=lambda i: abs(signed[i - 1]))
    value_x, value_y = n - best + 1, 2 * n - best + 1

    def pairwise(sample, rng: Stream) -> int:
        samples = []
        for p in range(1, n + 1):
            if p < n - best + 1:
                samples.append(sample_source(p, rng))
            elif p == n - best + 1:
                samples.append(sample)
            else:
                samples.append(sample_source(n + p, rng))
        return 1 if list_D(samples, rng) == 1 else 0

    return HybridLocation(
        index=best, gap=abs(signed[best - 1]), value_x=value_x, value_y=value_y,
        probs=tuple(probs), signed_gaps=signed,
        radius=hoeffding_radius(trials, delta), trials=trials,
        master_seed=master_seed, distinguisher=pairwise,
    )


# ---------------------------------------------------------------------------
# Definition-equivalence transformations (the two appendix directions).


def sem_to_ind(sampler, learner, f):
    """Rewrite an unlearnability adversary as an indistinguishability one.

    The new sampler pairs the sampled secret with the all-zero secret of
    the same length; the new distinguisher answers 1 exactly when the
    learner's output equals f applied to the *second* secret.
    """

    def sampler2(rng: Stream):
        s, X, sigma = sampler(rng)
        return bytes(len(s)), s, X, sigma

    def D2(s0, s1, shares, sigma, rng: Stream) -> int:
        return 1 if learner(shares, sigma, rng) == f(s1) else 0

    return sampler2, D2


def dictator(i: int, t: int):
    """f_i: bit i (least significant = 0) of the t-bit value of the secret."""
    if not 0 <= i < t:
        raise ValueError("dictator index out of range")

    def f(secret: bytes) -> int:
        return (int.from_bytes(secret, "big") >> i) & 1

    return f


def dictator_diff(s0: bytes, s1: bytes, t: int) -> tuple[int, ...]:
    """Indices of the dictator functions that separate s0 from s1."""
    x = int.from_bytes(s0, "big") ^ int.from_bytes(s1, "big")
    return tuple(i for i in range(t) if (x >> i) & 1)


@dataclass
class IndToSem:
    """The unlearnability adversary induced by an ind adversary.

    ``sampler`` draws (s0, s1, X, sigma) from the original sampler,
    flips a uniform bit b and emits (s_b, X, sigma') where sigma'
    carries both secrets.  ``learner(f)`` emulates the original
    distinguisher and outputs f of the secret it points at.  The
    baseline simulator guesses a coin: its success on any separating
    dictator function is exactly 1/2, since b is uniform and
    independent of (X, sigma').  ``dictators`` is empty (reported
    explicitly, not an error) when the sampler emits equal secrets.
    """

    sampler: object
    _learner_factory: object = field(repr=False)
    simulator: object = field(repr=False)
    secret_bits: int = 0
    dictators: tuple[int, ...] = ()

    def learner(self, f):
        return self._learner_factory(f)


def ind_to_sem(sampler, D, t: int, probe_seed: int = 0) -> IndToSem:
    def sampler2(rng: Stream):
        s0, s1, X, sigma = sampler(rng)
        b = rng.bit()
        sigma2 = serde.canonical_json_bytes(
            {"s0": s0.hex(), "s1": s1.hex(), "sigma": sigma.hex()}
        )
        return (s1 if b else s0), X, sigma2

    def learner_factory(f):
        def learner(shares, sigma2, rng: Stream):
            obj = json.loads(sigma2)
            s0, s1 = bytes.fromhex(obj["s0"]), bytes.fromhex(obj["s1"])
            sigma = bytes.fromhex(obj["sigma"])
            d = D(s0, s1, shares, sigma, rng)
            return f(s1 if d == 1 else s0)

        return learner

    def simulator(X, sigma2, rng: Stream):
        return rng.bit()

    s0, s1, _, _ = sampler(Stream(derive_seed(probe_seed, 0xD1FF)))
    return IndToSem(
        sampler=sampler2,
        _learner_factory=learner_factory,
        simulator=simulator,
        secret_bits=t,
        dictators=dictator_diff(s0, s1, t),
    )


# ---------------------------------------------------------------------------
# Stock samplers and distinguishers.


def fixed_sampler(s0: bytes, s1: bytes, X: PartySet, sigma: bytes = b""):
    def sampler(rng: Stream):
        return s0, s1, X, sigma

    return sampler


def mixed_sampler(structure: AccessStructure, p_unqualified: float, secret_len: int):
    """Distinct random secrets; X is a random singleton (unqualified) with
    probability ~p_unqualified, the full party set otherwise.

    Requires every singleton to be unqualified and the full set to be
    qualified, which holds for all shipped structures of interest.
    """
    n = structure.n
    if not qualified(structure, PartySet.full(n)):
        raise ValueError("full party set must be qualified")
    for i in range(1, n + 1):
        if qualified(structure, PartySet.of(n, {i})):
            raise ValueError("singletons must be unqualified for this sampler")
    threshold = int(p_unqualified * (1 << 53))

    def sampler(rng: Stream):
        s0 = rng.bytes(secret_len)
        while True:
            s1 = rng.bytes(secret_len)
            if s1 != s0:
                break
        if rng.bits(53) < threshold:
            X = PartySet.of(n, {1 + rng.randrange(n)})
        else:
            X = PartySet.full(n)
        return s0, s1, X, b""

    return sampler


def constant_distinguisher(bit: int):
    def D(s0, s1, shares, sigma, rng):
        return bit

    return D


def shape_distinguisher():
    """Parses only byte lengths of the serialized shares (honest no-op)."""

    def D(s0, s1, shares, sigma, rng):
        total = sum(len(serde.canonical_json_bytes(s.to_json())) for s in shares)
        return total & 1

    return D


def leak_reader():
    """Reads the leaky backend's plaintext; 1 iff it equals s1, 0 otherwise."""

    def D(s0, s1, shares, sigma, rng):
        if not shares:
            return 0
        leaked = leak_message(shares[0].ciphertext)
        if leaked is None:
            return 0
        return 1 if leaked == s1 else 0

    return D


def instance_of_ciphertext(ct) -> MPrimeInstance:
    """Recover the public instance embedded in a ciphertext payload."""
    obj = json.loads(ct.payload)
    return MPrimeInstance.from_json(obj["relation"]["instance"])


def planted_bias_distinguisher(beta: float, probe_party: int, crs: CRS | None = None):
    """A distinguisher with dver-bias exactly ``beta`` (leaky backend).

    Intended for a *qualified* X (both mest branches then leak, so b is
    known on every call) with ``probe_party`` outside X.  The branch is
    identified by exhaustively testing whether the probe commitment
    opens to its own index (Z = A0) or not (Z = A1); the answer is
    exact on A0 and flipped with probability beta on A1, which plants
    Pr[dver=1 | A0] = 1 and Pr[dver=1 | A1] = 1 - beta.

    The one-sided (correlated) plant matters: at desk scale the paper's
    |q0 - q1| > n test sits within one standard deviation of an
    independent-coin plant's noise, so only plants whose A0 branch is
    deterministic calibrate cleanly.  Passing the scheme's ``crs``
    avoids re-parsing the embedded instance on every call.
    """
    threshold = int(beta * (1 << 53))

    def D(s0, s1, shares, sigma, rng):
        if not shares:
            return 0
        ct = shares[0].ciphertext
        leaked = leak_message(ct)
        if leaked is None:
            return 0
        b = 1 if leaked == s1 else 0
        if crs is not None:
            obj = json.loads(ct.payload)
            com_hex = obj["relation"]["instance"]["commitments"][probe_party - 1]
            probe_com = Commitment.from_json(com_hex, crs)
            probe_crs = crs
        else:
            inst = instance_of_ciphertext(ct)
            probe_com = inst.commitments[probe_party - 1]
            probe_crs = inst.crs
        a0_branch = find_opening(probe_party, probe_com, probe_crs) is not None
        if a0_branch:
            return b
        return b ^ 1 if rng.bits(53) < threshold else b

    return D


def leak_learner():
    """Sem-game learner: outputs the leaked secret, or zeros of the right length."""

    def learner(shares, sigma, rng):
        if not shares:
            return b""
        ct = shares[0].ciphertext
        leaked = leak_message(ct)
        return leaked if leaked is not None else bytes(ct.msg_len)

    return learner


def guess_simulator(msg_len: int):
    def simulator(X, sigma, rng):
        return rng.bytes(msg_len)

    return simulator


def transparent_sample_source(value: int, rng: Stream) -> int:
    """Mock per-position source: the sample is the value itself."""
    return value


def commitment_sample_source(scheme: SchemeContext):
    def source(value: int, rng: Stream) -> Commitment:
        return scheme.fresh_commitment(value, rng)

    return source


def position_detector(j: int, gap: float, n: int):
    """List distinguisher that looks at position j only (for the mock
    source): accepts with probability 1/2 + gap/2 while the position
    still carries a low value, 1/2 - gap/2 after the hybrid swaps it."""
    hi = int((0.5 + gap / 2) * (1 << 53))
    lo = int((0.5 - gap / 2) * (1 << 53))

    def list_D(samples, rng: Stream) -> int:
        p = hi if samples[j - 1] <= n else lo
        return 1 if rng.bits(53) < p else 0

    return list_D
