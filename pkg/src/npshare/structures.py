"""Party sets, monotone access structures and their witness verifiers.

Four structure kinds ship:

* ``threshold`` - qualified iff at least ``t`` parties are present
  (payload: the threshold ``t``).
* ``monotone-circuit`` - qualified iff a monotone non-deterministic
  circuit accepts the membership vector for some setting of its free
  (non-deterministic) inputs; negations may only touch free inputs.
* ``hamiltonian`` - parties are the edge slots of the complete graph
  K_v (lexicographic (i, j), i < j); qualified iff the present edges
  contain a Hamiltonian cycle.  Witness: a permutation of all v
  vertices, the cycle closing from last to first.
* ``matching`` - same edge-slot parties; qualified iff the present
  edges contain a perfect matching.  Witness: the list of matched edges.

Witness verifiers are total (malformed witnesses return False, never
raise) and run in time polynomial in n.  Deciding the Hamiltonian and
matching predicates, by contrast, is exhaustive witness search and is
gated behind an explicit ``expensive`` flag.

All verifiers here are monotone in the party set: adding parties never
invalidates a witness.  The induced-language search relies on this.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from . import serde
from .rng import Stream

KINDS = ("threshold", "monotone-circuit", "hamiltonian", "matching")


@dataclass(frozen=True)
class PartySet:
    """A subset of the parties {1..n}."""

    n: int
    members: frozenset[int]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("party count must be non-negative")
        if not all(isinstance(i, int) and 1 <= i <= self.n for i in self.members):
            raise ValueError(f"members must lie in 1..{self.n}")

    @classmethod
    def of(cls, n: int, members) -> "PartySet":
        return cls(n, frozenset(members))

    @classmethod
    def full(cls, n: int) -> "PartySet":
        return cls(n, frozenset(range(1, n + 1)))

    @classmethod
    def empty(cls, n: int) -> "PartySet":
        return cls(n, frozenset())

    @classmethod
    def from_bits(cls, bits) -> "PartySet":
        return cls(len(bits), frozenset(i + 1 for i, b in enumerate(bits) if b))

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def char_bits(self) -> tuple[int, ...]:
        return tuple(1 if i in self.members else 0 for i in range(1, self.n + 1))

    def __contains__(self, party: int) -> bool:
        return party in self.members

    def __len__(self) -> int:
        return len(self.members)


# ---------------------------------------------------------------------------
# Edge-slot numbering for the graph structures: party p <-> the p-th pair
# (a, b), a < b, in lexicographic order over K_v.  1-based on both sides.

def n_edge_parties(v: int) -> int:
    return v * (v - 1) // 2


def edge_slots(v: int) -> tuple[tuple[int, int], ...]:
    return tuple((a, b) for a in range(1, v + 1) for b in range(a + 1, v + 1))


def edge_index(v: int, a: int, b: int) -> int:
    if a == b or not (1 <= a <= v and 1 <= b <= v):
        raise ValueError(f"bad edge ({a},{b}) for v={v}")
    if a > b:
        a, b = b, a
    # edges (1,*) come first, then (2,*), ...
    return (a - 1) * v - a * (a - 1) // 2 + (b - a)


def party_edge(v: int, party: int) -> tuple[int, int]:
    return edge_slots(v)[party - 1]


@dataclass(frozen=True)
class MonotoneCircuit:
    """Monotone non-deterministic circuit payload.

    Wires 0..n_std-1 are the standard (party) inputs, the next n_free
    wires are non-deterministic inputs, then one wire per gate.  Gates
    are ("and", a, b), ("or", a, b) or ("not", a); negations must not be
    reachable from a standard input.
    """

    n_std: int
    n_free: int
    gates: tuple[tuple, ...]
    output: int

    def __post_init__(self):
        n_in = self.n_std + self.n_free
        tainted = [True] * self.n_std + [False] * self.n_free
        for idx, gate in enumerate(self.gates):
            op = gate[0]
            refs = gate[1:]
            if op not in ("and", "or", "not") or len(refs) != (1 if op == "not" else 2):
                raise ValueError(f"bad gate {gate!r}")
            if any(not 0 <= r < n_in + idx for r in refs):
                raise ValueError(f"gate {idx} references an undefined wire")
            taint = any(tainted[r] for r in refs)
            if op == "not" and taint:
                raise ValueError("negation on a path from a standard input")
            tainted.append(taint)
        if not 0 <= self.output < n_in + len(self.gates):
            raise ValueError("output wire out of range")

    def eval(self, std_bits, free_bits) -> bool:
        if len(std_bits) != self.n_std or len(free_bits) != self.n_free:
            raise ValueError("input width mismatch")
        wires = [bool(b) for b in std_bits] + [bool(b) for b in free_bits]
        for gate in self.gates:
            if gate[0] == "and":
                wires.append(wires[gate[1]] and wires[gate[2]])
            elif gate[0] == "or":
                wires.append(wires[gate[1]] or wires[gate[2]])
            else:
                wires.append(not wires[gate[1]])
        return wires[self.output]

    def to_json(self) -> dict:
        return {
            "free": self.n_free,
            "gates": [list(g) for g in self.gates],
            "output": self.output,
        }

    @classmethod
    def from_json(cls, n_std: int, obj: dict) -> "MonotoneCircuit":
        return cls(
            n_std=n_std,
            n_free=int(obj["free"]),
            gates=tuple(tuple(g) for g in obj["gates"]),
            output=int(obj["output"]),
        )


@dataclass(frozen=True)
class AccessStructure:
    kind: str
    n: int
    payload: object

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown structure kind {self.kind!r}")
        if self.kind == "threshold":
            if not isinstance(self.payload, int) or not 1 <= self.payload <= self.n:
                raise ValueError("threshold payload must be an int in 1..n")
        elif self.kind in ("hamiltonian", "matching"):
            v = self.payload
            if not isinstance(v, int) or v < 3:
                raise ValueError("graph structures need v >= 3")
            if self.n != n_edge_parties(v):
                raise ValueError(f"n must equal v(v-1)/2 = {n_edge_parties(v)}")
        else:
            if not isinstance(self.payload, MonotoneCircuit) or self.payload.n_std != self.n:
                raise ValueError("circuit payload must match the party count")

    def to_json(self) -> dict:
        payload = self.payload.to_json() if self.kind == "monotone-circuit" else self.payload
        return {"kind": self.kind, "n": self.n, "payload": payload}

    @classmethod
    def from_json(cls, obj: dict) -> "AccessStructure":
        kind, n = obj["kind"], int(obj["n"])
        if kind == "monotone-circuit":
            return cls(kind, n, MonotoneCircuit.from_json(n, obj["payload"]))
        return cls(kind, n, int(obj["payload"]))

    def digest(self) -> str:
        return serde.digest_of(self.to_json())


def threshold_structure(n: int, t: int) -> AccessStructure:
    return AccessStructure("threshold", n, t)


def hamiltonian_structure(v: int) -> AccessStructure:
    return AccessStructure("hamiltonian", n_edge_parties(v), v)


def matching_structure(v: int) -> AccessStructure:
    return AccessStructure("matching", n_edge_parties(v), v)


def circuit_structure(circuit: MonotoneCircuit) -> AccessStructure:
    return AccessStructure("monotone-circuit", circuit.n_std, circuit)


# ---------------------------------------------------------------------------
# Witness verification (total, polynomial time).

def verify(structure: AccessStructure, X: PartySet, witness) -> bool:
    """1 iff ``witness`` attests that X is qualified; malformed -> False."""
    if X.n != structure.n:
        raise ValueError("party set is over a different n than the structure")
    kind = structure.kind
    if kind == "threshold":
        return len(X) >= structure.payload
    if kind == "monotone-circuit":
        payload: MonotoneCircuit = structure.payload
        try:
            free = tuple(int(b) & 1 for b in witness)
        except TypeError:
            return False
        if len(free) != payload.n_free:
            return False
        return payload.eval(X.char_bits(), free)
    if kind == "hamiltonian":
        v = structure.payload
        try:
            cycle = tuple(int(x) for x in witness)
        except (TypeError, ValueError):
            return False
        if len(cycle) != v or set(cycle) != set(range(1, v + 1)):
            return False
        for idx in range(v):
            a, b = cycle[idx], cycle[(idx + 1) % v]
            if edge_index(v, a, b) not in X:
                return False
        return True
    # matching
    v = structure.payload
    try:
        edges = [(int(a), int(b)) for a, b in witness]
    except (TypeError, ValueError):
        return False
    covered: set[int] = set()
    for a, b in edges:
        if not (1 <= a <= v and 1 <= b <= v) or a == b:
            return False
        if a in covered or b in covered:
            return False
        if edge_index(v, a, b) not in X:
            return False
        covered.update((a, b))
    return len(covered) == v


# ---------------------------------------------------------------------------
# Witness enumeration (exhaustive, used for deciding the NP kinds and by
# the induced-language search).

def _hamiltonian_cycles(v: int, present: frozenset[int]):
    # First vertex pinned to 1: every cycle has such a representative.
    for rest in permutations(range(2, v + 1)):
        cycle = (1,) + rest
        if all(edge_index(v, cycle[i], cycle[(i + 1) % v]) in present for i in range(v)):
            yield cycle


def _perfect_matchings(vertices: tuple[int, ...], v: int, present: frozenset[int]):
    if not vertices:
        yield ()
        return
    a = vertices[0]
    rest = vertices[1:]
    for idx, b in enumerate(rest):
        if edge_index(v, a, b) in present:
            for tail in _perfect_matchings(rest[:idx] + rest[idx + 1:], v, present):
                yield ((a, b),) + tail


def inner_witnesses(structure: AccessStructure, X: PartySet):
    """Yield witnesses w with verify(structure, X, w) = 1 (may be empty)."""
    kind = structure.kind
    if kind == "threshold":
        if len(X) >= structure.payload:
            yield None
        return
    if kind == "monotone-circuit":
        payload: MonotoneCircuit = structure.payload
        std = X.char_bits()
        for packed in range(1 << payload.n_free):
            free = tuple((packed >> i) & 1 for i in range(payload.n_free))
            if payload.eval(std, free):
                yield free
        return
    if kind == "hamiltonian":
        yield from _hamiltonian_cycles(structure.payload, X.members)
        return
    v = structure.payload
    if v % 2 == 0:
        yield from _perfect_matchings(tuple(range(1, v + 1)), v, X.members)


def witness_space_size(structure: AccessStructure) -> int:
    """Upper bound on the number of candidate witnesses enumerated."""
    kind = structure.kind
    if kind == "threshold":
        return 1
    if kind == "monotone-circuit":
        return 1 << structure.payload.n_free
    v = structure.payload
    if kind == "hamiltonian":
        out = 1
        for i in range(2, v):
            out *= i
        return out
    out = 1
    for i in range(v - 1, 0, -2):
        out *= i
    return out


def evaluate(structure: AccessStructure, X: PartySet, expensive: bool = False) -> bool:
    """Decide M(X).

    Threshold and deterministic monotone circuits are decided directly.
    The NP kinds (and circuits with free inputs) are decided by
    exhaustive witness search, which callers must opt into via
    ``expensive=True``; refused above n = 15 (v = 6).
    """
    if X.n != structure.n:
        raise ValueError("party set is over a different n than the structure")
    kind = structure.kind
    if kind == "threshold":
        return len(X) >= structure.payload
    if kind == "monotone-circuit" and structure.payload.n_free == 0:
        return structure.payload.eval(X.char_bits(), ())
    if not expensive:
        raise ValueError(f"deciding a {kind} structure is exhaustive; pass expensive=True")
    if structure.n > 15:
        raise ValueError("exhaustive decision limited to n <= 15")
    if kind == "monotone-circuit" and structure.payload.n_free > 20:
        raise ValueError("too many free inputs for exhaustive decision")
    for _ in inner_witnesses(structure, X):
        return True
    return False


def _decide(structure: AccessStructure, members: frozenset[int]) -> bool:
    return evaluate(structure, PartySet(structure.n, members), expensive=True)


def check_monotone_fn(n: int, predicate, mode: str = "exhaustive",
                      trials: int = 1000, rng_seed: int = 0) -> bool:
    """True iff no violating pair X <= Y with M(X)=1, M(Y)=0 is found.

    ``predicate`` maps a frozenset of parties to a bool.  Exhaustive mode
    checks all single-element extensions, which suffices by induction.
    """
    if mode == "exhaustive":
        if n > 12:
            raise ValueError("exhaustive monotonicity check limited to n <= 12")
        table = {}
        for packed in range(1 << n):
            members = frozenset(i + 1 for i in range(n) if (packed >> i) & 1)
            table[packed] = predicate(members)
        for packed in range(1 << n):
            if not table[packed]:
                continue
            for i in range(n):
                if not (packed >> i) & 1 and not table[packed | (1 << i)]:
                    return False
        return True
    if mode != "sampled":
        raise ValueError("mode must be 'exhaustive' or 'sampled'")
    rng = Stream(rng_seed)
    for _ in range(trials):
        x_packed = rng.bits(n)
        y_packed = x_packed | rng.bits(n)
        x = frozenset(i + 1 for i in range(n) if (x_packed >> i) & 1)
        y = frozenset(i + 1 for i in range(n) if (y_packed >> i) & 1)
        if predicate(x) and not predicate(y):
            return False
    return True


def check_monotone(structure: AccessStructure, mode: str = "exhaustive",
                   trials: int = 1000, rng_seed: int = 0) -> bool:
    return check_monotone_fn(
        structure.n, lambda members: _decide(structure, members), mode, trials, rng_seed
    )
