"""The witness-gated secret-sharing scheme.

SETUP samples one opening per party, commits party i to the value i,
witness-encrypts the secret relative to the commitment vector, and hands
party i the pair (opening_i, ciphertext).  RECON rebuilds the
induced-language witness from the openings of a subset X (absent
elsewhere) plus an inner witness that X is qualified, and decrypts.

The commitment vector (the public instance) is emitted alongside the
shares rather than inside each share; every share carries a header with
the CRS and a structure digest so mixed dealings are detectable.
"""

from __future__ import annotations

from dataclasses import dataclass
import json

from . import serde
from .commitments import CRS, Opening, commit, crs_gen, sample_opening
from .induced import MPrimeInstance, MPrimeRelation, assemble_witness
from .rng import Stream
from .structures import AccessStructure, PartySet
from .we import WECiphertext, we_decrypt, we_encrypt

SHARE_FORMAT = "npshare.share/1"
DEALING_FORMAT = "npshare.dealing/1"


class MixedDealingError(ValueError):
    """Shares from different dealings were mixed (header mismatch)."""


class MissingShareError(ValueError):
    """A member of X has no share in the provided subset."""


@dataclass(frozen=True)
class ShareHeader:
    n: int
    structure_digest: str
    crs: CRS

    def to_json(self) -> dict:
        return {"n": self.n, "structure_digest": self.structure_digest, "crs": self.crs.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "ShareHeader":
        return cls(int(obj["n"]), obj["structure_digest"], CRS.from_json(obj["crs"]))


@dataclass(frozen=True)
class Share:
    party: int
    opening: Opening
    ciphertext: WECiphertext
    header: ShareHeader

    def to_json(self) -> dict:
        return {
            "format": SHARE_FORMAT,
            "party": self.party,
            "opening": self.opening.to_json(self.header.crs),
            "ciphertext": self.ciphertext.to_json(),
            "header": self.header.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Share":
        if obj.get("format") != SHARE_FORMAT:
            raise ValueError(f"unsupported share format {obj.get('format')!r}")
        header = ShareHeader.from_json(obj["header"])
        return cls(
            party=int(obj["party"]),
            opening=Opening.from_json(obj["opening"], header.crs),
            ciphertext=WECiphertext.from_json(obj["ciphertext"]),
            header=header,
        )


@dataclass(frozen=True)
class Dealing:
    shares: tuple[Share, ...]
    public: MPrimeInstance

    def to_json(self) -> dict:
        return {
            "format": DEALING_FORMAT,
            "instance": self.public.to_json(),
            "shares": [s.to_json() for s in self.shares],
        }


def relation_for(inst: MPrimeInstance, backend: str):
    """The relation object a backend encrypts against."""
    if backend == "cnf":
        from .circuits import CnfMPrimeRelation

        return CnfMPrimeRelation.compile(inst)
    return MPrimeRelation(inst)


def setup(
    structure: AccessStructure,
    secret: bytes,
    rng: Stream,
    *,
    lam: int = 16,
    k: int = 8,
    backend: str = "idealized",
    crs: CRS | None = None,
    expansion: str | None = None,
) -> Dealing:
    """Deal ``secret`` for ``structure``; deterministic under a seeded rng.

    Draw order is pinned: openings for parties 1..n (ell seeds each, low
    block first), then the backend's encryption randomness.  The CNF
    backend defaults to the circuit-friendly "toy" expansion so the
    compiled relation matches the native commitments.
    """
    if not secret:
        raise ValueError("secret must be non-empty")
    if expansion is None:
        expansion = "toy" if backend == "cnf" else "splitmix64"
    if crs is None:
        crs = crs_gen(structure.n, k, rng, expansion=expansion)
    elif crs.n != structure.n:
        raise ValueError("provided CRS is for a different party count")
    openings = [sample_opening(crs, rng) for _ in range(structure.n)]
    coms = tuple(commit(i + 1, op, crs) for i, op in enumerate(openings))
    inst = MPrimeInstance(crs=crs, commitments=coms, structure=structure)
    ct = we_encrypt(backend, lam, relation_for(inst, backend), secret, rng)
    header = ShareHeader(n=structure.n, structure_digest=structure.digest(), crs=crs)
    shares = tuple(
        Share(party=i + 1, opening=openings[i], ciphertext=ct, header=header)
        for i in range(structure.n)
    )
    return Dealing(shares=shares, public=inst)


def shares_of(dealing: Dealing, X: PartySet) -> tuple[Share, ...]:
    """The sub-sequence of shares held by the members of X."""
    return tuple(s for s in dealing.shares if s.party in X)


def recon(shares, X: PartySet, inner_witness) -> bytes | None:
    """Decrypt with the openings of X and an inner witness.

    Returns the secret when the witness attests M(X) = 1 (probability 1
    by the completeness of the backend), otherwise None.  Shares from
    different dealings raise MixedDealingError, which is distinct from
    the plain rejection.
    """
    shares = tuple(shares)
    if not shares:
        raise MissingShareError("no shares provided")
    header = shares[0].header
    for s in shares[1:]:
        if s.header != header or s.ciphertext.to_json() != shares[0].ciphertext.to_json():
            raise MixedDealingError("shares come from different dealings")
    if X.n != header.n:
        raise ValueError("party set size disagrees with the dealing")
    by_party = {s.party: s.opening for s in shares}
    missing = [i for i in X.sorted() if i not in by_party]
    if missing:
        raise MissingShareError(f"no share for parties {missing}")
    witness = assemble_witness(X, by_party, inner_witness)
    return we_decrypt(shares[0].ciphertext, witness)


def share_serialize(share: Share) -> bytes:
    return serde.canonical_json_bytes(share.to_json())


def share_parse(data: bytes) -> Share:
    if not data:
        raise ValueError("empty share data")
    try:
        obj = json.loads(data)
    except ValueError as exc:
        raise ValueError(f"malformed share JSON: {exc}") from exc
    return Share.from_json(obj)
