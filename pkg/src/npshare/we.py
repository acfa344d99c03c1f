"""Witness encryption backends.

*** None of this is secure witness encryption. ***  The backends model
the WE functionality so that the scheme and the security harness have
something executable to run against:

* ``idealized`` - the ciphertext record carries the instance and a
  symmetric key; decryption releases the key only after an internal
  call to the relation verifier R(x, w).  Models "any witness decrypts,
  nothing else does".
* ``leaky`` - maximally insecure WE that still satisfies the letter of
  the contract: when the instance is *in* the language, the message is
  embedded verbatim in the payload (extractable without any witness);
  when it is not, the payload is independent of the message.  This is
  the backend that gives harness distinguishers genuine advantage.
* ``cnf`` - same mechanics as ``idealized`` but the relation is a
  compiled-CNF relation whose witnesses are satisfying assignments (see
  :mod:`npshare.circuits`).

The symmetric layer is XOR with a SplitMix64-derived keystream plus a
64-bit checksum; corruption is reported as :class:`CorruptCiphertext`,
distinct from the plain "wrong witness" outcome (None).

A relation object must provide ``instance_digest()`` and ``check(w)``;
``leaky`` additionally needs ``in_language()``.  Relations that can be
rebuilt from JSON advertise a loader tag via ``describe()`` and register
a loader here, which makes parsed ciphertexts self-contained.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import serde
from .rng import MASK64, Stream, mix64

BACKENDS = ("idealized", "leaky", "cnf")


class WeError(Exception):
    pass


class CorruptCiphertext(WeError):
    """Payload failed to parse or failed its integrity check."""


class UnboundRelation(WeError):
    """Ciphertext has no relation attached and none can be rebuilt."""


_relation_loaders: dict = {}


def register_relation_loader(tag: str, loader) -> None:
    _relation_loaders[tag] = loader


def _fold_bytes(data: bytes) -> int:
    state = len(data) & MASK64
    for off in range(0, len(data), 8):
        chunk = int.from_bytes(data[off:off + 8], "little")
        state = mix64(state ^ chunk)
    return state


def _keystream_xor(key: bytes, data: bytes) -> bytes:
    stream = Stream(_fold_bytes(key))
    return bytes(b ^ s for b, s in zip(data, stream.bytes(len(data))))


def checksum64(data: bytes) -> int:
    return mix64(_fold_bytes(data) ^ 0xC0DE)


@dataclass
class WECiphertext:
    backend: str
    instance_digest: str
    msg_len: int
    payload: bytes
    relation: object | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "backend": self.backend,
            "instance_digest": self.instance_digest,
            "msg_len": self.msg_len,
            "payload": self.payload.hex(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WECiphertext":
        return cls(
            backend=obj["backend"],
            instance_digest=obj["instance_digest"],
            msg_len=int(obj["msg_len"]),
            payload=bytes.fromhex(obj["payload"]),
        )

    def bind(self, relation) -> "WECiphertext":
        if relation.instance_digest() != self.instance_digest:
            raise WeError("relation does not match the ciphertext's instance digest")
        self.relation = relation
        return self


def _describe(relation) -> dict:
    describe = getattr(relation, "describe", None)
    return describe() if describe is not None else {"type": "opaque"}


def _load_relation(ct: WECiphertext, desc: dict):
    if ct.relation is not None:
        return ct.relation
    loader = _relation_loaders.get(desc.get("type"))
    if loader is None:
        raise UnboundRelation(
            f"no loader for relation type {desc.get('type')!r}; bind() a relation first"
        )
    relation = loader(desc)
    if relation.instance_digest() != ct.instance_digest:
        raise CorruptCiphertext("embedded relation disagrees with the instance digest")
    return relation


def we_encrypt(backend: str, lam: int, relation, message: bytes, rng: Stream) -> WECiphertext:
    """Encrypt ``message`` relative to the relation's instance."""
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if lam < 8:
        raise ValueError("security parameter must be >= 8")
    if not message:
        raise ValueError("message must be non-empty")
    desc = _describe(relation)
    if backend == "leaky":
        nonce = rng.bytes(8)
        if not relation.in_language():
            # Instance outside the language: the payload distribution is
            # independent of the message (soundness holds by construction).
            body = {"plain": None, "noise": rng.bytes(len(message)).hex()}
        else:
            body = {"plain": message.hex(), "noise": None}
        payload = serde.canonical_json_bytes(
            {"v": 1, "relation": desc, "nonce": nonce.hex(), **body}
        )
    else:
        key = rng.bytes(max(8, (lam + 7) // 8))
        payload = serde.canonical_json_bytes({
            "v": 1,
            "relation": desc,
            "key": key.hex(),
            "body": _keystream_xor(key, message).hex(),
            "check": f"{checksum64(message):016x}",
        })
    return WECiphertext(
        backend=backend,
        instance_digest=relation.instance_digest(),
        msg_len=len(message),
        payload=payload,
        relation=relation,
    )


def we_decrypt(ct: WECiphertext, witness) -> bytes | None:
    """The message if the witness satisfies the bound instance, else None."""
    try:
        obj = json.loads(ct.payload)
        if obj.get("v") != 1:
            raise ValueError("bad version")
    except (ValueError, UnicodeDecodeError) as exc:
        raise CorruptCiphertext(f"unparseable payload: {exc}") from exc
    relation = _load_relation(ct, obj.get("relation", {}))
    if not relation.check(witness):
        return None
    try:
        if ct.backend == "leaky":
            plain = obj["plain"]
            if plain is None:
                # check() accepted but the instance was recorded as outside
                # the language; the relation is inconsistent.
                raise CorruptCiphertext("leaky payload has no plaintext for a valid witness")
            message = bytes.fromhex(plain)
        else:
            key = bytes.fromhex(obj["key"])
            message = _keystream_xor(key, bytes.fromhex(obj["body"]))
            if f"{checksum64(message):016x}" != obj["check"]:
                raise CorruptCiphertext("checksum mismatch")
    except (KeyError, ValueError) as exc:
        raise CorruptCiphertext(f"malformed payload fields: {exc}") from exc
    if len(message) != ct.msg_len:
        raise CorruptCiphertext("message length disagrees with the envelope")
    return message


def leak_message(ct: WECiphertext) -> bytes | None:
    """Read the leaky backend's embedded plaintext without any witness.

    Returns None for other backends or when nothing leaked (instance
    outside the language).  This is the harness's "genuine advantage"
    hook, not part of the WE contract.
    """
    if ct.backend != "leaky":
        return None
    try:
        obj = json.loads(ct.payload)
        plain = obj.get("plain")
        return None if plain is None else bytes.fromhex(plain)
    except (ValueError, UnicodeDecodeError):
        return None
