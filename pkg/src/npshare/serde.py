"""Canonical serialization helpers shared across the package.

All JSON emitted by the library goes through :func:`canonical_json_bytes`
(sorted keys, no whitespace) so that digests and byte-identity checks are
stable.  Bit strings are carried as hex of their little-endian byte
representation; the bit length is always known from context (CRS
parameters), so leading zero bits survive round trips.
"""

from __future__ import annotations

import hashlib
import json


def canonical_json_bytes(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("ascii")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_of(obj) -> str:
    """SHA-256 over the canonical JSON encoding of ``obj``."""
    return sha256_hex(canonical_json_bytes(obj))


def int_to_hex(value: int, nbits: int) -> str:
    """Hex of the little-endian byte encoding of a ``nbits``-bit integer."""
    if value < 0 or (nbits >= 0 and value >> nbits):
        raise ValueError(f"value does not fit in {nbits} bits")
    nbytes = (nbits + 7) // 8
    return value.to_bytes(nbytes, "little").hex()


def hex_to_int(text: str, nbits: int) -> int:
    raw = bytes.fromhex(text)
    if len(raw) != (nbits + 7) // 8:
        raise ValueError(f"expected {(nbits + 7) // 8} bytes for {nbits} bits, got {len(raw)}")
    value = int.from_bytes(raw, "little")
    if nbits % 8 and value >> nbits:
        raise ValueError("padding bits are not zero")
    return value
