"""Classical signature backends applied to the Merkle root digest.

Schemes are looked up by string id. ``ed25519`` is the default; ``ecdsa-p256``
is the second DSS option. Post-quantum ids are reserved but not wired in.
Callers pass the bytes to sign; the quoter frames the root digest together
with the token count before it gets here.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ec, ed25519

from .errors import KeyFormatError, UnknownIdentifierError

DEFAULT_SCHEME = "ed25519"
RESERVED_SCHEMES = frozenset({"ml-dsa-65", "falcon-512", "slh-dsa-128s"})

_RAW = dict(encoding=serialization.Encoding.Raw, format=serialization.PublicFormat.Raw)


@dataclass(frozen=True)
class SecretKey:
    scheme_id: str
    raw: bytes = b""

    def __repr__(self) -> str:
        return f"SecretKey({self.scheme_id!r}, <{len(self.raw)} bytes>)"


@dataclass(frozen=True)
class PublicKey:
    scheme_id: str
    raw: bytes


@dataclass(frozen=True)
class KeyPair:
    secret: SecretKey
    public: PublicKey

    @property
    def scheme_id(self) -> str:
        return self.public.scheme_id


@dataclass(frozen=True)
class RootSignature:
    data: bytes
    scheme_id: str


class _Ed25519:
    seed_size = 32

    def secret_from_seed(self, seed: bytes) -> bytes:
        return ed25519.Ed25519PrivateKey.from_private_bytes(seed).private_bytes(
            serialization.Encoding.Raw, serialization.PrivateFormat.Raw, serialization.NoEncryption()
        )

    def public_from_secret(self, secret: bytes) -> bytes:
        return ed25519.Ed25519PrivateKey.from_private_bytes(secret).public_key().public_bytes(**_RAW)

    def sign(self, secret: bytes, message: bytes) -> bytes:
        return ed25519.Ed25519PrivateKey.from_private_bytes(secret).sign(message)

    def verify(self, public: bytes, message: bytes, signature: bytes) -> None:
        ed25519.Ed25519PublicKey.from_public_bytes(public).verify(signature, message)


class _EcdsaP256:
    seed_size = 32
    _order = 0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551

    def secret_from_seed(self, seed: bytes) -> bytes:
        # reduce into [1, order-1]
        scalar = int.from_bytes(seed, "big") % (self._order - 1) + 1
        return scalar.to_bytes(32, "big")

    def _private(self, secret: bytes) -> ec.EllipticCurvePrivateKey:
        if len(secret) != 32:
            raise ValueError("P-256 secret must be 32 bytes")
        return ec.derive_private_key(int.from_bytes(secret, "big"), ec.SECP256R1())

    def public_from_secret(self, secret: bytes) -> bytes:
        return self._private(secret).public_key().public_bytes(
            serialization.Encoding.X962, serialization.PublicFormat.CompressedPoint
        )

    def sign(self, secret: bytes, message: bytes) -> bytes:
        return self._private(secret).sign(message, ec.ECDSA(hashes.SHA256()))

    def verify(self, public: bytes, message: bytes, signature: bytes) -> None:
        key = ec.EllipticCurvePublicKey.from_encoded_point(ec.SECP256R1(), public)
        key.verify(signature, message, ec.ECDSA(hashes.SHA256()))


_SCHEMES = {
    "ed25519": _Ed25519(),
    "ecdsa-p256": _EcdsaP256(),
}


def _scheme(scheme_id: str):
    try:
        return _SCHEMES[scheme_id]
    except KeyError:
        extra = " (reserved, not implemented)" if scheme_id in RESERVED_SCHEMES else ""
        raise UnknownIdentifierError(f"unknown signature scheme {scheme_id!r}{extra}") from None


def available_schemes() -> list[str]:
    return sorted(_SCHEMES)


def keygen(scheme_id: str = DEFAULT_SCHEME, seed: bytes | None = None) -> KeyPair:
    """Fresh key pair from OS randomness, or a reproducible one from ``seed`` (tests only)."""
    scheme = _scheme(scheme_id)
    if seed is None:
        seed = os.urandom(scheme.seed_size)
    elif len(seed) != scheme.seed_size:
        raise ValueError(f"seed must be {scheme.seed_size} bytes")
    secret = scheme.secret_from_seed(seed)
    return KeyPair(SecretKey(scheme_id, secret), PublicKey(scheme_id, scheme.public_from_secret(secret)))


def public_key_of(secret: SecretKey) -> PublicKey:
    try:
        raw = _scheme(secret.scheme_id).public_from_secret(secret.raw)
    except ValueError as exc:
        raise KeyFormatError(f"malformed {secret.scheme_id} secret key: {exc}") from None
    return PublicKey(secret.scheme_id, raw)


def sign_digest(digest: bytes, secret: SecretKey) -> RootSignature:
    scheme = _scheme(secret.scheme_id)
    try:
        data = scheme.sign(secret.raw, digest)
    except ValueError as exc:
        raise KeyFormatError(f"malformed {secret.scheme_id} secret key: {exc}") from None
    return RootSignature(data, secret.scheme_id)


def verify_digest(digest: bytes, signature: RootSignature, public: PublicKey) -> bool:
    """True iff ``signature`` is valid on exactly ``digest`` under ``public``; never raises."""
    if signature.scheme_id != public.scheme_id or public.scheme_id not in _SCHEMES:
        return False
    try:
        _SCHEMES[public.scheme_id].verify(public.raw, digest, signature.data)
    except (InvalidSignature, ValueError, TypeError):
        return False
    return True


# Key files: b"<scheme_id>\n" followed by the raw key bytes.

def dump_key(key: SecretKey | PublicKey) -> bytes:
    return key.scheme_id.encode("ascii") + b"\n" + key.raw


def _split_key_file(data: bytes) -> tuple[str, bytes]:
    header, sep, raw = data.partition(b"\n")
    if not sep or not raw:
        raise KeyFormatError("key file must be '<scheme_id>\\n<raw key bytes>'")
    try:
        scheme_id = header.decode("ascii")
    except UnicodeDecodeError:
        raise KeyFormatError("key file header is not ASCII") from None
    _scheme(scheme_id)
    return scheme_id, raw


def load_secret_key(data: bytes) -> SecretKey:
    key = SecretKey(*_split_key_file(data))
    public_key_of(key)  # validates the raw bytes
    return key


def load_public_key(data: bytes) -> PublicKey:
    scheme_id, raw = _split_key_file(data)
    if scheme_id == "ed25519" and len(raw) != 32:
        raise KeyFormatError("ed25519 public key must be 32 bytes")
    if scheme_id == "ecdsa-p256":
        try:
            ec.EllipticCurvePublicKey.from_encoded_point(ec.SECP256R1(), raw)
        except ValueError as exc:
            raise KeyFormatError(f"malformed ecdsa-p256 public key: {exc}") from None
    return PublicKey(scheme_id, raw)
