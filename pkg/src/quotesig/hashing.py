"""Hash-function registry and the evaluation-counting wrapper."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .errors import UnknownIdentifierError

DEFAULT_HASH = "sha-256"

_ALGORITHMS = {
    "sha-256": ("sha256", 32),
    "sha-512/256": ("sha512_256", 32),
    "sha3-256": ("sha3_256", 32),
    "blake2b-256": ("blake2b", 32),
}


@dataclass(frozen=True)
class HashFunction:
    name: str
    digest_size: int
    _algorithm: str = field(repr=False)

    def __call__(self, data: bytes) -> bytes:
        if self._algorithm == "blake2b":
            return hashlib.blake2b(data, digest_size=self.digest_size).digest()
        return hashlib.new(self._algorithm, data).digest()


class CountingHash:
    """Wraps a :class:`HashFunction` and counts evaluations.

    One instance per measurement; the counter is not thread-safe.
    """

    def __init__(self, inner: HashFunction | str = DEFAULT_HASH):
        self.inner = get_hash(inner) if isinstance(inner, str) else inner
        self.count = 0

    @property
    def name(self) -> str:
        return self.inner.name

    @property
    def digest_size(self) -> int:
        return self.inner.digest_size

    def __call__(self, data: bytes) -> bytes:
        self.count += 1
        return self.inner(data)

    def reset(self) -> None:
        self.count = 0


def get_hash(hash_id: str = DEFAULT_HASH) -> HashFunction:
    try:
        algorithm, size = _ALGORITHMS[hash_id]
    except KeyError:
        raise UnknownIdentifierError(f"unknown hash function {hash_id!r}") from None
    return HashFunction(hash_id, size, algorithm)


def available_hashes() -> list[str]:
    return sorted(_ALGORITHMS)
