"""Signing, quoting and sub-quoting.

A quote signature carries the root signature, the original token count, the
quoted indices, and the labels of the *required* nodes: those off every
quoted token's root-token path whose sibling lies on one. The required set is
found with a three-state flag walk (delete / required / implicit) over hash
nodes, processing quoted tokens in increasing index order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import IndexRangeError, MalformedSignatureError, SignatureInvalidError
from .hashing import DEFAULT_HASH
from .indices import IndexSet
from .merkle import Hasher, MerkleTree, build_tree, resolve_hash, root_digest
from .sigscheme import PublicKey, RootSignature, SecretKey, sign_digest, verify_digest
from .tokenizer import DEFAULT_TOKENIZER, check_tokenizer

FORMAT_VERSION = 1


class Flag(enum.IntEnum):
    DELETE = 0
    REQUIRED = 1
    IMPLICIT = 2


class FlagAssignment:
    """Flags over the hash nodes of a tree shape, built one quoted token at a time.

    Tokens must be added in strictly increasing index order. Because flag
    evolution only depends on the tokens added so far, the state after adding
    ``a, ..., b`` is a prefix of the state for any longer run, which lets the
    bound oracle extend quotes incrementally.
    """

    def __init__(self, tree: MerkleTree):
        self.tree = tree
        self.flags: dict[int, Flag] = {}
        self.covered: set[int] = {tree.root}
        self.required_count = 0
        self.last = -1
        # times a walk met an implicit node and stopped defensively; 0 on all valid inputs
        self.implicit_hits = 0

    def __getitem__(self, v: int) -> Flag:
        return self.flags.get(v, Flag.DELETE)

    def add(self, i: int) -> None:
        if not 0 <= i < self.tree.n:
            raise IndexRangeError(f"token index {i} out of range for {self.tree.n} tokens")
        if i <= self.last:
            raise ValueError("tokens must be added in increasing index order")
        self.last = i
        v = self.tree.leaf_node(i)
        flags, covered = self.flags, self.covered
        REQUIRED, IMPLICIT = Flag.REQUIRED, Flag.IMPLICIT
        while v > 1:
            flag = flags.get(v)
            covered.add(v)
            if flag is None or flag is Flag.DELETE:
                if flags.get(v ^ 1) is not REQUIRED:
                    self.required_count += 1
                flags[v ^ 1] = REQUIRED
                v >>= 1
            elif flag is REQUIRED:
                self.required_count -= 1 + (flags.get(v ^ 1) is REQUIRED)
                flags[v] = flags[v ^ 1] = IMPLICIT
                break
            else:
                self.implicit_hits += 1
                break

    def copy(self) -> FlagAssignment:
        other = FlagAssignment.__new__(FlagAssignment)
        other.tree = self.tree
        other.flags = dict(self.flags)
        other.covered = set(self.covered)
        other.required_count = self.required_count
        other.last = self.last
        other.implicit_hits = self.implicit_hits
        return other

    def required(self) -> list[int]:
        """Required node ids in inorder."""
        out: list[int] = []
        stack = [self.tree.root]
        while stack:
            v = stack.pop()
            if self.flags.get(v) is Flag.REQUIRED:
                out.append(v)
            elif v in self.covered and not self.tree.is_leaf(v):
                # a covered node is never required, so left-before-right is inorder
                stack.append(2 * v + 1)
                stack.append(2 * v)
        return out


def mark_flags(tree: MerkleTree, indices: Iterable[int]) -> FlagAssignment:
    flags = FlagAssignment(tree)
    for i in sorted(indices):
        flags.add(i)
    return flags


def collect_required(tree: MerkleTree, flags: FlagAssignment) -> list[bytes]:
    """Labels of the required nodes, in inorder."""
    out = []
    for v in flags.required():
        try:
            out.append(tree.labels[v])
        except KeyError:
            raise MalformedSignatureError(f"required node {v} is unlabeled", reason="unlabeled-node") from None
    return out


@dataclass(frozen=True)
class QuoteSignature:
    """Signature on a quote; a full-message signature has ``indices == [0, n)`` and no path."""

    root_sig: bytes
    n: int
    indices: IndexSet
    path: tuple[bytes, ...] = ()
    hash_id: str = DEFAULT_HASH
    scheme_id: str = "ed25519"
    tokenizer_id: str = DEFAULT_TOKENIZER
    version: int = field(default=FORMAT_VERSION)

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        if self.n < 1:
            raise MalformedSignatureError("token count must be positive", reason="bad-n")
        self.indices.check_within(self.n)

    @property
    def root_signature(self) -> RootSignature:
        return RootSignature(self.root_sig, self.scheme_id)

    @property
    def is_full(self) -> bool:
        return self.indices.ranges == ((0, self.n),)


def signed_payload(root: bytes, n: int, hash_id: str) -> bytes:
    """Bytes handed to the classical scheme: the root bound to the token count and hash id.

    Signing the bare root would leave ``n`` unauthenticated: e.g. a quote of
    token 0 of a 3-token message also verifies as token 0 of a 4-token one,
    since the provided hashes sit at the same positions in both shapes.
    """
    return b"quotesig/v1\x00" + hash_id.encode("ascii") + b"\x00" + n.to_bytes(8, "big") + root


def _hasher(hash_id: str, hash_fn: Hasher | None) -> Hasher:
    if hash_fn is None:
        return resolve_hash(hash_id)
    if hash_fn.name != hash_id:
        raise ValueError(f"hash backend {hash_fn.name!r} does not match {hash_id!r}")
    return hash_fn


def sign(
    tokens: Sequence[bytes],
    secret: SecretKey,
    hash_id: str = DEFAULT_HASH,
    tokenizer_id: str = DEFAULT_TOKENIZER,
    hash_fn: Hasher | None = None,
) -> QuoteSignature:
    """Sign a whole token sequence."""
    check_tokenizer(tokenizer_id)
    tree = build_tree(tokens, _hasher(hash_id, hash_fn))
    root_sig = sign_digest(signed_payload(root_digest(tree), tree.n, hash_id), secret)
    return QuoteSignature(
        root_sig.data, tree.n, IndexSet.span(0, tree.n), (), hash_id, secret.scheme_id, tokenizer_id
    )


def quote(
    message: Sequence[bytes],
    indices: IndexSet | Iterable[int],
    message_sig: QuoteSignature,
    public_key: PublicKey | None = None,
    hash_fn: Hasher | None = None,
) -> QuoteSignature:
    """Derive the signature for ``message[indices]`` from the full-message signature.

    With ``public_key`` the message signature is checked first and
    :class:`SignatureInvalidError` raised if it does not verify.
    """
    if not isinstance(indices, IndexSet):
        indices = IndexSet.from_indices(indices)
    if not message_sig.is_full:
        raise ValueError("message signature does not cover a full message; use subquote()")
    if len(message) != message_sig.n:
        raise MalformedSignatureError(
            f"message has {len(message)} tokens, signature expects {message_sig.n}",
            reason="token-count-mismatch",
        )
    indices.check_within(message_sig.n)
    tree = build_tree(message, _hasher(message_sig.hash_id, hash_fn))
    if public_key is not None and not verify_digest(
        signed_payload(root_digest(tree), tree.n, message_sig.hash_id), message_sig.root_signature, public_key
    ):
        raise SignatureInvalidError("message signature does not verify")
    path = collect_required(tree, mark_flags(tree, indices))
    return QuoteSignature(
        message_sig.root_sig, message_sig.n, indices, tuple(path),
        message_sig.hash_id, message_sig.scheme_id, message_sig.tokenizer_id,
    )


def subquote(
    quote_tokens: Sequence[bytes],
    parent_sig: QuoteSignature,
    sub: IndexSet | Iterable[int],
    public_key: PublicKey | None = None,
    hash_fn: Hasher | None = None,
) -> QuoteSignature:
    """Quote from a quote. ``sub`` indexes positions within ``quote_tokens``.

    The parent's partially labeled tree is rebuilt as during verification,
    which labels every node on a parent root-token path; every node the new
    flag assignment requires is then either one of those or one of the
    parent's provided hashes.
    """
    from .verifier import reconstruct_tree

    if not isinstance(sub, IndexSet):
        sub = IndexSet.from_indices(sub)
    tree = reconstruct_tree(quote_tokens, parent_sig, _hasher(parent_sig.hash_id, hash_fn))
    if public_key is not None and not verify_digest(
        signed_payload(root_digest(tree), tree.n, parent_sig.hash_id), parent_sig.root_signature, public_key
    ):
        raise SignatureInvalidError("parent quote signature does not verify")
    absolute = parent_sig.indices.select(sub)
    path = collect_required(tree, mark_flags(tree, absolute))
    return QuoteSignature(
        parent_sig.root_sig, parent_sig.n, absolute, tuple(path),
        parent_sig.hash_id, parent_sig.scheme_id, parent_sig.tokenizer_id,
    )
