"""Quote verification.

The verifier trusts nothing structural in the signature beyond ``n`` and the
quoted indices: it rebuilds the tree shape from ``n``, replays the flag walk,
drops the provided hashes onto the required nodes in inorder, hashes the quoted
tokens into their leaves and recomputes the root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import IndexRangeError, MalformedSignatureError, UnknownIdentifierError
from .hashing import CountingHash
from .indices import GapDescriptor, IndexSet
from .merkle import LEAF_PREFIX, NODE_PREFIX, Hasher, MerkleTree, build_skeleton, resolve_hash
from .quoter import QuoteSignature, mark_flags, signed_payload
from .sigscheme import PublicKey, verify_digest


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    reason: str  # "ok", "signature-invalid", or a malformed-signature reason
    n: int
    indices: IndexSet
    contiguous: bool
    gaps: tuple[GapDescriptor, ...] = field(default=())
    signer_scheme: str = ""

    @property
    def malformed(self) -> bool:
        return self.reason not in ("ok", "signature-invalid")

    @property
    def missing(self) -> int:
        return sum(g.missing for g in self.gaps)


def reconstruct_tree(
    quote_tokens: Sequence[bytes], sig: QuoteSignature, hash_fn: Hasher | None = None
) -> MerkleTree:
    """Partially labeled tree with every node on a quoted root-token path labeled.

    Raises :class:`MalformedSignatureError` when the path has too few or too
    many hashes, a hash has the wrong length, or the token count disagrees
    with the indices.
    """
    h = resolve_hash(sig.hash_id) if hash_fn is None else hash_fn
    if h.name != sig.hash_id:
        raise ValueError(f"hash backend {h.name!r} does not match {sig.hash_id!r}")
    if len(quote_tokens) != len(sig.indices):
        raise MalformedSignatureError(
            f"{len(quote_tokens)} tokens but {len(sig.indices)} quoted indices",
            reason="token-count-mismatch",
        )
    try:
        sig.indices.check_within(sig.n)
    except IndexRangeError as exc:
        raise MalformedSignatureError(str(exc), reason="index-out-of-range") from None

    tree = build_skeleton(sig.n, sig.hash_id)
    required = mark_flags(tree, sig.indices).required()
    if len(sig.path) < len(required):
        raise MalformedSignatureError(
            f"path has {len(sig.path)} hashes, {len(required)} needed", reason="path-exhausted"
        )
    if len(sig.path) > len(required):
        raise MalformedSignatureError(
            f"path has {len(sig.path)} hashes, only {len(required)} consumed", reason="path-surplus"
        )
    labels = tree.labels
    for v, digest in zip(required, sig.path):
        if len(digest) != h.digest_size:
            raise MalformedSignatureError("path digest has wrong length", reason="digest-length")
        labels[v] = digest
    for i, token in zip(sig.indices, quote_tokens):
        labels[tree.leaf_node(i)] = h(LEAF_PREFIX + token)

    def label(v: int) -> bytes:
        if v in labels:
            return labels[v]
        if tree.is_leaf(v):
            raise MalformedSignatureError(f"node {v} cannot be computed", reason="unlabeled-node")
        labels[v] = h(NODE_PREFIX + label(2 * v) + label(2 * v + 1))
        return labels[v]

    label(tree.root)
    return tree


def reconstruct_root(
    quote_tokens: Sequence[bytes], sig: QuoteSignature, hash_fn: Hasher | None = None
) -> bytes:
    return reconstruct_tree(quote_tokens, sig, hash_fn).labels[1]


def count_verify_hashes(quote_tokens: Sequence[bytes], sig: QuoteSignature) -> int:
    """Hash evaluations needed to recompute the root for this quote."""
    counter = CountingHash(sig.hash_id)
    reconstruct_tree(quote_tokens, sig, counter)
    return counter.count


def verify(quote_tokens: Sequence[bytes], sig: QuoteSignature, public_key: PublicKey) -> VerificationReport:
    """Check a quote; failures are reported in the result, never raised."""
    try:
        gaps = tuple(sig.indices.gaps(sig.n))
    except IndexRangeError:
        gaps = ()
    meta = dict(
        n=sig.n, indices=sig.indices, contiguous=sig.indices.contiguous,
        gaps=gaps, signer_scheme=sig.scheme_id,
    )
    try:
        root = reconstruct_root(quote_tokens, sig)
    except MalformedSignatureError as exc:
        return VerificationReport(False, exc.reason, **meta)
    except UnknownIdentifierError:
        return VerificationReport(False, "unknown-hash", **meta)
    if verify_digest(signed_payload(root, sig.n, sig.hash_id), sig.root_signature, public_key):
        return VerificationReport(True, "ok", **meta)
    return VerificationReport(False, "signature-invalid", **meta)
