"""Heap-shaped Merkle trees over token sequences.

Every token hangs below its own hash leaf, ``H(0x00 || token)``; internal
nodes are ``H(0x01 || left || right)``. The tree over the hash leaves is
heap-shaped: all levels are full except possibly the deepest, which is filled
from the left.

Nodes are identified by heap index: the root is 1 and the children of ``v``
are ``2v`` and ``2v + 1``, so the node at level ``j`` (root = 0), position
``i`` from the left is ``2**j + i``. The shape follows from the recursive
split in :func:`split_point`; the hash leaves of an ``n``-token tree are then
exactly the indices ``n .. 2n-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import EmptyMessageError, MalformedSignatureError
from .hashing import DEFAULT_HASH, CountingHash, HashFunction, get_hash

LEAF_PREFIX = b"\x00"
NODE_PREFIX = b"\x01"

Hasher = HashFunction | CountingHash


def split_point(length: int) -> tuple[int, int]:
    """Number of tokens under the (left, right) child of a node covering ``length`` tokens."""
    if length < 2:
        raise ValueError(f"cannot split {length} tokens")
    lo = 1 << (length.bit_length() - 1)
    if lo == length:
        return length // 2, length // 2
    if 2 * lo - length < length - lo:
        # closer to the next power of two: left subtree is full
        return lo, length - lo
    # closer to the previous power of two (ties land here; both rules agree on ties)
    right = lo // 2
    return length - right, right


def node_id(level: int, position: int) -> int:
    """Heap index of ``u_{level,position}``."""
    if not 0 <= position < (1 << level):
        raise ValueError(f"no position {position} on level {level}")
    return (1 << level) + position


def node_coords(v: int) -> tuple[int, int]:
    level = v.bit_length() - 1
    return level, v - (1 << level)


def resolve_hash(hash_fn: Hasher | str | None) -> Hasher:
    if hash_fn is None:
        return get_hash(DEFAULT_HASH)
    if isinstance(hash_fn, str):
        return get_hash(hash_fn)
    return hash_fn


def leaf_hash(token: bytes, hash_fn: Hasher | str | None = None) -> bytes:
    if not token:
        raise ValueError("empty token")
    return resolve_hash(hash_fn)(LEAF_PREFIX + token)


def node_hash(left: bytes, right: bytes, hash_fn: Hasher | str | None = None) -> bytes:
    return resolve_hash(hash_fn)(NODE_PREFIX + left + right)


class TreeNode(NamedTuple):
    id: int
    kind: str  # "hash" or "token"
    label: bytes | None
    children: tuple[int, ...]  # heap ids of hash children, or (token index,) for a hash leaf
    leaf_span: tuple[int, int]


@dataclass
class MerkleTree:
    """A (possibly partially) labeled heap-shaped tree over ``n`` tokens.

    ``labels`` maps heap index to digest. A tree from :func:`build_tree` is
    fully labeled; a skeleton starts empty.
    """

    n: int
    hash_id: str = DEFAULT_HASH
    labels: dict[int, bytes] = field(default_factory=dict, repr=False)
    tokens: tuple[bytes, ...] | None = field(default=None, repr=False)
    _leaf_cache: dict[int, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    root = 1

    def __post_init__(self):
        if self.n < 1:
            raise EmptyMessageError("a tree needs at least one token")

    def is_leaf(self, v: int) -> bool:
        return self.n <= v < 2 * self.n

    def __contains__(self, v: int) -> bool:
        return 1 <= v < 2 * self.n

    def span(self, v: int) -> tuple[int, int]:
        """Half-open range of token indices below node ``v``."""
        if v not in self:
            raise KeyError(v)
        start, length = 0, self.n
        for bit in bin(v)[3:]:
            left, right = split_point(length)
            if bit == "0":
                length = left
            else:
                start, length = start + left, right
        return start, start + length

    def leaf_node(self, i: int) -> int:
        """Heap index of the hash leaf above token ``i``."""
        cached = self._leaf_cache.get(i)
        if cached is not None:
            return cached
        if not 0 <= i < self.n:
            raise IndexError(i)
        v, start, length = 1, 0, self.n
        while length > 1:
            left, right = split_point(length)
            if i < start + left:
                v, length = 2 * v, left
            else:
                v, start, length = 2 * v + 1, start + left, right
        self._leaf_cache[i] = v
        return v

    def depth(self, v: int) -> int:
        return v.bit_length() - 1

    def node(self, v: int) -> TreeNode:
        span = self.span(v)
        if self.is_leaf(v):
            return TreeNode(v, "hash", self.labels.get(v), (span[0],), span)
        return TreeNode(v, "hash", self.labels.get(v), (2 * v, 2 * v + 1), span)

    def token_node(self, i: int) -> TreeNode:
        label = self.tokens[i] if self.tokens is not None else None
        return TreeNode(-1 - i, "token", label, (), (i, i + 1))

    def inorder(self):
        """Hash-node ids in inorder (left subtree, node, right subtree)."""
        stack, v = [], 1
        while stack or v:
            while v:
                stack.append(v)
                v = 2 * v if not self.is_leaf(v) else 0
            v = stack.pop()
            yield v
            v = 2 * v + 1 if not self.is_leaf(v) else 0

    def shape(self) -> tuple[tuple[int, int], ...]:
        """Leaf spans of all hash nodes in heap order; equal shapes mean equal trees modulo labels."""
        return tuple(self.span(v) for v in range(1, 2 * self.n))

    def leaf_depths(self) -> list[int]:
        return [self.depth(self.leaf_node(i)) for i in range(self.n)]

    @property
    def height(self) -> int:
        return (2 * self.n - 1).bit_length() - 1


def build_tree(tokens: Sequence[bytes], hash_fn: Hasher | str | None = None) -> MerkleTree:
    """Build and fully label the tree for ``tokens`` (``2n - 1`` hash evaluations)."""
    if len(tokens) == 0:
        raise EmptyMessageError("message contains no tokens")
    h = resolve_hash(hash_fn)
    tokens = tuple(tokens)
    if not all(tokens):
        raise ValueError("empty token")
    labels: dict[int, bytes] = {}

    def create(v: int, start: int, length: int) -> bytes:
        if length == 1:
            label = h(LEAF_PREFIX + tokens[start])
        else:
            left, right = split_point(length)
            label = h(NODE_PREFIX + create(2 * v, start, left) + create(2 * v + 1, start + left, right))
        labels[v] = label
        return label

    create(1, 0, len(tokens))
    return MerkleTree(len(tokens), h.name, labels, tokens)


def build_skeleton(n: int, hash_id: str = DEFAULT_HASH) -> MerkleTree:
    """Unlabeled tree with the same shape as ``build_tree`` of any ``n`` tokens."""
    return MerkleTree(n, hash_id)


def root_digest(tree: MerkleTree) -> bytes:
    try:
        return tree.labels[tree.root]
    except KeyError:
        raise MalformedSignatureError("root is unlabeled", reason="unlabeled-root") from None
