"""Why leaves and internal nodes are hashed with different prefix bytes.

Without a prefix, the last two words can be swapped for the concatenation
of their hashes: the forged message is one token shorter but has the same
root, so the signature carries over.
"""

import hashlib

from quotesig import build_tree, root_digest
from quotesig.hashing import get_hash
from quotesig.merkle import split_point


def plain_root(tokens):
    def create(seq):
        if len(seq) == 1:
            return hashlib.sha256(seq[0]).digest()
        left, _ = split_point(len(seq))
        return hashlib.sha256(create(seq[:left]) + create(seq[left:])).digest()

    return create(list(tokens))


original = tuple(w.encode() for w in "The quick brown fox jumps over the dog".split())
forged = original[:-2] + (hashlib.sha256(original[-2]).digest() + hashlib.sha256(original[-1]).digest(),)

print("without prefixes, roots equal:", plain_root(original) == plain_root(forged))
h = get_hash("sha-256")
print("with prefixes,    roots equal:", root_digest(build_tree(original, h)) == root_digest(build_tree(forged, h)))
