"""Quotable signatures: sign a token sequence once, let anyone derive
verifiable signatures for sub-quotes without the secret key."""

from .codec import decode, encode
from .errors import QuoteSigError
from .indices import GapDescriptor, IndexSet
from .merkle import MerkleTree, build_skeleton, build_tree, leaf_hash, node_hash, root_digest
from .quoter import QuoteSignature, quote, sign, subquote
from .sigscheme import KeyPair, PublicKey, SecretKey, keygen
from .tokenizer import parse_quote, render_quote, tokenize
from .verifier import VerificationReport, verify

__all__ = [
    "GapDescriptor", "IndexSet", "KeyPair", "MerkleTree", "PublicKey", "QuoteSigError",
    "QuoteSignature", "SecretKey", "VerificationReport", "build_skeleton", "build_tree",
    "decode", "encode", "keygen", "leaf_hash", "node_hash", "parse_quote", "quote",
    "render_quote", "root_digest", "sign", "subquote", "tokenize", "verify",
]

__version__ = "0.1.0"
