"""Canonical ``.qsig`` envelopes and verification-report documents.

An envelope is a single-line JSON object with sorted keys and no optional
whitespace, so equal signatures encode to equal bytes. Binary values use
unpadded base64url. Decoding is strict: anything that is not exactly the
canonical encoding of a valid signature raises :class:`CodecError` with a
reason code.
"""

from __future__ import annotations

import base64
import binascii
import json
import re

from .errors import CodecError, IndexRangeError, InvalidIndexSetError, UnknownIdentifierError
from .hashing import get_hash
from .indices import GapDescriptor, IndexSet, check_ranges
from .quoter import FORMAT_VERSION, QuoteSignature
from .sigscheme import available_schemes
from .tokenizer import check_tokenizer
from .verifier import VerificationReport

FILE_EXTENSION = ".qsig"
MEDIA_TYPE = "application/x-quotable-signature+json-like"

FIELDS = frozenset(
    {"version", "hash_id", "scheme_id", "tokenizer_id", "n", "indices", "path", "root_sig"}
)

_B64URL = re.compile(r"[A-Za-z0-9_-]*")


def b64encode(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode("ascii")


def b64decode(text: str) -> bytes:
    if not isinstance(text, str) or not _B64URL.fullmatch(text) or len(text) % 4 == 1:
        raise CodecError(f"bad base64url value {text!r:.40}", reason="bad-base64")
    try:
        data = base64.urlsafe_b64decode(text + "=" * (-len(text) % 4))
    except (binascii.Error, ValueError):
        raise CodecError(f"bad base64url value {text!r:.40}", reason="bad-base64") from None
    if b64encode(data) != text:  # non-zero padding bits
        raise CodecError(f"non-canonical base64url value {text!r:.40}", reason="bad-base64")
    return data


def _dumps(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True).encode("ascii")


def to_document(sig: QuoteSignature) -> dict:
    return {
        "version": sig.version,
        "hash_id": sig.hash_id,
        "scheme_id": sig.scheme_id,
        "tokenizer_id": sig.tokenizer_id,
        "n": sig.n,
        "indices": [[a, b] for a, b in sig.indices.ranges],
        "path": [b64encode(d) for d in sig.path],
        "root_sig": b64encode(sig.root_sig),
    }


def encode(sig: QuoteSignature) -> bytes:
    return _dumps(to_document(sig))


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def decode(data: bytes | str) -> QuoteSignature:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError:
            raise CodecError("envelope is not UTF-8") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CodecError(f"envelope is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CodecError("envelope must be a JSON object")

    if "version" in doc and doc["version"] != FORMAT_VERSION:
        raise CodecError(f"unsupported envelope version {doc['version']!r}", reason="unsupported-version")
    missing = FIELDS - doc.keys()
    if missing:
        raise CodecError(f"missing fields: {', '.join(sorted(missing))}", reason="missing-field")
    extra = doc.keys() - FIELDS
    if extra:
        raise CodecError(f"unknown fields: {', '.join(sorted(extra))}", reason="unknown-field")

    for key in ("hash_id", "scheme_id", "tokenizer_id", "root_sig"):
        if not isinstance(doc[key], str):
            raise CodecError(f"{key} must be a string")
    if not _is_int(doc["n"]):
        raise CodecError("n must be an integer")
    if not isinstance(doc["path"], list) or not all(isinstance(p, str) for p in doc["path"]):
        raise CodecError("path must be a list of strings")
    ranges = doc["indices"]
    if not isinstance(ranges, list) or not all(
        isinstance(r, list) and len(r) == 2 and all(_is_int(x) for x in r) for r in ranges
    ):
        raise CodecError("indices must be a list of [start, end] integer pairs")

    try:
        hash_fn = get_hash(doc["hash_id"])
        if doc["scheme_id"] not in available_schemes():
            raise UnknownIdentifierError(f"unknown signature scheme {doc['scheme_id']!r}")
        check_tokenizer(doc["tokenizer_id"])
    except UnknownIdentifierError as exc:
        raise CodecError(str(exc), reason="unknown-identifier") from None

    ranges = tuple((a, b) for a, b in ranges)
    try:
        check_ranges(ranges)
    except InvalidIndexSetError as exc:
        raise CodecError(str(exc), reason=exc.reason) from None

    path = tuple(b64decode(p) for p in doc["path"])
    if any(len(d) != hash_fn.digest_size for d in path):
        raise CodecError("path digest has wrong length", reason="digest-length")
    root_sig = b64decode(doc["root_sig"])
    if not root_sig:
        raise CodecError("root signature is empty", reason="bad-base64")

    n = doc["n"]
    if n < 1:
        raise CodecError("n must be positive", reason="bad-n")
    try:
        sig = QuoteSignature(
            root_sig, n, IndexSet(ranges), path,
            doc["hash_id"], doc["scheme_id"], doc["tokenizer_id"], doc["version"],
        )
    except IndexRangeError as exc:
        raise CodecError(str(exc), reason="index-out-of-range") from None

    if encode(sig) != data.rstrip().encode("utf-8"):
        raise CodecError("envelope is not in canonical form", reason="non-canonical")
    return sig


def encode_report(report: VerificationReport) -> bytes:
    """Verification report as an indented JSON document."""
    doc = {
        "valid": report.valid,
        "reason": report.reason,
        "n": report.n,
        "indices": [[a, b] for a, b in report.indices.ranges],
        "contiguous": report.contiguous,
        "gaps": [{"position": g.position, "missing": g.missing} for g in report.gaps],
        "signer_scheme": report.signer_scheme,
    }
    return json.dumps(doc, indent=2, sort_keys=True).encode("utf-8") + b"\n"


def decode_report(data: bytes | str) -> VerificationReport:
    try:
        doc = json.loads(data)
        return VerificationReport(
            doc["valid"], doc["reason"], doc["n"],
            IndexSet(tuple((a, b) for a, b in doc["indices"])), doc["contiguous"],
            tuple(GapDescriptor(g["position"], g["missing"]) for g in doc["gaps"]),
            doc["signer_scheme"],
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CodecError(f"bad report document: {exc}") from None
