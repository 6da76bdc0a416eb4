"""Text <-> token sequences.

Signer, Quoter and Verifier must all derive the same tokens from the same
text, so tokenizers are named and versioned; the identifier travels in every
signature envelope.

Only the tokens are authenticated. Whitespace between tokens is not: ``"a  b"``
and ``"a\\nb"`` carry the same signature.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .errors import EmptyMessageError, UnknownIdentifierError
from .indices import GapDescriptor

TokenSequence = tuple[bytes, ...]

DEFAULT_TOKENIZER = "ws-v1"
DEFAULT_MARKER = "[…]"

# Identifiers set aside for future tokenizers; using one is an error, not a fallback.
RESERVED_TOKENIZERS = frozenset({"sentence-v1", "paragraph-v1", "html-v1"})


def _whitespace_v1(text: str) -> list[str]:
    return text.split()


_TOKENIZERS: dict[str, Callable[[str], list[str]]] = {
    "ws-v1": _whitespace_v1,
}


def check_tokenizer(tokenizer_id: str) -> None:
    if tokenizer_id not in _TOKENIZERS:
        extra = " (reserved, not implemented)" if tokenizer_id in RESERVED_TOKENIZERS else ""
        raise UnknownIdentifierError(f"unknown tokenizer {tokenizer_id!r}{extra}")


def tokenize(text: bytes | str, tokenizer_id: str = DEFAULT_TOKENIZER) -> TokenSequence:
    """Split UTF-8 ``text`` into tokens.

    Under ``ws-v1`` the tokens are the maximal runs of non-whitespace
    characters (Unicode whitespace), each kept as its exact UTF-8 bytes.
    Raises :class:`EmptyMessageError` if there are no tokens and
    ``UnicodeDecodeError`` on invalid UTF-8.
    """
    check_tokenizer(tokenizer_id)
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    tokens = tuple(t.encode("utf-8") for t in _TOKENIZERS[tokenizer_id](text))
    if not tokens:
        raise EmptyMessageError("message contains no tokens")
    return tokens


def as_tokens(tokens: Sequence[bytes | str]) -> TokenSequence:
    return tuple(t.encode("utf-8") if isinstance(t, str) else bytes(t) for t in tokens)


def render_quote(
    tokens: Sequence[bytes], gaps: Sequence[GapDescriptor], marker: str = DEFAULT_MARKER
) -> bytes:
    """Join quoted tokens with single spaces, writing ``marker`` at each gap."""
    mark = marker.encode("utf-8")
    out: list[bytes] = []
    it = iter(tokens)
    pos = 0
    for gap in sorted(gaps, key=lambda g: g.position):
        if gap.position < pos:
            raise ValueError("gaps overlap")
        while pos < gap.position:
            try:
                out.append(next(it))
            except StopIteration:
                raise ValueError("gaps inconsistent with token count") from None
            pos += 1
        out.append(mark)
        pos += gap.missing
    out.extend(it)
    return b" ".join(out)


def parse_quote(
    text: bytes | str, marker: str = DEFAULT_MARKER, tokenizer_id: str = DEFAULT_TOKENIZER
) -> TokenSequence:
    """Tokenize a rendered quote, dropping gap markers.

    A genuine token that is byte-equal to the marker is indistinguishable from
    a marker and is dropped too; pick a marker that cannot occur in the text.
    """
    mark = marker.encode("utf-8")
    tokens = tuple(t for t in tokenize(text, tokenizer_id) if t != mark)
    if not tokens:
        raise EmptyMessageError("quote contains no tokens")
    return tokens
