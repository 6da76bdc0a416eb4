"""Exception hierarchy. Every error carries a short machine-readable ``reason``."""


class QuoteSigError(Exception):
    reason = "error"

    def __init__(self, message: str = "", reason: str | None = None):
        if reason is not None:
            self.reason = reason
        super().__init__(message or self.reason)


class EmptyMessageError(QuoteSigError, ValueError):
    reason = "no-tokens"


class UnknownIdentifierError(QuoteSigError, KeyError):
    """Unregistered hash, signature scheme or tokenizer identifier."""

    reason = "unknown-identifier"

    def __str__(self) -> str:  # KeyError would repr() the message
        return self.args[0] if self.args else self.reason


class IndexRangeError(QuoteSigError, ValueError):
    reason = "index-out-of-range"


class InvalidIndexSetError(QuoteSigError, ValueError):
    reason = "invalid-index-set"


class KeyFormatError(QuoteSigError, ValueError):
    reason = "key-parse"


class MalformedSignatureError(QuoteSigError, ValueError):
    """The signature is structurally unusable (as opposed to cryptographically invalid)."""

    reason = "malformed"


class CodecError(QuoteSigError, ValueError):
    reason = "syntax"


class BoundDomainError(QuoteSigError, ValueError):
    reason = "domain"


class OracleLimitError(QuoteSigError, ValueError):
    reason = "limit-exceeded"


class SignatureInvalidError(QuoteSigError):
    """The root signature does not verify under the given public key."""

    reason = "signature-invalid"
