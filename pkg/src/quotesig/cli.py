"""``qsig`` command line: keygen, sign, quote, verify, bounds, inspect.

Exit codes: 0 success / valid, 1 invalid signature, 2 usage, 3 I/O or key
file, 4 malformed envelope. Every failure prints one line to stderr of the
form ``qsig: <reason>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bounds, codec
from .errors import (
    BoundDomainError, CodecError, EmptyMessageError, IndexRangeError, InvalidIndexSetError,
    KeyFormatError, MalformedSignatureError, OracleLimitError, SignatureInvalidError,
    UnknownIdentifierError,
)
from .hashing import DEFAULT_HASH, available_hashes
from .indices import parse_selection
from .quoter import quote, sign, subquote
from .sigscheme import (
    DEFAULT_SCHEME, available_schemes, dump_key, keygen, load_public_key, load_secret_key,
)
from .tokenizer import DEFAULT_MARKER, DEFAULT_TOKENIZER, parse_quote, render_quote, tokenize
from .verifier import verify

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_IO, EXIT_MALFORMED = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, status: int, reason: str, message: str):
        super().__init__(message)
        self.status, self.reason = status, reason


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, "usage", message)


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_IO, "io", f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, data: bytes, force: bool = True) -> None:
    p = Path(path)
    if not force and p.exists():
        raise CliError(EXIT_IO, "exists", f"{path} exists (use --force to overwrite)")
    try:
        p.write_bytes(data)
    except OSError as exc:
        raise CliError(EXIT_IO, "io", f"cannot write {path}: {exc.strerror}") from None


def _tokens(data: bytes, tokenizer_id: str = DEFAULT_TOKENIZER, marker: str | None = None):
    try:
        if marker is None:
            return tokenize(data, tokenizer_id)
        return parse_quote(data, marker, tokenizer_id)
    except EmptyMessageError:
        raise CliError(EXIT_USAGE, "no-tokens", "no tokens in input") from None
    except UnicodeDecodeError:
        raise CliError(EXIT_USAGE, "encoding", "input is not valid UTF-8") from None


def _envelope(path: str):
    try:
        return codec.decode(_read(path))
    except CodecError as exc:
        raise CliError(EXIT_MALFORMED, exc.reason, f"{path}: {exc}") from None


def _key(path: str, loader):
    try:
        return loader(_read(path))
    except (KeyFormatError, UnknownIdentifierError) as exc:
        raise CliError(EXIT_IO, "key-parse", f"{path}: {exc}") from None


def _marker(args) -> str:
    return args.marker or os.environ.get("QSIG_MARKER") or DEFAULT_MARKER


def cmd_keygen(args) -> int:
    pair = keygen(args.scheme)
    for path in (args.secret, args.public):
        if not args.force and Path(path).exists():
            raise CliError(EXIT_IO, "exists", f"{path} exists (use --force to overwrite)")
    _write(args.secret, dump_key(pair.secret))
    _write(args.public, dump_key(pair.public))
    return EXIT_OK


def cmd_sign(args) -> int:
    secret = _key(args.key, load_secret_key)
    tokens = _tokens(_read(args.input), args.tokenizer)
    sig = sign(tokens, secret, args.hash, args.tokenizer)
    _write(args.output, codec.encode(sig) + b"\n")
    return EXIT_OK


def cmd_quote(args) -> int:
    parent = _envelope(args.sig)
    public = _key(args.pub, load_public_key) if args.pub else None
    marker = _marker(args)
    try:
        selection = parse_selection(args.range or args.tokens)
    except (InvalidIndexSetError, ValueError) as exc:
        raise CliError(EXIT_USAGE, "selection", str(exc)) from None
    try:
        if parent.is_full:
            tokens = _tokens(_read(args.input), parent.tokenizer_id)
            selection.check_within(len(tokens))
            sig = quote(tokens, selection, parent, public)
        else:
            tokens = _tokens(_read(args.input), parent.tokenizer_id, marker)
            sig = subquote(tokens, parent, selection, public)
            tokens = tuple(tokens[i] for i in selection)
            selection = None
    except IndexRangeError as exc:
        raise CliError(EXIT_USAGE, "index-out-of-range", str(exc)) from None
    except MalformedSignatureError as exc:
        raise CliError(EXIT_MALFORMED, exc.reason, str(exc)) from None
    except SignatureInvalidError as exc:
        raise CliError(EXIT_INVALID, exc.reason, str(exc)) from None
    quoted = tokens if selection is None else tuple(tokens[i] for i in selection)
    text = render_quote(quoted, sig.indices.gaps(sig.n), marker)
    _write(args.out_text, text + b"\n")
    _write(args.out_sig, codec.encode(sig) + b"\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    sig = _envelope(args.sig)
    public = _key(args.pub, load_public_key)
    tokens = _tokens(_read(args.quote), sig.tokenizer_id, _marker(args))
    report = verify(tokens, sig, public)
    doc = codec.encode_report(report)
    if args.report:
        _write(args.report, doc)
    else:
        sys.stdout.write(doc.decode("utf-8"))
    if report.valid:
        return EXIT_OK
    if report.reason == "signature-invalid":
        raise CliError(EXIT_INVALID, report.reason, "root signature does not verify (quote altered or wrong key)")
    raise CliError(EXIT_MALFORMED, report.reason, "signature is malformed")


def cmd_bounds(args) -> int:
    n = args.n
    sizes = [args.t] if args.t is not None else list(range(1, n + 1))
    reports = []
    try:
        for t in sizes:
            if args.exhaustive:
                reports.append(bounds.oracle_worst_case(n, t, args.contiguous))
            elif args.sample:
                reports.append(bounds.oracle_sampled(n, t, args.contiguous, args.sample, args.seed))
            else:
                bound = bounds.bound_contiguous(n) if args.contiguous else bounds.bound_arbitrary(n, t)
                reports.append((n, t, bound))
    except (BoundDomainError, OracleLimitError) as exc:
        raise CliError(EXIT_USAGE, exc.reason, str(exc)) from None
    out = sys.stdout
    if reports and isinstance(reports[0], tuple):
        out.write(",".join(bounds.CSV_HEADER) + "\n")
        for n_, t, bound in reports:
            out.write(f"{n_},{t},{str(args.contiguous).lower()},{bound},,\n")
        return EXIT_OK
    bounds.write_csv(reports, out)
    if any(not r.within_bound for r in reports):
        raise CliError(EXIT_INVALID, "bound-violated", "observed path size exceeds its bound")
    return EXIT_OK


def cmd_inspect(args) -> int:
    sig = _envelope(args.sig)
    doc = codec.to_document(sig)
    doc["quoted_tokens"] = len(sig.indices)
    doc["path_length"] = len(sig.path)
    doc["contiguous"] = sig.indices.contiguous
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qsig", description="Quotable signatures over heap-shaped Merkle trees.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("keygen", help="generate a key pair")
    p.add_argument("secret")
    p.add_argument("public")
    p.add_argument("--scheme", default=DEFAULT_SCHEME, choices=available_schemes())
    p.add_argument("--force", action="store_true", help="overwrite existing key files")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("sign", help="sign a whole text")
    p.add_argument("input")
    p.add_argument("--key", required=True, help="secret key file")
    p.add_argument("-o", "--output", required=True, help="signature envelope (.qsig)")
    p.add_argument("--hash", default=DEFAULT_HASH, choices=available_hashes())
    p.add_argument("--tokenizer", default=DEFAULT_TOKENIZER)
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("quote", help="quote from a signed text or from a signed quote")
    p.add_argument("input", help="original text, or a rendered quote when --sig is a quote envelope")
    p.add_argument("--sig", required=True)
    sel = p.add_mutually_exclusive_group(required=True)
    sel.add_argument("--range", help="half-open token ranges, e.g. 0..2 or 0..2,5..7")
    sel.add_argument("--tokens", help="comma-separated token indices, e.g. 0,2,4")
    p.add_argument("--out-text", required=True)
    p.add_argument("--out-sig", required=True)
    p.add_argument("--pub", help="check the input signature against this public key first")
    p.add_argument("--marker", help=f"gap marker (default $QSIG_MARKER or {DEFAULT_MARKER!r})")
    p.set_defaults(func=cmd_quote)

    p = sub.add_parser("verify", help="verify a quote")
    p.add_argument("quote")
    p.add_argument("--sig", required=True)
    p.add_argument("--pub", required=True)
    p.add_argument("--report", help="write the report here instead of stdout")
    p.add_argument("--marker")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="path-size bounds, optionally checked by brute force")
    p.add_argument("n", type=int)
    p.add_argument("t", type=int, nargs="?")
    p.add_argument("--contiguous", action="store_true")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--sample", type=int, metavar="K", help="check K random quotes per size")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("inspect", help="dump envelope fields")
    p.add_argument("sig")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"qsig: {exc.reason}: {exc}", file=sys.stderr)
        return exc.status


if __name__ == "__main__":
    sys.exit(main())
