"""Verification-path size bounds and a brute-force oracle that checks them.

Closed forms (``log`` is base 2, ``ceil(log 1) = 0``):

* arbitrary quote of ``t`` of ``n`` tokens: ``t(ceil(log n) - ceil(log t) - 1) + 2**ceil(log t)``
* contiguous quote, ``n > 2``: ``2 ceil(log n) - 2``
* any quote: ``ceil(n / 2)``

The oracle enumerates every quote of a fixed ``n``-token message, runs the
quoter's flag walk and records the largest path. Quotes are grown one token at
a time (the flag walk processes tokens in increasing order, so a quote's flag
state extends that of its prefix); this makes full sweeps cheap.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from itertools import combinations
from typing import IO, Iterable

from .errors import BoundDomainError, OracleLimitError
from .indices import IndexSet
from .merkle import build_tree
from .quoter import FlagAssignment, collect_required, mark_flags

ARBITRARY_LIMIT = 16
CONTIGUOUS_LIMIT = 256


def ceil_log2(x: int) -> int:
    if x < 1:
        raise BoundDomainError(f"log of {x}")
    return (x - 1).bit_length()


def bound_arbitrary(n: int, t: int) -> int:
    if not 1 <= t <= n:
        raise BoundDomainError(f"need 1 <= t <= n, got n={n}, t={t}")
    lt = ceil_log2(t)
    return t * (ceil_log2(n) - lt - 1) + (1 << lt)


def bound_contiguous(n: int) -> int:
    if n <= 2:
        raise BoundDomainError(f"contiguous bound needs n > 2, got {n}")
    return 2 * ceil_log2(n) - 2


def bound_halfmessage(n: int) -> int:
    if n < 1:
        raise BoundDomainError(f"need n >= 1, got {n}")
    return (n + 1) // 2


@dataclass(frozen=True)
class BoundReport:
    n: int
    t: int
    contiguous: bool
    bound: int
    observed_max: int
    witness: IndexSet
    exhaustive: bool = True
    cases: int = 0

    @property
    def slack(self) -> int:
        return self.bound - self.observed_max

    @property
    def within_bound(self) -> bool:
        return self.observed_max <= self.bound


def _fixed_message(n: int) -> tuple[bytes, ...]:
    return tuple(f"w{i}".encode() for i in range(n))


class _Best:
    """Per-quote-size maximum path size and the first quote reaching it."""

    def __init__(self):
        self.size: dict[int, int] = {}
        self.witness: dict[int, tuple[int, ...]] = {}
        self.cases: dict[int, int] = {}
        self.implicit_hits = 0

    def offer(self, t: int, size: int, quote: tuple[int, ...]) -> None:
        self.cases[t] = self.cases.get(t, 0) + 1
        if size > self.size.get(t, -1):
            self.size[t] = size
            self.witness[t] = quote


def _sweep_contiguous(n: int, t_only: int | None = None) -> _Best:
    tree = build_tree(_fixed_message(n))
    best = _Best()
    for start in range(n):
        flags = FlagAssignment(tree)
        stop = n if t_only is None else min(n, start + t_only)
        for end in range(start + 1, stop + 1):
            flags.add(end - 1)
            t = end - start
            if t_only is None or t == t_only:
                best.offer(t, flags.required_count, (start, end))
        best.implicit_hits += flags.implicit_hits
    return best


def _sweep_subsets(n: int, t_only: int | None = None) -> _Best:
    tree = build_tree(_fixed_message(n))
    best = _Best()
    max_t = n if t_only is None else t_only
    chosen: list[int] = []

    def extend(flags: FlagAssignment, nxt: int) -> None:
        for i in range(nxt, n):
            # not enough indices left to reach t_only
            if t_only is not None and len(chosen) + 1 + (n - i - 1) < t_only:
                break
            child = flags.copy()
            child.add(i)
            chosen.append(i)
            t = len(chosen)
            if t_only is None or t == t_only:
                best.offer(t, child.required_count, tuple(chosen))
            if t < max_t:
                extend(child, i + 1)
            else:
                best.implicit_hits += child.implicit_hits
            chosen.pop()

    extend(FlagAssignment(tree), 0)
    return best


def _report(n: int, t: int, contiguous: bool, best: _Best, tree=None) -> BoundReport:
    if contiguous:
        start, end = best.witness[t]
        witness = IndexSet.span(start, end)
        bound = bound_contiguous(n)
    else:
        witness = IndexSet.from_indices(best.witness[t])
        bound = bound_arbitrary(n, t)
    # the recorded size must be the real quote's path length
    if tree is None:
        tree = build_tree(_fixed_message(n))
    path = collect_required(tree, mark_flags(tree, witness))
    if len(path) != best.size[t]:
        raise AssertionError(f"incremental path size {best.size[t]} != quote path {len(path)}")
    return BoundReport(n, t, contiguous, bound, best.size[t], witness, True, best.cases[t])


def _check_limit(n: int, contiguous: bool, limit: int | None) -> None:
    if limit is None:
        limit = CONTIGUOUS_LIMIT if contiguous else ARBITRARY_LIMIT
    if n > limit:
        kind = "contiguous" if contiguous else "arbitrary"
        raise OracleLimitError(
            f"n={n} exceeds the exhaustive {kind} limit of {limit}; use sampling (oracle_sampled / --sample)"
        )


def oracle_worst_case(n: int, t: int, contiguous_only: bool = False, limit: int | None = None) -> BoundReport:
    """Exhaustive worst-case path size over all ``t``-token quotes (or ``t``-token windows)."""
    if not 1 <= t <= n:
        raise BoundDomainError(f"need 1 <= t <= n, got n={n}, t={t}")
    _check_limit(n, contiguous_only, limit)
    best = _sweep_contiguous(n, t) if contiguous_only else _sweep_subsets(n, t)
    return _report(n, t, contiguous_only, best)


def oracle_all(n: int, contiguous_only: bool = False, limit: int | None = None) -> list[BoundReport]:
    """One exhaustive report per quote size ``t = 1..n``, sharing one sweep."""
    _check_limit(n, contiguous_only, limit)
    best = _sweep_contiguous(n) if contiguous_only else _sweep_subsets(n)
    tree = build_tree(_fixed_message(n))
    return [_report(n, t, contiguous_only, best, tree) for t in range(1, n + 1)]


def oracle_sampled(
    n: int, t: int, contiguous_only: bool = False, samples: int = 1000, seed: int = 0
) -> BoundReport:
    """Random-sampling variant for large ``n``; ``observed_max`` is only a lower bound."""
    if not 1 <= t <= n:
        raise BoundDomainError(f"need 1 <= t <= n, got n={n}, t={t}")
    rng = random.Random(seed)
    tree = build_tree(_fixed_message(n))
    best_size, best_quote = -1, None
    for _ in range(samples):
        if contiguous_only:
            start = rng.randrange(n - t + 1)
            quote = IndexSet.span(start, start + t)
        else:
            quote = IndexSet.from_indices(rng.sample(range(n), t))
        size = mark_flags(tree, quote).required_count
        if size > best_size:
            best_size, best_quote = size, quote
    bound = bound_contiguous(n) if contiguous_only else bound_arbitrary(n, t)
    return BoundReport(n, t, contiguous_only, bound, best_size, best_quote, False, samples)


def slack_check(n: int, t: int, limit: int | None = None) -> int:
    """``bound_arbitrary(n, t)`` minus the exhaustive worst case; lies in ``[0, t]``."""
    return oracle_worst_case(n, t, False, limit).slack


def all_quotes_max(n: int, limit: int | None = None) -> BoundReport:
    """Worst case over every non-empty quote of any size, against ``ceil(n/2)``."""
    reports = oracle_all(n, False, limit)
    top = max(reports, key=lambda r: r.observed_max)
    return BoundReport(n, top.t, False, bound_halfmessage(n), top.observed_max, top.witness,
                       True, sum(r.cases for r in reports))


def brute_force_path_sizes(n: int, t: int) -> Iterable[tuple[IndexSet, int]]:
    """Every ``t``-subset with its path size, one fresh flag walk per quote (slow, for cross-checks)."""
    tree = build_tree(_fixed_message(n))
    for combo in combinations(range(n), t):
        quote = IndexSet.from_indices(combo)
        yield quote, len(collect_required(tree, mark_flags(tree, quote)))


CSV_HEADER = ("n", "t", "contiguous", "bound", "observed_max", "witness")


def write_csv(reports: Iterable[BoundReport], fp: IO[str], header: bool = True) -> None:
    writer = csv.writer(fp, lineterminator="\n")
    if header:
        writer.writerow(CSV_HEADER)
    for r in reports:
        witness = ";".join(f"{a}..{b}" for a, b in r.witness.ranges) if r.observed_max >= 0 else ""
        writer.writerow((r.n, r.t, str(r.contiguous).lower(), r.bound, r.observed_max, witness))
