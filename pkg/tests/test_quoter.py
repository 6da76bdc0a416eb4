from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from testkit import (
    FOX, GOLDEN_FOX_U10, GOLDEN_FOX_U23, GOLDEN_FOX_U35, fixed_keys, random_message,
    required_by_spans,
)

from quotesig.bounds import bound_arbitrary, bound_contiguous, bound_halfmessage
from quotesig.errors import (
    IndexRangeError, InvalidIndexSetError, MalformedSignatureError, SignatureInvalidError,
)
from quotesig.hashing import CountingHash
from quotesig.indices import IndexSet
from quotesig.merkle import build_skeleton, build_tree, node_id
from quotesig.quoter import Flag, collect_required, mark_flags, quote, sign, subquote
from quotesig.sigscheme import keygen
from quotesig.verifier import verify

u = node_id


def required(n, indices):
    return set(mark_flags(build_skeleton(n), indices).required())


@pytest.mark.parametrize("indices, expected", [
    ([4], {u(3, 5), u(2, 3), u(1, 0)}),
    ([0, 1], {u(2, 1), u(1, 1)}),
    ([0, 2, 4], {u(3, 1), u(3, 3), u(3, 5), u(2, 3)}),
    (range(8), set()),
])
def test_mark_flags_fox(indices, expected):
    assert required(8, indices) == expected


def test_flags_initially_delete_and_root_untouched():
    flags = mark_flags(build_skeleton(8), [0, 2, 4])
    assert flags[1] is Flag.DELETE
    assert flags[u(3, 7)] is Flag.DELETE
    assert flags[u(2, 1)] is Flag.IMPLICIT and flags[u(2, 0)] is Flag.IMPLICIT


def test_mark_flags_out_of_range():
    with pytest.raises(IndexRangeError):
        mark_flags(build_skeleton(8), [8])


@pytest.mark.parametrize("n", range(1, 11))
def test_flags_match_definition_exhaustively(n):
    for t in range(1, n + 1):
        for combo in combinations(range(n), t):
            flags = mark_flags(build_skeleton(n), combo)
            assert set(flags.required()) == required_by_spans(n, combo)
            assert flags.required_count == len(flags.required())
            assert flags.implicit_hits == 0


def test_collect_required_inorder():
    tree = build_tree(FOX)
    assert collect_required(tree, mark_flags(tree, [4])) == [GOLDEN_FOX_U10, GOLDEN_FOX_U35, GOLDEN_FOX_U23]
    assert collect_required(tree, mark_flags(tree, range(8))) == []
    single = build_tree([b"x"])
    assert collect_required(single, mark_flags(single, [0])) == []


def test_collect_required_unlabeled():
    skeleton = build_skeleton(8)
    with pytest.raises(MalformedSignatureError):
        collect_required(skeleton, mark_flags(skeleton, [4]))


@pytest.mark.parametrize("n", [5, 8, 13])
def test_required_order_is_full_inorder(n):
    tree = build_skeleton(n)
    order = {v: k for k, v in enumerate(tree.inorder())}
    for combo in combinations(range(n), 2):
        req = mark_flags(tree, combo).required()
        assert req == sorted(req, key=order.__getitem__)


def test_sign_is_full_quote(fox_sig):
    assert fox_sig.n == 8 and fox_sig.is_full and fox_sig.path == ()


def test_quote_jumps(fox_sig):
    q = quote(FOX, [4], fox_sig)
    assert q.n == 8 and q.indices == IndexSet.span(4, 5)
    assert q.path == (GOLDEN_FOX_U10, GOLDEN_FOX_U35, GOLDEN_FOX_U23)
    assert q.root_sig == fox_sig.root_sig


def test_quote_everything(fox_sig):
    q = quote(FOX, range(8), fox_sig)
    assert q.path == () and q.indices.ranges == ((0, 8),)


def test_quote_first_half(fox_sig):
    tree = build_tree(FOX)
    q = quote(FOX, range(4), fox_sig)
    assert q.path == (tree.labels[u(1, 1)],)


def test_quote_errors(fox_sig):
    with pytest.raises(InvalidIndexSetError):
        quote(FOX, [], fox_sig)
    with pytest.raises(IndexRangeError):
        quote(FOX, [8], fox_sig)
    with pytest.raises(MalformedSignatureError):
        quote(FOX[:7], [0], fox_sig)
    with pytest.raises(ValueError):
        quote(FOX, [0], quote(FOX, [0, 1], fox_sig))


def test_quote_checks_signature_with_key(fox_sig, keys):
    quote(FOX, [1], fox_sig, keys.public)
    with pytest.raises(SignatureInvalidError):
        quote(FOX, [1], fox_sig, keygen().public)


@pytest.mark.parametrize("n", [1, 2, 5, 8, 33, 64])
def test_quote_hash_count(n, keys):
    msg = random_message(n, n)
    sig = sign(msg, keys.secret)
    counter = CountingHash()
    quote(msg, [0], sig, hash_fn=counter)
    assert counter.count == 2 * n - 1


def test_subquote_example(fox_sig, keys):
    tree = build_tree(FOX)
    parent = quote(FOX, range(4), fox_sig)
    child = subquote(FOX[:4], parent, [0])
    assert child.indices == IndexSet.span(0, 1)
    assert child.path == (tree.labels[u(3, 1)], tree.labels[u(2, 1)], tree.labels[u(1, 1)])
    assert child.path[-1] == parent.path[0]
    assert verify(FOX[:1], child, keys.public).valid


def test_subquote_identity(fox_sig):
    parent = quote(FOX, [1, 2, 5], fox_sig)
    assert subquote([FOX[1], FOX[2], FOX[5]], parent, range(3)) == parent


def test_subquote_errors(fox_sig, keys):
    parent = quote(FOX, [1, 2, 5], fox_sig)
    toks = [FOX[1], FOX[2], FOX[5]]
    with pytest.raises(IndexRangeError):
        subquote(toks, parent, [3])
    with pytest.raises(SignatureInvalidError):
        subquote([b"x", FOX[2], FOX[5]], parent, [0], keys.public)
    with pytest.raises(MalformedSignatureError):
        subquote(toks[:2], parent, [0])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.randoms(use_true_random=False))
def test_subquote_chain(n, rng):
    keys = fixed_keys()
    msg = random_message(n, n)
    sig = sign(msg, keys.secret)
    current = IndexSet.from_indices(rng.sample(range(n), rng.randint(1, n)))
    sig = quote(msg, current, sig)
    while True:
        assert verify([msg[i] for i in sig.indices], sig, keys.public).valid
        k = len(sig.indices)
        if k == 1:
            break
        sub = rng.sample(range(k), rng.randint(1, k - 1))
        sig = subquote([msg[i] for i in sig.indices], sig, sub)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 64), st.data())
def test_path_size_bounds(n, data):
    t = data.draw(st.integers(1, n))
    indices = data.draw(st.lists(st.integers(0, n - 1), min_size=t, max_size=t, unique=True))
    size = len(required(n, indices))
    t = len(indices)
    assert size <= bound_arbitrary(n, t)
    assert size <= bound_halfmessage(n)
    start = data.draw(st.integers(0, n - 1))
    end = data.draw(st.integers(start + 1, n))
    if n > 2:
        assert len(required(n, range(start, end))) <= bound_contiguous(n)


@pytest.mark.parametrize("n", range(1, 8))
def test_subquote_availability_exhaustive(n):
    # every label a sub-quote needs comes from the parent (collect_required raises otherwise)
    msg = random_message(100 + n, n)
    sig = sign(msg, fixed_keys().secret)
    for t in range(1, n + 1):
        for parent_idx in combinations(range(n), t):
            parent = quote(msg, parent_idx, sig)
            toks = [msg[i] for i in parent_idx]
            for s in range(1, t + 1):
                for sub in combinations(range(t), s):
                    child = subquote(toks, parent, sub)
                    direct = quote(msg, [parent_idx[i] for i in sub], sig)
                    assert child == direct
                    assert len(child.path) == len(required_by_spans(n, child.indices))
