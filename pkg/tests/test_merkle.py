import math
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from testkit import (
    FOX, GOLDEN_ABCDE_ROOT, GOLDEN_FOX_ROOT, GOLDEN_LEAF_THE, attack_message, heap_leaf_order,
    sha256, unmasked_build_tree,
)

from quotesig.errors import EmptyMessageError
from quotesig.hashing import CountingHash, get_hash
from quotesig.merkle import (
    build_skeleton, build_tree, leaf_hash, node_coords, node_hash, node_id, root_digest, split_point,
)


@pytest.mark.parametrize("length, expected", [(8, (4, 4)), (7, (4, 3)), (5, (3, 2)), (6, (4, 2)),
                                              (2, (1, 1)), (3, (2, 1)), (12, (8, 4))])
def test_split_point(length, expected):
    assert split_point(length) == expected


@pytest.mark.parametrize("length", [3, 6, 12, 24, 48])
def test_split_tie_branches_agree(length):
    lo = 1 << (length.bit_length() - 1)
    assert 2 * lo - length == length - lo
    assert (lo, length - lo) == (length - lo // 2, lo // 2) == split_point(length)


def test_split_point_domain():
    with pytest.raises(ValueError):
        split_point(1)


def heap_subtree_leaf_counts(n):
    order = heap_leaf_order(n)

    def count(v):
        return sum(1 for leaf in order if leaf >> (leaf.bit_length() - v.bit_length()) == v)

    return count(2), count(3)


@pytest.mark.parametrize("length", range(2, 200))
def test_split_point_matches_heap(length):
    left, right = split_point(length)
    assert left + right == length and left >= right
    # one side is always a full subtree
    assert left & (left - 1) == 0 or right & (right - 1) == 0
    assert (left, right) == heap_subtree_leaf_counts(length)


@pytest.mark.parametrize("n", list(range(1, 300)) + [1000, 1023, 1024, 1025, 4095, 4096])
def test_leaf_positions_match_array_heap(n):
    tree = build_skeleton(n)
    assert [tree.leaf_node(i) for i in range(n)] == heap_leaf_order(n)


@lru_cache(maxsize=None)
def depth_profile(length):
    """(shallowest leaf depth, deepest, number of deepest leaves, deepest leaves form a left prefix)."""
    if length == 1:
        return 0, 0, 1, True
    left, right = split_point(length)
    lmin, lmax, lcount, lpre = depth_profile(left)
    rmin, rmax, rcount, rpre = depth_profile(right)
    dmax = max(lmax, rmax)
    if lmax == rmax:
        prefix = lpre and rpre and lcount == left  # left side all deepest
        count = lcount + rcount
    elif lmax > rmax:
        prefix, count = lpre, lcount
    else:
        prefix, count = False, rcount
    return min(lmin, rmin) + 1, dmax + 1, count, prefix


def test_heap_shape_up_to_4096():
    for n in range(1, 4097):
        dmin, dmax, _, prefix = depth_profile(n)
        assert dmax - dmin <= 1, n
        assert prefix, n
        assert dmax == math.ceil(math.log2(n)) if n > 1 else dmax == 0


def test_five_token_tree():
    tree = build_tree([b"a", b"b", b"c", b"d", b"e"])
    assert tree.span(2) == (0, 3) and tree.span(3) == (3, 5)
    assert tree.leaf_depths() == [3, 3, 2, 2, 2]
    assert root_digest(tree) == GOLDEN_ABCDE_ROOT


def test_fox_tree():
    tree = build_tree(FOX)
    assert tree.leaf_depths() == [3] * 8
    assert [tree.leaf_node(i) for i in range(8)] == [node_id(3, i) for i in range(8)]
    assert root_digest(tree) == GOLDEN_FOX_ROOT
    assert node_coords(13) == (3, 5)


def test_skeleton():
    assert build_skeleton(8).shape() == build_tree(FOX).shape()
    one = build_skeleton(1)
    assert one.is_leaf(1) and one.labels == {}
    six = build_skeleton(6)
    assert (len(range(*six.span(2))), len(range(*six.span(3)))) == (4, 2)
    with pytest.raises(EmptyMessageError):
        build_skeleton(0)


def test_single_token_root_is_leaf():
    tree = build_tree([b"jumps"])
    assert root_digest(tree) == leaf_hash(b"jumps")
    assert tree.node(1).children == (0,)


def test_empty_sequence():
    with pytest.raises(EmptyMessageError):
        build_tree([])


def test_leaf_hash():
    assert leaf_hash(b"The") == GOLDEN_LEAF_THE
    assert leaf_hash(b"the") != leaf_hash(b"dog")
    assert leaf_hash(b"the") == leaf_hash(b"the")
    assert leaf_hash(b"The") == sha256(b"\x00The")


def test_node_hash():
    a, b = leaf_hash(b"the"), leaf_hash(b"dog")
    assert node_hash(a, b) != node_hash(b, a)
    assert node_hash(a, b) == node_hash(a, b)
    # an internal node cannot pose as a leaf carrying its children's labels
    assert node_hash(a, b) != leaf_hash(a + b)


def test_permutation_changes_root():
    swapped = (FOX[1], FOX[0]) + FOX[2:]
    assert root_digest(build_tree(swapped)) != root_digest(build_tree(FOX))


def test_other_hashes():
    for hid in ("sha3-256", "blake2b-256", "sha-512/256"):
        tree = build_tree(FOX, hid)
        assert tree.hash_id == hid and len(root_digest(tree)) == get_hash(hid).digest_size
        assert root_digest(tree) != GOLDEN_FOX_ROOT


@pytest.mark.parametrize("n", [1, 2, 3, 7, 8, 100, 1000])
def test_build_hash_count(n):
    counter = CountingHash()
    build_tree([b"x%d" % i for i in range(n)], counter)
    assert counter.count == 2 * n - 1


@given(st.lists(st.binary(min_size=1, max_size=5), min_size=1, max_size=40))
def test_deterministic(tokens):
    assert root_digest(build_tree(tokens)) == root_digest(build_tree(list(tokens)))


def test_second_preimage_regression():
    forged = attack_message()
    assert len(forged) == 7
    assert unmasked_build_tree(forged) == unmasked_build_tree(FOX)
    assert root_digest(build_tree(forged)) != root_digest(build_tree(FOX))


def test_unmasked_builder_is_build_tree_without_masks():
    tokens = [b"a", b"b", b"c", b"d", b"e"]
    remasked = unmasked_build_tree(
        tokens, leaf=lambda t: sha256(b"\x00" + t), node=lambda d: sha256(b"\x01" + d)
    )
    assert remasked == GOLDEN_ABCDE_ROOT == root_digest(build_tree(tokens))
