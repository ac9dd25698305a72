import itertools

import pytest
from hypothesis import given, strategies as st

from stoptime import tree
from stoptime.tree import (are_compatible, check_prefix_free, find_prefix_pair, is_prefix,
                           path_to_root, require_prefix_free)

from strategies import bits


@pytest.mark.parametrize("a,b,want", [("0", "01", True), ("01", "0", False), ("", "1", True)])
def test_is_prefix_examples(a, b, want):
    assert is_prefix(a, b) is want


@pytest.mark.parametrize("a,b,want", [("0", "01", True), ("0", "1", False), ("10", "10", True)])
def test_are_compatible_examples(a, b, want):
    assert are_compatible(a, b) is want


@pytest.mark.parametrize("s,want", [({"0", "10", "11"}, True), ({"0", "01"}, False), (set(), True)])
def test_check_prefix_free_examples(s, want):
    assert check_prefix_free(s) is want


@pytest.mark.parametrize("v,want", [("10", ["10", "1", ""]), ("", [""]), ("0", ["0", ""])])
def test_path_to_root_examples(v, want):
    assert path_to_root(v) == want


def _pairwise(s):
    return not any(a != b and b.startswith(a) for a in s for b in s)


SHORT = list(tree.all_strings(4))


@given(st.sets(st.sampled_from(SHORT), max_size=6))
def test_prefix_free_matches_pairwise(s):
    assert check_prefix_free(s) == _pairwise(s)
    pair = find_prefix_pair(s)
    assert (pair is None) == _pairwise(s)
    if pair:
        assert pair[1].startswith(pair[0]) and pair[0] != pair[1]


def test_prefix_order_axioms_exhaustive():
    strings = list(tree.all_strings(5))
    for a in strings:
        assert is_prefix(a, a)
    for a, b in itertools.product(strings, repeat=2):
        if is_prefix(a, b) and is_prefix(b, a):
            assert a == b
    short = list(tree.all_strings(3))
    for a, b, c in itertools.product(short, repeat=3):
        if is_prefix(a, b) and is_prefix(b, c):
            assert is_prefix(a, c)


def test_require_prefix_free_names_the_pair():
    with pytest.raises(tree.NotPrefixFreeError) as err:
        require_prefix_free(["1", "10"])
    assert (err.value.shorter, err.value.longer) == ("1", "10")


def test_depth_max_env(monkeypatch):
    monkeypatch.delenv(tree.DEPTH_ENV_VAR, raising=False)
    assert tree.depth_max() == 16
    monkeypatch.setenv(tree.DEPTH_ENV_VAR, "20")
    assert tree.depth_max() == 20
    tree.check_vertex("0" * 20)
    with pytest.raises(ValueError):
        tree.check_vertex("0" * 21)


def test_check_bits_rejects_other_characters():
    with pytest.raises(ValueError):
        tree.check_bits("012")


@given(bits(8))
def test_field_codec_roundtrip(s):
    assert tree.decode_field(tree.encode_field(s)) == s


@given(bits(6))
def test_path_and_parent_sibling(v):
    path = path_to_root(v)
    assert len(path) == len(v) + 1 and path[-1] == ""
    if v:
        assert tree.parent(v) == path[1]
        assert tree.sibling(tree.sibling(v)) == v
        assert tree.parent(tree.sibling(v)) == tree.parent(v)


def test_extensions_counts():
    assert sorted(tree.extensions("1", 3)) == ["100", "101", "110", "111"]
    assert len(list(tree.extensions_up_to("", 3))) == 15
