import pytest
from hypothesis import given, strategies as st

from stoptime import modes as md
from stoptime.tree import all_strings, check_prefix_free, is_prefix

from strategies import triples

DEPTH = 4


def mode(ts, depth=DEPTH):
    return md.make_mode(ts, depth)


valid_modes = st.lists(triples(3, DEPTH), max_size=12).map(lambda s: md.trim_to_mode(s, DEPTH))


# -- examples ---------------------------------------------------------------

def test_validate_examples():
    assert md.validate_mode(mode([("0", "1", "11")])) == []
    assert md.validate_mode(mode([])) == []
    report = md.validate_mode(mode([("0", "1", "11"), ("0", "10", "00")]))
    assert len(report) == 1
    assert {report[0].first, report[0].second} == {("0", "1", "11"), ("0", "10", "00")}


def test_trim_examples():
    assert md.trim_to_mode([("0", "1", "11")], DEPTH).triples == {("0", "1", "11")}
    assert md.trim_to_mode([("0", "1", "11"), ("0", "10", "00")], DEPTH).triples == {("0", "1", "11")}
    assert md.trim_to_mode([("0", "10", "00"), ("0", "1", "11")], DEPTH).triples == {("0", "10", "00")}


def test_complexity_monotone_examples():
    assert md.complexity_monotone(mode([("", "", "1")]), "1", "0110") == 0
    assert md.complexity_monotone(mode([("0", "1", "1"), ("00", "0", "0")]), "1", "11") == 1
    assert md.complexity_monotone(mode([("0", "1", "1")]), "0", "1") is None


def test_complexity_plain_examples():
    assert md.complexity_plain(mode([("0", "1", "1")]), "1", "1") == 1
    assert md.complexity_plain(mode([("0", "1", "1")]), "1", "11") is None
    assert md.complexity_plain(mode([("", "0", "1"), ("00", "0", "1")]), "1", "0") == 0


def test_join_examples():
    assert md.join_modes([mode([("", "", "1")])]).triples == {("1", "", "1")}
    assert md.join_modes([mode([]), mode([("0", "1", "1")])]).triples == {("010", "1", "1")}
    assert md.join_modes([]).triples == frozenset()


def test_to_length_examples():
    enc = lambda n: md.encode_length(n, DEPTH)
    out, dropped = md.to_length_mode(mode([("0", "11", "11")]))
    assert out.triples == {("0", "11", enc(2))} and dropped == []
    out, dropped = md.to_length_mode(mode([("0", "1", "1"), ("0", "11", "0")]))
    assert out.triples == {("0", "1", enc(1)), ("0", "11", enc(1))} and dropped == []
    assert md.to_length_mode(mode([]))[0].triples == frozenset()


def test_from_length_examples():
    enc = lambda n: md.encode_length(n, 3)
    back = md.from_length_mode(mode([("0", "11", enc(1))], 3))
    assert ("0", "11", "1") in back.triples
    back = md.from_length_mode(mode([("0", "1", enc(2))], 3))
    assert back.triples == {("0", "10", "10"), ("0", "11", "11")}
    assert md.from_length_mode(mode([])).triples == frozenset()


def test_families_examples():
    assert md.mode_to_families(mode([("0", "1", "1"), ("0", "0", "0")])) == {"0": {"0", "1"}}
    assert md.mode_to_families(mode([("0", "1", "1")])) == {"0": {"1"}}
    assert md.mode_to_families(mode([])) == {}
    assert md.families_to_mode({"0": ["1"]}, DEPTH).triples == {("0", "1", "1")}
    assert md.families_to_mode({"0": ["1", "00"]}, DEPTH).triples == {("0", "1", "1"), ("0", "00", "00")}
    assert md.families_to_mode({}, DEPTH).triples == frozenset()
    with pytest.raises(ValueError):
        md.families_to_mode({"0": ["1", "10"]}, DEPTH)


def test_length_code_is_fixed_width():
    assert [md.encode_length(n, 4) for n in (0, 4)] == ["000", "100"]
    assert md.decode_length("100", 4) == 4
    with pytest.raises(ValueError):
        md.encode_length(8, 4)


def test_mode_file_roundtrip(tmp_path):
    m = mode([("", "", "1"), ("01", "1", ""), ("1", "10", "0")])
    path = tmp_path / "m.tsv"
    md.write_mode(m, path)
    assert md.read_mode(path) == m
    triples_, depth = md.loads_triples("# depth=3\n0\t-\t1\n\n1 0 -\n")
    assert triples_ == [("0", "", "1"), ("1", "0", "")] and depth == 3
    with pytest.raises(ValueError):
        md.loads_triples("0\t1\n")


# -- properties -------------------------------------------------------------

@given(valid_modes)
def test_trimmed_streams_are_valid(m):
    assert md.is_valid(m)


@given(valid_modes, st.sampled_from(list(all_strings(DEPTH))))
def test_monotone_in_condition(m, x):
    for y in m.objects():
        c = md.complexity_monotone(m, y, x)
        for x2 in all_strings(DEPTH):
            if is_prefix(x, x2):
                c2 = md.complexity_monotone(m, y, x2)
                assert c is None or (c2 is not None and c2 <= c)


@given(valid_modes)
def test_monotone_at_least_plain_on_closure(m):
    cl = md.closure(m)
    for y in m.objects():
        for x in all_strings(DEPTH):
            mono = md.complexity_monotone(m, y, x)
            plain = md.complexity_plain(cl, y, x)
            assert mono == plain  # closure realises exactly the prefix semantics
            assert plain is None or mono is not None and mono >= plain


@given(valid_modes)
def test_families_roundtrip_keeps_diagonal(m):
    fams = md.mode_to_families(m)
    assert all(check_prefix_free(s) for s in fams.values())
    back = md.families_to_mode(fams, DEPTH)
    assert md.diagonal_complexities(back) == md.diagonal_complexities(m)
    for x in all_strings(DEPTH):
        assert md.complexity_monotone(back, x, x) == md.complexity_monotone(m, x, x)


@given(st.lists(triples(3, DEPTH), max_size=12))
def test_trim_idempotent(stream):
    once = md.trim_to_mode(stream, DEPTH)
    assert md.trim_to_mode(list(once), DEPTH) == once


@given(st.lists(triples(3, DEPTH), max_size=10), st.randoms(use_true_random=False))
def test_trim_order_matters_only_on_conflicts(stream, rnd):
    if md.is_valid(mode(stream)):
        shuffled = list(stream)
        rnd.shuffle(shuffled)
        assert md.trim_to_mode(shuffled, DEPTH) == md.trim_to_mode(stream, DEPTH)


@given(st.lists(valid_modes, max_size=3), st.sampled_from(list(all_strings(3))),
       st.sampled_from(list(all_strings(DEPTH))))
def test_join_shift_is_exact(ms, y, x):
    joined = md.join_modes(ms)
    assert md.is_valid(joined)
    expected = [md.complexity_monotone(mm, y, x) for mm in ms]
    expected = [c + i + 1 for i, c in enumerate(expected) if c is not None]
    assert md.complexity_monotone(joined, y, x) == min(expected, default=None)


@given(valid_modes)
def test_length_mode_inequality(m):
    lm, dropped = md.to_length_mode(m)
    assert dropped == [] and md.is_valid(lm)
    for x, c in md.diagonal_complexities(m).items():
        cl = md.complexity_monotone(lm, md.encode_length(len(x), DEPTH), x)
        assert cl is not None and cl <= c
    back = md.from_length_mode(lm)
    assert md.is_valid(back)
    for x in all_strings(DEPTH):
        c = md.complexity_monotone(lm, md.encode_length(len(x), DEPTH), x)
        if c is not None:
            cb = md.complexity_monotone(back, x, x)
            assert cb is not None and cb <= c
