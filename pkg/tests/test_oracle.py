import random

from hypothesis import given, strategies as st

from stoptime import modes as md
from stoptime import oracle as orc
from stoptime.tree import all_strings
from stoptime.verify import random_mode


def mode(ts, depth=3):
    return md.make_mode(ts, depth)


TWO = mode([("0", "00", "0"), ("1", "01", "0")], 2)


def test_describes_with_oracle_examples():
    d = mode([("0", "00", "0")])
    assert orc.describes_with_oracle(d, "0", "0") == {"00"}
    assert orc.describes_with_oracle(d, "1", "0") == set()
    d2 = mode([("0", "00", "0"), ("0", "01", "0")])
    assert orc.describes_with_oracle(d2, "0", "0") == {"00", "01"}


def test_covered_below_examples():
    assert orc.covered_below(mode([("", "", "0")]), "0", 1)
    assert orc.covered_below(TWO, "0", 2, horizon=2)
    assert not orc.covered_below(TWO, "0", 1, horizon=2)


def test_max_over_extensions_examples():
    assert orc.max_over_extensions(mode([("", "", "0")]), "0") == 0
    assert orc.max_over_extensions(TWO, "0") == 1
    assert orc.max_over_extensions(mode([("0", "00", "0")]), "0") is None


def test_oracle_inequality_examples():
    assert orc.check_oracle_inequality(mode([("", "", "0")]), "0")
    assert orc.check_oracle_inequality(TWO, "0")
    assert md.complexity_monotone(TWO, "0", "0") is None
    assert orc.check_oracle_inequality(mode([("0", "0", "0")]), "0")


def test_cardinality_examples():
    assert orc.cardinality_check_oracle(mode([]))
    assert orc.cardinality_check_oracle(mode([("", "", "0")]))


def test_covers_structural():
    assert orc.covers(["0", "1"], "", 3)
    assert not orc.covers(["0", "10"], "", 3)
    assert orc.covers(["0", "10", "11"], "", 3)
    assert orc.CylinderCover(frozenset({"00", "01"}), 2).covers("0")


def test_finite_extension_variant_runs():
    d = mode([("0", "0", "0"), ("1", "00", "0"), ("1", "01", "0")], 2)
    assert orc.max_over_finite_extensions(d, "0") == 1
    assert orc.max_over_finite_extensions(TWO, "0") is None


def test_condition_override():
    # oracles through "00" all have the 1-bit description
    assert orc.max_over_extensions(TWO, "0", condition="00") == 1
    assert orc.max_over_extensions(mode([("0", "00", "0")], 2), "0", condition="00") == 1


def _mode(seed):
    rng = random.Random(seed)
    return random_mode(rng, rng.randint(1, 6))


modes = st.integers(0, 2**32).map(_mode)


@given(modes)
def test_exact_half_and_brute_agreement(d):
    assert md.is_valid(d)
    for x in all_strings(d.depth):
        got = orc.max_over_extensions(d, x)
        assert got == orc.brute_max_over_extensions(d, x)
        assert orc.check_oracle_inequality(d, x)
    assert orc.cardinality_check_oracle(d)


@given(modes, st.data())
def test_coverage_monotone_in_horizon(d, data):
    x = data.draw(st.sampled_from(list(all_strings(d.depth))))
    n = data.draw(st.integers(0, 6))
    hs = range(len(x), d.depth + 1)
    seen = False
    for h in hs:
        cov = orc.covered_below(d, x, n, horizon=h)
        assert cov or not seen
        seen = seen or cov
