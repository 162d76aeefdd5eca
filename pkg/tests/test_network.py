from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from relaynet.network import (
    FIG2,
    HalfDuplex,
    InvalidNetworkError,
    NetworkFileError,
    NetworkSpec,
    dumps,
    expand,
    halfduplex_factors,
    loads,
    parse_fraction,
    validate,
)

FIG2_TEXT = "pairs 2\ngains 1 up 3 2 down 2 3\ngains 2 up 2 1 down 1 2\nmode full\n"


def test_fig2_is_valid():
    assert validate(FIG2).ok
    assert FIG2.uplink == (3, 2, 2, 1)
    assert FIG2.downlink == (2, 3, 1, 2)
    assert (FIG2.q_up, FIG2.q_down) == (3, 3)


def test_validate_reports_problems():
    report = validate(NetworkSpec((), (), (), ()))
    assert not report.ok and any("pair count" in p for p in report.problems)
    report = validate(NetworkSpec.from_pairs([(3, -1, 2, 2)]))
    assert not report.ok and any("negative gain" in p for p in report.problems)
    report = validate(NetworkSpec.from_pairs([(1, 1, 1, 1)], HalfDuplex(Fraction(1))))
    assert not report.ok and any("listen fraction" in p for p in report.problems)


def test_zero_gains_are_legal():
    assert validate(NetworkSpec.from_pairs([(0, 0, 0, 0)])).ok
    assert NetworkSpec.from_pairs([(0, 0, 0, 0)]).q_up == 0


def test_expand():
    big = expand(FIG2, 2, 2)
    assert big.uplink == (6, 4, 4, 2)
    assert big.downlink == (4, 6, 2, 4)
    assert expand(FIG2, 1, 1) == FIG2
    half = NetworkSpec(FIG2.up_a, FIG2.up_b, FIG2.down_a, FIG2.down_b, HalfDuplex(Fraction(1, 2)))
    listen, transmit = halfduplex_factors(half.mode.t, 2)
    assert (listen, transmit) == (1, 1)
    assert expand(half, listen, transmit) == FIG2
    with pytest.raises(ValueError):
        expand(FIG2, 0, 1)
    with pytest.raises(InvalidNetworkError):
        expand(NetworkSpec.from_pairs([(-1, 0, 0, 0)]), 1, 1)


gains = st.lists(st.tuples(*[st.integers(0, 5)] * 4), min_size=1, max_size=3)


@given(gains, st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_expand_composes(rows, a, b, c, d):
    s = NetworkSpec.from_pairs(rows)
    assert expand(expand(s, a, b), c, d) == expand(s, a * c, b * d)


@given(gains, st.integers(1, 5))
def test_expand_scales_ambient(rows, Q):
    s = NetworkSpec.from_pairs(rows)
    assert expand(s, Q, Q).q_up == Q * s.q_up


def test_file_round_trip():
    assert loads(FIG2_TEXT) == FIG2
    assert loads(dumps(FIG2)) == FIG2
    text = "# comment\npairs 1  # one pair\n\ngains 1 up 2 2 down 6 6\nmode half 3/4\n"
    spec = loads(text)
    assert spec.mode == HalfDuplex(Fraction(3, 4))
    assert loads(dumps(spec)) == spec


@pytest.mark.parametrize(
    "text",
    [
        "",
        "pairs x\nmode full\n",
        "pairs 1\nmode full\n",
        "pairs 1\ngains 1 up 2 2 down 2\nmode full\n",
        "pairs 1\ngains 2 up 2 2 down 2 2\nmode full\n",
        "pairs 1\ngains 1 up 2 2 down 2 2\nmode half 0.5\n",
        "pairs 1\ngains 1 up 2 2 down 2 2\nmode duplex\n",
    ],
)
def test_file_errors(text):
    with pytest.raises(NetworkFileError):
        loads(text)


def test_negative_gain_parses_but_fails_validation():
    spec = loads("pairs 1\ngains 1 up -1 2 down 2 2\nmode full\n")
    assert not validate(spec).ok


def test_parse_fraction():
    assert parse_fraction("3/4") == Fraction(3, 4)
    assert parse_fraction("2") == 2
    with pytest.raises(ValueError):
        parse_fraction("0.5")
