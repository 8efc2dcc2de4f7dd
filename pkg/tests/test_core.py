import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcbribery import (
    FORBIDDEN,
    AtomicAction,
    BriberyInstance,
    ElectionError,
    InfeasibleActionError,
    InvalidActionError,
    Op,
    ParseError,
    PriceTable,
    Rational,
    apply_action,
    apply_actions,
    candidate_types,
    make_election,
    parse_election,
    parse_solution,
    serialize_election,
    solution_cost,
)
from abcbribery.core import format_action
from abcbribery.rules import av_scores

from helpers import random_sized_election
from abcbribery.generators import Stream64


def test_parse_e0(e0_text, e0):
    election, prices, k = parse_election(e0_text)
    assert election == e0
    assert k == 2
    assert av_scores(election) == [7, 5, 4, 1]
    assert prices == PriceTable()


def test_parse_no_voters():
    election, _, k = parse_election("candidates: a b\n")
    assert election.n == 0
    assert k is None
    assert av_scores(election) == [0, 0]


def test_parse_price_override(e0_text):
    election, prices, _ = parse_election(e0_text + "swapprice v1 b p 5\n")
    assert prices.swap_price(0, 1, 3) == 5
    assert prices.swap_price(0, 1, 2) == 1
    assert prices.add_price(0, 3) == 1


def test_parse_inf_price(e0_text):
    _, prices, _ = parse_election(e0_text + "addprice v1 p inf\n")
    assert prices.add_price(0, 3) == FORBIDDEN


@pytest.mark.parametrize(
    "text,line",
    [
        ("candidates: a a b\n", 1),
        ("candidates: a b\nvoter v1: a\nvoter v1: b\n", 3),
        ("candidates: a b\nvoter v1: a z\n", 2),
        ("candidates: a b\nvoter v1: a\naddprice v1 z 2\n", 3),
        ("candidates: a b\nvoter v1: a\naddprice v2 a 2\n", 3),
        ("candidates: a b\nvoter v1: a\naddprice v1 a -2\n", 3),
        ("candidates: a b\nnonsense line\n", 2),
        ("candidates: a b\nk: zero\n", 2),
        ("voter v1: a\n", 1),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_election(text)
    assert err.value.line_no == line


def test_apply_swap_e0(e0):
    swapped = apply_action(e0, AtomicAction(Op.SWAP, 5, source=2, target=3))
    assert swapped.ballots[5].approved == frozenset({0, 3})
    assert av_scores(swapped) == [7, 5, 3, 2]
    # original untouched
    assert av_scores(e0) == [7, 5, 4, 1]


def test_apply_add_existing_is_error(e0):
    with pytest.raises(InvalidActionError):
        apply_action(e0, AtomicAction(Op.ADD, 0, target=0))


def test_apply_double_delete(e0):
    cur = apply_actions(
        e0,
        [
            AtomicAction(Op.DELETE, 1, source=1),
            AtomicAction(Op.DELETE, 1, source=2),
        ],
    )
    assert cur.ballots[1].approved == frozenset()
    scores = av_scores(cur)
    assert scores[1] == 4 and scores[2] == 3


def test_apply_swap_preconditions(e0):
    with pytest.raises(InvalidActionError):
        apply_action(e0, AtomicAction(Op.SWAP, 2, source=1, target=3))  # v3 lacks b
    with pytest.raises(InvalidActionError):
        apply_action(e0, AtomicAction(Op.SWAP, 6, source=1, target=3))  # v7 has p


def test_solution_cost_unit_and_priced(e0):
    swaps = [
        AtomicAction(Op.SWAP, 0, source=1, target=3),
        AtomicAction(Op.SWAP, 1, source=1, target=3),
        AtomicAction(Op.SWAP, 5, source=2, target=3),
    ]
    assert solution_cost(swaps, PriceTable()) == 3
    assert solution_cost([], PriceTable()) == 0
    priced = PriceTable(add={(0, 3): 4, (1, 3): 7})
    adds = [AtomicAction(Op.ADD, 0, target=3), AtomicAction(Op.ADD, 1, target=3)]
    assert solution_cost(adds, priced) == 11


def test_solution_cost_forbidden(e0):
    prices = PriceTable(add={(0, 3): FORBIDDEN})
    with pytest.raises(InfeasibleActionError):
        solution_cost([AtomicAction(Op.ADD, 0, target=3)], prices)


def test_candidate_types_e0(e0):
    groups = candidate_types(e0)
    assert len(groups) == 4
    assert all(len(members) == 1 for members in groups.values())


def test_candidate_types_merge():
    e = make_election(["a", "b", "c"], [("v1", ["a", "b"]), ("v2", ["a", "b", "c"])])
    groups = candidate_types(e)
    assert sorted(map(sorted, groups.values())) == [[0, 1], [2]]


def test_candidate_types_no_voters():
    e = make_election(["a", "b", "c"], [])
    groups = candidate_types(e)
    assert list(groups) == [frozenset()]
    assert sorted(groups[frozenset()]) == [0, 1, 2]


def test_instance_validation(e0):
    with pytest.raises(ElectionError):
        BriberyInstance(e0, 3, 2, 3, Op.DELETE, restricted_to_p=True)
    with pytest.raises(ElectionError):
        BriberyInstance(e0, 3, 0, 3, Op.ADD)
    with pytest.raises(ElectionError):
        BriberyInstance(e0, 3, 2, -1, Op.ADD)
    with pytest.raises(ElectionError):
        BriberyInstance(e0, 3, 2, 3, Op.ADD, priced=False,
                        prices=PriceTable(add={(0, 3): 2}))


def test_price_validation():
    with pytest.raises(ElectionError):
        PriceTable(add={(0, 0): -1})
    with pytest.raises(ElectionError):
        PriceTable(swap={(0, 0, 1): 1.5})


def test_solution_roundtrip(e0):
    actions = [
        AtomicAction(Op.SWAP, 0, source=1, target=3),
        AtomicAction(Op.ADD, 2, target=3),
        AtomicAction(Op.DELETE, 1, source=1),
    ]
    text = "\n".join(["# witness"] + [format_action(e0, a) for a in actions])
    assert parse_solution(text, e0) == actions


def test_parse_solution_errors(e0):
    with pytest.raises(ParseError):
        parse_solution("add v1\n", e0)
    with pytest.raises(ParseError):
        parse_solution("add v1 zz\n", e0)


# --- properties ---------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_roundtrip_serialize_parse(seed):
    stream = Stream64(seed)
    e = random_sized_election(stream, 6, 6)
    parsed, _, _ = parse_election(serialize_election(e))
    assert parsed == e


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_swap_preserves_ballot_sizes(seed):
    stream = Stream64(seed)
    e = random_sized_election(stream, 5, 5)
    v = stream.randint(0, e.n - 1)
    approved = e.ballots[v].approved
    outside = [c for c in range(e.m) if c not in approved]
    if not approved or not outside:
        return
    source = sorted(approved)[stream.randint(0, len(approved) - 1)]
    target = outside[stream.randint(0, len(outside) - 1)]
    swapped = apply_action(e, AtomicAction(Op.SWAP, v, source=source, target=target))
    for before, after in zip(e.ballots, swapped.ballots):
        assert len(before.approved) == len(after.approved)


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_add_then_delete_restores(seed):
    stream = Stream64(seed)
    e = random_sized_election(stream, 5, 5)
    v = stream.randint(0, e.n - 1)
    outside = [c for c in range(e.m) if c not in e.ballots[v].approved]
    if not outside:
        return
    c = outside[stream.randint(0, len(outside) - 1)]
    back = apply_actions(
        e, [AtomicAction(Op.ADD, v, target=c), AtomicAction(Op.DELETE, v, source=c)]
    )
    assert back == e


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10**9), count=st.integers(0, 8))
def test_unit_cost_counts_actions(seed, count):
    stream = Stream64(seed)
    e = random_sized_election(stream, 5, 5)
    actions = []
    cur = e
    for _ in range(count):
        v = stream.randint(0, cur.n - 1)
        outside = [c for c in range(cur.m) if c not in cur.ballots[v].approved]
        if not outside:
            continue
        c = outside[stream.randint(0, len(outside) - 1)]
        a = AtomicAction(Op.ADD, v, target=c)
        cur = apply_action(cur, a)
        actions.append(a)
    assert solution_cost(actions, PriceTable()) == len(actions)


@settings(max_examples=300, deadline=None)
@given(
    a=st.integers(-(2**63), 2**63), b=st.integers(1, 2**63),
    c=st.integers(-(2**63), 2**63), d=st.integers(1, 2**63),
)
def test_rational_arithmetic(a, b, c, d):
    x = Rational(a, b)
    y = Rational(c, d)
    total = x + y
    assert math.gcd(total.numerator, total.denominator) == 1
    assert total.denominator > 0
    assert (x < y) == (a * d < c * b)
    assert x == Rational(a, b)
    assert total == Fraction(a * d + c * b, b * d)
