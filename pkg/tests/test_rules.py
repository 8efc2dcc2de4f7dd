import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcbribery import (
    AtomicAction,
    Op,
    ResourceGuardError,
    Rule,
    apply_actions,
    av_scores,
    ccav_coverage,
    gav_committee,
    is_cowinner,
    make_election,
    pav_score,
    rav_committee,
    rav_marginals,
    sav_scores,
    type_cowinner_ccav_gav,
    winning_committees,
)
from abcbribery.generators import Stream64

from helpers import random_sized_election


def test_av_scores(e0):
    assert av_scores(e0) == [7, 5, 4, 1]


def test_av_scores_trivial():
    assert av_scores(make_election(["a", "b"], [])) == [0, 0]
    assert av_scores(make_election(["a", "b"], [("v1", ["a", "b"])])) == [1, 1]


def test_sav_scores_e0(e0):
    # Hand-derived: a = 1/3 + 1 + 1/2 + 1/2 + 1/2 + 1 + 1, b = 1/3+1/2+1/2+1/2+1/3,
    # c = 1/3+1/2+1/2+1/3, p = 1/3; the four sum to the 9 nonempty ballots.
    scores = sav_scores(e0)
    assert scores == [Fraction(29, 6), Fraction(13, 6), Fraction(5, 3), Fraction(1, 3)]
    assert sum(scores) == 9


def test_sav_single_voter():
    e = make_election(["a", "b"], [("v1", ["a", "b"])])
    assert sav_scores(e) == [Fraction(1, 2), Fraction(1, 2)]


def test_ccav_coverage(e0):
    assert ccav_coverage(e0, frozenset({0, 1})) == 9
    assert ccav_coverage(e0, frozenset({3, 2})) == 4
    empty_hitting = make_election(["a", "b"], [("v1", ["a"])])
    assert ccav_coverage(empty_hitting, frozenset({1})) == 0


def test_pav_score(e0):
    pair = make_election(["a", "b"], [("v1", ["a", "b"])])
    assert pav_score(pair, frozenset({0, 1})) == Fraction(3, 2)
    assert pav_score(e0, frozenset({0, 1})) == Fraction(21, 2)
    disjoint = make_election(["a", "b"], [("v1", ["a"])])
    assert pav_score(disjoint, frozenset({1})) == 0


def test_gav_committee(e0):
    assert gav_committee(e0, 2) == frozenset({0, 1})
    assert gav_committee(e0, 4) == frozenset({0, 1, 2, 3})
    e = make_election(["a", "b", "c"], [("v1", ["c"])])
    assert gav_committee(e, 1) == frozenset({2})


def test_rav_committee(e0):
    assert rav_marginals(e0, frozenset({0})) == [
        Fraction(0), Fraction(7, 2), Fraction(3), Fraction(1)]
    assert rav_committee(e0, 2) == frozenset({0, 1})
    # one round of RAV is an AV argmax
    assert rav_committee(e0, 1) == frozenset({0})


def test_rav_disjoint_ballots_matches_av_winners():
    # With pairwise-disjoint ballots every approved candidate has AV score
    # exactly 1, and RAV keeps preferring approved candidates, so its
    # committee is always one of the AV tie completions.
    stream = Stream64(99)
    for _ in range(40):
        m = stream.randint(2, 6)
        n = stream.randint(1, min(m, 5))
        names = [f"c{i}" for i in range(m)]
        blocks = [[] for _ in range(n)]
        for c in range(m):
            blocks[stream.randint(0, n - 1)].append(names[c])
        e = make_election(names, [(f"v{i}", blocks[i]) for i in range(n)])
        k = stream.randint(1, m)
        assert rav_committee(e, k) in winning_committees(e, Rule.AV, k)


def test_winning_committees_av(e0):
    assert winning_committees(e0, Rule.AV, 2) == {frozenset({0, 1})}


def test_winning_committees_tie():
    e = make_election(["a", "b"], [("v1", ["a", "b"])])
    assert winning_committees(e, Rule.AV, 1) == {frozenset({0}), frozenset({1})}


def test_winning_committees_ccav(e0):
    assert winning_committees(e0, Rule.CCAV, 1) == {frozenset({0})}


def test_winning_committees_guard(e0):
    with pytest.raises(ResourceGuardError):
        winning_committees(e0, Rule.PAV, 2, cap=3)


def test_streaming_survives_huge_tie_families():
    import itertools
    from abcbribery import iter_winning_committees

    # 40 candidates all tied: C(40, 20) committees, streamed without blowup
    e = make_election([f"c{i}" for i in range(40)],
                      [("v1", [f"c{i}" for i in range(40)])])
    first_three = list(itertools.islice(iter_winning_committees(e, Rule.AV, 20), 3))
    assert len(first_three) == 3
    assert all(len(w) == 20 for w in first_three)
    with pytest.raises(ResourceGuardError):
        winning_committees(e, Rule.AV, 20)
    # membership tests never materialize the family
    assert is_cowinner(e, Rule.AV, 20, 39)


def test_is_cowinner_av(e0):
    assert not is_cowinner(e0, Rule.AV, 2, 3)
    swaps = [
        AtomicAction(Op.SWAP, 0, source=1, target=3),
        AtomicAction(Op.SWAP, 1, source=1, target=3),
        AtomicAction(Op.SWAP, 5, source=2, target=3),
    ]
    assert is_cowinner(apply_actions(e0, swaps), Rule.AV, 2, 3)


def test_is_cowinner_unique_max():
    e = make_election(["a", "p"], [("v1", ["p"]), ("v2", ["p", "a"])])
    for k in (1, 2):
        assert is_cowinner(e, Rule.AV, k, 1)


def test_is_cowinner_matches_committee_membership():
    stream = Stream64(5)
    for _ in range(60):
        e = random_sized_election(stream, 5, 5)
        k = stream.randint(1, e.m)
        for rule in Rule:
            committees = winning_committees(e, rule, k)
            for p in range(e.m):
                member = any(p in w for w in committees)
                assert is_cowinner(e, rule, k, p) == member, (rule, e, k, p)


def test_type_cowinner_large_committee():
    stream = Stream64(17)
    for _ in range(30):
        e = random_sized_election(stream, 6, 4)
        if e.m < e.n + 1:
            continue
        k = stream.randint(e.n + 1, e.m)
        for p in range(e.m):
            assert type_cowinner_ccav_gav(e, Rule.CCAV, k, p)


def test_type_cowinner_k_equals_n_boundary():
    # Two voters with disjoint singleton ballots: max coverage needs both
    # approved candidates, so p is in no optimal committee although k = n.
    e = make_election(["a", "b", "p"], [("v1", ["a"]), ("v2", ["b"])])
    assert not type_cowinner_ccav_gav(e, Rule.CCAV, 2, 2)
    assert not is_cowinner(e, Rule.CCAV, 2, 2)


def test_type_cowinner_matches_bruteforce(e0):
    assert type_cowinner_ccav_gav(e0, Rule.CCAV, 2, 3) == is_cowinner(e0, Rule.CCAV, 2, 3)
    stream = Stream64(23)
    for _ in range(120):
        e = random_sized_election(stream, 7, 5)
        k = stream.randint(1, e.m)
        for rule in (Rule.CCAV, Rule.GAV):
            for p in range(e.m):
                assert type_cowinner_ccav_gav(e, rule, k, p) == is_cowinner(e, rule, k, p)


def test_type_cowinner_single_type():
    e = make_election(["a", "b", "p"], [("v1", ["a", "b", "p"])])
    for p in range(3):
        assert type_cowinner_ccav_gav(e, Rule.CCAV, 1, p)


# --- guarantees and symmetry --------------------------------------------------


def _brute_best(e, k, objective):
    return max(objective(frozenset(combo))
               for combo in itertools.combinations(range(e.m), k))


def test_gav_coverage_guarantee():
    stream = Stream64(31)
    for _ in range(60):
        e = random_sized_election(stream, 8, 8)
        k = stream.randint(1, e.m)
        opt = _brute_best(e, k, lambda w: ccav_coverage(e, w))
        score = ccav_coverage(e, gav_committee(e, k))
        assert 2721 * (opt - score) <= 1001 * opt


def test_rav_score_guarantee():
    stream = Stream64(32)
    for _ in range(60):
        e = random_sized_election(stream, 8, 8)
        k = stream.randint(1, e.m)
        opt = _brute_best(e, k, lambda w: pav_score(e, w))
        score = pav_score(e, rav_committee(e, k))
        assert 2721 * (opt - score) <= 1001 * opt


def _greedy_has_tie(e, k, rule):
    from abcbribery.rules import _gav_from_approvers
    from abcbribery.core import approver_masks, ballot_masks

    if rule is Rule.GAV:
        approvers = approver_masks(e)
        covered = 0
        chosen = set()
        for _ in range(k):
            gains = {}
            for c in range(e.m):
                if c in chosen:
                    continue
                gains[c] = (approvers[c] & ~covered).bit_count()
            best = max(gains.values())
            winners = [c for c, g in gains.items() if g == best]
            if len(winners) > 1:
                return True
            chosen.add(winners[0])
            covered |= approvers[winners[0]]
        return False
    committee = frozenset()
    for _ in range(k):
        marginals = rav_marginals(e, committee)
        options = [c for c in range(e.m) if c not in committee]
        best = max(marginals[c] for c in options)
        winners = [c for c in options if marginals[c] == best]
        if len(winners) > 1:
            return True
        committee |= {winners[0]}
    return False


def test_candidate_permutation_symmetry():
    stream = Stream64(33)
    checked = 0
    while checked < 40:
        e = random_sized_election(stream, 5, 5)
        k = stream.randint(1, e.m)
        perm = list(range(e.m))
        for i in range(e.m - 1, 0, -1):
            j = stream.randint(0, i)
            perm[i], perm[j] = perm[j], perm[i]
        names = [f"c{i}" for i in range(e.m)]
        permuted = make_election(
            names,
            [(b.voter_name, [names[perm[c]] for c in sorted(b.approved)]) for b in e.ballots],
        )
        for rule in Rule:
            if rule in (Rule.GAV, Rule.RAV) and _greedy_has_tie(e, k, rule):
                continue
            before = winning_committees(e, rule, k)
            after = winning_committees(permuted, rule, k)
            assert {frozenset(perm[c] for c in w) for w in before} == after, rule
        checked += 1


def test_voter_permutation_symmetry():
    stream = Stream64(34)
    for _ in range(40):
        e = random_sized_election(stream, 5, 5)
        k = stream.randint(1, e.m)
        order = list(range(e.n))
        for i in range(e.n - 1, 0, -1):
            j = stream.randint(0, i)
            order[i], order[j] = order[j], order[i]
        names = [c.name for c in e.candidates]
        shuffled = make_election(
            names,
            [(f"w{i}", [names[c] for c in sorted(e.ballots[v].approved)])
             for i, v in enumerate(order)],
        )
        for rule in Rule:
            assert winning_committees(e, rule, k) == winning_committees(shuffled, rule, k)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_sav_point_conservation(seed):
    stream = Stream64(seed)
    e = random_sized_election(stream, 6, 6)
    nonempty = sum(1 for b in e.ballots if b.approved)
    assert sum(sav_scores(e), Fraction(0)) == nonempty
