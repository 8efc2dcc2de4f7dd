"""Scores, committees and co-winner tests for six approval-based rules.

AV and SAV are separable score rules; CCAV and PAV are optimization rules
solved exactly by guarded brute force at desk scale; GAV and RAV are greedy
rules made deterministic by breaking round ties toward the lowest candidate
index.  Everything fractional is an exact Rational.
"""

from __future__ import annotations

import functools
import itertools
from enum import Enum
from fractions import Fraction
from math import comb

from .core import (
    Election,
    ElectionError,
    ResourceGuardError,
    approver_masks,
    ballot_masks,
    candidate_types,
)

COMMITTEE_ENUM_CAP = 10**6


class Rule(Enum):
    AV = "av"
    SAV = "sav"
    CCAV = "ccav"
    GAV = "gav"
    PAV = "pav"
    RAV = "rav"


@functools.lru_cache(maxsize=None)
def _harmonic(t: int) -> Fraction:
    return _harmonic(t - 1) + Fraction(1, t) if t else Fraction(0)


def _check_k(e: Election, k: int):
    if not 1 <= k <= e.m:
        raise ElectionError(f"committee size {k} out of range 1..{e.m}")


def av_scores(e: Election) -> list[int]:
    """Number of approving voters per candidate."""
    scores = [0] * e.m
    for b in e.ballots:
        for c in b.approved:
            scores[c] += 1
    return scores


def sav_scores(e: Election) -> list[Fraction]:
    """Each voter splits one point equally among approved candidates."""
    scores = [Fraction(0)] * e.m
    for b in e.ballots:
        if b.approved:
            share = Fraction(1, len(b.approved))
            for c in b.approved:
                scores[c] += share
    return scores


def ccav_coverage(e: Election, committee: frozenset[int]) -> int:
    """Number of ballots approving at least one committee member."""
    return sum(1 for b in e.ballots if b.approved & committee)


def pav_score(e: Election, committee: frozenset[int]) -> Fraction:
    """Sum over voters of the harmonic number of their committee intersection."""
    total = Fraction(0)
    for b in e.ballots:
        total += _harmonic(len(b.approved & committee))
    return total


# --- mask-level implementations, shared with the brute-force oracle ---------


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _av_from_ballots(ballots: list[int], m: int) -> list[int]:
    scores = [0] * m
    for mask in ballots:
        for c in _iter_bits(mask):
            scores[c] += 1
    return scores


def _sav_from_ballots(ballots: list[int], m: int) -> list[Fraction]:
    scores = [Fraction(0)] * m
    for mask in ballots:
        size = mask.bit_count()
        if size:
            share = Fraction(1, size)
            for c in _iter_bits(mask):
                scores[c] += share
    return scores


def _approvers_from_ballots(ballots: list[int], m: int) -> list[int]:
    approvers = [0] * m
    for i, mask in enumerate(ballots):
        bit = 1 << i
        for c in _iter_bits(mask):
            approvers[c] |= bit
    return approvers


def _gav_from_approvers(approvers: list[int], k: int) -> list[int]:
    """Deterministic greedy coverage committee as an ordered pick list."""
    m = len(approvers)
    covered = 0
    picks: list[int] = []
    chosen = [False] * m
    for _ in range(k):
        best = -1
        best_gain = -1
        for c in range(m):
            if chosen[c]:
                continue
            gain = (approvers[c] & ~covered).bit_count()
            if gain > best_gain:
                best, best_gain = c, gain
        picks.append(best)
        chosen[best] = True
        covered |= approvers[best]
    return picks


def _rav_from_ballots(ballots: list[int], m: int, k: int) -> list[int]:
    picks: list[int] = []
    committee = 0
    for _ in range(k):
        marginals = [Fraction(0)] * m
        for mask in ballots:
            weight = Fraction(1, (mask & committee).bit_count() + 1)
            for c in _iter_bits(mask & ~committee):
                marginals[c] += weight
        best = -1
        best_gain = None
        for c in range(m):
            if committee >> c & 1:
                continue
            if best_gain is None or marginals[c] > best_gain:
                best, best_gain = c, marginals[c]
        picks.append(best)
        committee |= 1 << best
    return picks


def _coverage_objective(ballots: list[int]):
    def objective(committee_mask: int) -> int:
        return sum(1 for mask in ballots if mask & committee_mask)
    return objective


def _pav_objective(ballots: list[int]):
    def objective(committee_mask: int) -> Fraction:
        total = Fraction(0)
        for mask in ballots:
            total += _harmonic((mask & committee_mask).bit_count())
        return total
    return objective


def _score_cowinner(scores, k: int, p: int) -> bool:
    return sum(1 for s in scores if s > scores[p]) <= k - 1


def _is_cowinner_from_ballots(ballots: list[int], m: int, rule: Rule, k: int, p: int,
                              cap: int = COMMITTEE_ENUM_CAP) -> bool:
    if rule is Rule.AV:
        return _score_cowinner(_av_from_ballots(ballots, m), k, p)
    if rule is Rule.SAV:
        return _score_cowinner(_sav_from_ballots(ballots, m), k, p)
    if rule is Rule.GAV:
        return p in _gav_from_approvers(_approvers_from_ballots(ballots, m), k)
    if rule is Rule.RAV:
        return p in _rav_from_ballots(ballots, m, k)
    objective = _coverage_objective(ballots) if rule is Rule.CCAV else _pav_objective(ballots)
    if comb(m, k) > cap:
        raise ResourceGuardError(f"C({m},{k}) committees exceed the cap of {cap}")
    best_all = None
    best_with_p = None
    pbit = 1 << p
    for combo in itertools.combinations(range(m), k):
        mask = 0
        for c in combo:
            mask |= 1 << c
        value = objective(mask)
        if best_all is None or value > best_all:
            best_all = value
        if mask & pbit and (best_with_p is None or value > best_with_p):
            best_with_p = value
    return best_with_p == best_all


# --- public committee operations --------------------------------------------


def gav_committee(e: Election, k: int) -> frozenset[int]:
    """Greedy coverage committee, ties broken toward the lowest index."""
    _check_k(e, k)
    return frozenset(_gav_from_approvers(approver_masks(e), k))


def rav_committee(e: Election, k: int) -> frozenset[int]:
    """Greedy committee maximizing the harmonic (PAV) score round by round."""
    _check_k(e, k)
    return frozenset(_rav_from_ballots(ballot_masks(e), e.m, k))


def rav_marginals(e: Election, committee: frozenset[int]) -> list[Fraction]:
    """Harmonic-score gain of adding each candidate to the given committee."""
    cmask = 0
    for c in committee:
        cmask |= 1 << c
    marginals = [Fraction(0)] * e.m
    for mask in ballot_masks(e):
        weight = Fraction(1, (mask & cmask).bit_count() + 1)
        for c in _iter_bits(mask & ~cmask):
            marginals[c] += weight
    return marginals


def iter_winning_committees(e: Election, rule: Rule, k: int):
    """Lazily stream the AV or SAV tie-completion family.

    The family can be exponentially large; callers that only need membership
    should use is_cowinner, which never materializes it.
    """
    _check_k(e, k)
    if rule not in (Rule.AV, Rule.SAV):
        raise ValueError("lazy committee streaming applies to the score rules only")
    scores = av_scores(e) if rule is Rule.AV else sav_scores(e)
    cutoff = sorted(scores, reverse=True)[k - 1]
    fixed = frozenset(c for c in range(e.m) if scores[c] > cutoff)
    tied = [c for c in range(e.m) if scores[c] == cutoff]
    for combo in itertools.combinations(tied, k - len(fixed)):
        yield fixed | frozenset(combo)


def winning_committees(e: Election, rule: Rule, k: int,
                       cap: int = COMMITTEE_ENUM_CAP) -> set[frozenset[int]]:
    """All tied winning committees; deterministic singleton for GAV/RAV."""
    _check_k(e, k)
    if rule in (Rule.AV, Rule.SAV):
        scores = av_scores(e) if rule is Rule.AV else sav_scores(e)
        cutoff = sorted(scores, reverse=True)[k - 1]
        tied = sum(1 for s in scores if s == cutoff)
        above = sum(1 for s in scores if s > cutoff)
        if comb(tied, k - above) > cap:
            raise ResourceGuardError(
                f"C({tied},{k - above}) tie completions exceed the cap of {cap}")
        return set(iter_winning_committees(e, rule, k))
    if rule is Rule.GAV:
        return {gav_committee(e, k)}
    if rule is Rule.RAV:
        return {rav_committee(e, k)}
    ballots = ballot_masks(e)
    if comb(e.m, k) > cap:
        raise ResourceGuardError(f"C({e.m},{k}) committees exceed the cap of {cap}")
    objective = _coverage_objective(ballots) if rule is Rule.CCAV else _pav_objective(ballots)
    best_value = None
    best: list[frozenset[int]] = []
    for combo in itertools.combinations(range(e.m), k):
        mask = 0
        for c in combo:
            mask |= 1 << c
        value = objective(mask)
        if best_value is None or value > best_value:
            best_value, best = value, [frozenset(combo)]
        elif value == best_value:
            best.append(frozenset(combo))
    return set(best)


def is_cowinner(e: Election, rule: Rule, k: int, p: int, cap: int = COMMITTEE_ENUM_CAP) -> bool:
    """Does candidate p belong to at least one winning committee?"""
    _check_k(e, k)
    return _is_cowinner_from_ballots(ballot_masks(e), e.m, rule, k, p, cap)


def type_cowinner_ccav_gav(e: Election, rule: Rule, k: int, p: int) -> bool:
    """Co-winner test for CCAV/GAV evaluated over candidate types.

    For CCAV the committee objective depends only on the set of member types,
    so the test enumerates type subsets; with k > n every candidate is a
    co-winner (a maximum cover needs at most n types, leaving room for p),
    while the k = n boundary genuinely requires the enumeration.  For GAV the
    deterministic tie-break makes membership depend on candidate indices, so
    the greedy is replayed over the grouped type structure instead.
    """
    if rule not in (Rule.CCAV, Rule.GAV):
        raise ValueError("type-based co-winner test covers CCAV and GAV only")
    _check_k(e, k)
    n = e.n
    groups: dict[int, list[int]] = {}
    p_type = None
    for tp, members in candidate_types(e).items():
        mask = 0
        for v in tp:
            mask |= 1 << v
        groups[mask] = sorted(members)
        if p in members:
            p_type = mask

    if rule is Rule.GAV:
        # One gain computation per type and round; the pick within a type is
        # its lowest unpicked index, matching the candidate-level greedy.
        covered = 0
        remaining = {mask: list(members) for mask, members in groups.items()}
        for _ in range(k):
            best_gain = -1
            best_cand = None
            best_mask = None
            for mask in sorted(remaining):
                members = remaining[mask]
                if not members:
                    continue
                gain = (mask & ~covered).bit_count()
                if gain > best_gain or (gain == best_gain and members[0] < best_cand):
                    best_gain, best_cand, best_mask = gain, members[0], mask
            if best_cand == p:
                return True
            remaining[best_mask].pop(0)
            covered |= best_mask
        return False

    if k >= n + 1:
        return True
    type_masks = sorted(groups)
    size = min(k, len(type_masks))
    best_all = -1
    best_with_p = -1
    for combo in itertools.combinations(type_masks, size):
        union = 0
        for mask in combo:
            union |= mask
        coverage = union.bit_count()
        if coverage > best_all:
            best_all = coverage
        if p_type in combo and coverage > best_with_p:
            best_with_p = coverage
    return best_with_p == best_all
