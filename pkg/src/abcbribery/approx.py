"""Bribery by adding approvals for the preferred candidate under SAV, GAV
and RAV.

SAV gets a 2-approximation: sweep the budget upward, each step planting the
gain-maximizing approval set found by an exact knapsack over budget units.
GAV and RAV guess the greedy round in which the preferred candidate is meant
to be picked; GAV then buys the cheapest uncovered voters one by one (exact,
priced or not), while RAV buys a voter set whose marginal gains clear the
round's selection threshold via a knapsack over lcm-scaled gains (exact for
unit prices, within 1+epsilon for priced ones).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .core import (
    FORBIDDEN,
    AtomicAction,
    BriberyInstance,
    BriberySolution,
    Election,
    Op,
    PriceTable,
    apply_action,
    apply_actions,
    ballot_masks,
)
from .rules import Rule, gav_committee, is_cowinner, rav_committee, rav_marginals

VALUE_DP_CAP = 1_000_000


def _require_add(instance: BriberyInstance, restricted_only: bool):
    if instance.op is not Op.ADD:
        raise ValueError(f"instance operation is {instance.op.value}, expected add")
    if restricted_only and not instance.restricted_to_p:
        raise ValueError("this algorithm handles adding approvals for p only")


def sav_max_gain(e: Election, p: int, budget: int, prices: PriceTable) -> frozenset[int]:
    """Voters to give p an approval, maximizing p's SAV score gain within budget.

    A voter with t current approvals yields a gain of 1/(t+1).  Exact dynamic
    program over budget units.
    """
    return _max_gain_table(e, p, prices, budget)[budget]


def _max_gain_table(e: Election, p: int, prices: PriceTable, max_budget: int) -> list[frozenset[int]]:
    """Best voter set per budget 0..max_budget (exact knapsack)."""
    items = []
    for v in range(e.n):
        if p in e.ballots[v].approved:
            continue
        price = prices.add_price(v, p)
        if price == FORBIDDEN or price > max_budget:
            continue
        items.append((v, price, Fraction(1, len(e.ballots[v].approved) + 1)))
    empty = (Fraction(0), ())
    dp: list[tuple[Fraction, tuple[int, ...]]] = [empty] * (max_budget + 1)
    for v, price, gain in items:
        for t in range(max_budget, price - 1, -1):
            base_gain, base_set = dp[t - price]
            cand = (base_gain + gain, base_set + (v,))
            if cand[0] > dp[t][0]:
                dp[t] = cand
    return [frozenset(chosen) for _, chosen in dp]


def sav_add_for_p_2approx(instance: BriberyInstance) -> BriberySolution:
    """Budget sweep over exact max-gain sets; cost at most twice the optimum.

    Each planted approval costs every co-approved candidate at most what p
    gains, which is what makes the sweep a 2-approximation.  Also valid for
    the unpriced unrestricted variant, where adding for anyone but p never
    helps.
    """
    _require_add(instance, restricted_only=False)
    if not instance.restricted_to_p and instance.priced:
        raise ValueError("priced unrestricted additions are outside this algorithm's scope")
    e, p, k = instance.election, instance.p, instance.k
    if is_cowinner(e, Rule.SAV, k, p):
        return BriberySolution((), 0, True)
    all_prices = sum(
        instance.prices.add_price(v, p)
        for v in range(e.n)
        if p not in e.ballots[v].approved and instance.prices.add_price(v, p) != FORBIDDEN
    )
    hi = min(instance.budget, all_prices)
    table = _max_gain_table(e, p, instance.prices, hi)
    for t in range(hi + 1):
        voters = table[t]
        actions = tuple(AtomicAction(Op.ADD, v, target=p) for v in sorted(voters))
        if is_cowinner(apply_actions(e, actions), Rule.SAV, k, p):
            cost = sum(instance.prices.add_price(v, p) for v in voters)
            return BriberySolution(actions, cost, True)
    return BriberySolution((), None, False)


def gav_add_for_p(instance: BriberyInstance) -> BriberySolution:
    """Exact optimum for GAV when only approvals for p may be added.

    Guess the round in which p is to be picked, then repeatedly buy an
    approval from the cheapest voter not covered by the rounds before it.
    """
    _require_add(instance, restricted_only=True)
    e, p, k = instance.election, instance.p, instance.k
    if p in gav_committee(e, k):
        return BriberySolution((), 0, True)
    best: tuple[int, tuple[AtomicAction, ...]] | None = None
    for target_round in range(1, k + 1):
        cur = e
        actions: list[AtomicAction] = []
        cost = 0
        while True:
            if p in gav_committee(cur, k):
                if best is None or (cost, _key(actions)) < (best[0], _key(best[1])):
                    best = (cost, tuple(actions))
                break
            prefix = _gav_prefix(cur, target_round - 1)
            covered = set()
            for c in prefix:
                for v in range(cur.n):
                    if c in cur.ballots[v].approved:
                        covered.add(v)
            eligible = [
                (instance.prices.add_price(v, p), v)
                for v in range(cur.n)
                if v not in covered and p not in cur.ballots[v].approved
                and instance.prices.add_price(v, p) != FORBIDDEN
            ]
            if not eligible:
                break
            price, v = min(eligible)
            action = AtomicAction(Op.ADD, v, target=p)
            cur = apply_action(cur, action)
            actions.append(action)
            cost += price
    if best is None:
        return BriberySolution((), None, False)
    cost, actions = best
    return BriberySolution(actions, cost, cost <= instance.budget)


def _key(actions) -> tuple:
    return tuple(a.sort_key() for a in actions)


def _gav_prefix(e: Election, rounds: int) -> list[int]:
    from .rules import _gav_from_approvers
    from .core import approver_masks
    if rounds == 0:
        return []
    return _gav_from_approvers(approver_masks(e), rounds)


def rav_add_for_p(instance: BriberyInstance, epsilon: Fraction | float = Fraction(1, 10)) -> BriberySolution:
    """Add approvals for p so that some greedy round must pick it.

    Per guessed round, the set of voters to buy is a covering knapsack: each
    voter's marginal gain for p is 1/t for some t up to the round number, so
    gains scale to integers by the lcm of 1..round.  The knapsack is solved
    exactly while the scaled value range stays small, which makes unit-price
    instances exact; very large ranges fall back to a price-scaled dynamic
    program whose cost stays within (1+epsilon) of the optimum.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    _require_add(instance, restricted_only=True)
    e, p, k = instance.election, instance.p, instance.k
    if p in rav_committee(e, k):
        return BriberySolution((), 0, True)
    epsilon = Fraction(epsilon)
    masks = ballot_masks(e)
    best: tuple[int, tuple[AtomicAction, ...]] | None = None
    for target_round in range(1, k + 1):
        committee = rav_committee(e, target_round - 1) if target_round > 1 else frozenset()
        if p in committee:
            continue
        marginals = rav_marginals(e, committee)
        scale = math.lcm(*range(1, target_round + 1))
        own = 0
        cmask = 0
        for c in committee:
            cmask |= 1 << c
        items: list[tuple[int, int, int]] = []  # voter, price, scaled gain
        for v in range(e.n):
            weight = scale // ((masks[v] & cmask).bit_count() + 1)
            if masks[v] >> p & 1:
                own += weight
            else:
                price = instance.prices.add_price(v, p)
                if price != FORBIDDEN:
                    items.append((v, price, weight))
        lower_rivals = [marginals[c] * scale for c in range(e.m)
                        if c < p and c not in committee]
        upper_rivals = [marginals[c] * scale for c in range(e.m)
                        if c > p and c not in committee]
        theta = 0
        if lower_rivals:
            theta = max(theta, int(max(lower_rivals)) + 1 - own)
        if upper_rivals:
            theta = max(theta, math.ceil(max(upper_rivals)) - own)
        solved = _min_cost_cover(items, theta, epsilon)
        if solved is None:
            continue
        cost, voters = solved
        actions = tuple(AtomicAction(Op.ADD, v, target=p) for v in sorted(voters))
        assert p in rav_committee(apply_actions(e, actions), k)
        if best is None or (cost, _key(actions)) < (best[0], _key(best[1])):
            best = (cost, actions)
    if best is None:
        return BriberySolution((), None, False)
    cost, actions = best
    return BriberySolution(actions, cost, cost <= instance.budget)


def _min_cost_cover(items: list[tuple[int, int, int]], theta: int,
                    epsilon: Fraction) -> tuple[int, list[int]] | None:
    """Cheapest subset with total integer value >= theta.

    Exact value-indexed knapsack while the value range is small; otherwise a
    price-scaled sweep that keeps the cost within (1+epsilon) of the optimum.
    """
    if theta <= 0:
        return 0, []
    total_value = sum(value for _, _, value in items)
    if theta > total_value:
        return None
    if total_value <= VALUE_DP_CAP:
        dp: list[tuple[int, tuple[int, ...]] | None] = [None] * (total_value + 1)
        dp[0] = (0, ())
        for v, price, value in items:
            for g in range(total_value, value - 1, -1):
                base = dp[g - value]
                if base is None:
                    continue
                cand = (base[0] + price, base[1] + (v,))
                if dp[g] is None or cand[0] < dp[g][0]:
                    dp[g] = cand
        best = None
        for g in range(theta, total_value + 1):
            if dp[g] is not None and (best is None or dp[g][0] < best[0]):
                best = dp[g]
        if best is None:
            return None
        return best[0], list(best[1])
    # Price-scaled fallback: sweep candidate optima on a (1+epsilon/2) grid.
    lo = min((price for _, price, _ in items if price > 0), default=1)
    hi = sum(price for _, price, _ in items)
    guess = Fraction(max(1, lo))
    while guess <= hi * (1 + epsilon):
        nu = max(1, int(epsilon * guess / (2 * max(1, len(items)))))
        cap = int(guess / nu) + len(items)
        dp: list[tuple[int, tuple[int, ...]] | None] = [None] * (cap + 1)
        dp[0] = (0, ())
        for v, price, value in items:
            scaled = price // nu
            for t in range(cap, scaled - 1, -1):
                base = dp[t - scaled]
                if base is None:
                    continue
                cand = (base[0] + value, base[1] + (v,))
                if dp[t] is None or cand[0] > dp[t][0]:
                    dp[t] = cand
        for t in range(cap + 1):
            if dp[t] is not None and dp[t][0] >= theta:
                voters = list(dp[t][1])
                cost = sum(price for v2, price, _ in items if v2 in voters)
                if cost <= guess * (1 + epsilon):
                    return cost, voters
                break
        guess = guess * (1 + epsilon / 2)
    return None
