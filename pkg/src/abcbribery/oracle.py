"""Exhaustive bribery solver used as ground truth for every other algorithm.

The search enumerates, per vote, every ballot reachable under the operation
kind together with its cheapest action sequence (Dijkstra over ballot states
for swaps, where relaying an approval through intermediate candidates can be
cheaper than a direct move).  Final elections are then enumerated by
iterative deepening over total cost, so the first hit is the optimum.  Purely
exponential; guarded by a configuration-count estimate.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    FORBIDDEN,
    AtomicAction,
    BriberyInstance,
    BriberySolution,
    Election,
    ElectionError,
    Op,
    PriceTable,
    ResourceGuardError,
    ballot_masks,
)
from .rules import Rule, _is_cowinner_from_ballots, _score_cowinner

DEFAULT_MAX_CONFIGS = 2_000_000


@dataclass(frozen=True)
class _Option:
    cost: int
    mask: int
    actions: tuple[AtomicAction, ...]


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _cellwise_options(voter: int, start: int, cells: list[tuple[int, int]], op: Op,
                      cost_cap: int | None) -> list[_Option]:
    """All subsets of independent add/delete cells, cheapest-first."""
    options = [_Option(0, start, ())]
    for cand, price in cells:
        extra = []
        for opt in options:
            cost = opt.cost + price
            if cost_cap is not None and cost > cost_cap:
                continue
            if op is Op.ADD:
                mask = opt.mask | (1 << cand)
                action = AtomicAction(Op.ADD, voter, target=cand)
            else:
                mask = opt.mask & ~(1 << cand)
                action = AtomicAction(Op.DELETE, voter, source=cand)
            extra.append(_Option(cost, mask, opt.actions + (action,)))
        options.extend(extra)
    options.sort(key=lambda o: (o.cost, o.mask))
    return options


def _swap_options(voter: int, start: int, m: int, prices: PriceTable,
                  restricted: bool, p: int, cost_cap: int | None) -> list[_Option]:
    """Cheapest reachable ballots under swaps, via Dijkstra over ballot states."""
    dist: dict[int, int] = {start: 0}
    parent: dict[int, tuple[int, AtomicAction]] = {}
    heap = [(0, start)]
    while heap:
        d, mask = heapq.heappop(heap)
        if d > dist[mask]:
            continue
        for source in _iter_bits(mask):
            if restricted:
                targets = [p] if not mask >> p & 1 else []
            else:
                targets = [t for t in range(m) if not mask >> t & 1]
            for target in targets:
                if target == source:
                    continue
                price = prices.swap_price(voter, source, target)
                if price == FORBIDDEN:
                    continue
                nd = d + price
                if cost_cap is not None and nd > cost_cap:
                    continue
                new = (mask & ~(1 << source)) | (1 << target)
                if new not in dist or nd < dist[new]:
                    dist[new] = nd
                    parent[new] = (mask, AtomicAction(Op.SWAP, voter, source=source, target=target))
                    heapq.heappush(heap, (nd, new))
    options = []
    for mask, d in dist.items():
        actions = []
        cur = mask
        while cur != start:
            prev, action = parent[cur]
            actions.append(action)
            cur = prev
        options.append(_Option(d, mask, tuple(reversed(actions))))
    options.sort(key=lambda o: (o.cost, o.mask))
    return options


def _vote_options(e: Election, prices: PriceTable, op: Op, restricted: bool, p: int,
                  cost_cap: int | None) -> list[list[_Option]]:
    masks = ballot_masks(e)
    out = []
    for v in range(e.n):
        start = masks[v]
        if op is Op.SWAP:
            out.append(_swap_options(v, start, e.m, prices, restricted, p, cost_cap))
        else:
            if op is Op.ADD:
                cands = [c for c in range(e.m) if not start >> c & 1]
                if restricted:
                    cands = [c for c in cands if c == p]
                cells = [(c, prices.add_price(v, c)) for c in cands]
            else:
                cells = [(c, prices.delete_price(v, c)) for c in _iter_bits(start)]
            cells = [(c, pr) for c, pr in cells if pr != FORBIDDEN]
            out.append(_cellwise_options(v, start, cells, op, cost_cap))
    return out


def _config_counts(options: list[list[_Option]], limit: int) -> list[int]:
    """Number of final elections at each exact total cost up to limit."""
    counts = [0] * (limit + 1)
    counts[0] = 1
    for opts in options:
        hist = [0] * (limit + 1)
        for opt in opts:
            if opt.cost <= limit:
                hist[opt.cost] += 1
        new = [0] * (limit + 1)
        for a, ca in enumerate(counts):
            if not ca:
                continue
            for b in range(limit + 1 - a):
                if hist[b]:
                    new[a + b] += ca * hist[b]
        counts = new
    return counts


def _av_delta(old: int, new: int) -> list[tuple[int, int]]:
    out = [(c, -1) for c in _iter_bits(old & ~new)]
    out.extend((c, 1) for c in _iter_bits(new & ~old))
    return out


def _sav_delta(old: int, new: int) -> list[tuple[int, Fraction]]:
    out: dict[int, Fraction] = {}
    if old:
        share = Fraction(1, old.bit_count())
        for c in _iter_bits(old):
            out[c] = out.get(c, Fraction(0)) - share
    if new:
        share = Fraction(1, new.bit_count())
        for c in _iter_bits(new):
            out[c] = out.get(c, Fraction(0)) + share
    return [(c, d) for c, d in out.items() if d]


def _search(e: Election, rule: Rule, k: int, p: int, options: list[list[_Option]],
            budget: int | None, max_configs: int) -> tuple[int, tuple[AtomicAction, ...]] | None:
    n = len(options)
    m = e.m
    limit = sum(max(o.cost for o in opts) for opts in options)
    if budget is not None:
        limit = min(limit, budget)
    counts = _config_counts(options, limit)
    suffix_max = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_max[i] = suffix_max[i + 1] + max(o.cost for o in options[i])

    ballots = ballot_masks(e)
    chosen: list[_Option | None] = [None] * n

    incremental = rule in (Rule.AV, Rule.SAV)
    if rule is Rule.AV:
        scores: list = [0] * m
        for mask in ballots:
            for c in _iter_bits(mask):
                scores[c] += 1
        delta_of = _av_delta
    elif rule is Rule.SAV:
        scores = [Fraction(0)] * m
        for mask in ballots:
            for c, d in _sav_delta(0, mask):
                scores[c] += d
        delta_of = _sav_delta
    else:
        scores = None
        delta_of = None

    def leaf_ok() -> bool:
        if incremental:
            return _score_cowinner(scores, k, p)
        return _is_cowinner_from_ballots(ballots, m, rule, k, p)

    def dfs(i: int, remaining: int) -> tuple[AtomicAction, ...] | None:
        if i == n:
            if remaining == 0 and leaf_ok():
                out: list[AtomicAction] = []
                for opt in chosen:
                    out.extend(opt.actions)
                return tuple(out)
            return None
        lower = remaining - suffix_max[i + 1]
        for opt in options[i]:
            if opt.cost > remaining:
                break
            if opt.cost < lower:
                continue
            old = ballots[i]
            ballots[i] = opt.mask
            chosen[i] = opt
            if incremental:
                delta = delta_of(old, opt.mask)
                for c, d in delta:
                    scores[c] += d
            result = dfs(i + 1, remaining - opt.cost)
            if incremental:
                for c, d in delta:
                    scores[c] -= d
            ballots[i] = old
            chosen[i] = None
            if result is not None:
                return result
        return None

    explored = 0
    for t in range(limit + 1):
        explored += counts[t] if t < len(counts) else 0
        if explored > max_configs:
            raise ResourceGuardError(
                f"enumerating final elections up to cost {t} needs {explored} "
                f"configurations, above the cap of {max_configs}")
        witness = dfs(0, t)
        if witness is not None:
            return t, witness
    return None


def oracle_bribery(instance: BriberyInstance, rule: Rule, *,
                   max_configs: int = DEFAULT_MAX_CONFIGS) -> BriberySolution:
    """Minimum-cost solution within the budget by exhaustive enumeration."""
    e = instance.election
    options = _vote_options(e, instance.prices, instance.op, instance.restricted_to_p,
                            instance.p, instance.budget)
    found = _search(e, rule, instance.k, instance.p, options, instance.budget, max_configs)
    if found is None:
        return BriberySolution((), None, False)
    cost, actions = found
    return BriberySolution(actions, cost, cost <= instance.budget)


def oracle_margin(e: Election, rule: Rule, k: int, p: int, op: Op,
                  prices: PriceTable | None = None, restricted: bool = False, *,
                  max_configs: int = DEFAULT_MAX_CONFIGS) -> int | float:
    """Minimum bribery cost making p a co-winner; infinity when impossible."""
    if restricted and op is Op.DELETE:
        raise ElectionError("restricted-to-p is meaningless for deletions")
    if prices is None:
        prices = PriceTable.unit()
    options = _vote_options(e, prices, op, restricted, p, None)
    found = _search(e, rule, k, p, options, None, max_configs)
    return math.inf if found is None else found[0]
