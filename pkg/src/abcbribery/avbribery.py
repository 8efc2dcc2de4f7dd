"""Bribery under AV: greedy polynomial algorithms plus an exact solver for
priced swaps.

Adds and deletes are classic cheapest-first greedies.  Unit-price swaps guess
the score threshold the preferred candidate will enter the committee with and
drain the most fragile opponents down to it.  Priced swaps guess the winning
committee and its lowest member score, then solve a min-cost flow where every
approval either stays put or moves within its vote; a move from c to d may
relay through intermediate candidates, so effective move prices are per-vote
shortest paths over the swap price table.
"""

from __future__ import annotations

import itertools
from math import comb, inf

from .core import (
    FORBIDDEN,
    AtomicAction,
    BriberyInstance,
    BriberySolution,
    Election,
    Op,
    PriceTable,
    ResourceGuardError,
    apply_action,
    ballot_masks,
)
from .flows import Arc, FlowNetwork, InfeasibleFlowError, min_cost_flow_lb
from .rules import Rule, _av_from_ballots, _score_cowinner, av_scores, is_cowinner

DEFAULT_GUESS_CAP = 500_000


def _actions_key(actions) -> tuple:
    return tuple(a.sort_key() for a in actions)


def _require(instance: BriberyInstance, op: Op):
    if instance.op is not op:
        raise ValueError(f"instance operation is {instance.op.value}, expected {op.value}")


def av_add(instance: BriberyInstance) -> BriberySolution:
    """Add approvals for p cheapest-first until p joins a winning committee.

    Adding approvals for anyone else only raises opponents, so this is optimal
    for the priced, unpriced, restricted and unrestricted variants alike.
    """
    _require(instance, Op.ADD)
    e, p, k = instance.election, instance.p, instance.k
    if is_cowinner(e, Rule.AV, k, p):
        return BriberySolution((), 0, True)
    cells = sorted(
        (instance.prices.add_price(v, p), v)
        for v in range(e.n)
        if p not in e.ballots[v].approved and instance.prices.add_price(v, p) != FORBIDDEN
    )
    actions: list[AtomicAction] = []
    cost = 0
    cur = e
    for price, v in cells:
        action = AtomicAction(Op.ADD, v, target=p)
        cur = apply_action(cur, action)
        actions.append(action)
        cost += price
        if is_cowinner(cur, Rule.AV, k, p):
            return BriberySolution(tuple(actions), cost, cost <= instance.budget)
    return BriberySolution((), None, False)


def av_delete(instance: BriberyInstance) -> BriberySolution:
    """Bring down opponents above p, cheapest bring-down first.

    Bringing c down means deleting its cheapest approvals until it ties p;
    bring-down costs are independent across candidates, so picking the
    cheapest ones until at most k-1 candidates beat p is optimal.
    """
    _require(instance, Op.DELETE)
    e, p, k = instance.election, instance.p, instance.k
    scores = av_scores(e)
    above = [c for c in range(e.m) if scores[c] > scores[p]]
    if len(above) <= k - 1:
        return BriberySolution((), 0, True)
    bring_downs = []
    for c in above:
        cells = sorted(
            (instance.prices.delete_price(v, c), v)
            for v in range(e.n)
            if c in e.ballots[v].approved
        )
        needed = cells[: scores[c] - scores[p]]
        total = sum(price for price, _ in needed)
        bring_downs.append((total, c, needed))
    bring_downs.sort(key=lambda item: (item[0], item[1]))
    chosen = bring_downs[: len(above) - (k - 1)]
    if any(total == FORBIDDEN for total, _, _ in chosen):
        return BriberySolution((), None, False)
    actions = tuple(
        AtomicAction(Op.DELETE, v, source=c)
        for _, c, needed in chosen
        for _, v in needed
    )
    cost = sum(total for total, _, _ in chosen)
    return BriberySolution(actions, cost, cost <= instance.budget)


def av_swap_unit(instance: BriberyInstance) -> BriberySolution:
    """Unit-price swaps: guess the entry score T, drain fragile opponents.

    For each T, opponents above p that are neither protected (the k-1 highest
    scorers) nor already at or below T donate one approval to p, always from
    the current highest scorer among them; with none left, p takes an
    approval from the lowest-index vote not approving p.  The cheapest
    successful run over all T is optimal.
    """
    _require(instance, Op.SWAP)
    if instance.priced:
        raise ValueError("unit-price algorithm called on a priced instance")
    e, p, k = instance.election, instance.p, instance.k
    if is_cowinner(e, Rule.AV, k, p):
        return BriberySolution((), 0, True)
    n, m = e.n, e.m
    swap_cap = sum(1 for b in e.ballots if p not in b.approved)
    best: tuple[int, tuple, tuple[AtomicAction, ...]] | None = None
    for threshold in range(n + 1):
        cur = e
        actions: list[AtomicAction] = []
        while len(actions) <= swap_cap:
            if is_cowinner(cur, Rule.AV, k, p):
                key = (len(actions), _actions_key(actions))
                if best is None or key < best[:2]:
                    best = (len(actions), key[1], tuple(actions))
                break
            if len(actions) == swap_cap:
                break
            scores = av_scores(cur)
            ranked = sorted((c for c in range(m) if c != p),
                            key=lambda c: (-scores[c], c))
            protected = set(ranked[: k - 1])
            fragile = [c for c in ranked[k - 1:]
                       if scores[c] > scores[p] and scores[c] > threshold]
            if fragile:
                donor = fragile[0]
                vote = next(v for v in range(n)
                            if donor in cur.ballots[v].approved
                            and p not in cur.ballots[v].approved)
            else:
                vote = next((v for v in range(n)
                             if p not in cur.ballots[v].approved and cur.ballots[v].approved),
                            None)
                if vote is None:
                    break
                donor = min(cur.ballots[vote].approved)
            action = AtomicAction(Op.SWAP, vote, source=donor, target=p)
            cur = apply_action(cur, action)
            actions.append(action)
    if best is None:
        return BriberySolution((), None, False)
    cost, _, actions = best
    return BriberySolution(actions, cost, cost <= instance.budget)


# --- exact solver for priced swaps ------------------------------------------


def _vote_move_prices(e: Election, prices: PriceTable, v: int):
    """All-pairs cheapest relay prices within one vote, with next hops."""
    m = e.m
    dist = [[inf] * m for _ in range(m)]
    nxt = [[-1] * m for _ in range(m)]
    for c in range(m):
        dist[c][c] = 0
        for d in range(m):
            if c == d:
                continue
            price = prices.swap_price(v, c, d)
            if price != FORBIDDEN:
                dist[c][d] = price
                nxt[c][d] = d
    for mid in range(m):
        dmid = dist[mid]
        for i in range(m):
            via = dist[i][mid]
            if via == inf:
                continue
            row = dist[i]
            for j in range(m):
                cand = via + dmid[j]
                if cand < row[j]:
                    row[j] = cand
                    nxt[i][j] = nxt[i][mid]
    return dist, nxt


def _expand_path(nxt, source: int, target: int) -> list[tuple[int, int]]:
    hops = []
    cur = source
    while cur != target:
        step = nxt[cur][target]
        hops.append((cur, step))
        cur = step
    return hops


def _order_vote_swaps(voter: int, start_mask: int,
                      paths: list[list[tuple[int, int]]]) -> list[AtomicAction]:
    """Sequence relay paths into individually valid swaps for one vote.

    Paths are fired one at a time; within a path, tokens repeatedly shift into
    the first vacant node, which is always possible and leaves transit
    occupancies restored once the path completes.
    """
    occ = start_mask
    out: list[AtomicAction] = []
    for hops in sorted(paths):
        nodes = [hops[0][0]] + [b for _, b in hops]
        lo = 0
        last = len(nodes) - 1
        while lo < last:
            vacant = next(j for j in range(lo + 1, last + 1) if not occ >> nodes[j] & 1)
            for j in range(vacant - 1, lo - 1, -1):
                src, dst = nodes[j], nodes[j + 1]
                assert occ >> src & 1 and not occ >> dst & 1
                occ = (occ & ~(1 << src)) | (1 << dst)
                out.append(AtomicAction(Op.SWAP, voter, source=src, target=dst))
            lo = vacant
    return out


def av_priced_swap_exact(instance: BriberyInstance, *,
                         guess_cap: int = DEFAULT_GUESS_CAP) -> BriberySolution:
    """Exact optimum for priced swaps by guessing the committee and threshold.

    For every committee W containing p and every threshold T, a min-cost flow
    with lower bounds decides the cheapest swap set giving all members at
    least T approvals and all non-members at most T.  Exponential in the
    number of candidates, hence the guess cap.
    """
    _require(instance, Op.SWAP)
    e, p, k = instance.election, instance.p, instance.k
    n, m = e.n, e.m
    if is_cowinner(e, Rule.AV, k, p):
        return BriberySolution((), 0, True)
    if comb(m - 1, k - 1) * (n + 1) > guess_cap:
        raise ResourceGuardError(
            f"C({m - 1},{k - 1})*(n+1) committee/threshold guesses exceed {guess_cap}")
    masks = ballot_masks(e)
    scores = _av_from_ballots(masks, m)
    restricted = instance.restricted_to_p
    move_prices = []
    next_hops = []
    for v in range(n):
        if restricted:
            # Direct moves to p only: a relay's intermediate swap would have a
            # target other than p.
            dist = [[inf] * m for _ in range(m)]
            for c in range(m):
                if c != p:
                    price = instance.prices.swap_price(v, c, p)
                    if price != FORBIDDEN:
                        dist[c][p] = price
            move_prices.append(dist)
            next_hops.append(None)
        else:
            dist, nxt = _vote_move_prices(e, instance.prices, v)
            move_prices.append(dist)
            next_hops.append(nxt)

    votes_without = [0] * m
    for mask in masks:
        for c in range(m):
            if not mask >> c & 1:
                votes_without[c] += 1

    total_units = sum(mask.bit_count() for mask in masks)
    others = [c for c in range(m) if c != p]
    best: tuple[int, tuple, tuple[AtomicAction, ...]] | None = None
    min_price = min((move_prices[v][c][d]
                     for v in range(n) for c in range(m) for d in range(m)
                     if c != d and move_prices[v][c][d] not in (inf, FORBIDDEN)),
                    default=0)

    for chosen in itertools.combinations(others, k - 1):
        members = frozenset(chosen) | {p}
        for threshold in range(n + 1):
            if any(threshold - scores[w] > votes_without[w] for w in members):
                continue
            if restricted and any(scores[w] < threshold for w in members if w != p):
                continue
            shed = sum(max(0, scores[u] - threshold) for u in range(m) if u not in members)
            gain = sum(max(0, threshold - scores[w]) for w in members)
            if restricted and shed > max(0, votes_without[p]):
                continue
            # Every swap donates once and receives once, so the swap count is
            # at least max(gain, shed); each swap costs at least min_price.
            lower_bound = max(gain, shed) * min_price
            if lower_bound > instance.budget:
                continue
            if best is not None and lower_bound > best[0]:
                continue
            solved = _solve_guess(e, masks, move_prices, members, threshold,
                                  total_units, restricted, p)
            if solved is None:
                continue
            cost, moves = solved
            if best is not None and cost > best[0]:
                continue
            actions: list[AtomicAction] = []
            for v in range(n):
                vote_moves = [mv for mv in moves if mv[0] == v]
                if not vote_moves:
                    continue
                if restricted:
                    paths = [[(c, d)] for _, c, d in vote_moves]
                else:
                    paths = [_expand_path(next_hops[v], c, d) for _, c, d in vote_moves]
                actions.extend(_order_vote_swaps(v, masks[v], paths))
            key = (cost, _actions_key(actions))
            if best is None or key < best[:2]:
                best = (cost, key[1], tuple(actions))
    if best is None:
        return BriberySolution((), None, False)
    cost, _, actions = best
    return BriberySolution(actions, cost, cost <= instance.budget)


def _solve_guess(e: Election, masks: list[int], move_prices, members: frozenset[int],
                 threshold: int, total_units: int, restricted: bool, p: int):
    """Min-cost swap set for one committee/threshold guess, or None."""
    n, m = e.n, e.m
    node_count = 1 + m
    slot_id: dict[tuple[int, int], int] = {}
    recv_id: dict[tuple[int, int], int] = {}
    for v in range(n):
        for c in range(m):
            if masks[v] >> c & 1:
                slot_id[(v, c)] = node_count
                node_count += 1
        receivers = [p] if restricted else range(m)
        for d in receivers:
            if not masks[v] >> d & 1:
                recv_id[(v, d)] = node_count
                node_count += 1
    sink = node_count
    node_count += 1

    arcs: list[Arc] = []
    move_arcs: list[tuple[int, int, int, int]] = []  # arc index, vote, source, dest
    for (v, c), node in slot_id.items():
        arcs.append(Arc(0, node, 0, 1, 0))
        arcs.append(Arc(node, 1 + c, 0, 1, 0))
        for (v2, d), rnode in recv_id.items():
            if v2 != v:
                continue
            price = move_prices[v][c][d]
            if price == FORBIDDEN or price == inf:
                continue
            move_arcs.append((len(arcs), v, c, d))
            arcs.append(Arc(node, rnode, 0, 1, int(price)))
    for (v, d), rnode in recv_id.items():
        arcs.append(Arc(rnode, 1 + d, 0, 1, 0))
    for c in range(m):
        if c in members:
            arcs.append(Arc(1 + c, sink, threshold, n, 0))
        else:
            arcs.append(Arc(1 + c, sink, 0, threshold, 0))
    net = FlowNetwork(node_count, tuple(arcs), 0, sink, total_units)
    try:
        cost, flows = min_cost_flow_lb(net)
    except InfeasibleFlowError:
        return None
    moves = [(v, c, d) for idx, v, c, d in move_arcs if flows[idx] > 0]
    return cost, moves
