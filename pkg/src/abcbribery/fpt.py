"""Bribery solvers whose running time is governed by the number of voters.

Four families: subset enumeration over voters for restricted additions; full
enumeration over type-restricted candidate pools for unit-price additions and
swaps; the same with per-type-pair cheapest pools for priced swaps toward the
preferred candidate; and, for the coverage rules, guessing the candidate
types present after bribery and pricing each guess with a min-cost flow whose
sink arcs carry lower bounds.

The classic pool restrictions (n representatives per type) are sound for
rules that treat same-type candidates interchangeably, which holds for the
score and coverage rules here.  The deterministic lowest-index tie-break of
GAV and RAV makes membership index-dependent, so for those two the pools are
not restricted and the flow algorithm re-checks winners on concrete
candidate-to-type assignments instead of on type sets.
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
    ResourceGuardError,
    apply_actions,
    approver_masks,
    ballot_masks,
)
from .flows import Arc, FlowNetwork, InfeasibleFlowError, min_cost_flow_lb
from .rules import Rule, _gav_from_approvers, is_cowinner

VOTER_SUBSET_CAP = 20
ENUM_CAP = 2_000_000
FLOW_VOTER_CAP = 4

_INTERCHANGEABLE = frozenset({Rule.AV, Rule.SAV, Rule.CCAV, Rule.PAV})


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _key(actions) -> tuple:
    return tuple(a.sort_key() for a in actions)


def add_for_p_subset_enum(instance: BriberyInstance, rule: Rule, *,
                          voter_cap: int = VOTER_SUBSET_CAP) -> BriberySolution:
    """Exact optimum for adding approvals for p: try every voter subset."""
    if instance.op is not Op.ADD:
        raise ValueError("subset enumeration handles additions only")
    if not instance.restricted_to_p:
        raise ValueError("subset enumeration handles adding approvals for p only")
    e, p, k = instance.election, instance.p, instance.k
    eligible = [
        v for v in range(e.n)
        if p not in e.ballots[v].approved and instance.prices.add_price(v, p) != FORBIDDEN
    ]
    if len(eligible) > voter_cap:
        raise ResourceGuardError(
            f"{len(eligible)} eligible voters exceed the subset cap of {voter_cap}")
    best: tuple[int, tuple, tuple[AtomicAction, ...]] | None = None
    for size in range(len(eligible) + 1):
        for chosen in itertools.combinations(eligible, size):
            cost = sum(instance.prices.add_price(v, p) for v in chosen)
            if cost > instance.budget or (best is not None and cost >= best[0]):
                continue
            actions = tuple(AtomicAction(Op.ADD, v, target=p) for v in chosen)
            if is_cowinner(apply_actions(e, actions), rule, k, p):
                key = (cost, _key(actions))
                if best is None or key < best[:2]:
                    best = (cost, key[1], actions)
    if best is None:
        return BriberySolution((), None, False)
    return BriberySolution(best[2], best[0], True)


def _type_pool(e: Election, p: int) -> set[int]:
    """The n lowest-index candidates of each type, plus p."""
    groups: dict[int, list[int]] = {}
    for c, approvals in enumerate(approver_masks(e)):
        groups.setdefault(approvals, []).append(c)
    pool = {p}
    for members in groups.values():
        pool.update(sorted(members)[: e.n])
    return pool


def unpriced_type_enum(instance: BriberyInstance, rule: Rule, *,
                       enum_cap: int = ENUM_CAP) -> BriberySolution:
    """Exact optimum for unit-price additions or swaps.

    With a budget of at least n the answer is trivially feasible for rules
    with interchangeable same-type candidates: give p an approval in every
    vote lacking one (for swaps, in every nonempty such vote) and unanimity
    does the rest.  Below that, action sets are enumerated over a pool of at
    most n candidates per type.  GAV and RAV drop both shortcuts.
    """
    if instance.priced:
        raise ValueError("unit-price algorithm called on a priced instance")
    if instance.op not in (Op.ADD, Op.SWAP):
        raise ValueError("type enumeration handles additions and swaps only")
    e, p, k = instance.election, instance.p, instance.k
    if is_cowinner(e, rule, k, p):
        return BriberySolution((), 0, True)
    n = e.n
    interchangeable = rule in _INTERCHANGEABLE
    if interchangeable:
        pool = _type_pool(e, p)
        cap = min(instance.budget, n - 1)
    else:
        pool = set(range(e.m))
        cap = instance.budget

    if instance.op is Op.ADD:
        cells = [(v, c) for v in range(e.n) for c in sorted(pool)
                 if c not in e.ballots[v].approved
                 and (not instance.restricted_to_p or c == p)]
        make = lambda cell: AtomicAction(Op.ADD, cell[0], target=cell[1])
        valid = lambda chosen: True
    else:
        cells = [(v, s, t) for v in range(e.n)
                 for s in sorted(e.ballots[v].approved & pool)
                 for t in sorted(pool - e.ballots[v].approved)
                 if not instance.restricted_to_p or t == p]
        make = lambda cell: AtomicAction(Op.SWAP, cell[0], source=cell[1], target=cell[2])

        def valid(chosen) -> bool:
            by_vote: dict[int, list] = {}
            for cell in chosen:
                by_vote.setdefault(cell[0], []).append(cell)
            for group in by_vote.values():
                if len({c[1] for c in group}) < len(group):
                    return False
                if len({c[2] for c in group}) < len(group):
                    return False
            return True

    cap = min(cap, len(cells))
    explored = 0
    for size in range(cap + 1):
        explored += comb(len(cells), size)
        if explored > enum_cap:
            raise ResourceGuardError(
                f"enumerating action sets of size {size} needs {explored} "
                f"combinations, above the cap of {enum_cap}")
        for chosen in itertools.combinations(cells, size):
            if not valid(chosen):
                continue
            actions = tuple(make(cell) for cell in chosen)
            if is_cowinner(apply_actions(e, actions), rule, k, p):
                return BriberySolution(actions, size, True)

    if interchangeable and instance.budget >= n:
        actions = _approve_p_everywhere(e, p, instance.op)
        assert is_cowinner(apply_actions(e, actions), rule, k, p)
        return BriberySolution(actions, len(actions), True)
    return BriberySolution((), None, False)


def _approve_p_everywhere(e: Election, p: int, op: Op) -> tuple[AtomicAction, ...]:
    actions = []
    for v in range(e.n):
        approved = e.ballots[v].approved
        if p in approved:
            continue
        if op is Op.ADD:
            actions.append(AtomicAction(Op.ADD, v, target=p))
        elif approved:
            actions.append(AtomicAction(Op.SWAP, v, source=min(approved), target=p))
    return tuple(actions)


def priced_swap_to_p_type_enum(instance: BriberyInstance, rule: Rule, *,
                               enum_cap: int = ENUM_CAP) -> BriberySolution:
    """Exact optimum for priced swaps toward p.

    Each vote hosts at most one such swap, so at most n candidates change
    type.  For interchangeable rules the donors are restricted, per ordered
    type pair, to the n members cheapest to convert; GAV and RAV again use
    every candidate.  The remaining space is searched with branch and bound.
    """
    if instance.op is not Op.SWAP or not instance.restricted_to_p:
        raise ValueError("this algorithm handles swaps toward p only")
    e, p, k = instance.election, instance.p, instance.k
    if is_cowinner(e, rule, k, p):
        return BriberySolution((), 0, True)
    n = e.n
    if rule in _INTERCHANGEABLE:
        approvals = approver_masks(e)
        groups: dict[int, list[int]] = {}
        for c in range(e.m):
            if c != p:
                groups.setdefault(approvals[c], []).append(c)
        pool = {p}
        for source_type, members in groups.items():
            vote_bits = list(_iter_bits(source_type))
            for r in range(len(vote_bits) + 1):
                for removed in itertools.combinations(vote_bits, r):
                    ranked = []
                    for c in members:
                        cost = 0
                        for v in removed:
                            price = instance.prices.swap_price(v, c, p)
                            if price == FORBIDDEN:
                                cost = FORBIDDEN
                                break
                            cost += price
                        if cost != FORBIDDEN:
                            ranked.append((cost, c))
                    ranked.sort()
                    pool.update(c for _, c in ranked[:n])
    else:
        pool = set(range(e.m))

    options: list[list[tuple[int, AtomicAction | None]]] = []
    space = 1
    for v in range(e.n):
        here: list[tuple[int, AtomicAction | None]] = [(0, None)]
        if p not in e.ballots[v].approved:
            for c in sorted(e.ballots[v].approved & pool):
                price = instance.prices.swap_price(v, c, p)
                if price != FORBIDDEN:
                    here.append((price, AtomicAction(Op.SWAP, v, source=c, target=p)))
        options.append(here)
        space *= len(here)
        if space > enum_cap:
            raise ResourceGuardError(
                f"swap combinations exceed the cap of {enum_cap}")

    best: tuple[int, tuple, tuple[AtomicAction, ...]] | None = None
    chosen: list[AtomicAction] = []

    def dfs(v: int, cost: int):
        nonlocal best
        if best is not None and cost >= best[0]:
            return
        if v == e.n:
            actions = tuple(chosen)
            if cost <= instance.budget and is_cowinner(apply_actions(e, actions), rule, k, p):
                key = (cost, _key(actions))
                if best is None or key < best[:2]:
                    best = (cost, key[1], actions)
            return
        for price, action in options[v]:
            if action is not None:
                chosen.append(action)
            dfs(v + 1, cost + price)
            if action is not None:
                chosen.pop()

    dfs(0, 0)
    if best is None:
        return BriberySolution((), None, False)
    return BriberySolution(best[2], best[0], True)


# --- type guessing with a min-cost flow for the coverage rules ---------------


def _conversion_cost(instance: BriberyInstance, candidate: int, start: int, target: int):
    """Price of turning one candidate's approver set into the target, or None."""
    if instance.op is Op.ADD:
        if start & ~target:
            return None
        cost = 0
        for v in _iter_bits(target & ~start):
            price = instance.prices.add_price(v, candidate)
            if price == FORBIDDEN:
                return None
            cost += price
        return cost
    if target & ~start:
        return None
    cost = 0
    for v in _iter_bits(start & ~target):
        price = instance.prices.delete_price(v, candidate)
        if price == FORBIDDEN:
            return None
        cost += price
    return cost


def _reachable_types(instance: BriberyInstance, candidate: int, start: int) -> dict[int, int]:
    """Type mask -> conversion cost for one candidate."""
    if instance.op is Op.ADD:
        free = [v for v in _iter_bits(((1 << instance.election.n) - 1) & ~start)
                if instance.prices.add_price(v, candidate) != FORBIDDEN]
        base = start
        grow = True
        price_of = lambda v: instance.prices.add_price(v, candidate)
    else:
        free = [v for v in _iter_bits(start)
                if instance.prices.delete_price(v, candidate) != FORBIDDEN]
        base = start
        grow = False
        price_of = lambda v: instance.prices.delete_price(v, candidate)
    out: dict[int, int] = {base: 0}
    for v in free:
        bit = 1 << v
        price = price_of(v)
        for mask, cost in list(out.items()):
            new = mask | bit if grow else mask & ~bit
            out[new] = min(out.get(new, cost + price), cost + price)
    return out


def _ccav_type_winnable(types: tuple[int, ...], p_type: int, k: int) -> bool:
    size = min(k, len(types))
    best_all = -1
    best_with_p = -1
    for combo in itertools.combinations(types, size):
        union = 0
        for mask in combo:
            union |= mask
        coverage = union.bit_count()
        if coverage > best_all:
            best_all = coverage
        if p_type in combo and coverage > best_with_p:
            best_with_p = coverage
    return best_with_p == best_all


def _conversion_actions(instance: BriberyInstance, assignment: list[int],
                        columns: list[int]) -> tuple[AtomicAction, ...]:
    actions = []
    for c, target in enumerate(assignment):
        start = columns[c]
        if instance.op is Op.ADD:
            for v in _iter_bits(target & ~start):
                actions.append(AtomicAction(Op.ADD, v, target=c))
        else:
            for v in _iter_bits(start & ~target):
                actions.append(AtomicAction(Op.DELETE, v, source=c))
    return tuple(actions)


def ccav_gav_flow_bribery(instance: BriberyInstance, rule: Rule, *,
                          voter_cap: int = FLOW_VOTER_CAP,
                          guess_cap: int = 300_000) -> BriberySolution:
    """Exact priced additions/deletions for the coverage rules CCAV and GAV.

    Guess the set of candidate types present after bribery and the type p
    ends up with; a min-cost flow (candidates feed type nodes whose sink arcs
    require one unit each) prices the guess.  For CCAV any guess whose type
    set lets p's type join an optimal committee is acceptable.  For GAV,
    whose deterministic tie-break sees candidate indices, affordable guesses
    are refined by enumerating concrete candidate-to-type assignments and
    replaying the greedy.
    """
    if rule not in (Rule.CCAV, Rule.GAV):
        raise ValueError("the flow algorithm covers CCAV and GAV only")
    if instance.op not in (Op.ADD, Op.DELETE):
        raise ValueError("the flow algorithm handles additions and deletions only")
    e, p, k = instance.election, instance.p, instance.k
    n, m = e.n, e.m
    if n > voter_cap:
        raise ResourceGuardError(f"{n} voters exceed the cap of {voter_cap} "
                                 f"for the type-guessing flow")
    if is_cowinner(e, rule, k, p):
        return BriberySolution((), 0, True)
    # With k > n every candidate is a CCAV co-winner already (handled above),
    # so reaching here with CCAV means k <= n.

    columns = approver_masks(e)
    reach = [_reachable_types(instance, c, columns[c]) for c in range(m)]
    universe = sorted(set().union(*[set(r) for r in reach]))
    budget = instance.budget

    best: tuple[int, tuple, tuple[AtomicAction, ...]] | None = None
    guesses = 0
    for p_type in sorted(reach[p]):
        others = [t for t in universe if t != p_type]
        for size in range(1, min(m, len(universe)) + 1):
            for extra in itertools.combinations(others, size - 1):
                guesses += 1
                if guesses > guess_cap:
                    raise ResourceGuardError(
                        f"type-set guesses exceed the cap of {guess_cap}")
                types = tuple(sorted(extra + (p_type,)))
                solved = _solve_type_guess(instance, reach, types, p_type, p)
                if solved is None:
                    continue
                cost, assignment = solved
                if cost > budget or (best is not None and cost >= best[0]):
                    continue
                if rule is Rule.CCAV:
                    if not _ccav_type_winnable(types, p_type, k):
                        continue
                    actions = _conversion_actions(instance, assignment, columns)
                    key = (cost, _key(actions))
                    if best is None or key < best[:2]:
                        best = (cost, key[1], actions)
                else:
                    refined = _gav_assignment_search(
                        instance, reach, columns, types, p_type, p, k,
                        budget if best is None else min(budget, best[0] - 1))
                    if refined is not None:
                        rcost, rassign = refined
                        actions = _conversion_actions(instance, rassign, columns)
                        key = (rcost, _key(actions))
                        if best is None or key < best[:2]:
                            best = (rcost, key[1], actions)
    if best is None:
        return BriberySolution((), None, False)
    return BriberySolution(best[2], best[0], True)


def _solve_type_guess(instance: BriberyInstance, reach: list[dict[int, int]],
                      types: tuple[int, ...], p_type: int, p: int):
    """Min-cost assignment realizing exactly these types, p's type pinned."""
    m = len(reach)
    type_index = {t: i for i, t in enumerate(types)}
    node_count = 1 + m + len(types) + 1
    sink = node_count - 1
    arcs: list[Arc] = []
    assign_arcs: list[tuple[int, int, int]] = []  # arc idx, candidate, type mask
    for c in range(m):
        arcs.append(Arc(0, 1 + c, 0, 1, 0))
        targets = [p_type] if c == p else types
        for t in targets:
            cost = reach[c].get(t)
            if cost is None:
                continue
            assign_arcs.append((len(arcs), c, t))
            arcs.append(Arc(1 + c, 1 + m + type_index[t], 0, 1, cost))
    for i in range(len(types)):
        arcs.append(Arc(1 + m + i, sink, 1, m, 0))
    net = FlowNetwork(node_count, tuple(arcs), 0, sink, m)
    try:
        total, flows = min_cost_flow_lb(net)
    except InfeasibleFlowError:
        return None
    assignment = [0] * m
    for idx, c, t in assign_arcs:
        if flows[idx] > 0:
            assignment[c] = t
    return total, assignment


def _gav_assignment_search(instance: BriberyInstance, reach: list[dict[int, int]],
                           columns: list[int], types: tuple[int, ...], p_type: int,
                           p: int, k: int, budget: int):
    """Cheapest assignment onto the guessed types that makes p win the greedy."""
    m = len(reach)
    if budget < 0:
        return None
    choices: list[list[tuple[int, int]]] = []
    for c in range(m):
        if c == p:
            cost = reach[c].get(p_type)
            if cost is None:
                return None
            choices.append([(cost, p_type)])
            continue
        here = sorted((reach[c][t], t) for t in types if t in reach[c])
        if not here:
            return None
        choices.append(here)
    min_rest = [0] * (m + 1)
    for c in range(m - 1, -1, -1):
        min_rest[c] = min_rest[c + 1] + choices[c][0][0]

    best: tuple[int, list[int]] | None = None
    assignment = [0] * m

    def dfs(c: int, cost: int, covered: frozenset[int]):
        nonlocal best
        bound = budget if best is None else min(budget, best[0] - 1)
        if cost + min_rest[c] > bound:
            return
        if len(types) - len(covered) > m - c:
            return
        if c == m:
            if len(covered) == len(types):
                if p in _gav_from_approvers(assignment, k):
                    if best is None or cost < best[0]:
                        best = (cost, assignment.copy())
            return
        for extra, t in choices[c]:
            assignment[c] = t
            dfs(c + 1, cost + extra, covered | {t})

    dfs(0, 0, frozenset())
    return best
