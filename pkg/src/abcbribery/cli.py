"""Command-line interface.

Exit codes: 0 success (bribe: feasible), 1 infeasible, 2 parse or parameter
error, 3 resource guard tripped, 4 unsupported rule/operation combination
without an explicit oracle request, 5 invalid action in a solution file.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import approx, avbribery, fpt
from .core import (
    BriberyInstance,
    Election,
    ElectionError,
    InfeasibleActionError,
    InvalidActionError,
    Op,
    ParseError,
    PriceTable,
    ResourceGuardError,
    apply_action,
    parse_election,
    parse_solution,
    serialize_election,
    solution_cost,
    format_action,
)
from .generators import Graph, X3CInstance, gen_is_to_av_swap, gen_random_election, gen_x3c_to_sav_swap
from .oracle import oracle_bribery, oracle_margin
from .rules import Rule, av_scores, ccav_coverage, is_cowinner, pav_score, sav_scores, winning_committees

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_PARSE = 2
EXIT_GUARD = 3
EXIT_UNSUPPORTED = 4
EXIT_BAD_ACTION = 5


class UnsupportedCombination(Exception):
    pass


def _load(path: str):
    with open(path, encoding="utf-8") as handle:
        return parse_election(handle.read())


def _committee_str(e: Election, committee) -> str:
    return "{" + ",".join(e.candidates[c].name for c in sorted(committee)) + "}"


def _rule(name: str) -> Rule:
    return Rule(name)


def _op(name: str) -> Op:
    return {"add": Op.ADD, "delete": Op.DELETE, "swap": Op.SWAP}[name]


def cmd_winners(args) -> int:
    e, _, file_k = _load(args.file)
    k = args.k if args.k is not None else file_k
    if k is None:
        print("error: no committee size (use --k or a k: line)", file=sys.stderr)
        return EXIT_PARSE
    rule = _rule(args.rule)
    print(f"rule: {rule.value}")
    print(f"k: {k}")
    if rule is Rule.AV:
        scores = av_scores(e)
        print("scores: " + " ".join(f"{c.name}={scores[c.index]}" for c in e.candidates))
    elif rule is Rule.SAV:
        scores = sav_scores(e)
        print("scores: " + " ".join(f"{c.name}={scores[c.index]}" for c in e.candidates))
    committees = sorted(winning_committees(e, rule, k), key=sorted)
    if rule is Rule.CCAV:
        print(f"coverage: {ccav_coverage(e, next(iter(committees)))}")
    elif rule is Rule.PAV:
        print(f"score: {pav_score(e, next(iter(committees)))}")
    print("winning committees: " + " ".join(_committee_str(e, w) for w in committees))
    return EXIT_OK


_EXACT = "exact"
_APPROX2 = "2-approximation"


def _route(instance: BriberyInstance, rule: Rule, algorithm: str, epsilon: Fraction):
    """Pick the solver for a rule/operation cell; returns (solve, guarantee)."""
    op, priced, restricted = instance.op, instance.priced, instance.restricted_to_p
    eps_label = f"(1+{epsilon})-approximation"

    def av_cell():
        if op is Op.ADD:
            return avbribery.av_add, _EXACT
        if op is Op.DELETE:
            return avbribery.av_delete, _EXACT
        if not priced:
            return avbribery.av_swap_unit, _EXACT
        return avbribery.av_priced_swap_exact, _EXACT

    if algorithm == "oracle":
        return lambda inst: oracle_bribery(inst, rule), _EXACT
    if algorithm == "approx":
        if rule is Rule.SAV and op is Op.ADD and (restricted or not priced):
            return approx.sav_add_for_p_2approx, _APPROX2
        if rule is Rule.RAV and op is Op.ADD and restricted:
            return lambda inst: approx.rav_add_for_p(inst, epsilon), eps_label
        raise UnsupportedCombination("no approximation algorithm for this cell")
    if algorithm == "fpt-n":
        if op is Op.ADD and restricted:
            return lambda inst: fpt.add_for_p_subset_enum(inst, rule), _EXACT
        if not priced and op in (Op.ADD, Op.SWAP):
            return lambda inst: fpt.unpriced_type_enum(inst, rule), _EXACT
        if op is Op.SWAP and restricted:
            return lambda inst: fpt.priced_swap_to_p_type_enum(inst, rule), _EXACT
        if rule in (Rule.CCAV, Rule.GAV) and op in (Op.ADD, Op.DELETE):
            return lambda inst: fpt.ccav_gav_flow_bribery(inst, rule), _EXACT
        raise UnsupportedCombination("no voter-parameterized algorithm for this cell")
    if algorithm == "exact":
        if rule is Rule.AV:
            return av_cell()
        if rule is Rule.GAV and op is Op.ADD and restricted:
            return approx.gav_add_for_p, _EXACT
        if rule in (Rule.CCAV, Rule.GAV) and op in (Op.ADD, Op.DELETE):
            return lambda inst: fpt.ccav_gav_flow_bribery(inst, rule), _EXACT
        if not priced and op in (Op.ADD, Op.SWAP):
            return lambda inst: fpt.unpriced_type_enum(inst, rule), _EXACT
        if op is Op.SWAP and restricted:
            return lambda inst: fpt.priced_swap_to_p_type_enum(inst, rule), _EXACT
        raise UnsupportedCombination("no exact polynomial/FPT algorithm for this cell")
    # auto: the solver the complexity landscape recommends per cell
    if rule is Rule.AV:
        return av_cell()
    if rule is Rule.SAV and op is Op.ADD and (restricted or not priced):
        return approx.sav_add_for_p_2approx, _APPROX2
    if rule is Rule.GAV and op is Op.ADD and restricted:
        return approx.gav_add_for_p, _EXACT
    if rule is Rule.RAV and op is Op.ADD and restricted:
        return lambda inst: approx.rav_add_for_p(inst, epsilon), (_EXACT if not priced else eps_label)
    if rule in (Rule.CCAV, Rule.GAV) and op in (Op.ADD, Op.DELETE):
        return lambda inst: fpt.ccav_gav_flow_bribery(inst, rule), _EXACT
    if not priced and op in (Op.ADD, Op.SWAP):
        return lambda inst: fpt.unpriced_type_enum(inst, rule), _EXACT
    if priced and op is Op.SWAP and restricted:
        return lambda inst: fpt.priced_swap_to_p_type_enum(inst, rule), _EXACT
    raise UnsupportedCombination(
        "no algorithm for this rule/operation cell; rerun with --algorithm oracle")


def cmd_bribe(args) -> int:
    e, prices, file_k = _load(args.file)
    k = args.k if args.k is not None else file_k
    if k is None:
        print("error: no committee size (use --k or a k: line)", file=sys.stderr)
        return EXIT_PARSE
    rule = _rule(args.rule)
    instance = BriberyInstance(
        election=e, p=e.candidate_index(args.p), k=k, budget=args.budget,
        op=_op(args.op), priced=args.priced, restricted_to_p=args.restrict_to_p,
        prices=prices if args.priced else PriceTable())
    epsilon = Fraction(args.epsilon).limit_denominator(10**6)
    solve, guarantee = _route(instance, rule, args.algorithm, epsilon)
    solution = solve(instance)
    print(f"rule: {rule.value}  op: {instance.op.value}  p: {args.p}  "
          f"k: {k}  budget: {args.budget}")
    print(f"guarantee: {guarantee}")
    print(f"feasible: {'yes' if solution.feasible else 'no'}")
    if solution.cost is not None:
        print(f"cost: {solution.cost}")
    if solution.actions:
        print("actions: " + "; ".join(format_action(e, a) for a in solution.actions))
    return EXIT_OK if solution.feasible else EXIT_INFEASIBLE


def cmd_rank(args) -> int:
    e, prices, file_k = _load(args.file)
    k = args.k if args.k is not None else file_k
    if k is None:
        print("error: no committee size (use --k or a k: line)", file=sys.stderr)
        return EXIT_PARSE
    rule = _rule(args.rule)
    op = _op(args.op)
    table = prices if args.priced else PriceTable()
    margins = []
    for cand in e.candidates:
        if rule is Rule.AV:
            instance = BriberyInstance(
                election=e, p=cand.index, k=k, budget=10**9, op=op,
                priced=args.priced, restricted_to_p=args.restrict_to_p, prices=table)
            solve, _ = _route(instance, rule, "exact", Fraction(1, 10))
            solution = solve(instance)
            margin = solution.cost if solution.cost is not None else None
        else:
            value = oracle_margin(e, rule, k, cand.index, op, table,
                                  restricted=args.restrict_to_p)
            margin = None if value == float("inf") else int(value)
        margins.append((cand.name, margin))
    margins.sort(key=lambda item: (item[1] is None, item[1], item[0]))
    print(f"rule: {rule.value}  op: {op.value}  k: {k}")
    for name, margin in margins:
        print(f"{name}: {'inf' if margin is None else margin}")
    return EXIT_OK


def _parse_edges(text: str) -> list[tuple[int, int]]:
    edges = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        u, _, v = part.partition("-")
        a, b = int(u), int(v)
        edges.append((min(a, b), max(a, b)))
    return edges


def cmd_gen(args) -> int:
    if args.kind == "random":
        e = gen_random_election(args.m, args.n, args.prob, args.seed)
        text = serialize_election(e, k=args.k)
        header = f"# random election m={args.m} n={args.n} prob={args.prob} seed={args.seed}\n"
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(header + text)
        print(f"wrote {args.out}: {e.m} candidates, {e.n} voters")
        return EXIT_OK
    if args.kind == "is-reduction":
        g = Graph(args.vertices, tuple(sorted(_parse_edges(args.edges))))
        instance = gen_is_to_av_swap(g, args.h)
        text = serialize_election(instance.election, instance.prices, k=instance.k)
        header = (f"# independent-set reduction: {args.vertices} vertices, h={args.h}\n"
                  f"# p: p  op: swap (restricted to p, priced)  budget: {instance.budget}\n")
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(header + text)
        print(f"wrote {args.out}: {instance.election.m} candidates, "
              f"{instance.election.n} voters, k={instance.k}, budget={instance.budget}")
        return EXIT_OK
    sets = []
    for part in args.sets.split(";"):
        sets.append(frozenset(int(tok) for tok in part.split(",")))
    n = len(sets) // 3
    x = X3CInstance(n, tuple(sets))
    instance = gen_x3c_to_sav_swap(x, args.alpha)
    text = serialize_election(instance.election, k=instance.k)
    header = (f"# exact-cover reduction: n={n} alpha={args.alpha}\n"
              f"# p: p  op: swap (restricted to p, unit prices)  budget: {instance.budget}\n")
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(header + text)
    print(f"wrote {args.out}: {instance.election.m} candidates, "
          f"{instance.election.n} voters, k={instance.k}, budget={instance.budget}")
    return EXIT_OK


def cmd_verify(args) -> int:
    e, prices, file_k = _load(args.file)
    k = args.k if args.k is not None else file_k
    if k is None:
        print("error: no committee size (use --k or a k: line)", file=sys.stderr)
        return EXIT_PARSE
    rule = _rule(args.rule)
    with open(args.solution, encoding="utf-8") as handle:
        text = handle.read()
    try:
        actions = parse_solution(text, e)
    except ParseError as exc:
        print(f"invalid solution: {exc}", file=sys.stderr)
        return EXIT_BAD_ACTION
    cur = e
    for i, action in enumerate(actions, start=1):
        try:
            cur = apply_action(cur, action)
        except InvalidActionError as exc:
            print(f"invalid action {i} ({format_action(e, action)}): {exc}", file=sys.stderr)
            return EXIT_BAD_ACTION
    try:
        cost = solution_cost(actions, prices if args.priced else PriceTable())
    except InfeasibleActionError as exc:
        print(f"invalid solution: {exc}", file=sys.stderr)
        return EXIT_BAD_ACTION
    winning = is_cowinner(cur, rule, k, e.candidate_index(args.p))
    print("valid: yes")
    print(f"cost: {cost}")
    print(f"p co-winner: {'yes' if winning else 'no'}")
    return EXIT_OK if winning else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abcbribery",
        description="Winners and bribery margins for approval-based committee elections")
    sub = parser.add_subparsers(dest="command", required=True)
    rules = [r.value for r in Rule]

    w = sub.add_parser("winners", help="scores and winning committees")
    w.add_argument("file")
    w.add_argument("--rule", choices=rules, required=True)
    w.add_argument("--k", type=int)
    w.set_defaults(func=cmd_winners)

    b = sub.add_parser("bribe", help="solve one bribery instance")
    b.add_argument("file")
    b.add_argument("--rule", choices=rules, required=True)
    b.add_argument("--k", type=int)
    b.add_argument("--op", choices=["add", "delete", "swap"], required=True)
    b.add_argument("--p", required=True, help="preferred candidate name")
    b.add_argument("--budget", type=int, required=True)
    b.add_argument("--priced", action="store_true", help="use the file's price table")
    b.add_argument("--restrict-to-p", action="store_true")
    b.add_argument("--algorithm", choices=["auto", "exact", "approx", "fpt-n", "oracle"],
                   default="auto")
    b.add_argument("--epsilon", default="0.1", help="accuracy for the priced RAV scheme")
    b.set_defaults(func=cmd_bribe)

    r = sub.add_parser("rank", help="bribery margin of every candidate")
    r.add_argument("file")
    r.add_argument("--rule", choices=rules, required=True)
    r.add_argument("--k", type=int)
    r.add_argument("--op", choices=["add", "delete", "swap"], required=True)
    r.add_argument("--priced", action="store_true")
    r.add_argument("--restrict-to-p", action="store_true")
    r.set_defaults(func=cmd_rank)

    g = sub.add_parser("gen", help="generate an election file")
    g.add_argument("--kind", choices=["random", "is-reduction", "x3c-reduction"], required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--m", type=int, default=4)
    g.add_argument("--n", type=int, default=6)
    g.add_argument("--prob", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--k", type=int)
    g.add_argument("--vertices", type=int, default=4)
    g.add_argument("--edges", default="0-1,0-2,0-3,1-2,1-3,2-3")
    g.add_argument("--h", type=int, default=1)
    g.add_argument("--sets", default="0,1,2;0,1,2;0,1,2")
    g.add_argument("--alpha", type=int, default=1)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="replay a solution file")
    v.add_argument("file")
    v.add_argument("solution")
    v.add_argument("--rule", choices=rules, default="av")
    v.add_argument("--k", type=int)
    v.add_argument("--p", required=True)
    v.add_argument("--priced", action="store_true")
    v.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except UnsupportedCombination as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ElectionError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
