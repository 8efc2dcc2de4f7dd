import itertools

import pytest

from abcbribery.flows import Arc, FlowNetwork, InfeasibleFlowError, min_cost_flow_lb
from abcbribery.generators import Stream64


def test_single_arc_with_lower_bound():
    net = FlowNetwork(2, (Arc(0, 1, 1, 1, 5),), 0, 1, 1)
    assert min_cost_flow_lb(net) == (5, (1,))


def test_lower_bound_above_capacity_rejected():
    with pytest.raises(ValueError):
        Arc(0, 1, 1, 0, 0)


def test_unsupported_lower_bound_is_infeasible():
    # the lb-1 arc hangs off a node the source cannot feed
    net = FlowNetwork(3, (Arc(0, 1, 0, 1, 1), Arc(2, 1, 1, 1, 0)), 0, 1, 1)
    with pytest.raises(InfeasibleFlowError):
        min_cost_flow_lb(net)


def test_required_flow_exceeding_capacity_is_infeasible():
    net = FlowNetwork(2, (Arc(0, 1, 0, 1, 1),), 0, 1, 2)
    with pytest.raises(InfeasibleFlowError):
        min_cost_flow_lb(net)


def _brute_min_cost(net: FlowNetwork):
    best = None
    ranges = [range(a.lower, a.capacity + 1) for a in net.arcs]
    for flows in itertools.product(*ranges):
        balance = [0] * net.num_nodes
        for f, a in zip(flows, net.arcs):
            balance[a.tail] -= f
            balance[a.head] += f
        if any(balance[v] != 0 for v in range(net.num_nodes)
               if v not in (net.source, net.sink)):
            continue
        if balance[net.sink] != net.required_flow:
            continue
        cost = sum(f * a.cost for f, a in zip(flows, net.arcs))
        if best is None or cost < best:
            best = cost
    return best


def test_matches_bruteforce_on_random_networks():
    stream = Stream64(7)
    solved = 0
    for _ in range(250):
        n = stream.randint(2, 5)
        arcs = []
        for _ in range(stream.randint(1, 7)):
            u = stream.randint(0, n - 1)
            v = stream.randint(0, n - 1)
            if u == v:
                continue
            cap = stream.randint(0, 3)
            arcs.append(Arc(u, v, stream.randint(0, cap), cap, stream.randint(0, 4)))
        if not arcs:
            continue
        net = FlowNetwork(n, tuple(arcs), 0, n - 1, stream.randint(0, 3))
        expected = _brute_min_cost(net)
        try:
            cost, flows = min_cost_flow_lb(net)
        except InfeasibleFlowError:
            cost, flows = None, None
        assert cost == expected, net
        if flows is not None:
            solved += 1
            balance = [0] * n
            for f, a in zip(flows, net.arcs):
                assert a.lower <= f <= a.capacity
                balance[a.tail] -= f
                balance[a.head] += f
            for v in range(1, n - 1):
                assert balance[v] == 0
            assert balance[n - 1] == net.required_flow
            assert sum(f * a.cost for f, a in zip(flows, net.arcs)) == cost
    assert solved > 30


def test_negative_cost_rejected():
    with pytest.raises(ValueError):
        Arc(0, 1, 0, 1, -1)
