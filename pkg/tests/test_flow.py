import math

import pytest
from hypothesis import given, strategies as st

from oracles import networks as net_strategy, nx_max_flow
from qmaxflow import flow, networks
from qmaxflow.flow import (
    PrecisionError,
    exact_log,
    expand_uniform,
    largest_power_at_most,
    max_flow,
    menger_paths,
    min_product_cut,
    quantum_min_cut,
    thin_network,
    unit_min_cut,
)
from qmaxflow.netgraph import Network, NetworkError, Port, Terminal, cut_edges, enumerate_cuts


@given(net_strategy(max_vertices=5, max_edges=9), st.data())
def test_max_flow_matches_networkx(net, data):
    w = [data.draw(st.integers(0, 9)) for _ in net.edges]
    res = max_flow(net, w)
    assert res.value == nx_max_flow(net, w)
    # the residual cut certifies optimality
    assert sum(w[e] for e in cut_edges(net, res.source_side)) == res.value


@given(net_strategy(max_vertices=5, max_edges=9, caps=(1, 2, 3, 5, 7, 8)))
def test_qmc_matches_oracle(net):
    assert quantum_min_cut(net) == enumerate_cuts(net)[0].value


@given(net_strategy(min_vertices=13, max_vertices=15, max_edges=24, caps=(2, 3, 5, 6, 7)))
def test_qmc_certified_path_on_larger_nets(net):
    # above the exhaustive-check size, only the precision argument is used
    assert len(net.vertices) > flow.QMC_ORACLE_VERTICES
    assert quantum_min_cut(net) == enumerate_cuts(net)[0].value


def test_known_min_cuts():
    assert quantum_min_cut(networks.fig3()) == 8
    assert quantum_min_cut(networks.fig6()) == 8
    assert quantum_min_cut(networks.family(3, 2, 2)) == 16
    assert quantum_min_cut(networks.three_qudit(3, 2, 3, 1, 5)) == 15
    assert quantum_min_cut(networks.pass_through(5)) == 5


def test_disconnected_gives_one():
    net = Network.build([("a", 1), ("b", 1)], [(4, Terminal("S", 1), Port("a", 1)),
                                               (4, Port("b", 1), Terminal("T", 1))])
    assert quantum_min_cut(net) == 1
    assert min_product_cut(net).edges == frozenset()


def test_near_tie_uses_higher_precision(monkeypatch):
    # 3*3 = 9 against 2*5 = 10 and 8 = 2*2*2: force the log step to start coarse
    net = networks.two_layer(3, 2, 3, 2, 2, 5, 2)
    monkeypatch.setattr(flow, "QMC_ORACLE_VERTICES", 0)
    monkeypatch.setattr(flow, "LOG_FRACTION_BITS", 2)
    assert quantum_min_cut(net) == enumerate_cuts(net)[0].value


def test_precision_error_when_doublings_exhausted(monkeypatch):
    net = networks.two_layer(3, 2, 3, 2, 2, 5, 2)
    monkeypatch.setattr(flow, "QMC_ORACLE_VERTICES", 0)
    monkeypatch.setattr(flow, "LOG_FRACTION_BITS", 1)
    monkeypatch.setattr(flow, "MAX_PRECISION_DOUBLINGS", 0)
    with pytest.raises(PrecisionError):
        min_product_cut(net)


@given(net_strategy(max_vertices=5, max_edges=9))
def test_menger_paths_are_disjoint_walks(net):
    ps = menger_paths(net)
    assert len(ps) == unit_min_cut(net) == nx_max_flow(net, [1] * len(net.edges))
    used = [e for p in ps.paths for e in p.edges]
    assert len(used) == len(set(used))
    for p in ps.paths:
        assert isinstance(p.nodes[0], Terminal) and p.nodes[0].side == "S"
        assert isinstance(p.nodes[-1], Terminal) and p.nodes[-1].side == "T"
        inner = p.nodes[1:-1]
        assert len(inner) == len(set(inner))
        assert len(p.edges) == len(p.nodes) - 1


def test_exact_log_and_powers():
    assert exact_log(8, 2) == 3 and exact_log(1, 5) == 0 and exact_log(12, 2) is None
    assert largest_power_at_most(7, 2) == 4 and largest_power_at_most(2, 3) == 1


@given(net_strategy(max_vertices=4, caps=(2, 4, 8)))
def test_expansion_keeps_cut_values(net):
    big = expand_uniform(net, 2)
    assert all(e.capacity == 2 for e in big.edges)
    assert big.dim_in == net.dim_in and big.dim_out == net.dim_out
    assert 2 ** unit_min_cut(big) == quantum_min_cut(net)


def test_expand_rejects_non_power():
    with pytest.raises(NetworkError):
        expand_uniform(networks.fig3(), 2)


def test_thinning():
    thin = thin_network(networks.fig3(), 2)
    assert {e.capacity for e in thin.edges} == {2}
    assert quantum_min_cut(thin) == 4
    assert math.prod(e.capacity for e in thin_network(networks.fig3(), 3).edges) == 9
