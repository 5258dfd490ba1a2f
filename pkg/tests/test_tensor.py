import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from oracles import brute_force_contract, config_count, networks as net_strategy
from qmaxflow import networks
from qmaxflow.netgraph import Port, swap_sides
from qmaxflow.tensor import (
    DEFAULT_PRIME,
    ComplexFloat,
    DomainError,
    PrimeField,
    ShapeError,
    TensorAssignment,
    contract,
    dump_assignment,
    load_assignment,
    plan_contraction,
    random_assignment,
    sequential_plan,
    shared_random_assignment,
)

P = DEFAULT_PRIME
BRUTE_LIMIT = 2**12


@given(net_strategy(), st.integers(0, 2**32))
def test_contract_matches_brute_force_field(net, seed):
    assume(config_count(net) <= BRUTE_LIMIT)
    a = random_assignment(net, PrimeField(), seed)
    got = contract(net, a).matrix
    assert got.shape == (net.dim_out, net.dim_in)
    assert np.array_equal(got, brute_force_contract(net, a.tensors, P))


@given(net_strategy(), st.integers(0, 2**32))
def test_contract_matches_brute_force_complex(net, seed):
    assume(config_count(net) <= BRUTE_LIMIT)
    a = random_assignment(net, ComplexFloat(), seed)
    np.testing.assert_allclose(contract(net, a).matrix, brute_force_contract(net, a.tensors),
                               rtol=1e-10, atol=1e-10)


@given(net_strategy(max_vertices=5), st.integers(0, 2**32))
def test_plan_order_does_not_matter(net, seed):
    a = random_assignment(net, PrimeField(), seed)
    greedy = contract(net, a, plan_contraction(net)).matrix
    seq = contract(net, a, sequential_plan(net)).matrix
    assert np.array_equal(greedy, seq)


@given(net_strategy(max_vertices=4), st.integers(0, 2**32))
def test_swap_sides_transposes(net, seed):
    a = random_assignment(net, PrimeField(), seed)
    assert np.array_equal(contract(swap_sides(net), a).matrix, contract(net, a).matrix.T)


@given(st.integers(0, 2**32), st.data())
def test_local_port_permutation_is_axis_permutation(seed, data):
    # relabel the ports of one vertex and permute its tensor axes to match
    net = networks.fig3()
    a = random_assignment(net, PrimeField(), seed)
    perm = data.draw(st.permutations(range(3)))
    v = "top"
    new_port = {old + 1: perm.index(old) + 1 for old in range(3)}

    def remap(e):
        return Port(v, new_port[e.port]) if isinstance(e, Port) and e.vertex == v else e

    moved = net.build([(x, net.degrees[x]) for x in net.vertices],
                      [(e.capacity, remap(e.ends[0]), remap(e.ends[1])) for e in net.edges])
    tensors = dict(a.tensors)
    tensors[v] = np.transpose(a[v], perm)
    b = TensorAssignment(a.domain, tensors)
    assert np.array_equal(contract(moved, b).matrix, contract(net, a).matrix)


def test_fig3_plan_peak():
    assert plan_contraction(networks.fig3()).peak <= 144


def test_identity_wire():
    net = networks.pass_through(3)
    m = contract(net, TensorAssignment(PrimeField(), {})).matrix
    assert np.array_equal(m, np.eye(3, dtype=int))


def test_self_loop_traces():
    from qmaxflow.netgraph import parse_network

    net = parse_network("v a 3\ne 2 a.1 a.3\ne 2 S.1 a.2\n")
    t = np.arange(8).reshape(2, 2, 2)
    m = contract(net, TensorAssignment(PrimeField(), {"a": PrimeField().asarray(t)})).matrix
    assert m.shape == (1, 2)
    assert list(m[0]) == [t[0, 0, 0] + t[1, 0, 1], t[0, 1, 0] + t[1, 1, 1]]


def test_shape_and_domain_checks():
    net = networks.fig3()
    a = random_assignment(net, PrimeField(), 1)
    bad = dict(a.tensors)
    bad["top"] = bad["top"][:1]
    with pytest.raises(ShapeError):
        contract(net, TensorAssignment(a.domain, bad))
    with pytest.raises(DomainError):
        contract(net, TensorAssignment(ComplexFloat(), a.tensors))
    with pytest.raises(ValueError):
        PrimeField(15)


def test_seeding_is_per_vertex_and_reproducible():
    net = networks.fig3()
    a = random_assignment(net, PrimeField(), 5)
    b = random_assignment(net, PrimeField(), 5)
    assert all(np.array_equal(a[v], b[v]) for v in net.vertices)
    assert not np.array_equal(a["top"], a["bot"])


def test_shared_assignment_reuses_tensor_across_networks():
    a = shared_random_assignment(networks.fig5(), PrimeField(), 9)
    b = shared_random_assignment(networks.fig6(), PrimeField(), 9)
    assert a["tl"] is a["br"]
    assert np.array_equal(a["tl"], b["mr"])


@pytest.mark.parametrize("domain", [PrimeField(), ComplexFloat()])
def test_dump_load_roundtrip(domain):
    net = networks.fig3()
    a = random_assignment(net, domain, 3)
    b = load_assignment(dump_assignment(net, a), domain)
    for v in net.vertices:
        assert np.array_equal(a[v], b[v])
