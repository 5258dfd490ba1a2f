import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmaxflow import networks
from qmaxflow.entropy import ZeroNetworkError, entanglement_entropy, entropy_of_matrix, estimate_mee
from qmaxflow.linalg import rank_numeric
from qmaxflow.netgraph import swap_sides
from qmaxflow.qmf import construct_path_tensors
from qmaxflow.tensor import ComplexFloat, DomainError, PrimeField, TensorAssignment, contract, random_assignment

CF = ComplexFloat()
NETS = [networks.fig3(), networks.fig6(), networks.fig5(), networks.family(3, 1, 2)]


@given(st.sampled_from(NETS), st.integers(0, 2**32))
@settings(max_examples=40)
def test_entropy_bounded_by_log_rank_and_normalized(net, seed):
    a = random_assignment(net, CF, seed)
    rep = entanglement_entropy(net, a)
    assert abs(sum(rep.eigenvalues) - 1) < 1e-10
    assert all(0 <= x <= 1 for x in rep.eigenvalues)
    assert rep.bits <= math.log2(rank_numeric(contract(net, a).matrix)) + 1e-8
    assert rep.nats == pytest.approx(rep.bits * math.log(2))


@given(st.sampled_from(NETS), st.integers(0, 2**32), st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3))
@settings(max_examples=30)
def test_entropy_scale_and_swap_invariant(net, seed, z):
    a = random_assignment(net, CF, seed)
    base = entanglement_entropy(net, a).bits
    scaled = TensorAssignment(CF, {**a.tensors, net.vertices[0]: z * a[net.vertices[0]]})
    assert entanglement_entropy(net, scaled).bits == pytest.approx(base, abs=1e-9)
    assert entanglement_entropy(swap_sides(net), a).bits == pytest.approx(base, abs=1e-9)


def test_product_state_has_zero_entropy():
    assert entropy_of_matrix(np.outer([1, 2j], [3, 4, 5])).bits == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("net", [networks.fig6(), networks.crossed_square(), networks.random_power_network(1, 6)])
def test_path_tensors_are_maximally_entangled(net):
    rep = entanglement_entropy(net, construct_path_tensors(net, 2, CF))
    qmc = rep.rank
    assert all(abs(x - 1 / qmc) < 1e-12 for x in rep.eigenvalues)
    assert rep.bits == pytest.approx(math.log2(qmc), abs=1e-12)


def test_estimate_mee_bounds():
    fig3 = estimate_mee(networks.fig3(), 30)
    assert fig3.bits <= math.log2(7) + 1e-8
    fig6 = estimate_mee(networks.fig6(), 20)
    assert 0 < fig6.bits <= 3
    assert fig6.to_json()["qmc_log2_bound"] == 3
    assert estimate_mee(networks.pass_through(2), 1).bits == pytest.approx(1)


def test_errors():
    with pytest.raises(ZeroNetworkError):
        entropy_of_matrix(np.zeros((2, 2)))
    net = networks.fig3()
    with pytest.raises(DomainError):
        entanglement_entropy(net, random_assignment(net, PrimeField(), 0))
    zero = TensorAssignment(CF, {v: CF.zeros(net.valence(v)) for v in net.vertices})
    with pytest.raises(ZeroNetworkError):
        entanglement_entropy(net, zero)
