"""Entanglement entropy of the contracted state across the input/output split."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .flow import quantum_min_cut
from .linalg import singular_values
from .netgraph import Network
from .qmf import DEFAULT_SEED, DEFAULT_TRIALS, InvariantViolation, trial_seed
from .tensor import ComplexFloat, DomainError, TensorAssignment, contract, plan_contraction, random_assignment

CUTOFF = 1e-14
BOUND_SLACK = 1e-8


class ZeroNetworkError(ValueError):
    """The contraction vanished, so the normalized state does not exist."""


@dataclass(frozen=True)
class EntropyReport:
    bits: float
    nats: float
    eigenvalues: tuple[float, ...]
    rank: int
    qmc: int | None = None
    skipped: int = 0

    def to_json(self) -> dict:
        return {
            "entropy_bits": self.bits,
            "entropy_nats": self.nats,
            "eigenvalues": list(self.eigenvalues),
            "qmc_log2_bound": math.log2(self.qmc) if self.qmc else None,
        }


def entropy_of_matrix(c: np.ndarray) -> EntropyReport:
    """Von Neumann entropy of C C^dagger / tr, from the singular values of C."""
    s = singular_values(c)
    if s.size == 0 or s[0] == 0:
        raise ZeroNetworkError("contraction is the zero map")
    lam = s**2
    lam = lam / lam.sum()
    lam = lam[lam > CUTOFF * lam[0]]
    lam = lam / lam.sum()
    nats = float(-np.sum(lam * np.log(lam)))
    return EntropyReport(nats / math.log(2), nats, tuple(float(x) for x in lam), int(lam.size))


def entanglement_entropy(net: Network, assign: TensorAssignment) -> EntropyReport:
    if not isinstance(assign.domain, ComplexFloat):
        raise DomainError("entanglement entropy needs a complex assignment")
    return entropy_of_matrix(contract(net, assign).matrix)


def estimate_mee(net: Network, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> EntropyReport:
    """Largest entropy over random complex assignments, checked against log2 QMC."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    qmc = quantum_min_cut(net)
    bound = math.log2(qmc)
    plan = plan_contraction(net)
    domain = ComplexFloat()
    best, skipped = None, 0
    for t in range(trials):
        assign = random_assignment(net, domain, trial_seed(seed, t))
        try:
            rep = entropy_of_matrix(contract(net, assign, plan).matrix)
        except ZeroNetworkError:
            skipped += 1
            continue
        if rep.bits > bound + BOUND_SLACK:
            raise InvariantViolation(f"trial {t}: entropy {rep.bits} exceeds log2 of min cut {bound}")
        if best is None or rep.bits > best.bits:
            best = rep
    if best is None:
        raise ZeroNetworkError("every trial contracted to zero")
    return EntropyReport(best.bits, best.nats, best.eigenvalues, best.rank, qmc, skipped)
