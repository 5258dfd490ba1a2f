"""Quantum max-flow: sampled ranks, the path-tensor construction, lower bounds,
and the two small algebraic checks on 2x2x2 tensors."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import networks
from .flow import _expand, menger_paths, quantum_min_cut, thin_network, unit_min_cut
from .linalg import rank_exact, rank_numeric
from .netgraph import Network, Port
from .tensor import (
    ComplexFloat,
    ContractionPlan,
    Domain,
    PrimeField,
    TensorAssignment,
    _rng,
    contract,
    plan_contraction,
    random_assignment,
    shared_random_assignment,
)

DEFAULT_TRIALS = 20
DEFAULT_TRIALS_V2 = 50
DEFAULT_SEED = 42
DEFAULT_MAX_DIM = 2**20


class InvariantViolation(AssertionError):
    """A sampled quantity broke a bound that holds for every assignment."""


class ResourceLimit(RuntimeError):
    pass


def trial_seed(seed: int, t: int) -> int:
    """Seed of trial ``t``; independent of how many trials are run."""
    return int(np.random.SeedSequence([seed & (2**64 - 1), t]).generate_state(1, np.uint64)[0])


def matrix_rank(matrix: np.ndarray, domain: Domain, rtol: float = 1e-9) -> int:
    if isinstance(domain, PrimeField):
        return rank_exact(matrix, domain.p)
    return rank_numeric(matrix, rtol)


@dataclass(frozen=True)
class QmfEstimate:
    """Best sampled rank.  Always a lower bound on the true max rank."""

    best: int
    trials: int
    seeds: tuple[int, ...]
    ranks: tuple[int, ...]
    qmc: int
    lower_bound_on_qmf: bool = field(default=True, init=False)

    @property
    def equals_qmc(self) -> bool:
        return self.best == self.qmc

    def to_json(self) -> dict:
        return {
            "best": self.best,
            "trials": self.trials,
            "qmc": self.qmc,
            "equals_qmc": self.equals_qmc,
            "seeds": list(self.seeds),
        }


def _estimate(net: Network, trials: int, seed: int, domain: Domain, rtol: float,
              draw: Callable[[Network, Domain, int], TensorAssignment],
              max_dim: int | None) -> QmfEstimate:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if max_dim is not None and net.dim_in * net.dim_out > max_dim:
        raise ResourceLimit(f"matrix {net.dim_out}x{net.dim_in} exceeds max-dim {max_dim}")
    qmc = quantum_min_cut(net)
    plan = plan_contraction(net)
    seeds, ranks = [], []
    for t in range(trials):
        s = trial_seed(seed, t)
        r = matrix_rank(contract(net, draw(net, domain, s), plan).matrix, domain, rtol)
        if r > qmc:
            raise InvariantViolation(f"trial {t}: rank {r} exceeds min cut {qmc}")
        seeds.append(s)
        ranks.append(r)
    return QmfEstimate(max(ranks), trials, tuple(seeds), tuple(ranks), qmc)


def estimate_qmf(net: Network, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
                 domain: Domain | None = None, rtol: float = 1e-9,
                 max_dim: int | None = None) -> QmfEstimate:
    """Max rank over independent random tensors at every vertex."""
    return _estimate(net, trials, seed, domain or PrimeField(), rtol, random_assignment, max_dim)


def estimate_qmf_v2(net: Network, trials: int = DEFAULT_TRIALS_V2, seed: int = DEFAULT_SEED,
                    domain: Domain | None = None, rtol: float = 1e-9,
                    max_dim: int | None = None) -> QmfEstimate:
    """Max rank when vertices of equal valence type share one tensor."""
    return _estimate(net, trials, seed, domain or PrimeField(), rtol, shared_random_assignment, max_dim)


# -- explicit max-rank tensors -------------------------------------------


def construct_path_tensors(net: Network, d: int, domain: Domain | None = None) -> TensorAssignment:
    """0/1 tensors whose contraction has rank equal to the min cut.

    Capacities must be powers of ``d``.  On the network with every edge split
    into capacity-``d`` strands, a maximum family of edge-disjoint paths is
    chosen; each vertex tensor is 1 exactly when the two strands of every path
    through it carry equal indices and every other strand carries index 0.
    The tensors are then reshaped back onto the original ports.
    """
    domain = domain or PrimeField()
    expanded, _ = _expand(net, d)
    pairs: dict[str, list[tuple[int, int]]] = {v: [] for v in net.vertices}
    for path in menger_paths(expanded).paths:
        for i in range(1, len(path.nodes) - 1):
            v = path.nodes[i]
            a = expanded.port_of(v, path.edges[i - 1])
            b = expanded.port_of(v, path.edges[i])
            pairs[v].append((a - 1, b - 1))

    tensors = {}
    for v in net.vertices:
        k = expanded.degrees[v]
        arr = np.zeros((d,) * k, dtype=np.int64)
        for values in itertools.product(range(d), repeat=len(pairs[v])):
            idx = [0] * k
            for (a, b), x in zip(pairs[v], values):
                idx[a] = idx[b] = x
            arr[tuple(idx)] = 1
        tensors[v] = domain.asarray(arr.reshape(net.valence(v)))
    return TensorAssignment(domain, tensors)


def qmf_lower_bound(net: Network) -> int:
    """Best min cut over all power-of-d thinnings, d = 2 .. max capacity.

    Each thinned network has QMF = QMC and can only lose rank relative to the
    original, so every value is a valid lower bound.
    """
    top = max((e.capacity for e in net.edges), default=1)
    best = dominant_base_bound(net)
    for d in range(2, top + 1):
        best = max(best, quantum_min_cut(thin_network(net, d)))
    return best


# -- 2x2x2 tensors in GHZ form -------------------------------------------


GHZ = np.zeros((2, 2, 2))
GHZ[0, 0, 0] = GHZ[1, 1, 1] = 1


class GhzDegenerate(ValueError):
    def __init__(self, condition: int, detail: str):
        super().__init__(f"condition {condition} fails: {detail}")
        self.condition = condition


@dataclass(frozen=True)
class GhzDecomposition:
    """``t[i,j,k] = sum_a a[i,a] b[a,j] c[a,k]``, i.e. (a, b, c) applied to GHZ."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    eigenvalues: tuple[complex, complex]
    u: tuple[np.ndarray, np.ndarray]
    v: tuple[np.ndarray, np.ndarray]
    slice0: np.ndarray
    slice1: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return np.einsum("ia,abc,bj,ck->ijk", self.a, GHZ, self.b, self.c)


def ghz_decompose(t, tol: float = 1e-9) -> GhzDecomposition:
    """Bring a generic 2x2x2 tensor to GHZ form by local changes of basis.

    Read ``t`` as a map from the first leg to the other two: slices
    ``P = t[0]`` and ``Q = t[1]``.  With ``M = P^-1 Q`` having distinct
    eigenvalues and nonzero off-diagonals, ``lam_i I - M = u_i v_i`` is rank
    one, and ``lam_i |0> - |1>`` maps to ``(P u_i) (x) v_i``.
    """
    t = np.asarray(t, dtype=np.complex128)
    if t.shape != (2, 2, 2):
        raise ValueError(f"expected shape (2,2,2), got {t.shape}")
    scale = np.linalg.norm(t)
    p_slice, q_slice = t[0], t[1]
    det = np.linalg.det(p_slice)
    if scale == 0 or abs(det) <= tol * scale**2:
        raise GhzDegenerate(1, f"first slice is singular (det={det:.3g})")
    m = np.linalg.solve(p_slice, q_slice)
    mscale = max(np.linalg.norm(m), 1.0)
    disc = np.trace(m) ** 2 - 4 * np.linalg.det(m)
    if abs(disc) <= tol * mscale**2:
        raise GhzDegenerate(2, f"repeated eigenvalue (discriminant={disc:.3g})")
    if abs(m[0, 1]) <= tol * mscale or abs(m[1, 0]) <= tol * mscale:
        raise GhzDegenerate(3, "slice ratio has a zero off-diagonal entry")

    root = np.sqrt(disc)
    lams = ((np.trace(m) + root) / 2, (np.trace(m) - root) / 2)
    us, vs = [], []
    for lam in lams:
        dmat = lam * np.eye(2) - m
        # rank one with dmat[0,1] != 0: dmat = (col 1 / dmat[0,1]) * (row 0)
        us.append(dmat[:, 1] / dmat[0, 1])
        vs.append(dmat[0, :])
    change = np.array([[lams[0], lams[1]], [-1, -1]])  # columns: new first-leg basis
    a = np.linalg.inv(change).T
    b = np.stack([p_slice @ u for u in us])
    c = np.stack(vs)
    return GhzDecomposition(a, b, c, lams, tuple(us), tuple(vs), p_slice, q_slice)


# -- rank-3 symmetry of the shared-tensor crossed square ------------------


@dataclass(frozen=True)
class SymmetryReport:
    seeds: tuple[int, ...]
    symmetric: int
    rank3: int
    ranks: tuple[int, ...]
    violations: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def _reduced_map(d: np.ndarray, field_: PrimeField, plan: ContractionPlan | None = None) -> np.ndarray:
    net = networks.rank3_reduced()
    copy = field_.asarray(GHZ.astype(np.int64))
    tensors = {v: (copy if v.startswith("s") else d) for v in net.vertices}
    return contract(net, TensorAssignment(field_, tensors), plan).matrix


def rank3_formula(d: np.ndarray, p: int) -> np.ndarray:
    """Rows (k,l), columns (i,j) of ``D[i,k] D[k,j] D[j,l] D[l,i]`` mod p."""
    out = np.zeros((4, 4), dtype=object)
    for i, j, k, l in itertools.product(range(2), repeat=4):
        out[2 * k + l, 2 * i + j] = (d[i, k] * d[k, j] * d[j, l] * d[l, i]) % p
    return out


def verify_rk3_symmetry(seed_count: int, seed: int = DEFAULT_SEED, p: int | None = None) -> SymmetryReport:
    """For random invertible D: contract the reduced crossed square, check it
    matches the closed form, and that inputs |01> and |10> map to the same
    vector, which caps the rank at 3."""
    if seed_count < 1:
        raise ValueError("seed_count must be >= 1")
    field_ = PrimeField(p) if p else PrimeField()
    plan = plan_contraction(networks.rank3_reduced())
    seeds, ranks, violations = [], [], []
    symmetric = 0
    for t in range(seed_count):
        s = trial_seed(seed, t)
        rng = _rng(s, "rank3")
        while True:
            d = field_.random(rng, (2, 2))
            if (d[0, 0] * d[1, 1] - d[0, 1] * d[1, 0]) % field_.p:
                break
        phi = _reduced_map(d, field_, plan)
        ok = bool(np.all(phi == rank3_formula(d, field_.p))) and bool(np.all(phi[:, 1] == phi[:, 2]))
        symmetric += ok
        if not ok:
            violations.append(s)
        seeds.append(s)
        ranks.append(rank_exact(phi, field_.p))
    return SymmetryReport(tuple(seeds), symmetric, sum(r == 3 for r in ranks), tuple(ranks), tuple(violations))


# -- the 2n^2 - jk family ------------------------------------------------


@dataclass(frozen=True)
class FamilyReport:
    n: int
    j: int
    k: int
    qmc: int
    bound: int
    qmf_sampled: int

    @property
    def ratio(self) -> float:
        return self.qmf_sampled / self.qmc

    def to_json(self) -> dict:
        return {"n": self.n, "j": self.j, "k": self.k, "qmc": self.qmc, "bound": self.bound,
                "qmf_sampled": self.qmf_sampled, "ratio": self.ratio}


def qmf_family_2n2jk(n: int, j: int, k: int, trials: int = DEFAULT_TRIALS,
                     seed: int = DEFAULT_SEED) -> FamilyReport:
    net = networks.family(n, j, k)
    est = estimate_qmf(net, trials, seed)
    qmc = min(2 * n * n, (2 * n - j) * (2 * n - k))
    if est.qmc != qmc:
        raise InvariantViolation(f"min cut {est.qmc} != closed form {qmc}")
    return FamilyReport(n, j, k, qmc, 2 * n * n - j * k, est.best)


# -- capacity scaling ----------------------------------------------------


@dataclass(frozen=True)
class ScalingRow:
    n: int
    qmc: int
    qmf_sampled: int

    @property
    def gap(self) -> int:
        return self.qmc - self.qmf_sampled


def scaling_experiment(net: Network, n_max: int, trials: int = DEFAULT_TRIALS,
                       seed: int = DEFAULT_SEED, max_dim: int = DEFAULT_MAX_DIM) -> list[ScalingRow]:
    """Min cut and sampled max rank with every capacity multiplied by n = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rows = []
    for n in range(1, n_max + 1):
        scaled = networks.scale_capacities(net, n)
        est = estimate_qmf(scaled, trials, seed, max_dim=max_dim)
        rows.append(ScalingRow(n, est.qmc, est.best))
    return rows


def dominant_base_bound(net: Network) -> int:
    """``d_min ** C`` with C the unit-capacity min cut."""
    dmin = min((e.capacity for e in net.edges), default=1)
    return dmin ** unit_min_cut(net)


__all__ = [
    "ComplexFloat",
    "FamilyReport",
    "GhzDecomposition",
    "GhzDegenerate",
    "InvariantViolation",
    "QmfEstimate",
    "ResourceLimit",
    "ScalingRow",
    "SymmetryReport",
    "construct_path_tensors",
    "estimate_qmf",
    "estimate_qmf_v2",
    "ghz_decompose",
    "qmf_family_2n2jk",
    "qmf_lower_bound",
    "scaling_experiment",
    "verify_rk3_symmetry",
]
