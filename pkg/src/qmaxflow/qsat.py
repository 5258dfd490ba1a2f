"""Generic quantum satisfiability: common kernel of random ranked constraints.

A state lies in the kernel of a sum of PSD projectors iff every projector
annihilates it, so the kernel of ``H`` is the null space of the stacked
constraint rows, each lifted by the identity on the qudits it does not touch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import networks
from .linalg import rank_exact
from .qmf import DEFAULT_SEED, DEFAULT_TRIALS, ResourceLimit, estimate_qmf, trial_seed
from .tensor import DEFAULT_PRIME, PrimeField, _rng

DEFAULT_MAX_ENTRIES = 2**20


class QsatError(ValueError):
    pass


class ConsensusError(RuntimeError):
    """Independent seeds disagreed on the generic kernel dimension."""


@dataclass(frozen=True)
class QsatInstance:
    """Qudit dimensions and constraints ``(qudits, rank)``; qudits are 0-based."""

    dims: tuple[int, ...]
    constraints: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        if not self.dims or any(d < 1 for d in self.dims):
            raise QsatError(f"dimensions must be positive: {self.dims}")
        for qudits, rank in self.constraints:
            if not qudits:
                raise QsatError("constraint acts on no qudits")
            if len(set(qudits)) != len(qudits) or not all(0 <= q < len(self.dims) for q in qudits):
                raise QsatError(f"bad qudit list {qudits}")
            local = math.prod(self.dims[q] for q in qudits)
            if not 0 <= rank <= local:
                raise QsatError(f"rank {rank} outside [0, {local}] on qudits {qudits}")

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def row_count(self) -> int:
        D = self.total_dim
        return sum(r * D // math.prod(self.dims[q] for q in qs) for qs, r in self.constraints)

    def naive_bound(self) -> int:
        """Rank-nullity lower bound on the kernel (may be negative)."""
        return self.total_dim - self.row_count()


def chain_instance(dims, ranks) -> QsatInstance:
    """Qudits in a line, one constraint on each neighbouring pair."""
    dims = tuple(int(d) for d in dims)
    if len(ranks) != len(dims) - 1:
        raise QsatError("a chain of n qudits has n-1 constraints")
    return QsatInstance(dims, tuple(((i, i + 1), int(r)) for i, r in enumerate(ranks)))


def parse_instance(text: str) -> QsatInstance:
    """``q d1 d2 ...`` then ``c rank i j ...`` lines with 1-based qudits."""
    dims = None
    cons = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        try:
            if line[0] == "q" and dims is None:
                dims = tuple(int(x) for x in line[1:])
            elif line[0] == "c" and dims is not None:
                cons.append((tuple(int(x) - 1 for x in line[2:]), int(line[1])))
            else:
                raise QsatError(f"unexpected {line[0]!r}")
        except ValueError as exc:
            raise QsatError(f"line {lineno}: {exc}") from None
    if dims is None:
        raise QsatError("missing 'q' line")
    return QsatInstance(dims, tuple(cons))


def serialize_instance(inst: QsatInstance) -> str:
    out = ["q " + " ".join(map(str, inst.dims))]
    out += [f"c {r} " + " ".join(str(q + 1) for q in qs) for qs, r in inst.constraints]
    return "\n".join(out) + "\n"


def _lift(block: np.ndarray, qudits: tuple[int, ...], dims: tuple[int, ...]) -> np.ndarray:
    """Rows of ``block (x) I`` on the full space, as a (rows, D) matrix."""
    n = len(dims)
    rest = [q for q in range(n) if q not in qudits]
    rest_dim = math.prod(dims[q] for q in rest)
    local = [dims[q] for q in qudits]
    # axes: (r, *local, *rest) x (rest') -> outer with identity, then reorder
    eye = np.eye(rest_dim, dtype=np.int64).astype(block.dtype)
    full = np.multiply.outer(block, eye)  # (r, L, R, R')
    r = block.shape[0]
    full = full.reshape([r] + local + [dims[q] for q in rest] + [rest_dim])
    pos = {q: 1 + i for i, q in enumerate(qudits)}
    pos.update({q: 1 + len(qudits) + i for i, q in enumerate(rest)})
    order = [0, len(dims) + 1] + [pos[q] for q in range(n)]
    return full.transpose(order).reshape(r * rest_dim, math.prod(dims))


def constraint_matrix(inst: QsatInstance, seed: int, p: int = DEFAULT_PRIME) -> np.ndarray:
    field = PrimeField(p)
    blocks = []
    for idx, (qs, r) in enumerate(inst.constraints):
        if r == 0:
            continue
        local = math.prod(inst.dims[q] for q in qs)
        m = field.random(_rng(seed, "constraint", idx), (r, local))
        blocks.append(_lift(m, qs, inst.dims))
    if not blocks:
        return np.zeros((0, inst.total_dim), dtype=object)
    return np.concatenate(blocks, axis=0)


def kernel_dim_once(inst: QsatInstance, seed: int, p: int = DEFAULT_PRIME,
                    max_entries: int = DEFAULT_MAX_ENTRIES) -> int:
    entries = inst.row_count() * inst.total_dim
    if entries > max_entries:
        raise ResourceLimit(f"stacked matrix has {entries} entries, cap is {max_entries}")
    m = constraint_matrix(inst, seed, p)
    return inst.total_dim - rank_exact(m, p)


def generic_kernel_dim(inst: QsatInstance, seed: int = DEFAULT_SEED, p: int = DEFAULT_PRIME,
                       max_entries: int = DEFAULT_MAX_ENTRIES) -> int:
    """Kernel dimension for generic constraints.

    Two derived seeds are run; if they disagree a third decides, and the value
    must then be confirmed by two of the three.  A random draw can only lose
    rank, so the smaller kernel is the generic one.
    """
    a, b = (kernel_dim_once(inst, trial_seed(seed, t), p, max_entries) for t in (0, 1))
    if a == b:
        return a
    c = kernel_dim_once(inst, trial_seed(seed, 2), p, max_entries)
    if c in (a, b) and c == min(a, b, c):
        return c
    raise ConsensusError(f"kernel dimensions {a}, {b}, {c} disagree")


# -- bridge to max-rank ----------------------------------------------------


@dataclass(frozen=True)
class ClaimReport:
    gqsat: int
    qmf: int
    qmc: int
    rhs: int
    identity: str

    @property
    def holds(self) -> bool:
        return self.gqsat == self.rhs

    def to_json(self) -> dict:
        return {"holds": self.holds, "gqsat": self.gqsat, "qmf": self.qmf,
                "qmc": self.qmc, "rhs": self.rhs, "identity": self.identity}


def _sampled(net_builder, dims, trials, seed) -> tuple[int, int]:
    if any(c == 0 for c in dims):
        return 0, 0
    est = estimate_qmf(net_builder(), trials, seed)
    return est.best, est.qmc


def check_claim_three_qudit(d1: int, d2: int, d3: int, r1: int, r2: int,
                            trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> ClaimReport:
    """Kernel of a 3-qudit chain against the max rank of its dual network:
    ``GQSAT = d3 (d1 d2 - r1) - QMF``."""
    inst = chain_instance((d1, d2, d3), (r1, r2))
    free = d1 * d2 - r1
    qmf, qmc = _sampled(lambda: networks.three_qudit(d1, d2, d3, r1, r2),
                        (free, d3, d2, d1, r2), trials, seed)
    rhs = d3 * free - qmf
    g = generic_kernel_dim(inst, seed)
    return ClaimReport(g, qmf, qmc, rhs, f"{g} = {d3}*{free} - {qmf}")


def check_claim_four_qudit(d1: int, d2: int, d3: int, d4: int, r1: int, r2: int, r3: int,
                           trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> ClaimReport:
    """``GQSAT = (d1 d2 - r1)(d3 d4 - r3) - QMF`` for a 4-qudit chain."""
    inst = chain_instance((d1, d2, d3, d4), (r1, r2, r3))
    top, bot = d1 * d2 - r1, d3 * d4 - r3
    qmf, qmc = _sampled(lambda: networks.four_qudit(d1, d2, d3, d4, r1, r2, r3),
                        (top, bot, d2, d3, d1, r2, d4), trials, seed)
    rhs = top * bot - qmf
    g = generic_kernel_dim(inst, seed)
    return ClaimReport(g, qmf, qmc, rhs, f"{g} = {top}*{bot} - {qmf}")


def random_projectors(inst: QsatInstance, seed: int) -> list[np.ndarray]:
    """Explicit PSD terms ``M^dagger M`` (lifted to the full space) for debugging."""
    rng = _rng(seed, "projector")
    out = []
    for qs, r in inst.constraints:
        local = math.prod(inst.dims[q] for q in qs)
        m = (rng.standard_normal((r, local)) + 1j * rng.standard_normal((r, local))) / np.sqrt(2)
        lifted = _lift(m.astype(np.complex128), qs, inst.dims)
        out.append(lifted.conj().T @ lifted)
    return out
