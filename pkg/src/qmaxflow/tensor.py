"""Dense tensors over a prime field or complex doubles, and network contraction.

Prime-field arrays are numpy ``object`` arrays of Python ints reduced mod p, so
arithmetic is exact for any ``p < 2**62``.  Complex arrays are ``complex128``.

The contracted matrix has rows indexed by the output multi-index and columns by
the input multi-index; terminal 1 is the most significant digit on each side.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Mapping, Union

import numpy as np

from .netgraph import INPUT, OUTPUT, Network, Port, Terminal, valence_types

DEFAULT_PRIME = 2**61 - 1
_MASK64 = (1 << 64) - 1


class ShapeError(ValueError):
    pass


class DomainError(TypeError):
    pass


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        from sympy import isprime

        if not (2 < self.p < 2**62) or not isprime(self.p):
            raise ValueError(f"{self.p} is not an odd prime below 2**62")

    def asarray(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        return np.vectorize(lambda x: int(x) % self.p, otypes=[object])(arr) if arr.size else arr

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        # 0-d object arrays decay to Python ints under arithmetic
        return np.asarray(arr % self.p, dtype=object)

    def random(self, rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
        return np.asarray(rng.integers(0, self.p, size=shape, dtype=np.int64), dtype=object)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64).astype(object)

    def accepts(self, arr: np.ndarray) -> bool:
        return arr.dtype == object


@dataclass(frozen=True)
class ComplexFloat:
    def asarray(self, data) -> np.ndarray:
        return np.asarray(data, dtype=np.complex128)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def random(self, rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.complex128)

    def accepts(self, arr: np.ndarray) -> bool:
        return arr.dtype == np.complex128


Domain = Union[PrimeField, ComplexFloat]


@dataclass(frozen=True)
class TensorAssignment:
    """One tensor per vertex, axes in the vertex's local port order."""

    domain: Domain
    tensors: Mapping[str, np.ndarray]

    def __getitem__(self, vertex: str) -> np.ndarray:
        return self.tensors[vertex]

    def check(self, net: Network) -> None:
        for v in net.vertices:
            if v not in self.tensors:
                raise ShapeError(f"no tensor for vertex {v!r}")
            t = self.tensors[v]
            if t.shape != net.valence(v):
                raise ShapeError(f"vertex {v!r}: tensor shape {t.shape} != valence {net.valence(v)}")
            if not self.domain.accepts(t):
                raise DomainError(f"vertex {v!r}: dtype {t.dtype} does not match {self.domain}")


@dataclass(frozen=True)
class ContractionResult:
    matrix: np.ndarray
    domain: Domain

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


# -- planning ------------------------------------------------------------

Group = frozenset  # of node indices


@dataclass(frozen=True)
class ContractionPlan:
    """Pairwise merge order.  Nodes are vertex indices in declaration order,
    followed by one node per terminal-to-terminal edge."""

    steps: tuple[tuple[Group, Group, tuple[Hashable, ...]], ...]
    peak: int


def _labels(net: Network) -> list[tuple[list[Hashable], list[int]]]:
    """Per node: axis labels and dims.  Internal edges are labelled by id,
    terminal ends by the terminal."""
    nodes = []
    for v in net.vertices:
        labels, dims = [], []
        for eid in net.ports[v]:
            other = net.other_end(eid, Port(v, net.port_of(v, eid)))
            e = net.edges[eid]
            if e.is_self_loop:
                labels.append(eid)
            else:
                labels.append(other if isinstance(other, Terminal) else eid)
            dims.append(e.capacity)
        nodes.append((labels, dims))
    for e in net.edges:
        if isinstance(e.ends[0], Terminal) and isinstance(e.ends[1], Terminal):
            nodes.append((list(e.ends), [e.capacity, e.capacity]))
    return nodes


def _open(labels: list[Hashable], dims: list[int]) -> dict[Hashable, int]:
    """Labels left after tracing self-loops."""
    seen: dict[Hashable, int] = {}
    for lab, dim in zip(labels, dims):
        if lab in seen:
            del seen[lab]
        else:
            seen[lab] = dim
    return seen


def _merged(a: dict[Hashable, int], b: dict[Hashable, int]) -> dict[Hashable, int]:
    out = {k: v for k, v in a.items() if k not in b}
    out.update((k, v) for k, v in b.items() if k not in a)
    return out


def _size(labels: Mapping[Hashable, int]) -> int:
    return math.prod(labels.values())


def plan_contraction(net: Network) -> ContractionPlan:
    """Greedy plan: merge the adjacent pair whose result is smallest.

    Ties go to the pair with the smallest (declaration-order) node indices.
    Disconnected pieces are joined by outer products at the end, smallest first.
    """
    groups = {frozenset([i]): _open(l, d) for i, (l, d) in enumerate(_labels(net))}
    peak = max((_size(g) for g in groups.values()), default=1)
    steps = []
    while len(groups) > 1:
        best = None
        for (ga, la), (gb, lb) in combinations(groups.items(), 2):
            shared = la.keys() & lb.keys()
            cost = _size(_merged(la, lb))
            rank = (not shared, cost, tuple(sorted((min(ga), min(gb)))))
            if best is None or rank < best[0]:
                best = (rank, ga, gb)
        _, ga, gb = best
        if min(gb) < min(ga):
            ga, gb = gb, ga
        la, lb = groups.pop(ga), groups.pop(gb)
        shared = tuple(k for k in la if k in lb)
        merged = _merged(la, lb)
        peak = max(peak, _size(merged))
        groups[ga | gb] = merged
        steps.append((ga, gb, shared))
    return ContractionPlan(tuple(steps), peak)


def sequential_plan(net: Network) -> ContractionPlan:
    """Fold nodes left to right in declaration order."""
    nodes = [_open(l, d) for l, d in _labels(net)]
    if not nodes:
        return ContractionPlan((), 1)
    acc, acc_labels = frozenset([0]), nodes[0]
    peak = _size(acc_labels)
    steps = []
    for i in range(1, len(nodes)):
        shared = tuple(k for k in acc_labels if k in nodes[i])
        acc_labels = _merged(acc_labels, nodes[i])
        peak = max(peak, _size(acc_labels), _size(nodes[i]))
        steps.append((acc, frozenset([i]), shared))
        acc = acc | {i}
    return ContractionPlan(tuple(steps), peak)


# -- contraction ---------------------------------------------------------


def _trace_self(arr: np.ndarray, labels: list[Hashable], domain: Domain):
    labels = list(labels)
    while True:
        dup = next((lab for i, lab in enumerate(labels) if lab in labels[i + 1:]), None)
        if dup is None:
            return arr, labels
        i = labels.index(dup)
        j = labels.index(dup, i + 1)
        arr = domain.reduce(np.diagonal(arr, axis1=i, axis2=j).sum(axis=-1))
        labels = [lab for k, lab in enumerate(labels) if k not in (i, j)]


def _pair(a, la, b, lb, domain):
    shared = [lab for lab in la if lab in lb]
    ia = [la.index(s) for s in shared]
    ib = [lb.index(s) for s in shared]
    out = np.tensordot(a, b, axes=(ia, ib))
    labels = [lab for lab in la if lab not in shared] + [lab for lab in lb if lab not in shared]
    return domain.reduce(out), labels


def contract(net: Network, assign: TensorAssignment, plan: ContractionPlan | None = None) -> ContractionResult:
    """Contract every internal edge; return the output-by-input matrix."""
    assign.check(net)
    domain = assign.domain
    if plan is None:
        plan = plan_contraction(net)
    raw = _labels(net)
    live: dict[frozenset, tuple[np.ndarray, list]] = {}
    for i, (labels, dims) in enumerate(raw):
        if i < len(net.vertices):
            arr = assign[net.vertices[i]]
        else:
            arr = domain.asarray(np.eye(dims[0], dtype=np.int64))
        live[frozenset([i])] = _trace_self(arr, labels, domain)
    for ga, gb, _ in plan.steps:
        a, la = live.pop(ga)
        b, lb = live.pop(gb)
        live[ga | gb] = _pair(a, la, b, lb, domain)
    if len(live) > 1:
        raise ValueError("contraction plan leaves more than one tensor")
    if live:
        (arr, labels), = live.values()
    else:
        arr, labels = domain.asarray(np.ones((), dtype=np.int64)), []

    order = [Terminal(OUTPUT, k) for k in range(1, len(net.outputs) + 1)]
    order += [Terminal(INPUT, k) for k in range(1, len(net.inputs) + 1)]
    if sorted(map(str, labels)) != sorted(map(str, order)):
        raise ValueError(f"free indices {labels} are not the terminals")
    arr = np.transpose(arr, [labels.index(t) for t in order]) if order else arr
    return ContractionResult(arr.reshape(net.dim_out, net.dim_in), domain)


# -- random assignments --------------------------------------------------


def _words(*parts: object) -> list[int]:
    h = hashlib.blake2b("\x1f".join(map(str, parts)).encode(), digest_size=16).digest()
    return [int.from_bytes(h[i:i + 4], "little") for i in range(0, 16, 4)]


def _rng(seed: int, *tag: object) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & _MASK64, *_words(*tag)]))


def random_assignment(net: Network, domain: Domain, seed: int) -> TensorAssignment:
    """Independent random tensor per vertex; each vertex has its own stream."""
    tensors = {v: domain.random(_rng(seed, "vertex", v), net.valence(v)) for v in net.vertices}
    return TensorAssignment(domain, tensors)


def shared_random_assignment(net: Network, domain: Domain, seed: int) -> TensorAssignment:
    """One random tensor per valence type, shared by every vertex of that type.

    The stream depends only on the seed and the type, so the same seed gives
    the same tensor for a type in every network.
    """
    types = valence_types(net)
    per_type = {t: domain.random(_rng(seed, "type", *t), t) for t in types.distinct}
    return TensorAssignment(domain, {v: per_type[t] for v, t in types.by_vertex.items()})


# -- dump format ---------------------------------------------------------


def dump_assignment(net: Network, assign: TensorAssignment) -> str:
    lines = []
    for v in net.vertices:
        t = assign[v]
        shape = "x".join(map(str, t.shape)) or "()"
        if isinstance(assign.domain, PrimeField):
            entries = " ".join(str(int(x)) for x in t.ravel())
        else:
            entries = " ".join(f"{float(x.real)!r},{float(x.imag)!r}" for x in t.ravel())
        lines.append(f"t {v} {shape} {entries}")
    return "\n".join(lines) + "\n"


def load_assignment(text: str, domain: Domain) -> TensorAssignment:
    tensors = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "t" or len(parts) < 3:
            raise ValueError(f"line {lineno}: expected 't <vertex> <shape> <entries...>'")
        shape = () if parts[2] == "()" else tuple(int(x) for x in parts[2].split("x"))
        vals = parts[3:]
        if len(vals) != math.prod(shape):
            raise ValueError(f"line {lineno}: {len(vals)} entries for shape {shape}")
        if isinstance(domain, PrimeField):
            arr = domain.asarray([int(x) for x in vals]) if vals else domain.zeros(0)
        else:
            arr = domain.asarray([complex(*map(float, x.split(","))) for x in vals])
        tensors[parts[1]] = arr.reshape(shape)
    return TensorAssignment(domain, tensors)
