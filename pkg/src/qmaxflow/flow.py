"""Classical flow machinery on undirected networks.

Every undirected edge becomes a pair of opposite arcs of equal capacity; all
input terminals collapse into a super-source and all output terminals into a
super-sink.  Augmenting paths are found by BFS (Edmonds-Karp).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from decimal import Context, Decimal
from typing import Mapping, Sequence

from .netgraph import (
    INPUT,
    MAX_ORACLE_VERTICES,
    EdgeCut,
    Endpoint,
    Network,
    NetworkError,
    Port,
    Terminal,
    cut_edges,
    cut_value,
    enumerate_cuts,
)

LOG_FRACTION_BITS = 40
MAX_PRECISION_DOUBLINGS = 6
# networks at or below this size get the exhaustive cross-check in quantum_min_cut
QMC_ORACLE_VERTICES = 12

_SOURCE, _SINK = 0, 1


class PrecisionError(ArithmeticError):
    """Fixed-point log weights could not separate two near-tied cuts."""


@dataclass(frozen=True)
class FlowResult:
    """Maximum flow.  ``flow[e] > 0`` means flow runs from ``ends[0]`` to ``ends[1]``."""

    value: int
    flow: Mapping[int, int]
    source_side: frozenset[str]


@dataclass(frozen=True)
class Path:
    """Alternating node/edge walk from an input terminal to an output terminal."""

    nodes: tuple[Endpoint | str, ...]
    edges: tuple[int, ...]


@dataclass(frozen=True)
class PathSet:
    paths: tuple[Path, ...]

    def __len__(self) -> int:
        return len(self.paths)


def _node(end: Endpoint, index: Mapping[str, int]) -> int:
    if isinstance(end, Terminal):
        return _SOURCE if end.side == INPUT else _SINK
    return index[end.vertex]


def max_flow(net: Network, weights: Sequence[int] | Mapping[int, int]) -> FlowResult:
    """Integer max flow from all inputs to all outputs under per-edge ``weights``."""
    index = {v: i + 2 for i, v in enumerate(net.vertices)}
    n = len(index) + 2
    adj: list[list[int]] = [[] for _ in range(n)]
    head: list[int] = []
    cap: list[int] = []
    flow: list[int] = []
    arc_of_edge: dict[int, int] = {}
    for e in net.edges:
        w = int(weights[e.id])
        if w < 0:
            raise ValueError(f"edge {e.id}: negative weight {w}")
        u, v = _node(e.ends[0], index), _node(e.ends[1], index)
        if u == v:
            continue
        arc_of_edge[e.id] = len(head)
        for a, b in ((u, v), (v, u)):
            adj[a].append(len(head))
            head.append(b)
            cap.append(w)
            flow.append(0)

    total = 0
    while True:
        parent = [-1] * n
        parent[_SOURCE] = -2
        queue = deque([_SOURCE])
        while queue and parent[_SINK] == -1:
            x = queue.popleft()
            for arc in adj[x]:
                y = head[arc]
                if parent[y] == -1 and cap[arc] - flow[arc] > 0:
                    parent[y] = arc
                    queue.append(y)
        if parent[_SINK] == -1:
            break
        push = None
        y = _SINK
        while y != _SOURCE:
            arc = parent[y]
            r = cap[arc] - flow[arc]
            push = r if push is None else min(push, r)
            y = head[arc ^ 1]
        y = _SINK
        while y != _SOURCE:
            arc = parent[y]
            flow[arc] += push
            flow[arc ^ 1] -= push
            y = head[arc ^ 1]
        total += push

    reach = {_SOURCE}
    queue = deque([_SOURCE])
    while queue:
        x = queue.popleft()
        for arc in adj[x]:
            y = head[arc]
            if y not in reach and cap[arc] - flow[arc] > 0:
                reach.add(y)
                queue.append(y)
    source_side = frozenset(v for v, i in index.items() if i in reach)
    per_edge = {e.id: flow[arc_of_edge[e.id]] if e.id in arc_of_edge else 0 for e in net.edges}
    return FlowResult(total, per_edge, source_side)


# -- quantum min cut -----------------------------------------------------


def _log2_fixed(c: int, bits: int) -> int:
    ctx = Context(prec=bits // 3 + 30)
    value = ctx.divide(ctx.ln(Decimal(c)), ctx.ln(Decimal(2)))
    return int(ctx.multiply(value, Decimal(2) ** bits).to_integral_value())


def _certified(candidate: int, n_edges: int, bits: int) -> bool:
    # Every fixed-point weight is within 2^-(bits+1) of its true log2, so no
    # cut can undercut the candidate by more than n_edges * 2^-bits in log2.
    # Distinct integers P' < P differ by at least log2(e)/P in log2.
    return candidate * n_edges < 1.4426950408889634 * 2**bits


def _log_min_cut(net: Network, bits: int) -> EdgeCut:
    weights = [_log2_fixed(e.capacity, bits) for e in net.edges]
    res = max_flow(net, weights)
    edges = cut_edges(net, res.source_side)
    return EdgeCut(edges, res.source_side, cut_value(net, edges))


def min_product_cut(net: Network) -> EdgeCut:
    """Edge cut minimising the product of capacities.

    Runs min-cut on fixed-point log2 capacities, then confirms the candidate
    exactly: by a precision bound, by the exhaustive oracle on small networks,
    or by agreement with a pass at doubled precision.
    """
    bits = LOG_FRACTION_BITS
    cand = _log_min_cut(net, bits)
    if len(net.vertices) <= QMC_ORACLE_VERTICES:
        best = enumerate_cuts(net)[0]
        return cand if best.value == cand.value else best
    for _ in range(MAX_PRECISION_DOUBLINGS):
        if _certified(cand.value, len(net.edges), bits):
            return cand
        bits *= 2
        finer = _log_min_cut(net, bits)
        if finer.value == cand.value:
            return cand
        cand = finer
    raise PrecisionError(f"min cut unresolved at {bits} fractional bits")


def quantum_min_cut(net: Network) -> int:
    return min_product_cut(net).value


# -- edge-disjoint paths -------------------------------------------------


def menger_paths(net: Network) -> PathSet:
    """Maximum set of edge-disjoint input-to-output paths (unit capacities).

    The pair-of-arcs flow never uses both directions of one edge, so a plain
    flow decomposition yields paths that are edge-disjoint in the undirected
    graph.  Circulations met during the walk are spliced out and dropped.
    """
    res = max_flow(net, [1] * len(net.edges))
    # directed unit arcs still available: node -> list of (edge, next node)
    out: dict[object, list[tuple[int, Endpoint | str]]] = {}
    starts: list[tuple[Terminal, int]] = []

    def key(end: Endpoint) -> Endpoint | str:
        return end.vertex if isinstance(end, Port) else end

    for e in net.edges:
        f = res.flow[e.id]
        if f == 0:
            continue
        a, b = e.ends if f > 0 else e.ends[::-1]
        if isinstance(a, Terminal):
            starts.append((a, e.id))
            continue
        out.setdefault(key(a), []).append((e.id, key(b)))
    for lst in out.values():
        lst.reverse()

    paths: list[Path] = []
    for term, eid in sorted(starts, key=lambda s: s[0].index):
        nodes: list = [term, key(net.other_end(eid, term))]
        edges = [eid]
        while not isinstance(nodes[-1], Terminal):
            here = nodes[-1]
            nxt_edge, nxt = out[here].pop()
            if nxt in nodes[1:] and not isinstance(nxt, Terminal):
                cut_at = nodes.index(nxt, 1)
                del nodes[cut_at + 1 :]
                del edges[cut_at:]
                continue
            nodes.append(nxt)
            edges.append(nxt_edge)
        paths.append(Path(tuple(nodes), tuple(edges)))
    if len(paths) != res.value:
        raise AssertionError("flow decomposition lost a path")
    return PathSet(tuple(paths))


# -- capacity rewrites ---------------------------------------------------


def exact_log(c: int, d: int) -> int | None:
    """``m`` with ``d**m == c``, or ``None``."""
    m = 0
    while c % d == 0 and c > 1:
        c //= d
        m += 1
    return m if c == 1 else None


def _expand(net: Network, d: int) -> tuple[Network, list[int]]:
    if d < 2:
        raise ValueError("base d must be >= 2")
    mult = {}
    for e in net.edges:
        m = exact_log(e.capacity, d)
        if m is None:
            raise NetworkError(f"edge {e.id}: capacity {e.capacity} is not a power of {d}")
        mult[e.id] = m

    port_base: dict[tuple[str, int], int] = {}
    degrees = {}
    for v in net.vertices:
        nxt = 1
        for i, eid in enumerate(net.ports[v], start=1):
            port_base[(v, i)] = nxt
            nxt += mult[eid]
        degrees[v] = nxt - 1
    term_base: dict[tuple[str, int], int] = {}
    for side, eids in ((INPUT, net.inputs), ("T", net.outputs)):
        nxt = 1
        for k, eid in enumerate(eids, start=1):
            term_base[(side, k)] = nxt
            nxt += mult[eid]

    def shifted(end: Endpoint, t: int) -> Endpoint:
        if isinstance(end, Port):
            return Port(end.vertex, port_base[(end.vertex, end.port)] + t)
        return Terminal(end.side, term_base[(end.side, end.index)] + t)

    edges, origin = [], []
    for e in net.edges:
        a, b = e.ends
        for t in range(mult[e.id]):
            edges.append((d, shifted(a, t), shifted(b, t)))
            origin.append(e.id)
    expanded = Network.build([(v, degrees[v]) for v in net.vertices], edges)
    return expanded, origin


def expand_uniform(net: Network, d: int) -> Network:
    """Replace every capacity-``d**m`` edge by ``m`` parallel capacity-``d`` edges.

    A split port becomes ``m`` consecutive ports (likewise terminals), so the
    row-major multi-index of the original axis is preserved.
    """
    return _expand(net, d)[0]


def largest_power_at_most(c: int, d: int) -> int:
    p = 1
    while p * d <= c:
        p *= d
    return p


def thin_network(net: Network, d: int) -> Network:
    """Shrink each capacity to the largest power of ``d`` not above it."""
    if d < 2:
        raise ValueError("base d must be >= 2")
    return net.rebuild([largest_power_at_most(e.capacity, d) for e in net.edges])


def unit_min_cut(net: Network) -> int:
    """Minimum number of edges separating inputs from outputs."""
    return max_flow(net, [1] * len(net.edges)).value


__all__ = [
    "FlowResult",
    "Path",
    "PathSet",
    "PrecisionError",
    "MAX_ORACLE_VERTICES",
    "expand_uniform",
    "exact_log",
    "largest_power_at_most",
    "max_flow",
    "menger_paths",
    "min_product_cut",
    "quantum_min_cut",
    "thin_network",
    "unit_min_cut",
]
