"""Capacity-labelled tensor-network templates.

A :class:`Network` is an undirected multigraph whose vertices carry an ordered
list of ports and whose edges carry positive integer capacities.  Edge ends are
either a vertex port or an open terminal on the input (``S``) or output (``T``)
side.

Text format, one declaration per line::

    # comment
    v <id> <degree>
    e <cap> <endpoint> <endpoint>

where an endpoint is ``<vertexId>.<port>``, ``S.<k>`` or ``T.<k>`` (1-based).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

INPUT = "S"
OUTPUT = "T"

MAX_ORACLE_VERTICES = 20

ValenceType = tuple[int, ...]


class NetworkError(ValueError):
    """A network violates one of its structural invariants."""


class NetworkSyntaxError(NetworkError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True, order=True)
class Port:
    vertex: str
    port: int

    def __str__(self) -> str:
        return f"{self.vertex}.{self.port}"


@dataclass(frozen=True, order=True)
class Terminal:
    side: str
    index: int

    def __str__(self) -> str:
        return f"{self.side}.{self.index}"


Endpoint = Union[Port, Terminal]


@dataclass(frozen=True)
class Edge:
    id: int
    capacity: int
    ends: tuple[Endpoint, Endpoint]

    @property
    def is_self_loop(self) -> bool:
        a, b = self.ends
        return isinstance(a, Port) and isinstance(b, Port) and a.vertex == b.vertex


@dataclass(frozen=True)
class Network:
    """Immutable, validated network.  Build with :meth:`build` or :func:`parse_network`."""

    vertices: tuple[str, ...]
    degrees: Mapping[str, int]
    edges: tuple[Edge, ...]
    # derived lookups
    ports: Mapping[str, tuple[int, ...]] = field(repr=False, compare=False)
    inputs: tuple[int, ...] = field(repr=False, compare=False)
    outputs: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def build(
        cls,
        vertices: Iterable[tuple[str, int]],
        edges: Iterable[tuple[int, Endpoint, Endpoint]],
    ) -> "Network":
        vertex_list = list(vertices)
        degrees: dict[str, int] = {}
        for vid, deg in vertex_list:
            if vid in degrees:
                raise NetworkError(f"duplicate vertex {vid!r}")
            if vid in (INPUT, OUTPUT) or "." in vid or not vid:
                raise NetworkError(f"invalid vertex id {vid!r}")
            if deg < 0:
                raise NetworkError(f"vertex {vid!r} has negative degree")
            degrees[vid] = deg

        slots: dict[str, list] = {vid: [None] * deg for vid, deg in degrees.items()}
        terminals: dict[str, dict[int, int]] = {INPUT: {}, OUTPUT: {}}
        edge_list: list[Edge] = []
        for eid, (cap, a, b) in enumerate(edges):
            if cap < 1:
                raise NetworkError(f"edge {eid}: capacity {cap} < 1")
            for end in (a, b):
                if isinstance(end, Port):
                    if end.vertex not in degrees:
                        raise NetworkError(f"edge {eid}: unknown vertex {end.vertex!r}")
                    if not 1 <= end.port <= degrees[end.vertex]:
                        raise NetworkError(f"edge {eid}: port {end} out of range")
                    if slots[end.vertex][end.port - 1] is not None:
                        raise NetworkError(f"edge {eid}: duplicate port {end}")
                    slots[end.vertex][end.port - 1] = eid
                elif isinstance(end, Terminal):
                    if end.side not in terminals:
                        raise NetworkError(f"edge {eid}: bad terminal side {end.side!r}")
                    if end.index < 1:
                        raise NetworkError(f"edge {eid}: terminal index must be >= 1")
                    if end.index in terminals[end.side]:
                        raise NetworkError(f"edge {eid}: duplicate terminal {end}")
                    terminals[end.side][end.index] = eid
                else:
                    raise NetworkError(f"edge {eid}: bad endpoint {end!r}")
            edge_list.append(Edge(eid, int(cap), (a, b)))

        for vid, used in slots.items():
            for i, eid in enumerate(used, start=1):
                if eid is None:
                    raise NetworkError(f"unused port {vid}.{i}")
        sides = {}
        for side, found in terminals.items():
            n = len(found)
            if sorted(found) != list(range(1, n + 1)):
                raise NetworkError(f"gap in {side} terminal indices: {sorted(found)}")
            sides[side] = tuple(found[k] for k in range(1, n + 1))

        return cls(
            vertices=tuple(v for v, _ in vertex_list),
            degrees=MappingProxyType(degrees),
            edges=tuple(edge_list),
            ports=MappingProxyType({v: tuple(s) for v, s in slots.items()}),
            inputs=sides[INPUT],
            outputs=sides[OUTPUT],
        )

    # -- convenience -----------------------------------------------------

    def capacity(self, eid: int) -> int:
        return self.edges[eid].capacity

    def valence(self, vertex: str) -> ValenceType:
        return tuple(self.edges[e].capacity for e in self.ports[vertex])

    @property
    def dim_in(self) -> int:
        return math.prod(self.edges[e].capacity for e in self.inputs)

    @property
    def dim_out(self) -> int:
        return math.prod(self.edges[e].capacity for e in self.outputs)

    def port_of(self, vertex: str, eid: int) -> int:
        """1-based port at ``vertex`` used by edge ``eid`` (first one for self-loops)."""
        for end in self.edges[eid].ends:
            if isinstance(end, Port) and end.vertex == vertex:
                return end.port
        raise KeyError(f"edge {eid} does not touch {vertex!r}")

    def other_end(self, eid: int, end: Endpoint) -> Endpoint:
        a, b = self.edges[eid].ends
        return b if a == end else a

    def rebuild(self, capacities: Mapping[int, int] | Sequence[int]) -> "Network":
        """Same topology, new capacities (indexed by edge id)."""
        return Network.build(
            [(v, self.degrees[v]) for v in self.vertices],
            [(int(capacities[e.id]), *e.ends) for e in self.edges],
        )


def _parse_endpoint(token: str, lineno: int) -> Endpoint:
    head, sep, tail = token.rpartition(".")
    if not sep or not head:
        raise NetworkSyntaxError(lineno, f"bad endpoint {token!r}")
    try:
        idx = int(tail)
    except ValueError:
        raise NetworkSyntaxError(lineno, f"bad index in endpoint {token!r}") from None
    if head in (INPUT, OUTPUT):
        return Terminal(head, idx)
    return Port(head, idx)


def parse_network(text: str | bytes) -> Network:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    vertices: list[tuple[str, int]] = []
    edges: list[tuple[int, Endpoint, Endpoint]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "v":
            if len(parts) != 3:
                raise NetworkSyntaxError(lineno, "expected 'v <id> <degree>'")
            try:
                deg = int(parts[2])
            except ValueError:
                raise NetworkSyntaxError(lineno, f"bad degree {parts[2]!r}") from None
            vertices.append((parts[1], deg))
        elif kind == "e":
            if len(parts) != 4:
                raise NetworkSyntaxError(lineno, "expected 'e <cap> <endpoint> <endpoint>'")
            try:
                cap = int(parts[1])
            except ValueError:
                raise NetworkSyntaxError(lineno, f"bad capacity {parts[1]!r}") from None
            edges.append((cap, _parse_endpoint(parts[2], lineno), _parse_endpoint(parts[3], lineno)))
        else:
            raise NetworkSyntaxError(lineno, f"unknown declaration {kind!r}")
    return Network.build(vertices, edges)


def serialize(net: Network) -> str:
    lines = [f"v {v} {net.degrees[v]}" for v in net.vertices]
    lines += [f"e {e.capacity} {e.ends[0]} {e.ends[1]}" for e in net.edges]
    return "\n".join(lines) + "\n"


# -- cuts ----------------------------------------------------------------


@dataclass(frozen=True)
class EdgeCut:
    edges: frozenset[int]
    source_side: frozenset[str]
    value: int


def cut_edges(net: Network, source_side: Iterable[str]) -> frozenset[int]:
    """Edges crossing the partition whose S-side holds ``source_side`` plus all inputs."""
    src = set(source_side)

    def on_source(end: Endpoint) -> bool:
        if isinstance(end, Terminal):
            return end.side == INPUT
        return end.vertex in src

    return frozenset(e.id for e in net.edges if on_source(e.ends[0]) != on_source(e.ends[1]))


def cut_value(net: Network, edges: Iterable[int]) -> int:
    return math.prod(net.edges[e].capacity for e in edges)


def enumerate_cuts(net: Network, max_vertices: int = MAX_ORACLE_VERTICES) -> list[EdgeCut]:
    """Every edge cut induced by some S-side/T-side vertex partition, cheapest first."""
    n = len(net.vertices)
    if n > max_vertices:
        raise NetworkError(f"enumerate_cuts: {n} vertices exceeds the oracle limit {max_vertices}")
    masks = np.arange(1 << n, dtype=np.int64)
    index = {v: i for i, v in enumerate(net.vertices)}

    def side(end: Endpoint) -> np.ndarray:
        if isinstance(end, Terminal):
            return np.full(masks.shape, end.side == INPUT)
        return ((masks >> index[end.vertex]) & 1).astype(bool)

    crossing = [side(e.ends[0]) != side(e.ends[1]) for e in net.edges]
    seen: dict[frozenset[int], int] = {}
    if crossing:
        bits = np.stack(crossing, axis=1)
        _, first = np.unique(bits, axis=0, return_index=True)
        reps = sorted(int(i) for i in first)
    else:
        reps = [0]
    for m in reps:
        edges = frozenset(i for i, row in enumerate(crossing) if row[m])
        if edges not in seen:
            seen[edges] = m
    cuts = [
        EdgeCut(edges, frozenset(v for v in net.vertices if (m >> index[v]) & 1), cut_value(net, edges))
        for edges, m in seen.items()
    ]
    cuts.sort(key=lambda c: (c.value, sorted(c.edges)))
    return cuts


# -- valence types ------------------------------------------------------


@dataclass(frozen=True)
class ValenceTypes:
    by_vertex: Mapping[str, ValenceType]
    distinct: tuple[ValenceType, ...]


def valence_types(net: Network) -> ValenceTypes:
    by_vertex = {v: net.valence(v) for v in net.vertices}
    distinct = tuple(dict.fromkeys(by_vertex.values()))
    return ValenceTypes(MappingProxyType(by_vertex), distinct)


def swap_sides(net: Network) -> Network:
    """Exchange the roles of input and output terminals."""
    flip = {INPUT: OUTPUT, OUTPUT: INPUT}

    def swap(end: Endpoint) -> Endpoint:
        return Terminal(flip[end.side], end.index) if isinstance(end, Terminal) else end

    return Network.build(
        [(v, net.degrees[v]) for v in net.vertices],
        [(e.capacity, swap(e.ends[0]), swap(e.ends[1])) for e in net.edges],
    )
