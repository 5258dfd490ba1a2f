"""Builders for the named networks used throughout the package and its tests.

Vertex ports are listed in local order; for the shared-tensor examples the
order is significant.  Inputs are numbered top to bottom, as are outputs.
"""

from __future__ import annotations

import numpy as np

from .netgraph import Network, parse_network


def pass_through(cap: int) -> Network:
    return parse_network(f"e {cap} S.1 T.1\n")


def two_layer(top_in: int, mid_in: int, bot_in: int, up: int, low: int,
              top_out: int, bot_out: int) -> Network:
    """Three vertices: a middle vertex fanning into a top and a bottom vertex.

    ``up``/``low`` are the internal edges from the middle vertex to the top and
    bottom vertices.
    """
    return parse_network(f"""\
v mid 3
v top 3
v bot 3
e {top_in} S.1 top.1
e {mid_in} S.2 mid.1
e {bot_in} S.3 bot.1
e {up} mid.2 top.2
e {low} mid.3 bot.2
e {top_out} top.3 T.1
e {bot_out} bot.3 T.2
""")


def fig3() -> Network:
    """Inputs 2,2,2; internal 2,2; outputs 3,3.  Min cut 8, max rank 7."""
    return two_layer(2, 2, 2, 2, 2, 3, 3)


def fig4(p: int, q: int) -> Network:
    """``fig3`` with the lower internal edge set to ``p`` and the upper to ``q``."""
    return two_layer(2, 2, 2, q, p, 3, 3)


def family(n: int, j: int, k: int) -> Network:
    """Inputs n,2,n; internal 2,2; outputs 2n-k (top), 2n-j (bottom)."""
    if n < 2 or not (0 <= j < n and 0 <= k < n):
        raise ValueError(f"need n >= 2 and 0 <= j,k < n, got n={n} j={j} k={k}")
    return two_layer(n, 2, n, 2, 2, 2 * n - k, 2 * n - j)


def crossed_square(swap_lower_left: bool = False) -> Network:
    """Four degree-3 vertices, all capacities 2, two crossing diagonals.

    Left vertices order their ports (input, horizontal, diagonal); right
    vertices (output, diagonal, horizontal).  ``swap_lower_left`` exchanges
    the horizontal and diagonal ports of the lower-left vertex.
    """
    h, dg = (3, 2) if swap_lower_left else (2, 3)
    return parse_network(f"""\
v tl 3
v bl 3
v tr 3
v br 3
e 2 S.1 tl.1
e 2 S.2 bl.1
e 2 tl.2 tr.3
e 2 bl.{h} br.3
e 2 tl.3 br.2
e 2 bl.{dg} tr.2
e 2 tr.1 T.1
e 2 br.1 T.2
""")


def fig5() -> Network:
    return crossed_square(False)


def fig5_l2() -> Network:
    return crossed_square(True)


def fig6() -> Network:
    """Three rows of two degree-3 vertices, all capacities 2, with three diagonals."""
    return parse_network("""\
v tl 3
v ml 3
v bl 3
v tr 3
v mr 3
v br 3
e 2 S.1 tl.1
e 2 S.2 ml.1
e 2 S.3 bl.1
e 2 tl.2 tr.3
e 2 ml.2 mr.3
e 2 bl.2 br.3
e 2 ml.3 br.2
e 2 tl.3 mr.2
e 2 bl.3 tr.2
e 2 tr.1 T.1
e 2 mr.1 T.2
e 2 br.1 T.3
""")


def three_qudit(d1: int, d2: int, d3: int, r1: int, r2: int) -> Network:
    """Network whose max rank pairs with the 3-qudit chain kernel.

    Inputs d1*d2 - r1 (top) and d3 (bottom); internal d2; outputs d1, r2.
    Capacities must be positive; callers short-circuit zero dimensions.
    """
    return parse_network(f"""\
v top 3
v bot 3
e {d1 * d2 - r1} S.1 top.1
e {d3} S.2 bot.1
e {d2} top.2 bot.2
e {d1} top.3 T.1
e {r2} bot.3 T.2
""")


def four_qudit(d1: int, d2: int, d3: int, d4: int, r1: int, r2: int, r3: int) -> Network:
    """Inputs d1*d2 - r1 and d3*d4 - r3; internal d2, d3 meeting at one vertex;
    outputs d1, r2, d4."""
    return parse_network(f"""\
v top 3
v bot 3
v mid 3
e {d1 * d2 - r1} S.1 top.1
e {d3 * d4 - r3} S.2 bot.1
e {d2} top.2 mid.1
e {d3} bot.2 mid.2
e {d1} top.3 T.1
e {r2} mid.3 T.2
e {d4} bot.3 T.3
""")


def rank3_reduced() -> Network:
    """Crossed square with a degree-2 vertex on each internal edge.

    Horizontal 2-vertices face port 1 left, diagonal ones face port 1 right,
    so with one matrix ``D`` on all four and copy tensors on the corners the
    map is ``F(i,j;k,l) = D[i,k] D[k,j] D[j,l] D[l,i]``.
    """
    return parse_network("""\
v stl 3
v sbl 3
v str 3
v sbr 3
v dtop 2
v dbot 2
v ddn 2
v dup 2
e 2 S.1 stl.1
e 2 S.2 sbl.1
e 2 str.1 T.1
e 2 sbr.1 T.2
e 2 stl.2 dtop.1
e 2 dtop.2 str.3
e 2 sbl.2 dbot.1
e 2 dbot.2 sbr.3
e 2 stl.3 ddn.2
e 2 ddn.1 sbr.2
e 2 sbl.3 dup.2
e 2 dup.1 str.2
""")


def random_power_network(seed: int, n_vertices: int = 5, d: int = 2,
                         exponents: tuple[int, ...] = (1, 2, 3),
                         n_inputs: int = 2, n_outputs: int = 2,
                         extra_edges: int = 1) -> Network:
    """Connected random multigraph whose capacities are powers of ``d``.

    Terminal edges get exponent 1 or 2 to keep the matrix small.
    """
    rng = np.random.default_rng(seed)
    names = [f"v{i}" for i in range(n_vertices)]
    pairs = [(names[i], names[int(rng.integers(0, i))]) for i in range(1, n_vertices)]
    for _ in range(extra_edges):
        a, b = rng.choice(n_vertices, size=2, replace=False)
        pairs.append((names[int(a)], names[int(b)]))
    order = rng.permutation(n_vertices)
    used = {v: 0 for v in names}
    lines = []

    def port(v: str) -> str:
        used[v] += 1
        return f"{v}.{used[v]}"

    for k in range(n_inputs):
        v = names[int(order[k % n_vertices])]
        lines.append(f"e {d ** int(rng.integers(1, 3))} S.{k + 1} {port(v)}")
    for a, b in pairs:
        lines.append(f"e {d ** int(rng.choice(exponents))} {port(a)} {port(b)}")
    for k in range(n_outputs):
        v = names[int(order[-1 - (k % n_vertices)])]
        lines.append(f"e {d ** int(rng.integers(1, 3))} {port(v)} T.{k + 1}")
    head = [f"v {v} {used[v]}" for v in names]
    return parse_network("\n".join(head + lines) + "\n")


def scale_capacities(net: Network, n: int) -> Network:
    return net.rebuild([n * e.capacity for e in net.edges])
