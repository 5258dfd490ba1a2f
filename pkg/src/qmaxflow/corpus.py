"""Named fixture networks with expected values, runnable as a batch check."""

from __future__ import annotations

import fnmatch
from dataclasses import dataclass, field
from typing import Callable

from . import networks
from .flow import quantum_min_cut
from .linalg import rank_exact
from .netgraph import Network, enumerate_cuts
from .qmf import construct_path_tensors, estimate_qmf, estimate_qmf_v2
from .qsat import QsatInstance, chain_instance, check_claim_four_qudit, check_claim_three_qudit, generic_kernel_dim
from .tensor import contract

PROVENANCE_PREFIXES = ("Example:", "Theorem:", "Figure:")


@dataclass(frozen=True)
class Check:
    metric: str
    expected: int
    relation: str  # "==" or "<="
    provenance: str

    def passes(self, observed: int) -> bool:
        return observed == self.expected if self.relation == "==" else observed <= self.expected


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    checks: tuple[Check, ...]
    network: Network | None = None
    instance: QsatInstance | None = None
    claim: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Row:
    name: str
    metric: str
    relation: str
    expected: int
    observed: int
    provenance: str

    @property
    def passed(self) -> bool:
        return Check(self.metric, self.expected, self.relation, self.provenance).passes(self.observed)

    def to_json(self) -> dict:
        return {"name": self.name, "metric": self.metric, "relation": self.relation,
                "expected": self.expected, "observed": self.observed,
                "result": "pass" if self.passed else "fail", "provenance": self.provenance}


def _c(metric, expected, provenance, relation="=="):
    return Check(metric, expected, relation, provenance)


FAMILY_MAX_N = 4
RANDOM_POWER_SEEDS = (0, 1, 2, 3, 4)


def _build() -> dict[str, CorpusEntry]:
    out: list[CorpusEntry] = []
    two_layer = "Example: two-layer network whose sampled rank stays one below the min cut"
    out.append(CorpusEntry("fig3", (
        _c("qmc", 8, "Example: product of the two output capacities falls to the cut through the inputs"),
        _c("qmf", 7, "Figure: maximal rank of the two-layer network"),
    ), networks.fig3()))
    for p, q in ((2, 2), (3, 2), (2, 3)):
        expect = 8 if max(p, q) >= 3 else 7
        out.append(CorpusEntry(f"fig4-p{p}-q{q}", (
            _c("qmc", 8, two_layer),
            _c("qmf", expect, "Example: raising either internal capacity closes the gap to the min cut"
               if expect == 8 else two_layer),
        ), networks.fig4(p, q)))
    out.append(CorpusEntry("fig5", (
        _c("qmf_v2", 3, "Example: shared tensors on the crossed square make two inputs collide"),
    ), networks.fig5()))
    out.append(CorpusEntry("fig5-L2", (
        _c("qmf_v2", 4, "Example: reordering one vertex restores full rank with shared tensors"),
    ), networks.fig5_l2()))
    out.append(CorpusEntry("fig6", (
        _c("qmc", 8, "Example: three-row network with crossing diagonals"),
        _c("qmf", 8, "Example: independent tensors reach the min cut on the three-row network"),
        _c("qmf_v2", 6, "Example: shared tensors on the three-row network fall short of the min cut"),
    ), networks.fig6()))
    for n in range(2, FAMILY_MAX_N + 1):
        for j in range(n):
            for k in range(n):
                checks = [
                    _c("qmc", min(2 * n * n, (2 * n - j) * (2 * n - k)),
                       "Example: family with outputs reduced by j and k"),
                    _c("qmf", 2 * n * n - j * k, "Example: family rank bound two n squared minus jk", "<="),
                ]
                if (n, j, k) == (2, 1, 1):
                    checks.append(_c("qmf", 7, "Theorem: bridge to generic satisfiability pins the value"))
                out.append(CorpusEntry(f"fig7-n{n}-j{j}-k{k}", tuple(checks), networks.family(n, j, k)))
    out.append(CorpusEntry("qsat-chain-3-2-3", (
        _c("gqsat", 1, "Example: three-qudit chain with a single surviving state"),
    ), instance=chain_instance((3, 2, 3), (1, 5))))
    out.append(CorpusEntry("qsat-chain-2-2-2-2", (
        _c("gqsat", 2, "Example: four-qubit chain with a two-dimensional kernel"),
    ), instance=chain_instance((2, 2, 2, 2), (1, 2, 1))))
    out.append(CorpusEntry("qsat-claim3-3-2-3-1-5", (
        _c("gqsat", 1, "Theorem: kernel dimension equals free space minus max rank"),
        _c("qmf", 14, "Theorem: kernel dimension equals free space minus max rank"),
    ), claim=(3, 2, 3, 1, 5)))
    out.append(CorpusEntry("qsat-claim4-2-2-2-2-1-2-1", (
        _c("gqsat", 2, "Theorem: four-qudit version of the kernel identity"),
        _c("qmf", 7, "Theorem: four-qudit version of the kernel identity"),
    ), claim=(2, 2, 2, 2, 1, 2, 1)))
    for i, s in enumerate(RANDOM_POWER_SEEDS):
        net = networks.random_power_network(s, n_vertices=6)
        qmc = enumerate_cuts(net)[0].value
        prov = "Theorem: power-of-d capacities have max rank equal to the min cut"
        out.append(CorpusEntry(f"thm38-rand{i}", (
            _c("qmc", qmc, prov), _c("path_rank", qmc, prov), _c("qmf", qmc, prov),
        ), net))
    return {e.name: e for e in out}


_CACHE: dict[str, CorpusEntry] | None = None


def corpus() -> dict[str, CorpusEntry]:
    global _CACHE
    if _CACHE is None:
        _CACHE = _build()
    return _CACHE


def select(pattern: str | None) -> list[CorpusEntry]:
    entries = corpus()
    names = sorted(entries)
    if pattern is not None:
        names = [n for n in names if fnmatch.fnmatchcase(n, pattern)]
    return [entries[n] for n in names]


def _observe(entry: CorpusEntry, seed: int) -> dict[str, int]:
    obs: dict[str, int] = {}
    metrics = {c.metric for c in entry.checks}
    net = entry.network
    if net is not None:
        if "qmc" in metrics:
            obs["qmc"] = quantum_min_cut(net)
        if "qmf" in metrics:
            obs["qmf"] = estimate_qmf(net, seed=seed).best
        if "qmf_v2" in metrics:
            obs["qmf_v2"] = estimate_qmf_v2(net, seed=seed).best
        if "path_rank" in metrics:
            obs["path_rank"] = rank_exact(contract(net, construct_path_tensors(net, 2)).matrix)
    if entry.instance is not None:
        obs["gqsat"] = generic_kernel_dim(entry.instance, seed)
    if entry.claim is not None:
        check: Callable = check_claim_three_qudit if len(entry.claim) == 5 else check_claim_four_qudit
        rep = check(*entry.claim, seed=seed)
        if not rep.holds:
            raise AssertionError(f"{entry.name}: identity fails: {rep.identity} vs rhs {rep.rhs}")
        obs["qmf"] = rep.qmf
        obs["gqsat"] = rep.gqsat
    return obs


def run_entry(entry: CorpusEntry, seed: int = 42) -> list[Row]:
    obs = _observe(entry, seed)
    return [Row(entry.name, c.metric, c.relation, c.expected, obs[c.metric], c.provenance)
            for c in entry.checks]


def run(pattern: str | None = None, seed: int = 42) -> list[Row]:
    rows: list[Row] = []
    for entry in select(pattern):
        rows.extend(run_entry(entry, seed))
    return rows
