"""Quantum max-flow and min-cut on tensor networks.

Submodules: ``netgraph`` (network model and cut enumeration), ``flow``
(classical flows and the product min cut), ``tensor`` (contraction),
``linalg`` (exact and numeric rank), ``qmf`` (sampled max rank and explicit
constructions), ``entropy``, ``qsat``, ``corpus`` and ``cli``.
"""

__version__ = "0.1.0"
