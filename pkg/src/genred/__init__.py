"""Finite-stage constructions for resource-bounded reductions on F2-coded oracles.

Modules: ``strings`` (languages, joins, sparse codes), ``freegroup`` (reduced
words and the shift action), ``vm`` (oracle machines with budgets),
``hatcode`` (the self-referential coding map), ``forcing`` (conditions and the
diagonal meet), ``games`` (string games and the clopen solver), ``cli``.
"""

__version__ = "0.1.0"
