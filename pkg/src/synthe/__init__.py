"""Deductive synthesis for a small functional language with recursive ADTs.

Programs may leave a function body as a `choose` specification; `synthesize`
decomposes the resulting problem with deductive rules and closes the leaves
by enumerating candidate terms from an attributed grammar, testing them
against input examples, and validating survivors with a bounded checker.
"""

from .search import SearchConfig, Verified, SolvedUnverified, Failed, synthesize

__all__ = [
    "SearchConfig",
    "Verified",
    "SolvedUnverified",
    "Failed",
    "synthesize",
]
