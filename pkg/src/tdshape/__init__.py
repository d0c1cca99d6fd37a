"""Exact tools for zigzag words, the rewriting relations of the algebra T, and
Leonard-pair matrix models used to check them."""

from .errors import TdShapeError
from .exactla import GF, QQ, Matrix, Polynomial, rank
from .sequences import EigenvalueSequence, SequencePair, default_pair, make_family
from .words import Generator, Word, is_zigzag

__all__ = ["TdShapeError", "GF", "QQ", "Matrix", "Polynomial", "rank", "EigenvalueSequence",
           "SequencePair", "default_pair", "make_family", "Generator", "Word", "is_zigzag"]
__version__ = "0.1.0"
