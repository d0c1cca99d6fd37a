"""Exception types raised across the package.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can catch a single class.
"""


class TdShapeError(ValueError):
    pass


class DimensionMismatch(TdShapeError):
    pass


class DuplicateNode(TdShapeError):
    pass


class DiameterTooSmall(TdShapeError):
    pass


class RatioNotConstant(TdShapeError):
    pass


class DegenerateParameters(TdShapeError):
    pass


class BadSubsetSize(TdShapeError):
    pass


class ConstantWord(TdShapeError):
    pass


class NotZigzag(TdShapeError):
    pass


class NotLifting(TdShapeError):
    pass


class ParityMismatch(TdShapeError):
    pass


class NotNonredundantLifting(TdShapeError):
    pass


class ZigzagCellHasNoWeight(TdShapeError):
    pass


class InvalidSequencePair(TdShapeError):
    pass


class WrongClass(TdShapeError):
    pass


class ZigzagInput(TdShapeError):
    pass


class BadCharacteristic(TdShapeError):
    pass


class EigenvalueMismatch(TdShapeError):
    pass


class DiameterMismatch(TdShapeError):
    pass
