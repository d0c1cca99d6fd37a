"""Exact scalars, polynomials, matrices and elimination.

Two fields are supported.  The rationals are plain :class:`fractions.Fraction`
values; a prime field ``F_p`` uses :class:`FpElement`.  Everything else in the
package is written against the ordinary arithmetic operators, so either kind
of scalar can flow through it.

Nothing here ever touches floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, DuplicateNode

DEFAULT_PRIME = 2**31 - 1


# --------------------------------------------------------------------------
# Fields
# --------------------------------------------------------------------------

def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FpElement:
    """Residue modulo a prime ``p``; always stored with ``0 <= value < p``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise TypeError(f"mixing F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return FpElement(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o, self.p) / self

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return FpElement(1, self.p) / FpElement(pow(self.value, -k, self.p), self.p)
        return FpElement(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.value == o

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpElement({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class RationalField:
    """The field Q, realised by :class:`fractions.Fraction`."""

    name = "rational"
    characteristic = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, FpElement):
            raise TypeError("cannot lift a prime-field residue to Q")
        return Fraction(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p for a prime ``p``."""

    def __init__(self, p: int = DEFAULT_PRIME):
        if not _is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"fp:{p}"

    def __call__(self, x) -> FpElement:
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise TypeError(f"element of F_{x.p} is not in F_{self.p}")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return FpElement(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return FpElement(int(x), self.p)

    @property
    def zero(self) -> FpElement:
        return FpElement(0, self.p)

    @property
    def one(self) -> FpElement:
        return FpElement(1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int = DEFAULT_PRIME) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str):
    """``"rational"`` or ``"fp:<p>"`` (``"fp"`` alone uses ``2**31 - 1``)."""
    text = text.strip().lower()
    if text in ("rational", "q", "qq"):
        return QQ
    if text == "fp":
        return GF()
    if text.startswith("fp:"):
        return GF(int(text[3:]))
    raise ValueError(f"unknown field {text!r}; expected 'rational' or 'fp:<p>'")


def field_of(x):
    if isinstance(x, FpElement):
        return GF(x.p)
    return QQ


def format_scalar(x) -> str:
    """Exact text form: ``"num/den"`` for rationals, the residue for F_p."""
    if isinstance(x, FpElement):
        return str(x.value)
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_scalar(text, field=QQ):
    if isinstance(text, (int, Fraction, FpElement)):
        return field(text)
    return field(Fraction(str(text)))


def short_scalar(x) -> str:
    """Compact display form (``3`` rather than ``3/1``)."""
    return str(x)


# --------------------------------------------------------------------------
# Polynomials
# --------------------------------------------------------------------------

def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial, lowest degree first.

    The zero polynomial has no coefficients and degree ``-1``.
    """

    coeffs: tuple

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"({c})" if k == 0 else f"({c})*x^{k}")
        return "Polynomial(" + " + ".join(terms) + ")"


def lagrange_interpolant(nodes: Sequence[tuple]) -> Polynomial:
    """The unique polynomial of degree < len(nodes) through the given points."""
    xs = [x for x, _ in nodes]
    for a in range(len(xs)):
        for b in range(a + 1, len(xs)):
            if xs[a] == xs[b]:
                raise DuplicateNode(f"nodes {a} and {b} share x = {xs[a]}")
    total = Polynomial()
    for i, (xi, yi) in enumerate(nodes):
        basis = Polynomial([yi])
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * Polynomial([-xj / (xi - xj), 1 / (xi - xj)])
        total = total + basis
    return total


# --------------------------------------------------------------------------
# Matrices
# --------------------------------------------------------------------------

class Matrix:
    """Immutable dense matrix of exact scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        entries = tuple(tuple(r) for r in entries)
        cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise DimensionMismatch("ragged matrix rows")
        self.entries = entries
        self.rows = len(entries)
        self.cols = cols

    @classmethod
    def identity(cls, n: int, field=QQ) -> "Matrix":
        one, zero = field.one, field.zero
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int, field=QQ) -> "Matrix":
        return cls([[field.zero] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, values: Sequence, field=QQ) -> "Matrix":
        n = len(values)
        return cls([[field(values[i]) if i == j else field.zero for j in range(n)]
                    for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ocols = list(zip(*other.entries)) if other.entries else []
        out = []
        for row in self.entries:
            out.append([sum((a * b for a, b in zip(row, col) if a and b), 0 * row[0])
                        for col in ocols])
        return Matrix(out)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.entries])

    def scale(self, c) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self.entries])

    def _check_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.entries)) if self.entries else Matrix([])

    def flat(self) -> list:
        return [a for r in self.entries for a in r]

    def columns(self) -> list:
        return [list(c) for c in zip(*self.entries)]

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def power(self, k: int) -> "Matrix":
        out = Matrix.identity(self.rows, field_of(self.entries[0][0]))
        for _ in range(k):
            out = out @ self
        return out

    def rank(self) -> int:
        return rank(self)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            a == b for r, s in zip(self.entries, other.entries) for a, b in zip(r, s))

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "Matrix(" + repr([[str(a) for a in r] for r in self.entries]) + ")"


def matrix_sum(mats: Iterable[Matrix]) -> Matrix:
    mats = iter(mats)
    total = next(mats)
    for m in mats:
        total = total + m
    return total


# --------------------------------------------------------------------------
# Elimination
# --------------------------------------------------------------------------

def _as_rows(m) -> list:
    if isinstance(m, Matrix):
        return [list(r) for r in m.entries]
    return [list(r) for r in m]


def _integer_rows(rows):
    """Scale each rational row to a primitive integer row, or None if not rational."""
    out = []
    for r in rows:
        if not all(isinstance(a, (int, Fraction)) for a in r):
            return None
        den = math.lcm(*(Fraction(a).denominator for a in r)) if r else 1
        out.append([int(Fraction(a) * den) for a in r])
    return out


def _bareiss_rank(rows: list) -> int:
    # rows are mutated; fraction-free elimination, first nonzero pivot in column order
    m = len(rows)
    if m == 0:
        return 0
    n = len(rows[0])
    r, prev = 0, 1
    for c in range(n):
        piv = next((k for k in range(r, m) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        p = prow[c]
        for k in range(r + 1, m):
            rk = rows[k]
            f = rk[c]
            if f:
                for cc in range(c + 1, n):
                    rk[cc] = (p * rk[cc] - f * prow[cc]) // prev
            else:
                for cc in range(c + 1, n):
                    rk[cc] = (p * rk[cc]) // prev
            rk[c] = 0
        prev = p
        r += 1
        if r == m:
            break
    return r


def _gauss_rank(rows: list) -> int:
    m = len(rows)
    if m == 0:
        return 0
    n = len(rows[0])
    r = 0
    for c in range(n):
        piv = next((k for k in range(r, m) if rows[k][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        for k in range(r + 1, m):
            f = rows[k][c]
            if f != 0:
                f = f * inv
                rk = rows[k]
                for cc in range(c, n):
                    rk[cc] = rk[cc] - f * prow[cc]
        r += 1
        if r == m:
            break
    return r


def rank(m) -> int:
    """Exact rank of a :class:`Matrix` or a sequence of equal-length rows."""
    rows = _as_rows(m)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise DimensionMismatch("rows of unequal length")
    ints = _integer_rows(rows)
    if ints is not None:
        return _bareiss_rank(ints)
    return _gauss_rank(rows)


def gauss_rank(m) -> int:
    """Plain Gaussian elimination over the field; kept as an independent route."""
    return _gauss_rank(_as_rows(m))


def solve_in_span(generators: Sequence[Sequence], target: Sequence):
    """Coefficients ``c`` with ``sum(c[k] * generators[k]) == target``, or None.

    Free coefficients are set to zero, so the answer is unique only when the
    generators are independent.
    """
    dim = len(target)
    for g in generators:
        if len(g) != dim:
            raise DimensionMismatch(f"generator of length {len(g)} vs target of length {dim}")
    ng = len(generators)
    zero = 0 * target[0] if dim else Fraction(0)
    # augmented system, one equation per coordinate
    aug = [[g[row] for g in generators] + [target[row]] for row in range(dim)]
    pivots = []
    r = 0
    for c in range(ng):
        piv = next((k for k in range(r, dim) if aug[k][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [a * inv for a in aug[r]]
        for k in range(dim):
            if k != r and aug[k][c] != 0:
                f = aug[k][c]
                aug[k] = [a - f * b for a, b in zip(aug[k], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[k][ng] != 0 for k in range(r, dim)):
        return None
    coeffs = [zero] * ng
    for row, c in enumerate(pivots):
        coeffs[c] = aug[row][ng]
    return coeffs


class EchelonBasis:
    """Incrementally maintained row-echelon basis of a subspace.

    Each stored row has pivot 1 and vanishes on the pivot columns of all rows
    stored before it, so reducing against the rows in insertion order is
    enough to test membership.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows = []
        self._pivots = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence) -> list:
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} in a space of dimension {self.dim}")
        v = list(v)
        for row, c in zip(self._rows, self._pivots):
            f = v[c]
            if f != 0:
                for k in range(c, self.dim):
                    if row[k] != 0:
                        v[k] = v[k] - f * row[k]
        return v

    def contains(self, v: Sequence) -> bool:
        return all(a == 0 for a in self.reduce(v))

    def add(self, v: Sequence) -> bool:
        """Insert ``v``; return True when it enlarged the span."""
        v = self.reduce(v)
        c = next((k for k, a in enumerate(v) if a != 0), None)
        if c is None:
            return False
        inv = 1 / v[c]
        self._rows.append([a * inv for a in v])
        self._pivots.append(c)
        return True

    def extend(self, vectors: Iterable[Sequence]) -> int:
        for v in vectors:
            self.add(v)
        return self.rank


def span_rank(vectors: Iterable[Sequence], dim: int) -> int:
    return EchelonBasis(dim).extend(vectors)
