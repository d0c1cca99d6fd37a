"""Alternating words in the idempotent generators of T.

A word is stored as its diameter, whether its first letter is starred, and
its index sequence; starredness of later letters follows by alternation.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from math import comb

from .errors import (ConstantWord, NotLifting, NotNonredundantLifting,
                     NotZigzag, ParityMismatch)


@dataclass(frozen=True, order=True)
class Generator:
    starred: bool
    index: int

    def __str__(self):
        return f"e*_{self.index}" if self.starred else f"e_{self.index}"


_GEN_RE = re.compile(r"^e(\*?)_?(\d+)$")


def parse_generator(text: str) -> Generator:
    """Accepts ``e_3``, ``e3``, ``e*_0``, ``e*0``."""
    m = _GEN_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse generator {text!r}")
    return Generator(bool(m.group(1)), int(m.group(2)))


@dataclass(frozen=True)
class Word:
    d: int
    start_starred: bool | None
    indices: tuple

    def __init__(self, d: int, start_starred: bool | None, indices=()):
        indices = tuple(int(i) for i in indices)
        if any(i < 0 or i > d for i in indices):
            raise ValueError(f"indices {indices} out of range 0..{d}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "start_starred", None if not indices else bool(start_starred))
        object.__setattr__(self, "indices", indices)

    @classmethod
    def from_letters(cls, d: int, letters) -> "Word":
        letters = list(letters)
        for a, b in zip(letters, letters[1:]):
            if a.starred == b.starred:
                raise ValueError(f"{a} and {b} are not alternating")
        if not letters:
            return cls(d, None, ())
        return cls(d, letters[0].starred, [g.index for g in letters])

    @classmethod
    def parse(cls, d: int, text: str) -> "Word":
        """Parse ``"e_2 e*_1 e_3 e*_0"`` or the run-together ``"e_2e*_1e_3e*_0"``."""
        tokens = re.findall(r"e\*?_?\d+", text)
        return cls.from_letters(d, [parse_generator(t) for t in tokens])

    def __len__(self):
        return len(self.indices)

    def letter(self, k: int) -> Generator:
        """The k-th letter, counting from 0."""
        return Generator(self.start_starred ^ (k % 2 == 1), self.indices[k])

    @property
    def letters(self) -> tuple:
        return tuple(self.letter(k) for k in range(len(self.indices)))

    @property
    def first(self) -> Generator:
        return self.letter(0)

    @property
    def last(self) -> Generator:
        return self.letter(len(self.indices) - 1)

    def reflect(self) -> "Word":
        """Replace every index i by d - i."""
        return Word(self.d, self.start_starred, [self.d - i for i in self.indices])

    def reverse(self) -> "Word":
        if not self.indices:
            return self
        return Word(self.d, self.last.starred, self.indices[::-1])

    def __str__(self):
        return " ".join(str(g) for g in self.letters) if self.indices else "1"

    def to_json(self) -> dict:
        return {"d": self.d, "start_starred": self.start_starred, "indices": list(self.indices)}

    @classmethod
    def from_json(cls, data) -> "Word":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["d"], data["start_starred"], data["indices"])


def is_between(i: int, r: int, j: int) -> bool:
    """Whether r is between the ordered pair i, j."""
    return i >= r > j or i <= r < j


def _zigzag_indices(x) -> bool:
    n = len(x)
    # x is 0-based; the conditions below are written for 1-based x_1..x_n
    for i in range(2, n):
        if is_between(x[i - 2], x[i - 1], x[i]):
            return False
    for i in range(3, n):
        if is_between(x[i - 3], x[i - 2], x[i]) and is_between(x[i - 3], x[i - 1], x[i]):
            return False
    return True


def is_zigzag(w) -> bool:
    x = w.indices if isinstance(w, Word) else tuple(w)
    return _zigzag_indices(x)


def is_zigzag_by_signs(w) -> bool:
    """Zigzag test through alternating signs of consecutive differences."""
    x = w.indices if isinstance(w, Word) else tuple(w)
    n = len(x)
    diffs = [x[k] - x[k + 1] for k in range(n - 1)]
    for k in range(1, n - 1):
        if diffs[k - 1] * diffs[k] > 0:
            return False
    for k in range(1, n - 1):
        if abs(diffs[k - 1]) < abs(diffs[k]):
            chain = [abs(v) for v in diffs[:k + 1]]
            if chain[0] == 0 or any(a >= b for a, b in zip(chain, chain[1:])):
                return False
    return True


def is_constant(w) -> bool:
    x = w.indices if isinstance(w, Word) else tuple(w)
    return len(set(x)) <= 1


def is_nonrepeating(w) -> bool:
    x = w.indices if isinstance(w, Word) else tuple(w)
    return all(a != b for a, b in zip(x, x[1:]))


def peak_index(w) -> int:
    """The turning point p (1-based) of the absolute-difference profile."""
    x = w.indices if isinstance(w, Word) else tuple(w)
    if is_constant(x):
        raise ConstantWord(f"{w} is constant")
    if not is_zigzag(x):
        raise NotZigzag(f"{w} is not zigzag")
    diffs = [abs(x[k] - x[k + 1]) for k in range(len(x) - 1)]
    p = 2
    while p < len(x) and diffs[p - 1] > diffs[p - 2]:
        p += 1
    return p


def is_lifting(w: Word) -> bool:
    return len(w) > 0 and is_zigzag(w) and w.indices[-1] == 0


def is_redundant(w: Word) -> bool:
    if not is_lifting(w):
        raise NotLifting(f"redundancy is only defined for lifting words; {w} is not lifting")
    return 0 in w.indices[:-1]


@dataclass(frozen=True)
class WordFlags:
    constant: bool
    nonrepeating: bool
    lifting: bool
    _redundant: bool | None

    @property
    def redundant(self) -> bool:
        if self._redundant is None:
            raise NotLifting("redundancy is only defined for lifting words")
        return self._redundant

    @property
    def nonredundant_lifting(self) -> bool:
        return self.lifting and not self._redundant

    def to_json(self) -> dict:
        out = {"constant": self.constant, "nonrepeating": self.nonrepeating,
               "lifting": self.lifting}
        if self.lifting:
            out["redundant"] = self._redundant
        return out


def word_flags(w: Word) -> WordFlags:
    lifting = is_lifting(w)
    return WordFlags(
        constant=is_constant(w),
        nonrepeating=is_nonrepeating(w),
        lifting=lifting,
        _redundant=is_redundant(w) if lifting else None,
    )


def _check_parity(n: int, begin: Generator, end: Generator | None):
    if end is None:
        return
    expect = begin.starred if n % 2 == 1 else not begin.starred
    if end.starred != expect:
        raise ParityMismatch(f"a word of length {n} starting with {begin} cannot end with {end}")


def enumerate_words(d: int, n: int, begin: Generator, end: Generator | None = None) -> list:
    """All words of length n starting with ``begin`` (and ending with ``end``).

    Ordered lexicographically by index sequence.
    """
    if n < 1:
        raise ValueError("words that begin with a generator have length >= 1")
    _check_parity(n, begin, end)
    if n == 1:
        if end is not None and end != begin:
            return []
        return [Word(d, begin.starred, [begin.index])]
    free = [range(d + 1)] * (n - 2)
    last = [end.index] if end is not None else range(d + 1)
    return [Word(d, begin.starred, (begin.index,) + mid + (z,))
            for mid in itertools.product(*free) for z in last]


def enumerate_zigzag_words(d: int, n: int, begin: Generator,
                           end: Generator | None = None) -> list:
    """Zigzag words of length n from ``begin``, grown by prefix extension.

    Prefixes of zigzag words are zigzag, so nonzigzag prefixes are pruned.
    """
    _check_parity(n, begin, end)
    out = []

    def grow(prefix):
        if len(prefix) == n:
            if end is None or prefix[-1] == end.index:
                out.append(Word(d, begin.starred, prefix))
            return
        candidates = range(d + 1)
        if len(prefix) == n - 1 and end is not None:
            candidates = [end.index]
        for z in candidates:
            nxt = prefix + (z,)
            if _zigzag_tail_ok(nxt):
                grow(nxt)

    grow((begin.index,))
    return out


def _zigzag_tail_ok(x) -> bool:
    # only the conditions that involve the newest letter
    n = len(x)
    if n >= 3 and is_between(x[-3], x[-2], x[-1]):
        return False
    if n >= 4 and is_between(x[-4], x[-3], x[-1]) and is_between(x[-4], x[-2], x[-1]):
        return False
    return True


def enumerate_nonredundant_lifting(d: int, s: int, start_starred: bool = False) -> list:
    """Nonredundant lifting words that begin with index ``s``.

    Depth-first over zigzag prefixes of distinct nonzero indices, emitting a
    word whenever a final 0 keeps it zigzag.  Such words repeat no index, so
    prefixes with a repeat are dead and are never extended.
    """
    if not 0 <= s <= d:
        raise ValueError(f"s={s} out of range 0..{d}")
    if s == 0:
        return [Word(d, start_starred, [0])]
    out = []

    def grow(prefix):
        closed = prefix + (0,)
        if _zigzag_tail_ok(closed):
            out.append(Word(d, start_starred, closed))
        if len(prefix) >= d:
            return
        for z in range(1, d + 1):
            nxt = prefix + (z,)
            if z not in prefix and _zigzag_tail_ok(nxt):
                grow(nxt)

    grow((s,))
    out.sort(key=lambda w: (len(w), w.indices))
    return out


def subset_bijection(w: Word) -> frozenset:
    """Map a nonredundant lifting word to a subset of {1..d} of size x_1."""
    if not is_lifting(w) or is_redundant(w):
        raise NotNonredundantLifting(f"{w} is not a nonredundant lifting word")
    x = (None,) + w.indices  # 1-based
    n = len(w)
    x_plus = {x[i] for i in range(2, n) if (n - i) % 2 == 1}
    x_minus = {x[i] for i in range(1, n - 1) if (n - i) % 2 == 0}
    return frozenset(x_plus | (set(range(1, x[1] + 1)) - x_minus))


def inverse_bijection(d: int, subset, start_starred: bool = False) -> Word:
    """Rebuild the nonredundant lifting word whose image is ``subset``.

    With k = |subset| the first index is k.  The lengths split by parity:
    k lies in the subset exactly when the word has even length.  Above k the
    subset lists the indices that climb away from x_1; below k its complement
    lists the ones that descend toward 0.
    """
    subset = set(subset)
    if not subset <= set(range(1, d + 1)):
        raise ValueError(f"{sorted(subset)} is not a subset of 1..{d}")
    k = len(subset)
    upper = sorted(v for v in subset if v > k)
    lower = sorted((v for v in range(1, k + 1) if v not in subset), reverse=True)
    if k == 0:
        return Word(d, start_starred, [0])
    if k in subset:
        # even length: x_1, then x_2 > x_4 > ... from lower, x_3 < x_5 < ... from upper
        x = [k]
        for lo, hi in zip(lower, upper):
            x += [lo, hi]
    else:
        # odd length: lower starts with x_1 = k itself
        x = [lower[0]]
        for hi, lo in zip(upper, lower[1:]):
            x += [hi, lo]
        x.append(upper[-1])
    x.append(0)
    return Word(d, start_starred, x)


def lifting_count_table(d: int) -> list:
    return [(s, len(enumerate_nonredundant_lifting(d, s)), comb(d, s)) for s in range(d + 1)]
