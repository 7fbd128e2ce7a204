"""Exact scalars, finitely supported vectors and index sets.

Everything here is immutable.  Scalars are :class:`fractions.Fraction`;
vectors are sparse maps ``index -> coefficient`` with 1-based indices, the
coefficient of ``e_i`` living at key ``i``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Tuple, Union

Scalar = Union[int, Fraction]
IndexSet = Tuple[int, ...]

_RATIONAL = re.compile(r"([+-]?\d+)(?:/(\d+))?")


class TsirelsonError(ValueError):
    """Base class for every input/contract error raised by the package."""


class ParseError(TsirelsonError):
    pass


class ZeroCoefficientError(ParseError):
    pass


class ZeroVectorError(TsirelsonError):
    pass


def as_rational(value: Scalar | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"unsupported scalar type {type(value).__name__}; floats are not accepted")


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` (``q > 0``) into a Fraction."""
    m = _RATIONAL.fullmatch(text.strip())
    if m is None:
        raise ParseError(f"malformed rational {text!r}")
    q = int(m.group(2)) if m.group(2) is not None else 1
    if q == 0:
        raise ParseError(f"malformed rational {text!r}: zero denominator")
    return Fraction(int(m.group(1)), q)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def index_set(elements: Iterable[int]) -> IndexSet:
    """Validate and return a strictly increasing tuple of positive integers."""
    out = tuple(elements)
    for a, b in zip(out, out[1:]):
        if a >= b:
            raise TsirelsonError(f"index set must be strictly increasing: {out}")
    if out and (not isinstance(out[0], int) or out[0] < 1):
        raise TsirelsonError(f"indices are positive integers: {out}")
    return out


def parse_index_set(text: str) -> IndexSet:
    text = text.strip()
    if not text:
        return ()
    try:
        values = [int(t) for t in text.split(",")]
    except ValueError:
        raise ParseError(f"malformed index set {text!r}") from None
    try:
        return index_set(values)
    except TsirelsonError as exc:
        raise ParseError(str(exc)) from None


@dataclass(frozen=True)
class SignPattern:
    """A {-1, +1}-valued sequence: ``table`` entries where given, ``default`` elsewhere."""

    table: Tuple[Tuple[int, int], ...] = ()
    default: int = 1

    def __post_init__(self):
        if self.default not in (1, -1):
            raise TsirelsonError("sign default must be +1 or -1")
        items = tuple(sorted(dict(self.table).items()))
        for i, s in items:
            if not isinstance(i, int) or i < 1 or s not in (1, -1):
                raise TsirelsonError(f"bad sign entry {i}: {s}")
        # entries equal to the default are redundant; dropping them keeps equality canonical
        object.__setattr__(self, "table", tuple((i, s) for i, s in items if s != self.default))

    @classmethod
    def from_prefix(cls, signs: Sequence[int], default: int = 1) -> "SignPattern":
        return cls(tuple(enumerate(signs, start=1)), default)

    @classmethod
    def constant(cls, sign: int) -> "SignPattern":
        return cls((), sign)

    def __call__(self, i: int) -> int:
        for j, s in self.table:
            if j == i:
                return s
        return self.default


@dataclass(frozen=True)
class SparseVector:
    """A finitely supported rational sequence ``sum a_i e_i``.

    ``entries`` is kept sorted by index with no zero coefficients, so equal
    vectors compare and hash equal.
    """

    entries: Tuple[Tuple[int, Fraction], ...] = field(default=())

    def __post_init__(self):
        clean = []
        prev = 0
        for i, a in self.entries:
            if not isinstance(i, int) or i < 1:
                raise TsirelsonError(f"indices are positive integers, got {i!r}")
            if i <= prev:
                raise TsirelsonError("indices must be strictly increasing")
            a = as_rational(a)
            if a == 0:
                raise ZeroCoefficientError(f"explicit zero coefficient at index {i}")
            clean.append((i, a))
            prev = i
        object.__setattr__(self, "entries", tuple(clean))

    @classmethod
    def from_dict(cls, coefficients: Mapping[int, Scalar]) -> "SparseVector":
        items = sorted((i, as_rational(a)) for i, a in coefficients.items())
        return cls(tuple((i, a) for i, a in items if a != 0))

    @classmethod
    def basis(cls, i: int, coefficient: Scalar = 1) -> "SparseVector":
        return cls(((i, as_rational(coefficient)),))

    @classmethod
    def zero(cls) -> "SparseVector":
        return cls(())

    @property
    def support(self) -> IndexSet:
        return tuple(i for i, _ in self.entries)

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return tuple(a for _, a in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __getitem__(self, i: int) -> Fraction:
        for j, a in self.entries:
            if j == i:
                return a
        return Fraction(0)

    def __iter__(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def as_dict(self) -> dict:
        return dict(self.entries)

    def __add__(self, other: "SparseVector") -> "SparseVector":
        if not isinstance(other, SparseVector):
            return NotImplemented
        out = self.as_dict()
        for i, a in other.entries:
            out[i] = out.get(i, 0) + a
        return SparseVector.from_dict(out)

    def __neg__(self) -> "SparseVector":
        return SparseVector(tuple((i, -a) for i, a in self.entries))

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c: Scalar) -> "SparseVector":
        c = as_rational(c)
        if c == 0:
            return SparseVector()
        return SparseVector(tuple((i, c * a) for i, a in self.entries))

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> "SparseVector":
        c = as_rational(c)
        if c == 0:
            raise ZeroDivisionError("division of a vector by zero")
        return self * (1 / c)

    def __str__(self) -> str:
        return format_vector(self)


def basis_sum(indices: Iterable[int], coefficient: Scalar = 1) -> SparseVector:
    """``coefficient * sum_{i in indices} e_i``."""
    c = as_rational(coefficient)
    return SparseVector.from_dict({i: c for i in indices})


def project(x: SparseVector, E: Iterable[int]) -> SparseVector:
    keep = set(E)
    return SparseVector(tuple((i, a) for i, a in x.entries if i in keep))


def sup_norm(x: SparseVector) -> Fraction:
    return max((abs(a) for _, a in x.entries), default=Fraction(0))


def ell1_norm(x: SparseVector) -> Fraction:
    return sum((abs(a) for _, a in x.entries), Fraction(0))


def flip_signs(x: SparseVector, signs: SignPattern) -> SparseVector:
    return SparseVector(tuple((i, signs(i) * a) for i, a in x.entries))


def spread(x: SparseVector, f: Mapping[int, int]) -> SparseVector:
    """Move the coefficient at ``i`` to ``f[i]``.

    ``f`` must be defined on the support, strictly increasing there, and
    satisfy ``f(i) >= i``.
    """
    prev = 0
    out = []
    for i, a in x.entries:
        if i not in f:
            raise TsirelsonError(f"spreading map undefined at {i}")
        j = f[i]
        if j < i:
            raise TsirelsonError(f"spreading map must not decrease indices ({i} -> {j})")
        if j <= prev:
            raise TsirelsonError("spreading map must be strictly increasing on the support")
        out.append((j, a))
        prev = j
    return SparseVector(tuple(out))


def parse_vector(text: str) -> SparseVector:
    """Parse ``"2:1,3:-1/2"``; ``""`` and ``"0"`` denote the zero vector."""
    s = text.strip()
    if s in ("", "0"):
        return SparseVector()
    entries = []
    prev = 0
    for chunk in s.split(","):
        idx, sep, coef = chunk.partition(":")
        if not sep:
            raise ParseError(f"expected index:rational, got {chunk!r}")
        try:
            i = int(idx.strip())
        except ValueError:
            raise ParseError(f"malformed index {idx!r}") from None
        if i < 1:
            raise ParseError(f"indices start at 1, got {i}")
        if i <= prev:
            raise ParseError(f"indices must be strictly increasing ({prev} then {i})")
        a = parse_rational(coef)
        if a == 0:
            raise ZeroCoefficientError(f"zero coefficient at index {i}")
        entries.append((i, a))
        prev = i
    return SparseVector(tuple(entries))


def format_vector(x: SparseVector) -> str:
    if x.is_zero():
        return "0"
    return ",".join(f"{i}:{format_rational(a)}" for i, a in x.entries)


def random_vector(
    rng: random.Random,
    max_index: int,
    max_support: int,
    denominators: Sequence[int],
) -> SparseVector:
    """A nonzero vector with support in ``{1..max_index}`` and coefficients ``p/q``,
    ``q`` drawn from ``denominators`` and ``0 < |p| <= q``."""
    size = rng.randint(1, min(max_support, max_index))
    support = sorted(rng.sample(range(1, max_index + 1), size))
    coefs = {}
    for i in support:
        q = rng.choice(list(denominators))
        p = rng.randint(1, q) * rng.choice((1, -1))
        coefs[i] = Fraction(p, q)
    return SparseVector.from_dict(coefs)
