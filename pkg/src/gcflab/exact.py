"""Exact 2x2 integer matrices, Mobius maps on [0, inf] and word helpers.

Rationals are :class:`fractions.Fraction` (always reduced). Words over a
finite alphabet of single characters are plain ``str`` values, which are
already immutable and support concatenation, reversal (``w[::-1]``) and
integer powers (``w * k``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union


class _Infinity:
    """The point at infinity of the extended nonnegative reals."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

ExtReal = Union[Fraction, _Infinity]


@dataclass(frozen=True)
class Mat2:
    """2x2 integer matrix, row-major: ``[[a, b], [c, d]]``."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def parse(cls, text: str) -> "Mat2":
        """Parse a comma-separated row-major literal such as ``"3,0,0,1"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"matrix literal needs 4 entries, got {text!r}")
        return cls(*(int(p) for p in parts))

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def is_nonnegative(self) -> bool:
        return min(self.a, self.b, self.c, self.d) >= 0

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result, base = IDENTITY, self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __str__(self):
        return f"{self.a},{self.b},{self.c},{self.d}"


def mat_mul(lhs: Mat2, rhs: Mat2) -> Mat2:
    return Mat2(
        lhs.a * rhs.a + lhs.b * rhs.c,
        lhs.a * rhs.b + lhs.b * rhs.d,
        lhs.c * rhs.a + lhs.d * rhs.c,
        lhs.c * rhs.b + lhs.d * rhs.d,
    )


def mat_det(m: Mat2) -> int:
    return m.det


def mat_prod(factors: Iterable[Mat2]) -> Mat2:
    result = IDENTITY
    for m in factors:
        result = result @ m
    return result


IDENTITY = Mat2(1, 0, 0, 1)
L = Mat2(1, 0, 1, 1)
R = Mat2(1, 1, 0, 1)
J = Mat2(0, 1, 1, 0)

_LR = {"L": L, "R": R}


def lr_product(word: str) -> Mat2:
    """Matrix product of a word over ``{L, R}``."""
    result = IDENTITY
    for ch in word:
        try:
            result = result @ _LR[ch]
        except KeyError:
            raise ValueError(f"letter {ch!r} is not in {{L, R}}") from None
    return result


def mobius_apply(m: Mat2, x: ExtReal) -> ExtReal:
    """Apply ``x -> (a x + b) / (c x + d)`` on the extended nonnegative reals.

    Points are rays of the nonnegative cone: ``x`` is ``(x, 1)`` and ``INF``
    is ``(1, 0)``, so ``m`` sends ``INF`` to ``a/c``. A zero denominator gives
    ``INF``. Only a singular matrix could produce ``0/0`` (equivalently
    ``inf/inf``); those are rejected, as are negative entries and arguments.
    """
    if not m.is_nonnegative():
        raise ValueError("Mobius action is defined here for nonnegative matrices only")
    if m.det == 0:
        raise ValueError("singular matrix: the action would need inf/inf")
    if x is INF:
        num, den = Fraction(m.a), Fraction(m.c)
    else:
        x = Fraction(x)
        if x < 0:
            raise ValueError("argument must lie in [0, inf]")
        num, den = m.a * x + m.b, m.c * x + m.d
    if den == 0:
        return INF
    return num / den
