"""Deterministic text rendering: exact integers, 30-digit reals, CSV and JSON."""

from __future__ import annotations

import contextlib
import csv
import io
import json
import math
import sys
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction

import mpmath

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = None

SIG_DIGITS = 30
_CTX = Context(prec=SIG_DIGITS, rounding=ROUND_HALF_EVEN)


@contextlib.contextmanager
def unlimited_int_digits():
    """Lift CPython's int/str conversion cap (4300 digits) for the block."""
    getter = getattr(sys, "get_int_max_str_digits", None)
    if getter is None:
        yield
        return
    old = getter()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def int_str(n: int) -> str:
    # GMP's conversion is subquadratic and ignores the int/str digit cap
    if mpz is not None:
        return mpz(n).digits(10)
    return str(Decimal(n))


def _exact_fraction(x) -> Fraction:
    if isinstance(x, mpmath.mpf):
        man, exp = int(x.man), int(x.exp)
        return Fraction(man) * (Fraction(2) ** exp)
    return Fraction(x)


def ratio_str(num: int, den: int) -> str:
    """``num/den`` to 30 significant digits, round-half-even, without reducing it."""
    if den == 0:
        raise ZeroDivisionError("ratio_str with zero denominator")
    if num == 0:
        return "0"
    sign = 1 if (num < 0) != (den < 0) else 0
    num, den = abs(num), abs(den)
    # decimal exponent e with 10^e <= num/den < 10^(e+1)
    e = math.floor((num.bit_length() - den.bit_length()) * math.log10(2))
    while _scaled(num, den, -e) < 1:
        e -= 1
    while _scaled(num, den, -e - 1) >= 1:
        e += 1
    shift = SIG_DIGITS - 1 - e
    top, bottom = (num * 10**shift, den) if shift >= 0 else (num, den * 10 ** (-shift))
    q, r = divmod(top, bottom)
    if r == 0:
        # exact: drop trailing zeros down to the units place
        while shift > 0 and q % 10 == 0:
            q //= 10
            shift -= 1
    elif 2 * r > bottom or (2 * r == bottom and q % 2):
        q += 1
    if q == 10**SIG_DIGITS:
        q //= 10
        shift -= 1
    return str(Decimal((sign, tuple(map(int, str(q))), -shift)))


def _scaled(num: int, den: int, k: int) -> int:
    """``floor(num * 10^k / den)``."""
    return (num * 10**k) // den if k >= 0 else num // (den * 10 ** (-k))


def real_str(x) -> str:
    """``x`` rounded half-even to 30 significant digits; empty for ``None``."""
    if x is None:
        return ""
    f = _exact_fraction(x)
    return ratio_str(f.numerator, f.denominator)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def json_text(obj) -> str:
    with unlimited_int_digits():
        return json.dumps(obj)


def json_line(record: dict, reals=()) -> str:
    """One JSON object; keys in ``reals`` are written as 30-digit number literals."""
    parts = []
    for key, value in record.items():
        if key in reals:
            text = real_str(value) or "null"
        else:
            text = json_text(value)
        parts.append(f"{json.dumps(key)}: {text}")
    return "{" + ", ".join(parts) + "}"
