"""Convergents, enclosures and diagnostics for generalized continued fractions.

The value studied is ``a0 + b0/(a1 + b1/(a2 + ...))`` with positive integer
partial numerators ``b_n`` and denominators ``a_n`` drawn from a finite set.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional

import mpmath

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

from .substitution import Substitution, fixed_point_stream


class InvariantViolation(RuntimeError):
    """An exact identity that must always hold was found broken."""


class _Terms:
    """Random access over a (possibly infinite) iterable, cached on demand."""

    def __init__(self, source: Iterable[int]):
        self._it = iter(source)
        self._cache: list[int] = []

    def __getitem__(self, n: int) -> int:
        while len(self._cache) <= n:
            try:
                self._cache.append(next(self._it))
            except StopIteration:
                raise IndexError(f"sequence has only {len(self._cache)} terms") from None
        return self._cache[n]


class GCFInput:
    """Coefficient sequences ``a`` and ``b`` plus bounds ``alpha <= beta``.

    ``a[0]`` may be zero; every other term must lie in ``[alpha, beta]`` with
    ``alpha >= 1``. Bounds are checked lazily as terms are read.
    """

    def __init__(self, a: Iterable[int], b: Iterable[int], alpha: int, beta: int):
        if not 1 <= alpha <= beta:
            raise ValueError("need 1 <= alpha <= beta")
        self.alpha = alpha
        self.beta = beta
        self._a = _Terms(a)
        self._b = _Terms(b)

    @classmethod
    def from_lists(cls, a: list[int], b: list[int], alpha: Optional[int] = None, beta: Optional[int] = None):
        values = list(a[1:]) + list(b)
        return cls(a, b, alpha or min(values), beta or max(values))

    @classmethod
    def from_substitution(
        cls,
        sub: Substitution,
        assignment: dict,
        seed: Optional[str] = None,
        b_sub: Optional[Substitution] = None,
        b_assignment: Optional[dict] = None,
        b_seed: Optional[str] = None,
    ) -> "GCFInput":
        """Both sequences read off substitution fixed points (``b`` defaults to ``a``'s)."""
        b_sub = b_sub or sub
        b_assignment = b_assignment or assignment
        seed = seed or _default_seed(sub)
        b_seed = b_seed or _default_seed(b_sub)
        for s, asg in ((sub, assignment), (b_sub, b_assignment)):
            missing = set(s.alphabet) - set(asg)
            if missing:
                raise ValueError(f"no numeric value for letters {sorted(missing)}")
            if min(asg[ch] for ch in s.alphabet) < 1:
                raise ValueError("assigned values must be positive integers")
        values = [assignment[ch] for ch in sub.alphabet] + [b_assignment[ch] for ch in b_sub.alphabet]
        a = (assignment[ch] for ch in fixed_point_stream(sub, seed))
        b = (b_assignment[ch] for ch in fixed_point_stream(b_sub, b_seed))
        return cls(a, b, min(values), max(values))

    @classmethod
    def periodic(cls, pairs: list[tuple[int, int]]) -> "GCFInput":
        """The purely periodic continuation of ``(a_j, b_j)`` for ``j < len(pairs)``."""
        # a_0 recurs at index k, so it must satisfy the same bounds
        values = [v for pair in pairs for v in pair]
        return cls(
            itertools.cycle([a for a, _ in pairs]),
            itertools.cycle([b for _, b in pairs]),
            min(values),
            max(values),
        )

    def a(self, n: int) -> int:
        v = self._a[n]
        if n and not self.alpha <= v <= self.beta:
            raise ValueError(f"a_{n} = {v} outside [{self.alpha}, {self.beta}]")
        if v < 0:
            raise ValueError("a_0 must be nonnegative")
        return v

    def b(self, n: int) -> int:
        v = self._b[n]
        if not self.alpha <= v <= self.beta:
            raise ValueError(f"b_{n} = {v} outside [{self.alpha}, {self.beta}]")
        return v

    def pairs(self, k: int) -> list[tuple[int, int]]:
        return [(self.a(j), self.b(j)) for j in range(k)]


def _default_seed(s: Substitution) -> str:
    for ch in s.alphabet:
        if s.rule[ch].startswith(ch):
            return ch
    raise ValueError(f"no letter of {s} is a prefix of its own image")


class ConvergentPair(NamedTuple):
    n: int
    p: int
    q: int


class _Step(NamedTuple):
    n: int
    p: int
    q: int
    p_prev: int
    q_prev: int
    P: int  # b_0 ... b_{n-1}


def check_determinant(n: int, p: int, q: int, p_prev: int, q_prev: int, P: int) -> None:
    """Raise unless ``p_n q_{n-1} - p_{n-1} q_n == (-1)^(n-1) P``."""
    lhs = p * q_prev - p_prev * q
    if lhs != (P if n % 2 else -P):
        raise InvariantViolation(f"determinant identity fails at n={n}: {lhs} vs (-1)^(n-1)*{P}")


def _steps(inp: GCFInput, n_max: int) -> Iterator[_Step]:
    # GMP integers internally (the exact check costs two big products per step)
    p_prev, q_prev, p, q = mpz(1), mpz(0), mpz(inp.a(0)), mpz(1)
    P = mpz(1)
    for n in range(n_max + 1):
        if n:
            bn1 = inp.b(n - 1)
            an = inp.a(n)
            p_prev, p = p, an * p + bn1 * p_prev
            q_prev, q = q, an * q + bn1 * q_prev
            P *= bn1
        check_determinant(n, p, q, p_prev, q_prev, P)
        yield _Step(n, int(p), int(q), int(p_prev), int(q_prev), int(P))


def convergents(inp: GCFInput, n_max: int) -> Iterator[ConvergentPair]:
    """``(n, p_n, q_n)`` for ``0 <= n <= n_max``.

    Uses ``p_{n+1} = a_{n+1} p_n + b_n p_{n-1}`` (same for ``q``) from
    ``p_{-1} = 1, q_{-1} = 0, p_0 = a_0, q_0 = 1`` and checks
    ``p_n q_{n-1} - p_{n-1} q_n = (-1)^(n-1) b_0 ... b_{n-1}`` at every step.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    for s in _steps(inp, n_max):
        yield ConvergentPair(s.n, s.p, s.q)


def convergent_table(inp: GCFInput, n_max: int) -> tuple[list[int], list[int]]:
    ps, qs = [], []
    for _, p, q in convergents(inp, n_max):
        ps.append(p)
        qs.append(q)
    return ps, qs


def rho(inp: GCFInput, k: int) -> Fraction:
    """``-b_k q_{k-1} / q_{k+1}``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    _, qs = convergent_table(inp, k + 1)
    return Fraction(-inp.b(k) * qs[k - 1], qs[k + 1])


def rhos(inp: GCFInput, k_max: int) -> Iterator[tuple[int, int, int]]:
    """Unreduced ``(k, numerator, denominator)`` of ``rho_k`` for ``1 <= k <= k_max``."""
    _, qs = convergent_table(inp, k_max + 1)
    for k in range(1, k_max + 1):
        yield k, -inp.b(k) * qs[k - 1], qs[k + 1]


def rho_bounds(alpha: int, beta: int) -> tuple[Fraction, Fraction]:
    """Strict bounds ``(1 + 2 beta^2/alpha)^-1 < |rho_k| < (1 + alpha/beta)^-1``."""
    return Fraction(alpha, alpha + 2 * beta * beta), Fraction(beta, alpha + beta)


def series_partial(inp: GCFInput, n: int) -> Fraction:
    """``a_0 + (b_0/a_1)(1 + sum_{k=1}^{n-1} rho_1 ... rho_k)``, which equals ``p_n/q_n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _, qs = convergent_table(inp, n)
    total = Fraction(1)
    term = Fraction(1)
    for k in range(1, n):
        term *= Fraction(-inp.b(k) * qs[k - 1], qs[k + 1])
        total += term
    return inp.a(0) + Fraction(inp.b(0), inp.a(1)) * total


def series_partials(inp: GCFInput, n_max: int) -> Iterator[tuple[int, Fraction]]:
    """``(n, series_partial(inp, n))`` for ``1 <= n <= n_max`` in one pass."""
    _, qs = convergent_table(inp, n_max)
    head = Fraction(inp.b(0), inp.a(1))
    total = term = Fraction(1)
    for n in range(1, n_max + 1):
        if n > 1:
            k = n - 1
            term *= Fraction(-inp.b(k) * qs[k - 1], qs[k + 1])
            total += term
        yield n, inp.a(0) + head * total


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction
    depth: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("lo > hi")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def within(self, other: "Enclosure") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi


def _sandwich(s: _Step, nxt: _Step) -> Enclosure:
    x, y = Fraction(s.p, s.q), Fraction(nxt.p, nxt.q)
    return Enclosure(min(x, y), max(x, y), s.n)


def enclosure(inp: GCFInput, n: int) -> Enclosure:
    """Consecutive convergents ``p_n/q_n`` and ``p_{n+1}/q_{n+1}``, ordered.

    The value lies between them because the series terms alternate in sign
    with shrinking size.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    steps = list(_steps(inp, n + 1))
    return _sandwich(steps[n], steps[n + 1])


def enclosures(inp: GCFInput, n_max: int) -> Iterator[Enclosure]:
    """``enclosure(inp, n)`` for ``1 <= n <= n_max`` in one pass."""
    prev = None
    for s in _steps(inp, n_max + 1):
        if prev is not None and prev.n >= 1:
            yield _sandwich(prev, s)
        prev = s


def evaluate(inp: GCFInput, eps, max_depth: int = 100_000) -> Enclosure:
    """The shallowest enclosure (depth >= 1) of width at most ``eps``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    prev = None
    for s in _steps(inp, max_depth + 1):
        if prev is not None and prev.n >= 1:
            # width = b_0...b_n / (q_n q_{n+1}) = s.P / (prev.q * s.q)
            if s.P * eps.denominator <= eps.numerator * prev.q * s.q:
                return _sandwich(prev, s)
        prev = s
    raise RuntimeError(f"width {eps} not reached within depth {max_depth}")


@dataclass(frozen=True)
class QuadraticApproximant:
    coefficients: tuple[int, int, int]
    root: Enclosure

    def evaluate(self, x: Fraction) -> Fraction:
        A, B, C = self.coefficients
        return (A * x + B) * x + C


def quadratic_approximant(inp: GCFInput, k: int, literal: bool = False, width=Fraction(1, 10**30)) -> QuadraticApproximant:
    """Quadratic whose positive root is the period-``k`` continuation of the input.

    By default the polynomial is the fixed-point equation of
    ``M_0 ... M_{k-1} = [[p_{k-1}, b_{k-1} p_{k-2}], [q_{k-1}, b_{k-1} q_{k-2}]]``:
    ``q_{k-1} x^2 + (b_{k-1} q_{k-2} - p_{k-1}) x - b_{k-1} p_{k-2}``.
    ``literal=True`` uses ``q_{k-1} x^2 + (q_k - p_{k-1}) x - p_k`` instead,
    which does not generally vanish at the periodic value.
    """
    if k < 1:
        raise ValueError("period must be >= 1")
    steps = list(_steps(inp, k))
    last = steps[k - 1]
    if literal:
        nxt = steps[k]
        coeffs = (last.q, nxt.q - last.p, -nxt.p)
    else:
        bk = inp.b(k - 1)
        coeffs = (last.q, bk * last.q_prev - last.p, -bk * last.p_prev)
    return QuadraticApproximant(coeffs, _positive_root(coeffs, Fraction(width)))


def _positive_root(coeffs: tuple[int, int, int], width: Fraction) -> Enclosure:
    A, B, C = coeffs
    if A <= 0:
        raise ValueError("leading coefficient must be positive")

    def f(x):
        return (A * x + B) * x + C

    if C == 0:
        if B >= 0:
            raise ValueError("no positive root")
        r = Fraction(-B, A)
        return Enclosure(r, r, 0)
    if C > 0:
        raise ValueError("constant term must be negative for a unique positive root")
    disc = B * B - 4 * A * C
    s = math.isqrt(disc)
    if s * s == disc:
        r = Fraction(-B + s, 2 * A)
        return Enclosure(r, r, 0)
    lo, hi = Fraction(0), Fraction(1 + (abs(B) + abs(C)) // A + 1)
    steps = 0
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = f(mid)
        steps += 1
        if v == 0:
            return Enclosure(mid, mid, steps)
        if v < 0:
            lo = mid
        else:
            hi = mid
    return Enclosure(lo, hi, steps)


DIAGNOSTIC_FIELDS = ("n", "p", "q", "d", "P", "q_root", "baker_ratio", "err", "eff_exp", "margin")
GUARD_DPS = 50  # 30 reported digits plus ~64 guard bits


@dataclass(frozen=True)
class DiagnosticsRow:
    n: int
    p: int
    q: int
    d: int
    P: int
    q_root: mpmath.mpf
    baker_ratio: Optional[mpmath.mpf]
    err: Fraction
    eff_exp: Optional[mpmath.mpf]
    margin: Fraction

    @property
    def inequality_holds(self) -> bool:
        """Whether ``d_n < q_n / d_n``, i.e. ``margin > 1``."""
        return self.d * self.d < self.q


def _log(x: int) -> mpmath.mpf:
    return mpmath.log(mpmath.mpf(x))


def diagnostics(inp: GCFInput, n_max: int) -> Iterator[DiagnosticsRow]:
    """Rows for ``1 <= n <= n_max`` of gcd, product and growth diagnostics.

    ``err`` is the enclosure width ``b_0...b_n/(q_n q_{n+1})``, a bound on
    ``|theta - p_n/q_n|``. Ratios undefined because ``q_n = 1`` or
    ``q_n/d_n = 1`` are reported as ``None``.
    """
    if n_max < 2:
        raise ValueError("diagnostics need n_max >= 2")
    prev = None
    for s in _steps(inp, n_max + 1):
        if prev is not None and prev.n >= 1:
            with mpmath.workdps(GUARD_DPS):
                row = _row(prev, s)
            yield row
        prev = s


def _row(s: _Step, nxt: _Step) -> DiagnosticsRow:
    d = math.gcd(s.p, s.q)
    if s.P % d:
        raise InvariantViolation(f"d_{s.n} = {d} does not divide b_0...b_(n-1) = {s.P}")
    log_q = _log(s.q)
    q_root = mpmath.exp(log_q / s.n)
    baker = _log(nxt.q) / log_q if s.q > 1 else None
    err = Fraction(nxt.P, s.q * nxt.q)
    reduced = s.q // d
    eff = (_log(s.q) + _log(nxt.q) - _log(nxt.P)) / _log(reduced) if reduced > 1 else None
    return DiagnosticsRow(s.n, s.p, s.q, d, s.P, q_root, baker, err, eff, Fraction(reduced, d))


_REAL_FIELDS = ("q_root", "baker_ratio", "err", "eff_exp", "margin")


def diagnostics_record(row: DiagnosticsRow) -> dict:
    return {name: getattr(row, name) for name in DIAGNOSTIC_FIELDS}


def diagnostics_csv(rows: Iterable[DiagnosticsRow]) -> str:
    from .formatting import csv_text, int_str, real_str

    body = []
    for row in rows:
        rec = diagnostics_record(row)
        body.append([real_str(v) if k in _REAL_FIELDS else int_str(v) for k, v in rec.items()])
    return csv_text(DIAGNOSTIC_FIELDS, body)


def diagnostics_jsonl(rows: Iterable[DiagnosticsRow]) -> str:
    from .formatting import json_line

    return "".join(json_line(diagnostics_record(row), reals=_REAL_FIELDS) + "\n" for row in rows)
