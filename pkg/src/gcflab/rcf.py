"""Regular continued fraction quotients of folding-generated GCFs.

Two independent routes: greedy L/R emission on the running matrix product
of the folded word, and simultaneous Euclid on both ends of an enclosure.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import raney
from .exact import IDENTITY, Mat2
from .gcf import Enclosure, GCFInput, enclosure
from .substitution import PERIOD_DOUBLING, folding_word

DEFAULT_ASSIGNMENT = {"a": 1, "b": 3}


def letter_matrix(value: int) -> Mat2:
    """``[[v, v], [1, 0]]``: the Mobius map ``x -> v + v/x``."""
    if value < 1:
        raise ValueError("letter values must be positive")
    return Mat2(value, value, 1, 0)


def encoding_from_assignment(assignment: dict) -> dict:
    return {letter: letter_matrix(v) for letter, v in assignment.items()}


CANONICAL_ENCODING = encoding_from_assignment(DEFAULT_ASSIGNMENT)


def encode(w: str, enc: dict) -> list[Mat2]:
    try:
        return [enc[ch] for ch in w]
    except KeyError as exc:
        raise ValueError(f"letter {exc.args[0]!r} has no matrix") from None


@dataclass(frozen=True)
class NormalForm:
    prefix: str
    residual: Mat2
    parity: int  # number of J factors absorbed into the residual, mod 2


class Normalizer:
    """Resumable greedy normalization: multiply, then emit everything possible."""

    def __init__(self, enc: dict):
        self.enc = enc
        self._out: list[str] = []
        self.residual = IDENTITY
        self.letters = 0

    def feed(self, w: str) -> "Normalizer":
        for m in encode(w, self.enc):
            emitted, self.residual = raney.emit(self.residual @ m)
            self._out.append(emitted)
            self.letters += 1
        return self

    @property
    def state(self) -> NormalForm:
        return NormalForm("".join(self._out), self.residual, self.letters % 2)


def normalize(w: str, enc: dict = CANONICAL_ENCODING) -> NormalForm:
    return Normalizer(enc).feed(w).state


def lr_to_quotients(w: str) -> list[int]:
    """Run lengths of ``R^c0 L^c1 R^c2 ...``; a leading ``L`` run gives ``c0 = 0``."""
    runs = [len(list(g)) for _, g in itertools.groupby(w)]
    if w.startswith("L"):
        runs.insert(0, 0)
    return runs


@dataclass(frozen=True)
class QuotientReport:
    confirmed: list = field(hash=False)
    next_lower_bound: int
    source: str

    def to_dict(self) -> dict:
        return {"confirmed": list(self.confirmed), "next_lower_bound": self.next_lower_bound, "source": self.source}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "QuotientReport":
        data = json.loads(text)
        return cls(list(data["confirmed"]), data["next_lower_bound"], data["source"])


def confirmed_quotients(nf: NormalForm) -> QuotientReport:
    """All runs but the last are final; the last only bounds its quotient from below."""
    runs = lr_to_quotients(nf.prefix)
    if not runs:
        return QuotientReport([], 0, "transducer")
    return QuotientReport(runs[:-1], runs[-1], "transducer")


def interval_quotients(e: Enclosure) -> list[int]:
    """Quotients shared by every number in ``[e.lo, e.hi]``."""
    lo, hi = Fraction(e.lo), Fraction(e.hi)
    if not 0 < lo <= hi:
        raise ValueError("need 0 < lo <= hi")
    return _interval_run(lo, hi)[0]


def _interval_run(lo: Fraction, hi: Fraction) -> tuple[list[int], int]:
    out = []
    while True:
        f_lo, f_hi = lo.numerator // lo.denominator, hi.numerator // hi.denominator
        if f_lo != f_hi:
            return out, min(f_lo, f_hi)
        out.append(f_lo)
        r_lo, r_hi = lo - f_lo, hi - f_hi
        if r_lo == 0 or r_hi == 0:
            return out, 0
        lo, hi = 1 / r_hi, 1 / r_lo


def interval_report(e: Enclosure) -> QuotientReport:
    quotients, bound = _interval_run(Fraction(e.lo), Fraction(e.hi))
    return QuotientReport(quotients, bound, "interval")


@dataclass(frozen=True)
class CrossCheck:
    transducer: QuotientReport
    interval: QuotientReport
    agreed: int
    discrepancy: bool

    def to_dict(self) -> dict:
        return {
            "transducer": self.transducer.to_dict(),
            "interval": self.interval.to_dict(),
            "agreed": self.agreed,
            "discrepancy": self.discrepancy,
        }


def compare(t: QuotientReport, i: QuotientReport) -> CrossCheck:
    common = min(len(t.confirmed), len(i.confirmed))
    bad = t.confirmed[:common] != i.confirmed[:common]
    agreed = next((j for j in range(common) if t.confirmed[j] != i.confirmed[j]), common)
    return CrossCheck(t, i, agreed, bad)


def cross_check(foldings: int, gcf_depth: int, assignment: Optional[dict] = None) -> CrossCheck:
    """Compare transducer quotients of a folding generation with interval quotients.

    Both arms describe the GCF whose ``a_n`` and ``b_n`` are both the period
    doubling sequence under ``assignment``.
    """
    assignment = assignment or DEFAULT_ASSIGNMENT
    nf = normalize(folding_word(foldings), encoding_from_assignment(assignment))
    t = confirmed_quotients(nf)
    inp = GCFInput.from_substitution(PERIOD_DOUBLING, assignment)
    i = interval_report(enclosure(inp, gcf_depth))
    return compare(t, i)


_A_INV = Mat2(0, 1, 1, -1)  # (R J)^-1


def residual_core(nf: NormalForm) -> Mat2:
    """The residual with its trailing ``R J`` removed (``residual @ (RJ)^-1``)."""
    return nf.residual @ _A_INV


def diagonal_exponents(m: Mat2, base: int = 3) -> Optional[tuple[int, int]]:
    """``(i, j)`` when ``m == beta_1^i beta_2^j = diag(base^i, base^j)``, else ``None``."""
    if m.b or m.c or m.a < 1 or m.d < 1:
        return None

    def log_exact(v):
        k = 0
        while v % base == 0:
            v //= base
            k += 1
        return k if v == 1 else None

    i, j = log_exact(m.a), log_exact(m.d)
    if i is None or j is None:
        return None
    return i, j
