"""Substitutions on finite alphabets, folding, fractional powers and stammering."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional


class SearchHorizonExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Substitution:
    """A map ``letter -> nonempty word`` on single-character letters.

    The alphabet order is the order in which rules were given; it fixes the
    row/column order of :meth:`incidence_matrix`.
    """

    rule: dict = field(hash=False)
    alphabet: tuple = ()

    def __post_init__(self):
        if not self.alphabet:
            object.__setattr__(self, "alphabet", tuple(self.rule))
        if set(self.alphabet) != set(self.rule):
            raise ValueError("alphabet must list exactly the rule's source letters")
        for letter, image in self.rule.items():
            if len(letter) != 1:
                raise ValueError(f"letters are single characters, got {letter!r}")
            if not image:
                raise ValueError(f"image of {letter!r} is empty")
            stray = set(image) - set(self.rule)
            if stray:
                raise ValueError(f"image of {letter!r} uses letters outside the alphabet: {sorted(stray)}")

    @classmethod
    def parse(cls, text: str) -> "Substitution":
        """Parse ``"a->ab;b->aa"``."""
        rule = {}
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if "->" not in chunk:
                raise ValueError(f"rule {chunk!r} lacks '->'")
            src, image = (s.strip() for s in chunk.split("->", 1))
            if len(src) != 1:
                raise ValueError(f"source {src!r} must be a single letter")
            if src in rule:
                raise ValueError(f"letter {src!r} has two rules")
            rule[src] = image
        if not rule:
            raise ValueError("empty substitution")
        return cls(rule)

    def __str__(self):
        return ";".join(f"{k}->{self.rule[k]}" for k in self.alphabet)

    def __call__(self, word: str) -> str:
        return apply(self, word)


PERIOD_DOUBLING = Substitution({"a": "ab", "b": "aa"})
THUE_MORSE = Substitution({"a": "ab", "b": "ba"})


def apply(s: Substitution, word: str) -> str:
    try:
        return "".join(s.rule[ch] for ch in word)
    except KeyError as exc:
        raise ValueError(f"letter {exc.args[0]!r} is outside the alphabet") from None


def iterate(s: Substitution, word: str, times: int) -> str:
    for _ in range(times):
        word = apply(s, word)
    return word


def _check_seed(s: Substitution, seed: str) -> None:
    if seed not in s.rule:
        raise ValueError(f"seed {seed!r} is outside the alphabet")
    if not s.rule[seed].startswith(seed):
        raise ValueError(f"seed {seed!r} is not a prefix of its image {s.rule[seed]!r}")


def fixed_point_stream(s: Substitution, seed: str) -> Iterator[str]:
    """Yield the letters of the fixed point starting with ``seed``, forever.

    A finite fixed point (seed maps to itself) ends the stream.
    """
    _check_seed(s, seed)
    word = seed
    i = 0
    while True:
        while i < len(word):
            yield word[i]
            i += 1
        longer = apply(s, word)
        if len(longer) == len(word):
            return
        word = longer


def fixed_point_prefix(s: Substitution, seed: str, n: int) -> str:
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_seed(s, seed)
    word = seed
    while len(word) < n:
        longer = apply(s, word)
        if len(longer) == len(word):
            raise ValueError(f"the fixed point from {seed!r} is finite (length {len(word)})")
        word = longer
    return word[:n]


def incidence_matrix(s: Substitution) -> list[list[int]]:
    """Entry ``[i][j]`` counts letter ``i`` in the image of letter ``j``."""
    counts = {src: Counter(img) for src, img in s.rule.items()}
    return [[counts[src][dst] for src in s.alphabet] for dst in s.alphabet]


def _matmul(x, y):
    n = len(x)
    return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def is_primitive(s: Substitution) -> bool:
    m = incidence_matrix(s)
    power = m
    for _ in range(len(m) ** 2):
        if all(v > 0 for row in power for v in row):
            return True
        power = _matmul(power, m)
    return False


def _null_vector(m: list[list[Fraction]]) -> Optional[list[Fraction]]:
    """One nonzero kernel vector of a square rational matrix, or None."""
    n = len(m)
    rows = [list(r) for r in m]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, n) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    vec = [Fraction(0)] * n
    vec[free[0]] = Fraction(1)
    for i, col in enumerate(pivots):
        vec[col] = -rows[i][free[0]]
    return vec


@dataclass(frozen=True)
class LetterFrequencies:
    """Letter frequencies of a primitive substitution's fixed point.

    ``exact`` is set only when the Perron eigenvalue is a rational integer;
    ``empirical`` always holds counts over the first ``horizon`` letters.
    """

    exact: Optional[dict]
    perron_eigenvalue: Optional[int]
    empirical: dict
    horizon: int

    @property
    def best(self) -> dict:
        return self.exact if self.exact is not None else self.empirical


def exact_frequencies(s: Substitution) -> Optional[tuple[int, dict]]:
    m = incidence_matrix(s)
    n = len(m)
    col_sums = [sum(m[i][j] for i in range(n)) for j in range(n)]
    # the Perron root lies between the extreme column sums
    for lam in range(max(col_sums), min(col_sums) - 1, -1):
        shifted = [[Fraction(m[i][j] - (lam if i == j else 0)) for j in range(n)] for i in range(n)]
        vec = _null_vector(shifted)
        if vec is None:
            continue
        if all(v < 0 for v in vec):
            vec = [-v for v in vec]
        if all(v > 0 for v in vec):
            total = sum(vec)
            return lam, {letter: v / total for letter, v in zip(s.alphabet, vec)}
    return None


def letter_frequencies(s: Substitution, horizon: int = 2**16, seed: Optional[str] = None) -> LetterFrequencies:
    if not is_primitive(s):
        raise ValueError("letter frequencies need a primitive substitution")
    if seed is None:
        seed = next(ch for ch in s.alphabet if s.rule[ch].startswith(ch))
    prefix = fixed_point_prefix(s, seed, horizon)
    counts = Counter(prefix)
    empirical = {ch: Fraction(counts[ch], horizon) for ch in s.alphabet}
    found = exact_frequencies(s)
    if found is None:
        return LetterFrequencies(None, None, empirical, horizon)
    lam, exact = found
    return LetterFrequencies(exact, lam, empirical, horizon)


def fold(w: str, p: str) -> str:
    return w + p + w[::-1]


def folding_word(generations: int) -> str:
    """Period doubling prefix after ``generations`` alternate foldings of ``"a"``.

    Generation 1 folds with ``b``, generation 2 with ``a`` and so on, so the
    result has length ``2**(generations + 1) - 1``.
    """
    w = "a"
    for g in range(1, generations + 1):
        w = fold(w, "b" if g % 2 else "a")
    return w


def folding_limit_prefix(n: int) -> str:
    if n < 1:
        raise ValueError("n must be >= 1")
    g = 0
    while 2 ** (g + 1) - 1 < n:
        g += 1
    return folding_word(g)[:n]


def fractional_power(w: str, r) -> str:
    """``w`` repeated ``floor(r)`` times, then a prefix of ``w`` of length ``ceil(frac(r)|w|)``."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("exponent must be positive")
    whole = math.floor(r)
    extra = math.ceil((r - whole) * len(w))
    if extra > len(w):
        raise ValueError("fractional part overruns the word")
    return w * whole + w[:extra]


@dataclass(frozen=True)
class StammerHit:
    w: str
    exponent: Fraction

    @property
    def power(self) -> str:
        return fractional_power(self.w, self.exponent)


def _lcp(s: str, m: int) -> int:
    """Length of the longest common prefix of ``s`` and ``s[m:]``."""
    lo, hi = 0, len(s) - m
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if s[:mid] == s[m:m + mid]:
            lo = mid
        else:
            hi = mid - 1
    return lo


def stammer_scan(prefix: str, r, min_len: int = 1) -> list[StammerHit]:
    """Every ``w`` with ``|w| >= min_len`` such that ``w**r`` is a prefix of ``prefix``.

    Each candidate length is tried; the reported exponent is the largest one
    visible inside ``prefix``.
    """
    r = Fraction(r)
    if r <= 1:
        raise ValueError("stammering exponent must exceed 1")
    hits = []
    m = max(min_len, 1)
    while math.ceil(r * m) <= len(prefix):
        reach = m + _lcp(prefix, m)
        if reach >= r * m:
            hits.append(StammerHit(prefix[:m], Fraction(reach, m)))
        m += 1
    return hits


def stammer_bound(s: Substitution, seed: str, max_j: int = 64) -> Fraction:
    """Lower bound ``1 + 1/(|xi^(jk)(seed)| - 1)`` on the stammering exponent.

    ``k`` is the least power with ``seed`` a prefix of ``xi^k(seed)``, ``j``
    the least multiple at which ``seed`` occurs a second time.
    """
    if seed not in s.rule:
        raise ValueError(f"seed {seed!r} is outside the alphabet")
    k = next(
        (k for k in range(1, len(s.alphabet) + 1) if iterate(s, seed, k).startswith(seed)),
        None,
    )
    if k is None:
        raise ValueError(f"seed {seed!r} is never a prefix of its own iterates")
    word = seed
    for _ in range(max_j):
        word = iterate(s, word, k)
        if word.count(seed) >= 2:
            return 1 + Fraction(1, len(word) - 1)
    raise SearchHorizonExceeded(f"no second {seed!r} within {max_j} steps")
