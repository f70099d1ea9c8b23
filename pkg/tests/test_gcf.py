import random
from fractions import Fraction

import mpmath
import pytest

from conftest import pd13, random_input
from gcflab.gcf import (
    GCFInput,
    InvariantViolation,
    check_determinant,
    convergent_table,
    convergents,
    diagnostics,
    diagnostics_csv,
    diagnostics_jsonl,
    enclosure,
    enclosures,
    evaluate,
    quadratic_approximant,
    rho,
    rho_bounds,
    rhos,
    series_partial,
)

# (p_n, q_n), n = 0..7, for a = b = 1,3,1,1,1,3,1,3,... worked by hand from
# p_{n+1} = a_{n+1} p_n + b_n p_{n-1}
PD_TABLE = [(1, 1), (4, 3), (7, 6), (11, 9), (18, 15), (65, 54), (119, 99), (422, 351)]


def test_convergents_pd(pd):
    assert [(p, q) for _, p, q in convergents(pd, 7)] == PD_TABLE


def test_convergents_fibonacci(ones):
    qs = [q for _, _, q in convergents(ones, 9)]
    assert qs == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    _, p, q = list(convergents(ones, 60))[-1]
    assert abs(Fraction(p, q) - Fraction((1 + 5**0.5) / 2)) < 1e-15


def test_determinant_identity_by_hand(pd):
    (p2, q2), (p3, q3) = PD_TABLE[2], PD_TABLE[3]
    assert p3 * q2 - p2 * q3 == 3 == 1 * 3 * 1


def test_convergents_depth_zero(pd):
    assert list(convergents(pd, 0)) == [(0, 1, 1)]


def test_determinant_check():
    check_determinant(3, 11, 9, 7, 6, 3)
    with pytest.raises(InvariantViolation):
        check_determinant(3, 11, 9, 7, 6, 9)
    with pytest.raises(InvariantViolation):
        check_determinant(4, 11, 9, 7, 6, 3)  # sign must alternate
    check_determinant(4, 18, 15, 11, 9, 3)


def test_out_of_bounds_terms_rejected():
    with pytest.raises(ValueError):
        list(convergents(GCFInput([1, 5], [1, 1], 1, 3), 1))
    with pytest.raises(ValueError):
        GCFInput([1], [1], 0, 3)


def test_rho_examples(pd, ones):
    assert rho(pd, 1) == Fraction(-1, 2)
    assert rho(pd, 2) == Fraction(-1, 3)
    assert rho(ones, 1) == Fraction(-1, 2)
    lo, hi = rho_bounds(1, 3)
    assert lo < abs(rho(pd, 1)) < hi == Fraction(3, 4)


def test_rhos_stream_matches(pd):
    for k, num, den in rhos(pd, 30):
        assert Fraction(num, den) == rho(pd, k)


def test_rho_bound_boundary_case():
    # a_1 = 1 makes q_1 = q_0, and with a_2 = alpha, b_1 = beta the upper bound is attained
    inp = GCFInput([1, 1, 1, 3, 3], [1, 3, 1, 1, 1], 1, 3)
    assert abs(rho(inp, 1)) == rho_bounds(1, 3)[1]


def test_series_examples(pd, ones):
    assert series_partial(pd, 1) == Fraction(4, 3)
    assert series_partial(pd, 2) == Fraction(7, 6)
    assert series_partial(ones, 3) == Fraction(5, 3)


def test_series_random():
    rng = random.Random(7)
    for _ in range(5):
        inp = random_input(rng, 130)
        ps, qs = convergent_table(inp, 120)
        for n in (1, 2, 17, 120):
            assert series_partial(inp, n) == Fraction(ps[n], qs[n])


def test_enclosure_examples(pd, ones):
    e = enclosure(pd, 6)
    assert (e.lo, e.hi) == (Fraction(119, 99), Fraction(422, 351))
    assert e.width == Fraction(9, 99 * 351)
    e1 = enclosure(ones, 1)
    assert (e1.lo, e1.hi) == (Fraction(3, 2), Fraction(2))


def test_enclosures_nested_and_exact_width(pd):
    inp = pd13()
    _, qs = convergent_table(inp, 302)
    prev = None
    P = 1
    for e in enclosures(pd, 300):
        n = e.depth
        if n == 1:
            P = pd.b(0) * pd.b(1)
        else:
            P *= pd.b(n)
        assert e.width == Fraction(P, qs[n] * qs[n + 1])
        if prev is not None:
            assert e.within(prev) and e.width < prev.width
        prev = e
    assert enclosure(pd, 57) == list(enclosures(pd, 57))[-1]


def test_evaluate_examples(pd, ones):
    e = evaluate(pd, Fraction(1, 100))
    assert e.depth <= 8 and Fraction(12022, 10000) in e
    assert evaluate(pd, 1).depth == 1
    with mpmath.workdps(80):
        phi = (1 + mpmath.sqrt(5)) / 2
        e = evaluate(ones, Fraction(1, 10**30))
        for end in (e.lo, e.hi):
            assert abs(mpmath.mpf(end.numerator) / end.denominator - phi) <= mpmath.mpf(10) ** -30
    with pytest.raises(ValueError):
        evaluate(pd, 0)


def test_quadratic_golden():
    qa = quadratic_approximant(GCFInput.periodic([(1, 1)]), 1)
    assert qa.coefficients == (1, -1, -1)
    with mpmath.workdps(60):
        phi = (1 + mpmath.sqrt(5)) / 2
        assert mpmath.mpf(qa.root.lo.numerator) / qa.root.lo.denominator <= phi
        assert phi <= mpmath.mpf(qa.root.hi.numerator) / qa.root.hi.denominator
    assert qa.root.width <= Fraction(1, 10**30)


def test_quadratic_period_two(pd):
    qa = quadratic_approximant(pd, 2)
    assert qa.coefficients == (3, -1, -3)
    # iterate x -> 1 + 1/(3 + 3/x) in floats as an independent check
    x = 1.0
    for _ in range(200):
        x = 1 + 1 / (3 + 3 / x)
    assert abs(float(qa.root.lo) - x) < 1e-12
    assert abs(float(qa.root.lo) - (1 + 37**0.5) / 6) < 1e-12
    assert qa.evaluate(qa.root.lo) <= 0 <= qa.evaluate(qa.root.hi)


def test_quadratic_literal_differs_at_period_one():
    inp = GCFInput.periodic([(2, 3)])
    matrix = quadratic_approximant(inp, 1)
    literal = quadratic_approximant(inp, 1, literal=True)
    assert matrix.coefficients == (1, -2, -3)  # x = 2 + 3/x, root 3
    assert matrix.root.lo == matrix.root.hi == 3
    assert literal.coefficients == (1, 0, -7)  # root sqrt(a_0^2 + b_0)
    assert literal.root.hi < 3


def test_diagnostics_examples(pd, ones):
    rows = list(diagnostics(ones, 30))
    assert all(r.d == 1 and r.P == 1 for r in rows)
    assert rows[0].baker_ratio is None  # q_1 = 1
    row3 = list(diagnostics(pd, 3))[2]
    assert (row3.n, row3.P, row3.d) == (3, 3, 1)
    assert row3.P % row3.d == 0
    with pytest.raises(ValueError):
        list(diagnostics(pd, 1))


def test_diagnostics_fields(pd):
    rows = list(diagnostics(pd, 60))
    beta = 3
    for r in rows:
        assert r.P % r.d == 0
        assert r.q_root <= 2 * mpmath.mpf(beta) ** 1.5
        assert r.margin == Fraction(r.q, r.d * r.d)
        assert r.err == enclosure(pd, r.n).width
    for r in rows[39:]:
        assert r.baker_ratio <= 1 + mpmath.log(2 * beta) / mpmath.log(r.q)
        assert r.baker_ratio <= 1.5


def test_diagnostics_serialization(pd):
    rows = list(diagnostics(pd, 4))
    text = diagnostics_csv(rows)
    assert text.splitlines()[0] == "n,p,q,d,P,q_root,baker_ratio,err,eff_exp,margin"
    assert text.splitlines()[4].startswith("4,18,15,3,3,")
    import json
    from decimal import Decimal

    objs = [json.loads(line, parse_float=Decimal) for line in diagnostics_jsonl(rows).splitlines()]
    assert [o["n"] for o in objs] == [1, 2, 3, 4]
    assert objs[3]["margin"] == Decimal("1.66666666666666666666666666667")
    assert set(objs[0]) == set(text.splitlines()[0].split(","))


def test_growth_bounds_random():
    rng = random.Random(11)
    for _ in range(5):
        inp = random_input(rng, 400)
        _, qs = convergent_table(inp, 399)
        for n in range(0, 399):
            assert qs[n + 1] ** 2 >= 2 ** (n - 1)
        for n in range(1, 400):
            assert qs[n] ** 2 <= 4**n * inp.beta ** (3 * n)
