"""Independence checks among the classical oracles themselves."""

import sympy as sp

from fglsym.oracles import (
    b_lambda, factorial_schur_bialternant, hl_classical, phi_poly,
    schur_tableaux, sympy_to_series, v_lambda, v_poly,
)
from fglsym.partitions import Partition, partitions_up_to_weight
from fglsym.series import TruncSeries, b, t, x


def test_schur_tableaux_small():
    from fglsym.series import X
    assert schur_tableaux([], 3) == TruncSeries.const(1)
    assert schur_tableaux([1], 3) == x(1) + x(2) + x(3)
    s21 = schur_tableaux([2, 1], 3)
    assert sum(s21.terms.values()) == 8  # eight tableaux
    assert s21.coefficient_of(((X(1), 2), (X(2), 1))) == 1
    assert s21.coefficient_of(((X(1), 1), (X(2), 1), (X(3), 1))) == 2


def test_bialternant_matches_tableaux():
    for n in (2, 3, 4):
        for lam in partitions_up_to_weight(4, n):
            got = factorial_schur_bialternant(lam, n)
            assert got == schur_tableaux(lam, n), (lam, n)


def test_factorial_bialternant_one_box():
    a1 = b(1)
    a2 = b(2)
    got = factorial_schur_bialternant([1], 2, lambda i: (a1, a2)[i - 1])
    assert got == x(1) + x(2) - a1 - a2


def test_hl_t0_is_schur():
    for lam in ([1], [2], [2, 1]):
        for kind in ("P", "Q"):
            val = hl_classical(lam, 3, kind)
            from fglsym.series import T
            at0 = val.substitute({T: TruncSeries.zero()})
            assert at0 == schur_tableaux(lam, 3), (lam, kind)


def test_hl_q_one_row():
    got = hl_classical([1], 3, "Q")
    assert got == (1 - t()) * (x(1) + x(2) + x(3))


def test_hl_q_equals_b_times_p():
    tsym = sp.Symbol("t")
    for n in (2, 3):
        for lam in partitions_up_to_weight(3, n):
            if lam.length == 0:
                continue
            q = hl_classical(lam, n, "Q")
            p = hl_classical(lam, n, "P")
            blam = sympy_to_series(b_lambda(lam, tsym), n)
            assert q == blam * p, (lam, n)


def test_hl_schur_q_at_minus_one():
    from fglsym.series import T
    q21 = hl_classical([2, 1], 2, "Q").substitute(
        {T: TruncSeries.const(-1)})
    want = (x(1) * x(2) * (x(1) + x(2))).scaled(4)
    assert q21 == want


def test_normalization_polynomials():
    tsym = sp.Symbol("t")
    assert sp.expand(phi_poly(2, tsym) - (1 - tsym) * (1 - tsym ** 2)) == 0
    assert sp.expand(v_poly(2, tsym) - (1 + tsym)) == 0
    # v_lam/v_{n-r} equals b_lam/(1-t)^r after clearing denominators
    for n in (2, 3):
        for lam in partitions_up_to_weight(3, n):
            lhs = sp.expand(v_lambda(lam, n, tsym) * (1 - tsym) ** lam.length)
            rhs = sp.expand(b_lambda(lam, tsym) * v_poly(n - lam.length,
                                                         tsym))
            assert sp.expand(lhs - rhs) == 0, (lam, n)
