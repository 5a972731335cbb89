"""Formal group law engine tests."""

from fractions import Fraction

import pytest

from fglsym.fgl import (
    FormalGroupLaw, NonNilpotentArgument, NonScalarMultiplier,
    fgl_specialize,
)
from fglsym.series import BETA, TruncSeries, X, beta, m, t, x

Fa = FormalGroupLaw.additive()
Fm = FormalGroupLaw.multiplicative()
Fu = FormalGroupLaw.universal()
Fc = FormalGroupLaw.custom([Fraction(1, k + 2) for k in range(10)])
ALL = (Fa, Fm, Fu, Fc)


def test_additive_sum():
    assert Fa.formal_sum(x(1, 4), x(2, 4)) == x(1, 4) + x(2, 4)


def test_multiplicative_sum():
    want = x(1, 4) + x(2, 4) + beta(4) * x(1, 4) * x(2, 4)
    assert Fm.formal_sum(x(1, 4), x(2, 4)) == want


def test_universal_sum_low_order():
    got = Fu.formal_sum(x(1, 2), x(2, 2))
    want = x(1, 2) + x(2, 2) - (x(1, 2) * x(2, 2) * m(1)).scaled(2)
    assert got == want


def test_a11_is_minus_two_m1():
    assert Fu.a_coeff(1, 1) == m(1).scaled(-2)


def test_inverse_examples():
    assert Fa.formal_inverse(x(1, 5)) == -x(1, 5)
    got = Fm.formal_inverse(x(1, 3))
    want = -x(1, 3) + x(1, 3) ** 2 * beta(3) - x(1, 3) ** 3 * beta(3) ** 2
    assert got == want
    chi = Fu.formal_inverse(x(1, 2))
    assert chi == -x(1, 2) - (x(1, 2) ** 2 * m(1)).scaled(2)
    assert Fu.formal_sum(x(1, 5), Fu.formal_inverse(x(1, 5))).is_zero()


def test_t_series_examples():
    assert Fa.t_series(x(1, 3), t()) == t() * x(1, 3)
    for F in ALL:
        assert F.t_series(x(1, 5), 2) == F.formal_sum(x(1, 5), x(1, 5))
        assert F.t_series(x(1, 5), -1) == F.formal_inverse(x(1, 5))
        for k in range(-3, 4):
            assert F.t_series(x(1, 5), k) == F.n_series(x(1, 5), k)


def test_t_series_rejects_geometric_multiplier():
    with pytest.raises(NonScalarMultiplier):
        Fu.t_series(x(1, 4), x(2, 4))


def test_nilpotency_required():
    with pytest.raises(NonNilpotentArgument):
        Fu.formal_sum(1 + x(1, 4), x(2, 4))
    with pytest.raises(NonNilpotentArgument):
        Fu.log_apply(x(1))  # no cap


def test_p_series():
    assert Fa.p_series(X(1), 5) == TruncSeries.const(1, 5)
    assert Fm.p_series(X(1), 4) == 1 + beta(4) * x(1, 4)
    # the inverse of P is the generating series of the one-variable data
    inv = Fu.p_series(X(1), 5).invert_unit()
    want = TruncSeries.const(1, 5)
    zpow = TruncSeries.const(1, 5)
    for n in range(1, 6):
        zpow = zpow * x(1, 5)
        want = want + zpow * m(n).scaled(n + 1)
    assert inv == want


def test_log_additivity_all_kinds():
    for F in ALL:
        s = F.formal_sum(x(1, 6), x(2, 6))
        assert F.log_apply(s) == F.log_apply(x(1, 6)) + F.log_apply(x(2, 6))


def test_axioms_all_kinds():
    for F in ALL:
        zero = TruncSeries.zero(6)
        assert F.formal_sum(x(1, 6), zero) == x(1, 6)
        assert F.formal_sum(x(1, 6), x(2, 6)) \
            == F.formal_sum(x(2, 6), x(1, 6))
        lhs = F.formal_sum(x(1, 6), F.formal_sum(x(2, 6), x(3, 6)))
        rhs = F.formal_sum(F.formal_sum(x(1, 6), x(2, 6)), x(3, 6))
        assert lhs == rhs


def test_specialize_examples():
    assert fgl_specialize(m(1), Fm) == beta().scaled(Fraction(-1, 2))
    s = Fu.formal_sum(x(1, 5), x(2, 5))
    assert fgl_specialize(s, Fa) == x(1, 5) + x(2, 5)
    assert fgl_specialize(s, Fm) == Fm.formal_sum(x(1, 5), x(2, 5))
    chi = Fu.formal_inverse(x(1, 5))
    assert fgl_specialize(chi, Fm) == Fm.formal_inverse(x(1, 5))


def test_specialize_commutes_with_operations():
    a = x(1, 5)
    bb = x(2, 5)
    for target in (Fa, Fm):
        assert fgl_specialize(Fu.formal_sum(a, bb), target) \
            == target.formal_sum(a, bb)
        assert fgl_specialize(Fu.t_series(a, t()), target) \
            == target.t_series(a, t())
        assert fgl_specialize(Fu.p_series(X(1), 5), target) \
            == target.p_series(X(1), 5)


def test_custom_equals_multiplicative_at_beta_minus_one():
    got = Fc.formal_sum(x(1, 5), x(2, 5))
    want = Fm.formal_sum(x(1, 5), x(2, 5)).substitute(
        {BETA: TruncSeries.const(-1)})
    assert got == want


def test_one_minus_t_series_identity():
    # z +_F [t](zbar) = [1-t](z) for every law
    for F in ALL:
        lhs = F.formal_sum(
            x(1, 5), F.t_series(F.formal_inverse(x(1, 5)), t()))
        assert lhs == F.t_series(x(1, 5), 1 - t())
