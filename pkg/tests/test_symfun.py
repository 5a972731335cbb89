"""Symmetrizer route: powers, the coset operator, and family values."""

import itertools

import pytest

from fglsym.fgl import FormalGroupLaw
from fglsym.oracles import hl_classical, schur_tableaux, sympy_to_series
from fglsym.partitions import Partition, partitions_up_to_weight
from fglsym.series import T, TruncSeries, X, b, beta, t, x
from fglsym.symfun import (
    FamilySpec, RankError, ShapeError, StrictnessError, ZeroExponent,
    double_power, eval_family, factorial_power, gysin_symmetrize,
    hl_fact_power, hl_power, kl_class,
)

Fa = FormalGroupLaw.additive()
Fm = FormalGroupLaw.multiplicative()
Fu = FormalGroupLaw.universal()


def test_factorial_power_examples():
    assert factorial_power(1, 0, Fu, True, cap=4) == TruncSeries.const(1, 4)
    got = factorial_power(1, 2, Fa, True, cap=6)
    assert got == (x(1, 6) + b(1, 6)) * (x(1, 6) + b(2, 6))
    assert factorial_power(1, 3, Fu, False, cap=6) == x(1, 6) ** 3


def test_double_power_examples():
    assert double_power(1, 1, Fa, False, cap=4) == x(1, 4).scaled(2)
    got = double_power(1, 2, Fa, True, cap=5)
    assert got == x(1, 5).scaled(2) * (x(1, 5) + b(1, 5))
    got = double_power(1, 1, Fm, False, cap=4)
    assert got == x(1, 4).scaled(2) + beta(4) * x(1, 4) ** 2
    with pytest.raises(ZeroExponent):
        double_power(1, 0, Fa, cap=4)


def test_hl_power_examples():
    got = hl_power(1, 3, Fa, cap=6)
    assert got == (1 - t(6)) * x(1, 6) ** 3
    at0 = hl_power(1, 2, Fu, cap=6).substitute({T: TruncSeries.zero()})
    assert at0 == x(1, 6) ** 2
    atm1 = hl_fact_power(1, 2, Fu, cap=6).substitute(
        {T: TruncSeries.const(-1)})
    assert atm1 == double_power(1, 2, Fu, True, cap=6)


def test_gysin_rank_zero_is_identity():
    one = TruncSeries.const(1, 6)
    assert gysin_symmetrize(one, 3, 0, Fu) == TruncSeries.const(1, 3)
    with pytest.raises(RankError):
        gysin_symmetrize(one, 2, 3, Fu)


def test_gysin_additive_gives_schur():
    # numerator x^(lam + rho_{n-1}) for lam=(2,1), n=3: exponents (4,2,0)
    cap = 8
    num = x(1, cap) ** 4 * x(2, cap) ** 2
    got = gysin_symmetrize(num, 3, 3, Fa)
    assert got == schur_tableaux([2, 1], 3).truncated(got.cap)
    # coset form with r = 2: exponents lam + rho_1 + (1,1) = (4,2)
    got2 = gysin_symmetrize(num, 3, 2, Fa)
    assert got2 == schur_tableaux([2, 1], 3).truncated(got2.cap)


def test_eval_family_examples():
    got = eval_family(FamilySpec("hp", Partition([1]), 3, Fa,
                                 factorial=True, t_on=True))
    assert got == x(1) + x(2) + x(3) + b(1) * (1 + t() + t() ** 2)
    got = eval_family(FamilySpec("hq", Partition([1]), 4, Fa,
                                 factorial=True, t_on=True))
    assert got == (1 - t()) * (x(1) + x(2) + x(3) + x(4))
    assert eval_family(FamilySpec("s_kl", Partition([]), 3, Fu)) \
        == TruncSeries.const(1)


def test_eval_family_validation():
    with pytest.raises(StrictnessError):
        FamilySpec("p", Partition([2, 2]), 3, Fa)
    with pytest.raises(ValueError):
        FamilySpec("hp", Partition([1]), 3, Fa)  # needs t_on
    with pytest.raises(ValueError):
        FamilySpec("q", Partition([2, 1]), 3, Fa, t_on=True)
    with pytest.raises(ValueError):
        FamilySpec("s_kl", Partition([1, 1, 1]), 2, Fa)


def test_symmetry_invariance():
    for fam, t_on in (("s_kl", False), ("q", False), ("hq", True)):
        lam = Partition([2, 1])
        val = eval_family(FamilySpec(fam, lam, 3, Fu, factorial=True,
                                     t_on=t_on))
        for w in itertools.permutations((1, 2, 3)):
            assert val.act_permutation(w) == val, (fam, w)


def test_gradedness_universal():
    val = eval_family(FamilySpec("s_kl", Partition([2, 1]), 3, Fu))
    assert val.graded_degrees() == {3}


def test_interpolation_t_zero():
    for n in (2, 3):
        for lam in partitions_up_to_weight(3, n):
            if lam.length == 0:
                continue
            skl = eval_family(FamilySpec("s_kl", lam, n, Fu))
            hp = eval_family(FamilySpec("hp", lam, n, Fu, t_on=True))
            hq = eval_family(FamilySpec("hq", lam, n, Fu, t_on=True))
            sub = {T: TruncSeries.zero()}
            assert hp.substitute(sub) == skl, lam
            assert hq.substitute(sub) == skl, lam


def test_t_minus_one_gives_pq():
    nu = Partition([2, 1])
    for factorial in (False, True):
        hp = eval_family(FamilySpec("hp", nu, 3, Fu, factorial=factorial,
                                    t_on=True))
        hq = eval_family(FamilySpec("hq", nu, 3, Fu, factorial=factorial,
                                    t_on=True))
        sub = {T: TruncSeries.const(-1)}
        assert hp.substitute(sub) == eval_family(
            FamilySpec("p", nu, 3, Fu, factorial=factorial))
        assert hq.substitute(sub) == eval_family(
            FamilySpec("q", nu, 3, Fu, factorial=factorial))


def test_additive_hq_is_classical_and_hp_v_relation():
    import sympy as sp
    from fglsym.oracles import v_lambda, v_poly
    tsym = sp.Symbol("t")
    for lam in ([1], [2, 1], [2, 2]):
        lam = Partition(lam)
        n = 3
        hq = eval_family(FamilySpec("hq", lam, n, Fa, t_on=True))
        q_cl = hl_classical(lam, n, "Q")
        assert hq == q_cl.truncated(hq.cap), lam
        # hp * v_{n-r} = v_lam * P classically
        hp = eval_family(FamilySpec("hp", lam, n, Fa, t_on=True))
        p_cl = hl_classical(lam, n, "P")
        lhs = hp * sympy_to_series(v_poly(n - lam.length, tsym), n)
        rhs = p_cl * sympy_to_series(v_lambda(lam, n, tsym), n)
        assert lhs == rhs.truncated(lhs.cap), lam
        # and hq = (1-t)^r hp
        assert hq == hp * (1 - t()) ** lam.length


def test_pq_full_group_presentation_agrees():
    nu = Partition([2, 1])
    for fam in ("p", "q"):
        spec = FamilySpec(fam, nu, 3, Fu)
        assert eval_family(spec) == eval_family(spec, full_group=True)


def test_kl_class():
    from fglsym.series import B
    assert kl_class([], 2, 4, Fu) == TruncSeries.const(1)
    got = kl_class([1], 1, 2, Fa)
    assert got == (x(1) + b(1)).truncated(got.cap)
    no_b = got.substitute({B(1): TruncSeries.zero(),
                           B(2): TruncSeries.zero()})
    assert no_b == x(1).truncated(got.cap)
    with pytest.raises(ShapeError):
        kl_class([3], 1, 2, Fu)
    # tails stop at lam_i - i + d, which stays within the cutoff b_n
    val = kl_class([2, 1], 2, 4, Fu, cap=6)
    assert B(3) in val.variables()
    assert B(4) not in val.variables()


def test_kl_class_multiplicative_matches_grothendieck_det():
    from fglsym.detpfaff import grothendieck_det
    lam, d, n = Partition([2, 1]), 2, 4
    got = kl_class(lam, d, n, Fm, cap=7)
    want = grothendieck_det(lam, d, True, 7)
    assert got == want.truncated(got.cap, got.pcap)
