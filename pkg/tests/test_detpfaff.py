"""Determinant and Pfaffian kernels plus the closed-form identities."""

import pytest

from fglsym.detpfaff import (
    NotSkew, OddDimension, det, gq_pfaffian, grothendieck_det,
    jacobi_trudi_schur, one_row_series, pfaffian, q_pfaffian,
)
from fglsym.fgl import FormalGroupLaw
from fglsym.oracles import hl_classical, schur_tableaux
from fglsym.partitions import Partition, partitions_up_to_weight
from fglsym.series import BETA, T, TruncSeries, b, x
from fglsym.symfun import FamilySpec, eval_family

Fa = FormalGroupLaw.additive()
Fm = FormalGroupLaw.multiplicative()


def test_det_basics():
    a = x(1)
    assert det([[a]]) == a
    eye = [[TruncSeries.const(int(i == j)) for j in range(3)]
           for i in range(3)]
    assert det(eye) == TruncSeries.const(1)


def test_det_jacobi_trudi_2x2_by_hand():
    h = one_row_series("h", 0, 2, factorial=False, cap=6)
    rows = [[h[2], h[3]], [h[0], h[1]]]
    got = det(rows)
    assert got == schur_tableaux([2, 1], 2).truncated(got.cap, got.pcap)


def test_pfaffian_basics():
    a = x(1)
    z = TruncSeries.zero()
    assert pfaffian([[z, a], [-a, z]]) == a
    entries = {}
    for i in range(4):
        for j in range(i + 1, 4):
            entries[(i, j)] = x(1).scaled(i + 1) + b(j).scaled(j)
    rows = [[TruncSeries.zero()] * 4 for _ in range(4)]
    for (i, j), v in entries.items():
        rows[i][j] = v
        rows[j][i] = -v
    got = pfaffian(rows)
    want = (entries[(0, 1)] * entries[(2, 3)]
            - entries[(0, 2)] * entries[(1, 3)]
            + entries[(0, 3)] * entries[(1, 2)])
    assert got == want
    assert got * got == det(rows)


def test_pfaffian_validation():
    z = TruncSeries.zero()
    with pytest.raises(OddDimension):
        pfaffian([[z]])
    with pytest.raises(NotSkew):
        pfaffian([[z, x(1)], [x(1), z]])
    with pytest.raises(NotSkew):
        pfaffian([[x(2), x(1)], [-x(1), z]])


def test_one_row_h_examples():
    table = one_row_series("h", 0, 2, factorial=False, cap=5)
    assert table[0] == TruncSeries.const(1, 5, 5)
    assert table[1] == (x(1) + x(2)).truncated(5, 5)
    # with a parameter tail of length 2: degree-one value picks up b's
    table2 = one_row_series("h", 2, 2, factorial=True, cap=5)
    assert table2[1] == (x(1) + x(2) + b(1) + b(2)).truncated(5, 5)
    assert table2[0] == TruncSeries.const(1, 5, 5)
    assert 1 not in {k for k in table2 if k < 0}


def test_one_row_deformed_equals_one_row_family():
    # h_k(x_n|b) sits in the tail-(k-1+n) table at index k
    from fglsym.genfun import gf_coefficient
    n = 2
    for k in (1, 2, 3):
        table = one_row_series("h", k - 1 + n, n, factorial=True, cap=6)
        fam = eval_family(FamilySpec("s_kl", Partition([k]), n, Fa,
                                     factorial=True, cap=6))
        assert table[k] == fam, k


def test_jacobi_trudi_matches_family():
    for n in (2, 3):
        for lam in partitions_up_to_weight(4, n):
            if lam.length == 0:
                continue
            cap = lam.weight + n + 2
            for factorial in (False, True):
                got = jacobi_trudi_schur(lam, n, factorial, cap)
                want = eval_family(FamilySpec("s_kl", lam, n, Fa,
                                              factorial=factorial, cap=cap))
                assert got == want.truncated(cap, got.pcap), (lam, factorial)


def test_grothendieck_reduces_to_jacobi_trudi_without_beta():
    lam, n, cap = Partition([2, 1]), 2, 7
    gd = grothendieck_det(lam, n, True, cap)
    jt = jacobi_trudi_schur(lam, n, True, cap)
    no_beta = gd.substitute({BETA: TruncSeries.zero()})
    assert no_beta == jt.truncated(cap, no_beta.pcap)


def test_grothendieck_matches_family():
    lam, n, cap = Partition([2, 1]), 2, 8
    got = grothendieck_det(lam, n, False, cap)
    want = eval_family(FamilySpec("s_kl", lam, n, Fm, cap=cap))
    assert got == want.truncated(cap, got.pcap)


def test_q_pfaffian_values():
    got = q_pfaffian(Partition([2, 1]), 2, False, 7)
    want = (x(1) * x(2) * (x(1) + x(2))).scaled(4)
    assert got == want.truncated(got.cap, got.pcap)
    # odd length pads with a zero part
    got1 = q_pfaffian(Partition([1]), 3, False, 6)
    assert got1 == (x(1) + x(2) + x(3)).scaled(2).truncated(6, got1.pcap)


def test_q_pfaffian_matches_classical_hl():
    nu, n = Partition([2, 1]), 2
    got = q_pfaffian(nu, n, False, 7)
    cl = hl_classical(nu, n, "Q").substitute({T: TruncSeries.const(-1)})
    assert got == cl.truncated(got.cap, got.pcap)


def test_q_pfaffian_factorial_matches_family():
    nu, n = Partition([2, 1]), 2
    got = q_pfaffian(nu, n, True, 7)
    want = eval_family(FamilySpec("q", nu, n, Fa, factorial=True, cap=7))
    assert got == want.truncated(got.cap, got.pcap)


def test_gq_pfaffian_reduces_without_beta():
    nu, n, cap = Partition([2, 1]), 2, 7
    gq = gq_pfaffian(nu, n, True, cap)
    qf = q_pfaffian(nu, n, True, cap)
    no_beta = gq.substitute({BETA: TruncSeries.zero()})
    assert no_beta == qf.truncated(cap, no_beta.pcap)


def test_gq_pfaffian_matches_family():
    nu, n, cap = Partition([2, 1]), 2, 7
    for factorial in (False, True):
        got = gq_pfaffian(nu, n, factorial, cap)
        want = eval_family(FamilySpec("q", nu, n, Fm, factorial=factorial,
                                      cap=cap))
        assert got == want.truncated(cap, got.pcap), factorial


def test_pf_squared_is_det_for_pfaffian_matrices():
    # on the actual matrices the closed forms build
    from fglsym.genfun import two_row_q
    nu = Partition([3, 2, 1])
    parts = list(nu.parts) + [0]
    cap = 6
    rows = [[TruncSeries.zero(cap)] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i + 1, 4):
            e = two_row_q((parts[i], parts[j]),
                          (parts[i] - 1, parts[j] - 1), 2, Fa, cap)
            rows[i][j] = e
            rows[j][i] = -e
    assert pfaffian(rows) * pfaffian(rows) == det(rows)
