"""Closed forms: Jacobi-Trudi determinants and Pfaffians.

These work over the additive law (classical and deformed Schur / Q
polynomials) and the multiplicative law (their K-theoretic analogues
with the unit beta).  One-row building blocks come from one-variable
generating series; two-row Pfaffian entries come from the two-variable
extraction in :mod:`fglsym.genfun`.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

from .fgl import FormalGroupLaw
from .genfun import BSequence, LaurentContext, MultiLaurent, two_row_q
from .partitions import Partition
from .series import BETA, SeriesError, TruncSeries, U, X, b, beta, x
from .symfun import b_param

__all__ = [
    "OddDimension", "NotSkew",
    "det", "pfaffian", "one_row_series",
    "jacobi_trudi_schur", "grothendieck_det",
    "q_pfaffian", "gq_pfaffian",
]


class OddDimension(SeriesError):
    pass


class NotSkew(SeriesError):
    pass


def det(rows):
    """Exact determinant by Leibniz expansion (small matrices only)."""
    n = len(rows)
    for row in rows:
        if len(row) != n:
            raise ValueError("matrix is not square")
    if n == 0:
        return TruncSeries.const(1)
    total = TruncSeries.zero()
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        total = total + (term if sign > 0 else -term)
    return total


def pfaffian(rows, check=True):
    """Pfaffian of an even skew-symmetric matrix by expansion along the
    first row; Pf(M)^2 = det(M)."""
    n = len(rows)
    if n % 2:
        raise OddDimension("Pfaffian needs even dimension")
    if check:
        for i in range(n):
            if not rows[i][i].is_zero():
                raise NotSkew("nonzero diagonal entry at %d" % i)
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise NotSkew("entry (%d,%d) is not antisymmetric"
                                  % (i, j))
    return _pf(rows, list(range(n)))


def _pf(rows, idx):
    if not idx:
        return TruncSeries.const(1)
    if len(idx) == 2:
        return rows[idx[0]][idx[1]]
    first = idx[0]
    total = TruncSeries.zero()
    for pos in range(1, len(idx)):
        j = idx[pos]
        rest = idx[1:pos] + idx[pos + 1:]
        term = rows[first][j] * _pf(rows, rest)
        if pos % 2 == 1:
            total = total + term
        else:
            total = total - term
    return total


# ---------------------------------------------------------------------------
# One-row generating series
# ---------------------------------------------------------------------------


def one_row_series(kind, k, n, factorial=True, b_limit=None, cap=None,
                   pcap=None):
    """Coefficient family of a one-variable generating function.

    kind 'h':   prod_j 1/(1 - x_j u) * prod_{j<=k} (1 + b_j u)
    kind 'Q':   prod_j (1 + x_j u)/(1 - x_j u) * prod_{j<=k} (1 + b_j u)
    kind 'G':   K-theoretic analogue of 'h' (with 1/(1 + beta/u) head)
    kind 'GQ':  K-theoretic analogue of 'Q'

    Returns a map from the integer index to the coefficient; indices
    below -(cap + k) or above cap vanish.  With ``factorial=False`` the
    tail product is empty regardless of k.
    """
    if cap is None:
        cap = k + n
    if pcap is None:
        pcap = cap
    if not factorial:
        k = 0
    fgl = (FormalGroupLaw.additive() if kind in ("h", "Q")
           else FormalGroupLaw.multiplicative())
    uvid = U(1)
    ctx = LaurentContext.for_target((uvid,), (0,), cap, pcap)
    sc = ctx.series_cap(1)
    uu = TruncSeries.variable(uvid, sc, pcap)
    factors = [MultiLaurent.from_series(
        ctx, fgl.log_derivative(uvid, ctx.series_cap(0), pcap))]
    for j in range(1, n + 1):
        xj = x(j, sc, pcap)
        diff = fgl.formal_diff(uu, xj)
        inv = MultiLaurent.from_series(ctx, diff, {uvid: 1}).invert()
        if kind in ("Q", "GQ"):
            num = fgl.formal_sum(uu, xj)
            factors.append(MultiLaurent.from_series(ctx, num, {uvid: 1}))
        factors.append(inv)
    bs = BSequence(0, b_limit)
    for j in range(1, k + 1):
        s = fgl.formal_sum(uu, bs.value(j, sc, pcap))
        factors.append(MultiLaurent.from_series(ctx, s, {uvid: 1}))
    prod = factors[0]
    for f in factors[1:]:
        prod = prod * f
    # series index m sits at u-exponent -m
    return {-e[0]: s for e, s in prod.terms.items()}


def _coeff(table, idx, cap, pcap):
    got = table.get(idx)
    if got is None:
        return TruncSeries.zero(cap, pcap)
    return got


# ---------------------------------------------------------------------------
# Determinantal formulas
# ---------------------------------------------------------------------------


def jacobi_trudi_schur(lam, n, factorial=True, cap=None, pcap=None):
    """det( h^{(lam_i - i + n)}_{lam_i - i + j} ) over the additive law;
    with ``factorial=False`` the entries are the plain complete
    homogeneous polynomials h_{lam_i - i + j}(x_n)."""
    lam = Partition(lam)
    if lam.length > n:
        raise ValueError("partition longer than variable count")
    r = lam.length
    if cap is None:
        cap = lam.weight + n
    if pcap is None:
        pcap = cap
    if r == 0:
        return TruncSeries.const(1, cap, pcap)
    tables = {}
    rows = []
    for i in range(1, r + 1):
        k = lam[i - 1] - i + n if factorial else 0
        if k not in tables:
            tables[k] = one_row_series("h", k, n, factorial, None, cap, pcap)
        row = []
        for j in range(1, r + 1):
            idx = lam[i - 1] - i + j
            row.append(_coeff(tables[k], idx, cap, pcap)
                       if idx >= 0 else TruncSeries.zero(cap, pcap))
        rows.append(row)
    return det(rows).truncated(cap, pcap)


def _binom_int(a, k):
    """Generalized binomial coefficient for integer a, k >= 0."""
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(a - i, i + 1)
    return out


def grothendieck_det(lam, n, factorial=True, cap=None, pcap=None):
    """det( sum_k C(i-r, k) beta^k G^{(lam_i-i+n)}_{lam_i-i+j+k} ) over
    the multiplicative law."""
    lam = Partition(lam)
    if lam.length > n:
        raise ValueError("partition longer than variable count")
    r = lam.length
    if cap is None:
        cap = lam.weight + n
    if pcap is None:
        pcap = cap
    if r == 0:
        return TruncSeries.const(1, cap, pcap)
    tables = {}
    bvar = beta(cap, pcap)
    rows = []
    for i in range(1, r + 1):
        kk = lam[i - 1] - i + n if factorial else 0
        if kk not in tables:
            tables[kk] = one_row_series("G", kk, n, factorial, None, cap, pcap)
        table = tables[kk]
        row = []
        for j in range(1, r + 1):
            base = lam[i - 1] - i + j
            entry = TruncSeries.zero(cap, pcap)
            bpow = TruncSeries.const(1, cap, pcap)
            for k in range(0, cap - max(base, 0) + 1):
                c = _binom_int(i - r, k)
                if c:
                    entry = entry + _coeff(table, base + k, cap, pcap) \
                        * bpow.scaled(c)
                bpow = bpow * bvar
                if bpow.is_zero():
                    break
            row.append(entry)
        rows.append(row)
    return det(rows).truncated(cap, pcap)


# ---------------------------------------------------------------------------
# Pfaffian formulas
# ---------------------------------------------------------------------------


def _padded_strict(nu):
    nu = Partition(nu)
    if not nu.is_strict():
        raise SeriesError("Pfaffian closed forms need a strict partition")
    parts = list(nu.parts)
    if len(parts) % 2:
        parts.append(0)
    return nu, parts


def q_pfaffian(nu, n, factorial=True, cap=None, pcap=None):
    """Pf( Q_{(nu_i, nu_j)} ) over the additive law.  Odd lengths are
    padded with a zero part; the padded entries reduce to one-row
    values automatically."""
    nu, parts = _padded_strict(nu)
    if cap is None:
        cap = nu.weight + n
    if pcap is None:
        pcap = cap
    fgl = FormalGroupLaw.additive()
    size = len(parts)
    rows = [[TruncSeries.zero(cap, pcap) for _ in range(size)]
            for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            entry = two_row_q((parts[i], parts[j]),
                              (parts[i] - 1, parts[j] - 1),
                              n, fgl, cap, pcap, factorial)
            rows[i][j] = entry
            rows[j][i] = -entry
    return pfaffian(rows, check=False).truncated(cap, pcap)


def gq_pfaffian(nu, n, factorial=True, cap=None, pcap=None):
    """Pf( sum_{k,l} C(i+1-2m, k) C(j-2m, l) beta^{k+l}
    GQ^{(nu_i, nu_j)}_{(nu_i+k, nu_j+l)} ) over the multiplicative law."""
    nu, parts = _padded_strict(nu)
    if cap is None:
        cap = nu.weight + n
    if pcap is None:
        pcap = cap
    fgl = FormalGroupLaw.multiplicative()
    size = len(parts)
    bvar = beta(cap, pcap)
    rows = [[TruncSeries.zero(cap, pcap) for _ in range(size)]
            for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            entry = TruncSeries.zero(cap, pcap)
            bpow_k = TruncSeries.const(1, cap, pcap)
            for k in range(0, cap - parts[i] + 1):
                ck = _binom_int(i + 1 + 1 - size, k)  # row index is i+1
                if ck:
                    bpow_l = bpow_k
                    for l in range(0, cap - parts[j] + 1):
                        cl = _binom_int(j + 1 - size, l)
                        if cl and not bpow_l.is_zero():
                            block = two_row_q(
                                (parts[i] + k, parts[j] + l),
                                (parts[i] - 1, parts[j] - 1),
                                n, fgl, cap, pcap, factorial)
                            entry = entry + block * bpow_l.scaled(ck * cl)
                        bpow_l = bpow_l * bvar
                bpow_k = bpow_k * bvar
                if bpow_k.is_zero():
                    break
            rows[i][j] = entry
            rows[j][i] = -entry
    return pfaffian(rows, check=False).truncated(cap, pcap)
