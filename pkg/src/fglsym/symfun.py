"""The symmetrizer route.

Every function family here is a coset sum

    sum over w in S_n / (S_1)^r x S_{n-r} of
        w . [ N(x_1..x_n) / prod_{1<=i<=r} prod_{i<j<=n} (x_i -_F x_j) ]

for a family-specific numerator N.  Each formal difference factors as
(x_i - x_j) times a unit series, so the whole sum is brought over the
single common denominator prod_{1<=i<j<=n}(x_i - x_j) and divided out
exactly once at the end.  Divisibility is guaranteed; a failure
indicates an internal bug.

Families:

    s_kl   N = prod_i [x_i|b]^{lam_i - i + n}
    s_uf   full S_n sum, N = prod_i [x_i|b]^{lam_i + n - i}
    p      N = [x|b]^nu  * prod_{i<=r, i<j<=n} (x_i +_F x_j)
    q      N = [[x|b]]^nu * same product
    hp     N = [x|b]^lam  * prod_{i<=r, i<j<=n} (x_i +_F [t](xbar_j))
    hq     N = [[x;t|b]]^lam * same product

where [x|b]^k = prod_{j<=k} (x +_F b_j), [[x|b]]^k = (x +_F x)[x|b]^{k-1}
and [[x;t|b]]^k = (x +_F [t](xbar)) [x|b]^{k-1}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .fgl import FormalGroupLaw
from .partitions import Partition
from .series import (
    B, SeriesError, T as _T_VID, TruncSeries, x,
)

__all__ = [
    "FAMILIES", "FamilySpec",
    "StrictnessError", "RankError", "ShapeError", "ZeroExponent",
    "b_param", "factorial_power", "double_power", "hl_power",
    "hl_fact_power", "gysin_symmetrize", "eval_family", "kl_class",
    "default_cap", "default_pcap",
]

FAMILIES = ("s_kl", "s_uf", "p", "q", "hp", "hq")


class StrictnessError(SeriesError):
    pass


class RankError(SeriesError):
    pass


class ShapeError(SeriesError):
    pass


class ZeroExponent(SeriesError):
    pass


def default_cap(lam, n):
    """Default truncation: output degree plus headroom for unit factors."""
    return Partition(lam).weight + n


def default_pcap(lam, cap):
    """Parameter-degree bound implied by homogeneity: every surviving
    term of a weight-w result of graded degree |lam| carries parameter
    degree w - |lam| <= cap - |lam|."""
    return max(cap - Partition(lam).weight, 0)


@dataclass
class FamilySpec:
    """One function instance: family name, partition, variable count,
    deformation switches, group law, truncation."""

    family: str
    lam: Partition
    n: int
    fgl: FormalGroupLaw
    factorial: bool = False
    t_on: bool = False
    cap: int | None = None
    pcap: int | None = None
    b_shift: int = 0
    b_limit: int | None = None

    def __post_init__(self):
        self.lam = Partition(self.lam)
        if self.family not in FAMILIES:
            raise ValueError("unknown family %r" % (self.family,))
        if self.lam.length > self.n:
            raise ValueError("partition longer than variable count")
        if self.family in ("p", "q") and not self.lam.is_strict():
            raise StrictnessError(
                "family %s requires a strict partition" % self.family)
        if self.family in ("hp", "hq"):
            if not self.t_on:
                raise ValueError("families hp/hq carry the parameter t; "
                                 "set t_on=True")
        elif self.t_on:
            raise ValueError("family %s does not use t" % self.family)
        if self.cap is None:
            self.cap = default_cap(self.lam, self.n)
        if self.pcap is None:
            self.pcap = default_pcap(self.lam, self.cap)


def b_param(j, b_shift=0, b_limit=None, cap=None, pcap=None):
    """The deformation parameter b_j after shifting: index j reads
    b_{j - shift}, with b_k = 0 for k < 1 or beyond the limit."""
    k = j - b_shift
    if k < 1 or (b_limit is not None and k > b_limit):
        return TruncSeries.zero(cap, pcap)
    return TruncSeries.variable(B(k), cap, pcap)


def factorial_power(i, k, fgl, factorial=True, b_shift=0, b_limit=None,
                    cap=None, pcap=None):
    """[x_i|b]^k = prod_{j=1..k} (x_i +_F b_j); plain power x_i^k when
    the deformation is off.  [x_i|b]^0 = 1."""
    if k < 0:
        raise ValueError("negative power")
    xi = x(i, cap, pcap)
    if not factorial:
        return xi ** k
    out = TruncSeries.const(1, cap, pcap)
    for j in range(1, k + 1):
        out = out * fgl.formal_sum(xi, b_param(j, b_shift, b_limit, cap, pcap))
    return out


def double_power(i, k, fgl, factorial=True, b_shift=0, b_limit=None,
                 cap=None, pcap=None):
    """[[x_i|b]]^k = (x_i +_F x_i) [x_i|b]^{k-1}, the deformation of 2x^k."""
    if k < 1:
        raise ZeroExponent("doubled power needs k >= 1")
    xi = x(i, cap, pcap)
    head = fgl.formal_sum(xi, xi)
    return head * factorial_power(i, k - 1, fgl, factorial, b_shift, b_limit,
                                  cap, pcap)


def hl_power(i, k, fgl, cap=None, pcap=None):
    """[x_i; t]^k = (x_i +_F [t](xbar_i)) x_i^{k-1}."""
    if k < 1:
        raise ZeroExponent("interpolated power needs k >= 1")
    xi = x(i, cap, pcap)
    head = fgl.formal_sum(xi, fgl.t_series(fgl.formal_inverse(xi),
                                           TruncSeries.variable(
                                               _T_VID, cap, pcap)))
    return head * xi ** (k - 1)


def hl_fact_power(i, k, fgl, b_shift=0, b_limit=None, cap=None, pcap=None):
    """[[x_i; t|b]]^k = (x_i +_F [t](xbar_i)) [x_i|b]^{k-1}."""
    if k < 1:
        raise ZeroExponent("interpolated power needs k >= 1")
    xi = x(i, cap, pcap)
    head = fgl.formal_sum(xi, fgl.t_series(fgl.formal_inverse(xi),
                                           TruncSeries.variable(
                                               _T_VID, cap, pcap)))
    return head * factorial_power(i, k - 1, fgl, True, b_shift, b_limit,
                                  cap, pcap)


_UNIT_INV_CACHE = {}


def _difference_unit_inverses(n, fgl, cap, pcap):
    """Inverse unit factors: (x_a -_F x_b) = (x_a - x_b) * unit; returns
    unit^{-1} for every ordered pair a != b.  Cached per law and bounds."""
    key = (fgl, n, cap, pcap)
    got = _UNIT_INV_CACHE.get(key)
    if got is not None:
        return got
    inv = {}
    for a in range(1, n + 1):
        xa = x(a, cap, pcap)
        for bb in range(1, n + 1):
            if a == bb:
                continue
            diff = fgl.formal_diff(xa, x(bb, cap, pcap))
            unit = diff.exact_divide(xa - x(bb, cap, pcap))
            inv[(a, bb)] = unit.truncated(cap, pcap).invert_unit()
    _UNIT_INV_CACHE[key] = inv
    return inv


def _coset_reps(n, r):
    """Value tuples (i_1..i_r, tail ascending) for S_n/(S_1)^r x S_{n-r}."""
    values = range(1, n + 1)
    for head in itertools.permutations(values, r):
        tail = tuple(v for v in values if v not in head)
        yield head + tail


def _vandermonde(indices, cap, pcap):
    out = TruncSeries.const(1, cap, pcap)
    idx = list(indices)
    for a in range(len(idx)):
        for bb in range(a + 1, len(idx)):
            out = out * (x(idx[a], cap, pcap) - x(idx[bb], cap, pcap))
    return out


def gysin_symmetrize(numerator, n, r, fgl, full_group=False):
    """Coset symmetrization with denominators (x_i -_F x_j) for
    1 <= i <= r < ... as in the family definitions.

    The result is computed at cap ``numerator.cap - n(n-1)/2``; callers
    build the numerator with that much headroom.  With ``full_group``
    the sum ranges over all of S_n and is *not* divided by (n-r)!; the
    caller applies any normalization.
    """
    if r < 0 or r > n:
        raise RankError("rank r must satisfy 0 <= r <= n")
    cap = numerator.cap
    pcap = numerator.pcap
    if r == 0 and not full_group:
        return numerator
    inv_units = _difference_unit_inverses(n, fgl, cap, pcap)

    vand_degree = n * (n - 1) // 2
    total = TruncSeries.zero(cap, pcap)
    if full_group:
        reps = itertools.permutations(range(1, n + 1))
    else:
        reps = _coset_reps(n, r)
    for w in reps:
        term = numerator.act_permutation(w)
        sign = 1
        pair_values = []
        for k in range(r):
            for l in range(k + 1, n):
                a, bb = w[k], w[l]
                pair_values.append((a, bb))
                if a > bb:
                    sign = -sign
        for a, bb in pair_values:
            term = term * inv_units[(a, bb)]
        # complete the denominator to the full Vandermonde
        comp = TruncSeries.const(1, cap, pcap)
        covered = {tuple(sorted(p)) for p in pair_values}
        for a in range(1, n + 1):
            for bb in range(a + 1, n + 1):
                if (a, bb) not in covered:
                    comp = comp * (x(a, cap, pcap) - x(bb, cap, pcap))
        term = term * comp
        if sign < 0:
            term = -term
        total = total + term
    quotient = total.exact_divide(_vandermonde(range(1, n + 1), cap, pcap))
    return quotient


def _family_numerator(spec, cap, pcap):
    fgl = spec.fgl
    lam = spec.lam
    n = spec.n
    r = lam.length
    fact = spec.factorial
    shift, limit = spec.b_shift, spec.b_limit
    fam = spec.family

    if fam == "s_kl":
        out = TruncSeries.const(1, cap, pcap)
        for i in range(1, r + 1):
            out = out * factorial_power(i, lam[i - 1] - i + n, fgl, fact,
                                        shift, limit, cap, pcap)
        return out, r
    if fam == "s_uf":
        out = TruncSeries.const(1, cap, pcap)
        for i in range(1, n + 1):
            out = out * factorial_power(i, lam.part(i) + n - i, fgl, fact,
                                        shift, limit, cap, pcap)
        return out, n

    if fam in ("p", "q"):
        out = TruncSeries.const(1, cap, pcap)
        for i in range(1, r + 1):
            if fam == "p":
                out = out * factorial_power(i, lam[i - 1], fgl, fact,
                                            shift, limit, cap, pcap)
            else:
                out = out * double_power(i, lam[i - 1], fgl, fact,
                                         shift, limit, cap, pcap)
        for i in range(1, r + 1):
            for j in range(i + 1, n + 1):
                out = out * fgl.formal_sum(x(i, cap, pcap), x(j, cap, pcap))
        return out, r

    # hp / hq
    tvar = TruncSeries.variable(_T_VID, cap, pcap)
    out = TruncSeries.const(1, cap, pcap)
    for i in range(1, r + 1):
        k = lam[i - 1]
        if fam == "hp":
            out = out * factorial_power(i, k, fgl, fact, shift, limit,
                                        cap, pcap)
        else:
            xi = x(i, cap, pcap)
            head = fgl.formal_sum(
                xi, fgl.t_series(fgl.formal_inverse(xi), tvar))
            out = out * head * factorial_power(i, k - 1, fgl, fact, shift,
                                               limit, cap, pcap)
    for i in range(1, r + 1):
        for j in range(i + 1, n + 1):
            xj = x(j, cap, pcap)
            out = out * fgl.formal_sum(
                x(i, cap, pcap),
                fgl.t_series(fgl.formal_inverse(xj), tvar))
    return out, r


def eval_family(spec, full_group=False):
    """Evaluate one family instance by the symmetrizer route.

    ``full_group=True`` uses the equivalent sum over all of S_n divided
    by (n-r)!; available for p/q as a cross-check of the two stated
    presentations.
    """
    if isinstance(spec, dict):
        spec = FamilySpec(**spec)
    cap = spec.cap
    pcap = spec.pcap
    n = spec.n
    work_cap = cap + n * (n - 1) // 2
    numerator, r = _family_numerator(spec, work_cap, pcap)
    out = gysin_symmetrize(numerator, n, r, spec.fgl, full_group=full_group)
    if full_group:
        out = out.scaled(Fraction(1, factorial(n - r)))
    return out.truncated(cap, pcap)


def kl_class(lam, d, n, fgl, cap=None, pcap=None):
    """Resolution class for a subvariety shape lam inside the d-plane
    Grassmannian of an n-dimensional space: the s_kl family on d
    variables with deformation parameters cut off at b_n."""
    lam = Partition(lam)
    if not Partition.rectangle(n - d, d).contains(lam):
        raise ShapeError("shape %s does not fit in a %dx%d rectangle"
                         % (lam, d, n - d))
    spec = FamilySpec("s_kl", lam, d, fgl, factorial=True, cap=cap,
                      pcap=pcap, b_limit=n)
    return eval_family(spec)
