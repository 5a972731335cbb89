"""Formal group law engine.

A formal group law is presented through the coefficients of its
logarithm: l(z) = z + sum_{n>=1} c_n z^{n+1} where every c_n has
geometric weight zero.  The four supported presentations are

    additive        c_n = 0,            F(u,v) = u + v
    multiplicative  c_n = (-beta)^n/(n+1),  F(u,v) = u + v + beta*u*v
    universal       c_n = m_n (free variables)
    custom          c_n supplied by the caller

The exponential (compositional inverse of the logarithm) is solved
order by order, so every operation is exact at any finite cap.  All
values are TruncSeries transformers: arguments must be nilpotent
modulo the cap, i.e. have vanishing weight-0 part.
"""

from __future__ import annotations

from fractions import Fraction

from .series import (
    BETA, K_M, M, U, SeriesError, TruncSeries, mono_from_pairs, mono_pairs,
    mono_weight, vid_index, vid_kind,
)

__all__ = [
    "FormalGroupLaw", "NonNilpotentArgument", "NonScalarMultiplier",
    "fgl_specialize",
]


class NonNilpotentArgument(SeriesError):
    pass


class NonScalarMultiplier(SeriesError):
    pass


def _check_nilpotent(a):
    if a.weight_zero_part():
        raise NonNilpotentArgument("argument has a nonzero weight-0 part")
    if a.cap is None and a.terms:
        raise NonNilpotentArgument("argument needs a finite cap")


def _as_scalar(s):
    if not isinstance(s, TruncSeries):
        return TruncSeries.const(s)
    for mono in s.terms:
        if mono_weight(mono) != 0:
            raise NonScalarMultiplier("multiplier must have geometric weight 0")
    return s


class FormalGroupLaw:
    """One formal group law plus memoized structure series."""

    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"
    UNIVERSAL = "universal"
    CUSTOM = "custom"

    def __init__(self, kind, log_coeffs=None):
        if kind not in (self.ADDITIVE, self.MULTIPLICATIVE,
                        self.UNIVERSAL, self.CUSTOM):
            raise ValueError("unknown formal group law kind %r" % (kind,))
        if kind == self.CUSTOM:
            if log_coeffs is None:
                raise ValueError("custom law needs log coefficients")
            log_coeffs = [c if isinstance(c, TruncSeries)
                          else TruncSeries.const(c) for c in log_coeffs]
            for c in log_coeffs:
                if any(mono_weight(mono) != 0 for mono in c.terms):
                    raise ValueError("log coefficients must have weight 0")
        self.kind = kind
        self._custom = log_coeffs
        self._exp_coeffs = [TruncSeries.zero(), TruncSeries.const(1)]

    # -- presentation --------------------------------------------------------

    @classmethod
    def additive(cls):
        return cls(cls.ADDITIVE)

    @classmethod
    def multiplicative(cls):
        return cls(cls.MULTIPLICATIVE)

    @classmethod
    def universal(cls):
        return cls(cls.UNIVERSAL)

    @classmethod
    def custom(cls, log_coeffs):
        return cls(cls.CUSTOM, log_coeffs)

    def log_coeff(self, n):
        """Coefficient of z^{n+1} in the logarithm, n >= 1."""
        if n < 1:
            raise ValueError("log coefficients are indexed from 1")
        if self.kind == self.ADDITIVE:
            return TruncSeries.zero()
        if self.kind == self.MULTIPLICATIVE:
            c = Fraction((-1) ** n, n + 1)
            return TruncSeries.monomial(((BETA, n),), c)
        if self.kind == self.UNIVERSAL:
            return TruncSeries.variable(M(n))
        if n <= len(self._custom):
            return self._custom[n - 1]
        return TruncSeries.zero()

    def __repr__(self):
        return "FormalGroupLaw(%s)" % self.kind

    # -- logarithm / exponential ---------------------------------------------

    def log_apply(self, a):
        """l(a) = a + sum c_n a^{n+1}, truncated at a's cap."""
        _check_nilpotent(a)
        if self.kind == self.ADDITIVE or a.is_zero():
            return a
        cap = a.cap
        out = a
        power = a
        for n in range(1, cap):
            power = power * a
            if power.is_zero():
                break
            c = self.log_coeff(n)
            if not c.is_zero():
                out = out + power * c
        return out

    def _exp_coeff_list(self, k_max):
        """Coefficients of the exponential series, solved from
        l(exp(z)) = z order by order."""
        coeffs = self._exp_coeffs
        if self.kind == self.ADDITIVE:
            while len(coeffs) <= k_max:
                coeffs.append(TruncSeries.zero())
            return coeffs
        while len(coeffs) <= k_max:
            k = len(coeffs)
            # coefficient of z^k in sum_n c_n * E(z)^{n+1}, using only
            # e_1..e_{k-1}; then e_k is its negative.
            total = TruncSeries.zero()
            epow = list(coeffs) + [TruncSeries.zero()]  # degree <= k
            # running powers of E truncated at degree k
            cur = epow  # E^1
            for n in range(1, k):
                cur = _poly_mul_trunc(cur, epow, k)
                c = self.log_coeff(n)
                if not c.is_zero() and len(cur) > k:
                    total = total + cur[k] * c
            coeffs.append(-total)
        return coeffs

    def exp_apply(self, a):
        """exp(a) where exp is the compositional inverse of the logarithm."""
        _check_nilpotent(a)
        if self.kind == self.ADDITIVE or a.is_zero():
            return a
        cap = a.cap
        coeffs = self._exp_coeff_list(cap)
        out = a
        power = a
        for k in range(2, cap + 1):
            power = power * a
            if power.is_zero():
                break
            if not coeffs[k].is_zero():
                out = out + power * coeffs[k]
        return out

    # -- the group operations --------------------------------------------------

    def formal_sum(self, a, b):
        """F(a, b), the formal sum."""
        if not isinstance(a, TruncSeries):
            a = TruncSeries.const(a)
        if not isinstance(b, TruncSeries):
            b = TruncSeries.const(b)
        _check_nilpotent(a)
        _check_nilpotent(b)
        if self.kind == self.ADDITIVE:
            return a + b
        if self.kind == self.MULTIPLICATIVE:
            return a + b + TruncSeries.variable(BETA) * a * b
        return self.exp_apply(self.log_apply(a) + self.log_apply(b))

    def formal_inverse(self, a):
        """chi(a), the formal inverse: F(a, chi(a)) = 0."""
        if not isinstance(a, TruncSeries):
            a = TruncSeries.const(a)
        _check_nilpotent(a)
        if self.kind == self.ADDITIVE:
            return -a
        if self.kind == self.MULTIPLICATIVE:
            if a.is_zero():
                return a
            one_plus = TruncSeries.const(1, a.cap, a.pcap) \
                + TruncSeries.variable(BETA) * a
            return -a * one_plus.invert_unit()
        return self.exp_apply(-self.log_apply(a))

    def formal_diff(self, a, b):
        """a -_F b = F(a, chi(b))."""
        return self.formal_sum(a, self.formal_inverse(b))

    def t_series(self, a, scalar):
        """[s](a) = exp(s * log(a)) for a weight-0 multiplier s.

        Integer multipliers give the integer multiples of the group
        law; the variable t gives the interpolated series.
        """
        if not isinstance(a, TruncSeries):
            a = TruncSeries.const(a)
        _check_nilpotent(a)
        scalar = _as_scalar(scalar)
        if self.kind == self.ADDITIVE:
            return a * scalar
        if a.is_zero():
            return a
        if self.kind == self.MULTIPLICATIVE:
            # ((1 + beta*a)^s - 1)/beta as a binomial series.
            cap = a.cap
            bvar = TruncSeries.variable(BETA)
            out = TruncSeries.zero(a.cap, a.pcap)
            binom = TruncSeries.const(1)  # C(s, k)
            apow = TruncSeries.const(1, a.cap, a.pcap)
            bpow = TruncSeries.const(1)
            for k in range(1, cap + 1):
                binom = binom * (scalar - (k - 1)) * Fraction(1, k)
                apow = apow * a
                if apow.is_zero():
                    break
                out = out + apow * bpow * binom
                bpow = bpow * bvar
            return out
        return self.exp_apply(self.log_apply(a) * scalar)

    def n_series(self, a, n):
        """Integer multiple computed by iterated formal sums; the
        reference implementation for t_series at integer multipliers."""
        if n == 0:
            return TruncSeries.zero(a.cap, a.pcap)
        base = a if n > 0 else self.formal_inverse(a)
        out = base
        for _ in range(abs(n) - 1):
            out = self.formal_sum(out, base)
        return out

    def log_derivative(self, vid, cap, pcap=None):
        """l'(z) = 1 + sum (n+1) c_n z^n in the given variable."""
        z = TruncSeries.variable(vid, cap, pcap)
        out = TruncSeries.const(1, cap, pcap)
        zpow = TruncSeries.const(1, cap, pcap)
        for n in range(1, cap + 1):
            zpow = zpow * z
            c = self.log_coeff(n)
            if not c.is_zero():
                out = out + zpow * c * (n + 1)
        return out

    def p_series(self, vid, cap, pcap=None):
        """The series P(z) = dF/dv(z, 0) = 1/l'(z) in the variable vid.

        Its inverse is the generating series of the one-variable
        logarithm data: 1/P(z) = l'(z).
        """
        return self.log_derivative(vid, cap, pcap).invert_unit()

    def a_coeff(self, i, j, pcap=None):
        """Structure constant a_{i,j}: coefficient of u^i v^j in F(u, v),
        exposed as a polynomial in the logarithm coefficients."""
        cap = i + j
        uu = TruncSeries.variable(U(1), cap, pcap)
        vv = TruncSeries.variable(U(2), cap, pcap)
        f = self.formal_sum(uu, vv)
        target = tuple(p for p in ((U(1), i), (U(2), j)) if p[1])
        out = {}
        for mono2, c in f.terms.items():
            geom = []
            rest = []
            for vid, e in mono_pairs(mono2):
                (geom if vid_kind(vid) <= 2 else rest).append((vid, e))
            if tuple(geom) == target:
                key = mono_from_pairs(rest)
                out[key] = out.get(key, 0) + c
        return TruncSeries(out)


def _poly_mul_trunc(a, bcf, k_max):
    """Product of two dense coefficient lists, truncated at degree k_max."""
    out = [TruncSeries.zero() for _ in range(min(len(a) + len(bcf) - 1,
                                                 k_max + 1))]
    for i, ai in enumerate(a):
        if ai.is_zero() or i > k_max:
            continue
        for j, bj in enumerate(bcf):
            if i + j > k_max:
                break
            if bj.is_zero():
                continue
            out[i + j] = out[i + j] + ai * bj
    return out


def fgl_specialize(value, target):
    """Push a value computed over the universal law to the additive or
    multiplicative one by substituting every logarithm variable m_n."""
    if isinstance(target, FormalGroupLaw):
        kind = target.kind
    else:
        kind = target
    if kind not in (FormalGroupLaw.ADDITIVE, FormalGroupLaw.MULTIPLICATIVE):
        raise ValueError("specialization target must be additive or "
                         "multiplicative")
    assignment = {}
    for vid in value.variables():
        if vid_kind(vid) == K_M:
            n = vid_index(vid)
            if kind == FormalGroupLaw.ADDITIVE:
                assignment[vid] = TruncSeries.zero()
            else:
                c = Fraction((-1) ** n, n + 1)
                assignment[vid] = TruncSeries.monomial(((BETA, n),), c)
    if not assignment:
        return value
    return value.substitute(assignment)
