"""Sparse exact multivariate polynomials and truncated power series.

Variables come in six kinds:

    x<i>   geometric generators          (kind X, index i >= 1)
    b<i>   deformation parameters        (kind B, index i >= 1)
    u<i>   extraction variables          (kind U, index i >= 1)
    t      interpolation parameter       (kind T, no index)
    beta   multiplicative-law unit       (kind BETA, no index)
    m<i>   logarithm coefficients        (kind M, index i >= 1)

A monomial is a finite map VarId -> positive exponent; the empty map is
the unit monomial.  Internally a monomial is packed into one integer
(16-bit exponent fields in dynamically assigned slots) so that the
product of monomials is integer addition; the packing never influences
observable behaviour, since the canonical order is always computed from
the decoded (variable, exponent) pairs under the fixed variable order
(kind, then index).  Coefficients are exact rationals; no floating
point is used anywhere.

Truncation is by *geometric weight*: the total exponent of x, b, u
variables only.  Exponents of t, beta and m are never limited by the
cap.  A second, optional filtration bounds the *parameter degree*
``sum(i * deg(m_i)) + deg(beta)``; it is multiplicative, so discarding
above it is sound whenever the homogeneity of the target bounds the
parameter degree of every surviving term.

The canonical term order is graded lexicographic: first by geometric
weight, then by exponent-lexicographic comparison with the variable
order (kind, index).
"""

from __future__ import annotations

import heapq
from fractions import Fraction

try:
    from gmpy2 import mpq as _QQ
except ImportError:  # pragma: no cover
    _QQ = Fraction

__all__ = [
    "K_X", "K_B", "K_U", "K_T", "K_BETA", "K_M",
    "X", "B", "U", "T", "BETA", "M",
    "VAR_NAMES",
    "vid_kind", "vid_index", "var_name", "parse_var_name",
    "mono_weight", "mono_pdeg", "mono_mul", "mono_divides", "mono_div",
    "mono_pairs", "mono_from_pairs", "mono_sort_key",
    "SeriesError", "NotAUnit", "NotDivisible", "InfiniteCap",
    "IndexOutOfRange",
    "TruncSeries", "to_json_obj", "from_json_obj",
    "x", "b", "u", "t", "beta", "m",
    "min_cap",
]

# Variable kinds, in canonical order.
K_X, K_B, K_U, K_T, K_BETA, K_M = range(6)

_KIND_SHIFT = 24
_IDX_MASK = (1 << _KIND_SHIFT) - 1
_GEOM_LIMIT = 3 << _KIND_SHIFT  # vids below this are x/b/u


def _vid(kind, index):
    return (kind << _KIND_SHIFT) | index


def X(i):
    if i < 1:
        raise ValueError("x index must be >= 1")
    return _vid(K_X, i)


def B(i):
    if i < 1:
        raise ValueError("b index must be >= 1")
    return _vid(K_B, i)


def U(i):
    if i < 1:
        raise ValueError("u index must be >= 1")
    return _vid(K_U, i)


T = _vid(K_T, 0)
BETA = _vid(K_BETA, 0)


def M(i):
    if i < 1:
        raise ValueError("m index must be >= 1")
    return _vid(K_M, i)


VAR_NAMES = {K_X: "x", K_B: "b", K_U: "u", K_T: "t", K_BETA: "beta", K_M: "m"}
_NAME_KINDS = {"x": K_X, "b": K_B, "u": K_U, "t": K_T, "beta": K_BETA,
               "m": K_M}


def vid_kind(vid):
    return vid >> _KIND_SHIFT


def vid_index(vid):
    return vid & _IDX_MASK


def var_name(vid):
    kind = vid >> _KIND_SHIFT
    base = VAR_NAMES[kind]
    if kind in (K_T, K_BETA):
        return base
    return "%s%d" % (base, vid & _IDX_MASK)


def parse_var_name(name):
    if name == "t":
        return T
    if name == "beta":
        return BETA
    head = name.rstrip("0123456789")
    kind = _NAME_KINDS.get(head)
    if kind is None or head == name:
        raise ValueError("unknown variable name %r" % (name,))
    return _vid(kind, int(name[len(head):]))


# ---------------------------------------------------------------------------
# Packed monomials
# ---------------------------------------------------------------------------

_FIELD_BITS = 16
_FIELD_MASK = (1 << _FIELD_BITS) - 1

_VAR_SLOT = {}
_SLOT_VID = []
_SLOT_WPD = []  # (counts toward weight, pdeg multiplier)

_UNIT = 0


def _slot(vid):
    s = _VAR_SLOT.get(vid)
    if s is None:
        s = len(_SLOT_VID)
        _VAR_SLOT[vid] = s
        _SLOT_VID.append(vid)
        kind = vid >> _KIND_SHIFT
        pd = (vid & _IDX_MASK) if kind == K_M else (1 if kind == K_BETA
                                                    else 0)
        _SLOT_WPD.append((1 if vid < _GEOM_LIMIT else 0, pd))
    return s


def mono_from_pairs(pairs):
    """Pack (vid, exponent) pairs into a monomial."""
    out = 0
    for vid, e in pairs:
        if e < 0:
            raise ValueError("negative exponent")
        if e:
            out += e << (_slot(vid) * _FIELD_BITS)
    return out


_DECODE_CACHE = {_UNIT: ()}


def mono_pairs(mono):
    """Decode a monomial to its (vid, exponent) pairs sorted by vid."""
    got = _DECODE_CACHE.get(mono)
    if got is None:
        pairs = []
        m, s = mono, 0
        while m:
            e = m & _FIELD_MASK
            if e:
                pairs.append((_SLOT_VID[s], e))
            m >>= _FIELD_BITS
            s += 1
        pairs.sort()
        got = tuple(pairs)
        _DECODE_CACHE[mono] = got
    return got


_WP_CACHE = {_UNIT: (0, 0)}


def _wp(mono):
    """Cached (geometric weight, parameter degree) of a monomial."""
    got = _WP_CACHE.get(mono)
    if got is None:
        w = p = 0
        m, s = mono, 0
        while m:
            e = m & _FIELD_MASK
            if e:
                gw, pd = _SLOT_WPD[s]
                w += gw * e
                p += pd * e
            m >>= _FIELD_BITS
            s += 1
        got = (w, p)
        _WP_CACHE[mono] = got
    return got


def mono_weight(mono):
    """Geometric weight: total exponent over x/b/u variables."""
    return _wp(mono)[0]


def mono_pdeg(mono):
    """Parameter degree: sum(i * deg(m_i)) + deg(beta)."""
    return _wp(mono)[1]


def mono_mul(m1, m2):
    return m1 + m2


def mono_divides(d, m):
    """True when monomial d divides monomial m exponent-wise."""
    s = 0
    while d:
        if (d & _FIELD_MASK) > ((m >> (s * _FIELD_BITS)) & _FIELD_MASK):
            return False
        d >>= _FIELD_BITS
        s += 1
    return True


def mono_div(m, d):
    """Quotient monomial m / d; assumes divisibility."""
    return m - d


def _mono_lex_key(mono):
    # Exponent-lexicographic order with earlier variables dominant.
    # Smaller key = larger monomial; sentinel handles prefix monomials.
    key = []
    for vid, e in mono_pairs(mono):
        key.append(vid)
        key.append(-e)
    key.append(1 << 62)
    return tuple(key)


def mono_sort_key(mono):
    """Canonical (graded, then lex-descending) sort key."""
    return (_wp(mono)[0], _mono_lex_key(mono))


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------


class SeriesError(Exception):
    pass


class NotAUnit(SeriesError):
    pass


class NotDivisible(SeriesError):
    def __init__(self, msg, term=None):
        super().__init__(msg)
        self.term = term


class InfiniteCap(SeriesError):
    pass


class IndexOutOfRange(SeriesError):
    pass


def min_cap(c1, c2):
    """Minimum of two caps where None means infinity."""
    if c1 is None:
        return c2
    if c2 is None:
        return c1
    return c1 if c1 < c2 else c2


_ZERO = _QQ(0)
_ONE = _QQ(1)


class TruncSeries:
    """Immutable sparse series with exact rational coefficients.

    ``terms`` maps monomials to nonzero rationals.  ``cap`` bounds the
    geometric weight of stored monomials (None = pure polynomial mode,
    nothing truncated).  ``pcap`` optionally bounds the parameter
    degree the same way.  Instances are value objects: all arithmetic
    returns new series and never mutates.
    """

    __slots__ = ("terms", "cap", "pcap", "_prep")

    def __init__(self, terms=None, cap=None, pcap=None, _clean=False):
        if terms is None:
            terms = {}
        if not _clean:
            cleaned = {}
            for mono, c in terms.items():
                if not c:
                    continue
                w, p = _wp(mono)
                if cap is not None and w > cap:
                    continue
                if pcap is not None and p > pcap:
                    continue
                if not isinstance(c, _QQ):
                    c = _QQ(c)
                cleaned[mono] = c
            terms = cleaned
        self.terms = terms
        self.cap = cap
        self.pcap = pcap
        self._prep = None

    def _prepared(self):
        """Term list (weight, pdeg, mono, coeff) sorted by weight."""
        lst = self._prep
        if lst is None:
            lst = [_wp(mn) + (mn, c) for mn, c in self.terms.items()]
            lst.sort(key=lambda q: q[0])
            self._prep = lst
        return lst

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, cap=None, pcap=None):
        return cls({}, cap, pcap, _clean=True)

    @classmethod
    def const(cls, c, cap=None, pcap=None):
        c = _QQ(c)
        if not c:
            return cls.zero(cap, pcap)
        return cls({_UNIT: c}, cap, pcap, _clean=True)

    @classmethod
    def variable(cls, vid, cap=None, pcap=None):
        return cls({mono_from_pairs(((vid, 1),)): _ONE}, cap, pcap)

    @classmethod
    def monomial(cls, pairs, coeff=1, cap=None, pcap=None):
        """Series with a single term given by (vid, exponent) pairs."""
        return cls({mono_from_pairs(tuple(pairs)): _QQ(coeff)}, cap, pcap)

    # -- inspection --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def constant_term(self):
        return self.terms.get(_UNIT, _ZERO)

    def weight_zero_part(self):
        return {m: c for m, c in self.terms.items() if _wp(m)[0] == 0}

    def max_weight(self):
        return max((_wp(m)[0] for m in self.terms), default=0)

    def min_weight(self):
        return min((_wp(m)[0] for m in self.terms), default=0)

    def min_pdeg(self):
        return min((_wp(m)[1] for m in self.terms), default=0)

    def coefficient(self, mono):
        return self.terms.get(mono, _ZERO)

    def coefficient_of(self, pairs):
        return self.terms.get(mono_from_pairs(tuple(pairs)), _ZERO)

    def variables(self):
        vids = set()
        for mono in self.terms:
            for vid, _ in mono_pairs(mono):
                vids.add(vid)
        return vids

    def graded_degrees(self):
        """Set of graded degrees (weight - pdeg) present in the series."""
        return {w - p for w, p in map(_wp, self.terms)}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: mono_sort_key(kv[0]))

    # -- truncation --------------------------------------------------------

    def truncated(self, cap=None, pcap=None):
        cap = min_cap(self.cap, cap)
        pcap = min_cap(self.pcap, pcap)
        if cap == self.cap and pcap == self.pcap:
            return self
        return TruncSeries(dict(self.terms), cap, pcap)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other)
        cap = min_cap(self.cap, other.cap)
        pcap = min_cap(self.pcap, other.pcap)
        small, big = self.terms, other.terms
        if len(small) > len(big):
            small, big = big, small
        out = dict(big)
        for mono, c in small.items():
            v = out.get(mono)
            if v is None:
                out[mono] = c
            else:
                v = v + c
                if v:
                    out[mono] = v
                else:
                    del out[mono]
        if cap is not None or pcap is not None:
            return TruncSeries(out, cap, pcap)
        return TruncSeries(out, cap, pcap, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries({m: -c for m, c in self.terms.items()},
                           self.cap, self.pcap, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return TruncSeries.const(other) + (-self)

    def scaled(self, c):
        c = _QQ(c)
        if not c:
            return TruncSeries.zero(self.cap, self.pcap)
        return TruncSeries({m: cc * c for m, cc in self.terms.items()},
                           self.cap, self.pcap, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scaled(other)
        cap = min_cap(self.cap, other.cap)
        pcap = min_cap(self.pcap, other.pcap)
        if not self.terms or not other.terms:
            return TruncSeries.zero(cap, pcap)
        out = {}
        _mul_into(out, self._prepared(), other._prepared(), cap, pcap)
        return TruncSeries(out, cap, pcap, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = TruncSeries.const(1, self.cap, self.pcap)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        """Equality of term maps at the common cap."""
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other)
        cap = min_cap(self.cap, other.cap)
        pcap = min_cap(self.pcap, other.pcap)
        return (self.truncated(cap, pcap).terms
                == other.truncated(cap, pcap).terms)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    # -- inversion and division --------------------------------------------

    def invert_unit(self):
        """Inverse of a series whose weight-0 part is a nonzero rational.

        Computed by the geometric-series recursion; requires a finite
        cap unless the series is a plain constant.
        """
        wz = self.weight_zero_part()
        c0 = wz.get(_UNIT, _ZERO)
        if not c0 or len(wz) != 1:
            raise NotAUnit("weight-0 part is not a nonzero rational")
        if len(self.terms) == 1:
            return TruncSeries.const(1 / c0, self.cap, self.pcap)
        if self.cap is None:
            raise InfiniteCap("cannot invert a non-constant series at cap=inf")
        inv_c0 = 1 / c0
        # N = 1 - self/c0 has positive weight; iterate acc = 1 + N*acc.
        neg_n = TruncSeries(
            {m: -c * inv_c0 for m, c in self.terms.items() if m != _UNIT},
            self.cap, self.pcap, _clean=True)
        one = TruncSeries.const(1, self.cap, self.pcap)
        acc = one
        min_w = min(_wp(m)[0] for m in neg_n.terms)
        for _ in range(self.cap // max(min_w, 1) + 1):
            nxt = one + neg_n * acc
            if nxt.terms == acc.terms:
                break
            acc = nxt
        return acc.scaled(inv_c0)

    def exact_divide(self, den):
        """Exact quotient self / den in the polynomial or capped ring.

        ``den`` must be a nonzero polynomial (its own cap is ignored;
        its terms are taken as given).  Raises NotDivisible with the
        first offending remainder term when no exact quotient exists.
        When self has a finite cap the quotient is returned at cap
        ``self.cap - d0`` where d0 is the lowest geometric weight
        appearing in den.
        """
        if not isinstance(den, TruncSeries):
            den = TruncSeries.const(den)
        if den.is_zero():
            raise ZeroDivisionError("division by the zero series")
        if self.is_zero():
            cap = None if self.cap is None \
                else max(self.cap - den.min_weight(), 0)
            return TruncSeries.zero(cap, self.pcap)

        by_w = {}
        for mono, c in den.terms.items():
            by_w.setdefault(_wp(mono)[0], {})[mono] = c
        d0 = min(by_w)
        den0 = by_w[d0]
        den_rest = [(w, part) for w, part in by_w.items() if w != d0]

        if self.cap is not None:
            q_max = self.cap - d0
            if q_max < 0:
                raise NotDivisible(
                    "numerator vanishes below denominator weight",
                    term=min(self.terms, key=mono_sort_key))
            cap_q = q_max
        else:
            q_max = self.max_weight() - den.max_weight()
            if q_max < 0:
                raise NotDivisible("degree of numerator below denominator",
                                   term=min(self.terms, key=mono_sort_key))
            cap_q = None

        rem = {}
        for mono, c in self.terms.items():
            if _wp(mono)[0] < d0:
                raise NotDivisible("term below denominator weight",
                                   term=(mono, c))
            rem[mono] = c
        pcap = self.pcap

        q_terms = {}
        for wq in range(0, q_max + 1):
            grade = {m: c for m, c in rem.items() if _wp(m)[0] == wq + d0}
            if not grade:
                continue
            qk = _homog_divide(grade, den0)
            for m in grade:
                del rem[m]
            for w_extra, part in den_rest:
                for qm, qc in qk.items():
                    for dm, dc in part.items():
                        mono = qm + dm
                        w, p = _wp(mono)
                        if self.cap is not None and w > self.cap:
                            continue
                        if pcap is not None and p > pcap:
                            continue
                        v = rem.get(mono, _ZERO) - qc * dc
                        if v:
                            rem[mono] = v
                        elif mono in rem:
                            del rem[mono]
            q_terms.update(qk)
        if cap_q is None and rem:
            bad = min(rem.items(), key=lambda kv: mono_sort_key(kv[0]))
            raise NotDivisible("nonzero remainder", term=bad)
        return TruncSeries(q_terms, cap_q, pcap, _clean=True)

    # -- substitution and symmetry -----------------------------------------

    def substitute(self, assignment):
        """Simultaneous substitution vid -> TruncSeries.

        Unassigned variables are left unchanged.  Assignment values are
        expected to respect the target cap.
        """
        assignment = {v: (s if isinstance(s, TruncSeries)
                          else TruncSeries.const(s))
                      for v, s in assignment.items()}
        out = TruncSeries.zero(self.cap, self.pcap)
        power_cache = {}

        def powered(vid, e):
            key = (vid, e)
            got = power_cache.get(key)
            if got is None:
                got = (assignment[vid].truncated(self.cap, self.pcap)) ** e
                power_cache[key] = got
            return got

        plain = {}
        for mono, c in self.terms.items():
            pairs = mono_pairs(mono)
            hit = [vid for vid, _ in pairs if vid in assignment]
            if not hit:
                v = plain.get(mono)
                plain[mono] = c if v is None else v + c
                continue
            keep = []
            piece = TruncSeries.const(c, self.cap, self.pcap)
            for vid, e in pairs:
                if vid in assignment:
                    piece = piece * powered(vid, e)
                else:
                    keep.append((vid, e))
            if keep:
                piece = piece * TruncSeries(
                    {mono_from_pairs(keep): _ONE}, self.cap, self.pcap)
            out = out + piece
        if plain:
            out = out + TruncSeries(plain, self.cap, self.pcap)
        return out

    def act_permutation(self, w):
        """Rename x_i -> x_{w(i)}; w is a permutation of {1..n} given as
        a sequence with w[i-1] = w(i)."""
        n = len(w)
        if sorted(w) != list(range(1, n + 1)):
            raise ValueError("not a permutation of 1..%d" % n)
        out = {}
        for mono, c in self.terms.items():
            pairs = []
            for vid, e in mono_pairs(mono):
                if vid >> _KIND_SHIFT == K_X:
                    idx = vid & _IDX_MASK
                    if idx > n:
                        raise IndexOutOfRange(
                            "x%d outside permutation domain of size %d"
                            % (idx, n))
                    vid = X(w[idx - 1])
                pairs.append((vid, e))
            out[mono_from_pairs(pairs)] = c
        return TruncSeries(out, self.cap, self.pcap, _clean=True)

    # -- display -----------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            bits = []
            for mono, c in self.sorted_terms():
                factors = []
                for vid, e in mono_pairs(mono):
                    nm = var_name(vid)
                    factors.append(nm if e == 1 else "%s^%d" % (nm, e))
                word = "*".join(factors)
                if not word:
                    bits.append(str(c))
                elif c == 1:
                    bits.append(word)
                elif c == -1:
                    bits.append("-" + word)
                else:
                    bits.append("%s*%s" % (c, word))
            body = " + ".join(bits).replace("+ -", "- ")
        capstr = "inf" if self.cap is None else str(self.cap)
        return "<%s | cap %s>" % (body, capstr)


def _mul_into(out, a, bt, cap, pcap):
    """Accumulate the product of two prepared term lists into a dict."""
    if len(a) > len(bt):
        a, bt = bt, a
    if not a or not bt:
        return
    b_min_w = bt[0][0]
    for wa, pa, ma, ca in a:
        if cap is not None and wa + b_min_w > cap:
            break
        for wb, pb, mb, cb in bt:
            if cap is not None and wa + wb > cap:
                break
            if pcap is not None and pa + pb > pcap:
                continue
            mono = ma + mb
            v = out.get(mono)
            if v is None:
                out[mono] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[mono] = v
                else:
                    del out[mono]


def _homog_divide(remk, den0):
    """Divide one homogeneous-weight component by the homogeneous
    lowest-weight part of the denominator.  Exact or NotDivisible."""
    lead_mono = min(den0, key=_mono_lex_key)
    lead_c = den0[lead_mono]
    rest = [(mN, c) for mN, c in den0.items() if mN != lead_mono]

    live = dict(remk)
    heap = [(_mono_lex_key(mN), mN) for mN in live]
    heapq.heapify(heap)
    q = {}
    while heap:
        _, mono = heapq.heappop(heap)
        c = live.get(mono)
        if not c:
            continue
        if not mono_divides(lead_mono, mono):
            raise NotDivisible("term not divisible by lead of denominator",
                               term=(mono, c))
        qm = mono - lead_mono
        qc = c / lead_c
        prev = q.get(qm)
        q[qm] = qc if prev is None else prev + qc
        del live[mono]
        for dm, dc in rest:
            mm = qm + dm
            v = live.get(mm, _ZERO) - qc * dc
            if v:
                if mm not in live:
                    heapq.heappush(heap, (_mono_lex_key(mm), mm))
                live[mm] = v
            elif mm in live:
                del live[mm]
    return {mN: c for mN, c in q.items() if c}


# JSON form: {"cap": int|null, "terms": [{"coeff": "p/q", "mono": {...}}]}
# with terms in canonical order and variable names x<i>, b<i>, u<i>, t,
# beta, m<i>.


def to_json_obj(series):
    terms = []
    for mono, c in series.sorted_terms():
        mono_obj = {}
        for vid, e in mono_pairs(mono):
            mono_obj[var_name(vid)] = e
        terms.append({"coeff": str(c), "mono": mono_obj})
    return {"cap": series.cap, "terms": terms}


def from_json_obj(obj):
    terms = {}
    for item in obj["terms"]:
        pairs = sorted((parse_var_name(nm), int(e))
                       for nm, e in item["mono"].items())
        terms[mono_from_pairs(pairs)] = _QQ(item["coeff"])
    return TruncSeries(terms, obj.get("cap"))


# Convenience constructors ---------------------------------------------------


def x(i, cap=None, pcap=None):
    return TruncSeries.variable(X(i), cap, pcap)


def b(i, cap=None, pcap=None):
    return TruncSeries.variable(B(i), cap, pcap)


def u(i, cap=None, pcap=None):
    return TruncSeries.variable(U(i), cap, pcap)


def t(cap=None, pcap=None):
    return TruncSeries.variable(T, cap, pcap)


def beta(cap=None, pcap=None):
    return TruncSeries.variable(BETA, cap, pcap)


def m(i, cap=None, pcap=None):
    return TruncSeries.variable(M(i), cap, pcap)
