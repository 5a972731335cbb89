"""The generating-function route.

Families are extracted as coefficients of u_1^{-lam_1} ... u_r^{-lam_r}
in products of one-variable series and cross factors, expanded in the
region where u_i/u_j is small for i < j.  Concretely every factor is a
finite Laurent object: a map from exponent vectors in Z^r to series in
the remaining variables, clipped to a window wide enough that no
contribution to the requested coefficient can escape (window safety is
itself covered by the cross-route acceptance tests).

Division never happens termwise.  Each inverted factor is split into a
monomial prefactor times a unit with constant term 1; units are
inverted by the geometric series, and scalar prefactors in the
parameter t are accumulated and divided out of the final extraction,
which the defining identities guarantee to be polynomial in t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fgl import FormalGroupLaw
from .partitions import Partition
from .series import (
    K_U, NotAUnit, SeriesError, T, TruncSeries, U, X, _mul_into,
    mono_from_pairs, mono_pairs, mono_pdeg, mono_weight, vid_kind,
)
from .symfun import FamilySpec, b_param

__all__ = [
    "BSequence", "shift_b", "MultiLaurent", "LaurentContext",
    "segre_series", "relative_segre", "dp_pushforward",
    "gf_coefficient", "gf_hp_factorial_correction", "two_row_q",
]


@dataclass(frozen=True)
class BSequence:
    """The deformation parameter sequence with an index shift: reading
    position i yields b_{i-shift}, and b_k = 0 for k < 1 or past the
    optional limit."""

    shift: int = 0
    limit: int | None = None

    def value(self, i, cap=None, pcap=None):
        return b_param(i, self.shift, self.limit, cap, pcap)


def shift_b(seq):
    """One application of the reindexing (b')_i = b_{i-1}, b_0 = 0."""
    return BSequence(seq.shift + 1, seq.limit)


# ---------------------------------------------------------------------------
# Laurent objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentContext:
    """Exponent windows and truncation for one extraction problem."""

    uvars: tuple            # U-variable ids, one per exponent position
    cap: int
    pcap: int
    lo: tuple
    hi: tuple
    total_lo: int
    total_hi: int

    @classmethod
    def for_target(cls, uvars, target, cap, pcap, extra=2, degree_sum=0):
        """Windows wide enough for an extraction at the given exponent
        vector.  Soundness rests on homogeneity: lowering the running
        total exponent costs geometric weight, raising it costs
        parameter degree (offset by ``degree_sum``, the total graded
        degree of all factors, zero for the family products)."""
        span = cap + pcap + extra + degree_sum
        lo = tuple(min(e, 0) - span for e in target)
        hi = tuple(max(e, 0) + span for e in target)
        s = sum(target)
        return cls(tuple(uvars), cap, pcap, lo, hi,
                   min(s, 0) - cap - extra,
                   max(s, 0) + pcap + extra + degree_sum)

    def position(self, uvid):
        return self.uvars.index(uvid)

    def series_cap(self, shift_total=1):
        return self.cap + self.pcap + 1 + shift_total

    def inside(self, evec):
        tot = 0
        for e, l, h in zip(evec, self.lo, self.hi):
            if e < l or e > h:
                return False
            tot += e
        return self.total_lo <= tot <= self.total_hi


class MultiLaurent:
    """Finite Laurent expansion over the context's u-variables.

    ``terms`` maps integer exponent vectors to coefficient TruncSeries
    free of u-variables.  All arithmetic clips to the context windows.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        cleaned = {}
        for evec, s in (terms or {}).items():
            if s.is_zero() or not ctx.inside(evec):
                continue
            cleaned[evec] = s
        self.terms = cleaned

    @classmethod
    def one(cls, ctx):
        zero_vec = (0,) * len(ctx.uvars)
        return cls(ctx, {zero_vec: TruncSeries.const(1, ctx.cap, ctx.pcap)})

    @classmethod
    def from_series(cls, ctx, series, shift=None):
        """Interpret ``series / prod(u_v^shift_v)`` as a Laurent object.

        ``shift`` maps U-variable ids to nonnegative integers.  Terms
        whose exponent vector leaves the window are dropped; window
        adequacy is the caller's responsibility.
        """
        shift = shift or {}
        base = [-shift.get(v, 0) for v in ctx.uvars]
        pos = {v: k for k, v in enumerate(ctx.uvars)}
        buckets = {}
        for mono, c in series.terms.items():
            evec = list(base)
            rest = []
            for vid, e in mono_pairs(mono):
                if vid_kind(vid) == K_U and vid in pos:
                    evec[pos[vid]] += e
                else:
                    rest.append((vid, e))
            evec = tuple(evec)
            if not ctx.inside(evec):
                continue
            rest = mono_from_pairs(rest)
            if mono_weight(rest) > ctx.cap or mono_pdeg(rest) > ctx.pcap:
                continue
            bucket = buckets.setdefault(evec, {})
            bucket[rest] = bucket.get(rest, 0) + c
        return cls(ctx, {evec: TruncSeries(d, ctx.cap, ctx.pcap)
                         for evec, d in buckets.items()})

    def is_zero(self):
        return not self.terms

    def coefficient_at(self, evec):
        evec = tuple(evec)
        got = self.terms.get(evec)
        if got is None:
            return TruncSeries.zero(self.ctx.cap, self.ctx.pcap)
        return got

    def __add__(self, other):
        out = dict(self.terms)
        for evec, s in other.terms.items():
            cur = out.get(evec)
            s2 = s if cur is None else cur + s
            if s2.is_zero():
                out.pop(evec, None)
            else:
                out[evec] = s2
        return MultiLaurent(self.ctx, out)

    def __neg__(self):
        return MultiLaurent(self.ctx, {e: -s for e, s in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return MultiLaurent(self.ctx, {e: s * other
                                           for e, s in self.terms.items()})
        ctx = self.ctx
        cap, pcap = ctx.cap, ctx.pcap
        out = {}
        items1 = [(e, s._prepared()) for e, s in self.terms.items()]
        items2 = [(e, s._prepared()) for e, s in other.terms.items()]
        for e1, p1 in items1:
            if not p1:
                continue
            w1 = p1[0][0]
            for e2, p2 in items2:
                if not p2 or w1 + p2[0][0] > cap:
                    continue
                evec = tuple(a + bb for a, bb in zip(e1, e2))
                if not ctx.inside(evec):
                    continue
                bucket = out.get(evec)
                if bucket is None:
                    bucket = out[evec] = {}
                _mul_into(bucket, p1, p2, cap, pcap)
        cleaned = {}
        for evec, d in out.items():
            if d:
                s = TruncSeries(d, cap, pcap, _clean=True)
                if not s.is_zero():
                    cleaned[evec] = s
        return MultiLaurent(ctx, cleaned)

    def scaled(self, c):
        return MultiLaurent(self.ctx, {e: s.scaled(c)
                                       for e, s in self.terms.items()})

    def invert(self):
        """Inverse of a Laurent unit: the zero-exponent coefficient must
        itself be a series unit, and all other content must be nilpotent
        under the window and truncation (true for every factor built
        here).  Iterates the geometric series to a fixed point."""
        ctx = self.ctx
        zero_vec = (0,) * len(ctx.uvars)
        c0 = self.terms.get(zero_vec)
        if c0 is None:
            raise NotAUnit("no zero-exponent part")
        c0_inv = c0.invert_unit()
        scaled = self * c0_inv
        one = MultiLaurent.one(ctx)
        neg_n = one - scaled
        acc = one
        guard = (sum(h - l for h, l in zip(ctx.hi, ctx.lo))
                 + ctx.cap + ctx.pcap + 4) * 2
        for _ in range(guard):
            nxt = one + neg_n * acc
            if _ml_equal(nxt, acc):
                break
            acc = nxt
        else:
            raise SeriesError("Laurent inversion did not stabilize")
        return acc * c0_inv


def _ml_equal(a, bb):
    if a.terms.keys() != bb.terms.keys():
        return False
    return all(a.terms[k] == bb.terms[k] for k in a.terms)


def _prod(ctx, factors):
    out = MultiLaurent.one(ctx)
    for f in factors:
        out = out * f
    return out


def _fold_with_prune(ctx, factors, pos, want_lo, want_hi):
    """Product of all given factors, dropping along the way any bucket
    whose exponent at ``pos`` cannot land inside [want_lo, want_hi]
    given the exponent ranges of the factors still to come."""
    ranges = []
    for f in factors:
        es = [e[pos] for e in f.terms]
        ranges.append((min(es, default=0), max(es, default=0)))
    m = len(factors)
    suf_min = [0] * (m + 1)
    suf_max = [0] * (m + 1)
    for k in range(m - 1, -1, -1):
        suf_min[k] = suf_min[k + 1] + ranges[k][0]
        suf_max[k] = suf_max[k + 1] + ranges[k][1]
    acc = None
    for k, f in enumerate(factors):
        acc = f if acc is None else acc * f
        lo_need = want_lo - suf_max[k + 1]
        hi_need = want_hi - suf_min[k + 1]
        acc = MultiLaurent(ctx, {
            e: s for e, s in acc.terms.items()
            if lo_need <= e[pos] <= hi_need})
    return acc if acc is not None else MultiLaurent.one(ctx)


def _fold_with_prune_box(ctx, factors, boxes):
    """Product of the factors, pruning buckets that cannot land inside
    the per-position target intervals ``boxes`` given the exponent
    ranges of the factors still to come."""
    npos = len(ctx.uvars)
    ranges = []
    for f in factors:
        per = []
        for p in range(npos):
            es = [e[p] for e in f.terms]
            per.append((min(es, default=0), max(es, default=0)))
        ranges.append(per)
    m = len(factors)
    suf = [[(0, 0)] * npos for _ in range(m + 1)]
    for k in range(m - 1, -1, -1):
        for p in range(npos):
            lo, hi = suf[k + 1][p]
            suf[k][p] = (lo + ranges[k][p][0], hi + ranges[k][p][1])
    acc = None
    for k, f in enumerate(factors):
        acc = f if acc is None else acc * f
        keep = {}
        for e, s in acc.terms.items():
            ok = True
            for p in range(npos):
                lo_rem, hi_rem = suf[k + 1][p]
                if e[p] + hi_rem < boxes[p][0] or e[p] + lo_rem > boxes[p][1]:
                    ok = False
                    break
            if ok:
                keep[e] = s
        acc = MultiLaurent(ctx, keep)
    return acc if acc is not None else MultiLaurent.one(ctx)


def _staged_extract(ctx, stages, target):
    """Multiply factors stage by stage.  A stage carries all remaining
    factors touching one u-position; they are folded among themselves
    first (with reachability pruning at that position against the
    accumulator's own exponent spread there), multiplied into the
    accumulator once, and the position is then pinned to the target
    exponent."""
    target = tuple(target)
    acc = MultiLaurent.one(ctx)
    for pos, factors in stages:
        if pos is None:
            for f in factors:
                acc = acc * f
            continue
        want = target[pos]
        acc_es = [e[pos] for e in acc.terms]
        acc_lo = min(acc_es, default=0)
        acc_hi = max(acc_es, default=0)
        stage_prod = _fold_with_prune(ctx, factors, pos,
                                      want - acc_hi, want - acc_lo)
        acc = acc * stage_prod
        acc = MultiLaurent(ctx, {e: s for e, s in acc.terms.items()
                                 if e[pos] == want})
    return acc.coefficient_at(target)


# ---------------------------------------------------------------------------
# Shared factor builders
#
# Per-variable products and cross factors are built once in a canonical
# context (variables U(1), U(2)) and cached; call sites remap the bucket
# keys into their own windows.  Coefficients never contain u-variables,
# so remapping is pure bookkeeping.
# ---------------------------------------------------------------------------

_FACTOR_CACHE = {}


def _canonical_ctx(cap, pcap, nvars, extra=2):
    span = cap + pcap + extra
    uvars = tuple(U(i) for i in range(1, nvars + 1))
    lo = (-(cap + span),) * nvars
    hi = (span,) * nvars
    return LaurentContext(uvars, cap, pcap, lo, hi,
                          -(cap + span) * nvars, span * nvars)


def _remap(ctx, cached, positions):
    """Reinterpret cached canonical bucket keys at the given positions
    of the call context."""
    nz = len(ctx.uvars)
    out = {}
    for evec, s in cached.items():
        full = [0] * nz
        for val, pos in zip(evec, positions):
            full[pos] = val
        full = tuple(full)
        if ctx.inside(full):
            s2 = s.truncated(ctx.cap, ctx.pcap)
            if not s2.is_zero():
                out[full] = s2
    return MultiLaurent(ctx, out)


def _x_series(j, cap, pcap):
    return TruncSeries.variable(X(j), cap, pcap)


def _u_var_series(uvid, cap, pcap):
    return TruncSeries.variable(uvid, cap, pcap)


def _log_derivative_factor(ctx, fgl, uvid):
    """1/P(u) = l'(u) as a Laurent factor."""
    s = fgl.log_derivative(uvid, ctx.series_cap(0), ctx.pcap)
    return MultiLaurent.from_series(ctx, s)


def _root_inverse_factor(ctx, fgl, uvid, xj):
    """u/(u -_F x_j): inverse of the shifted formal difference."""
    sc = ctx.series_cap(1)
    diff = fgl.formal_diff(_u_var_series(uvid, sc, ctx.pcap),
                           _x_series(xj, sc, ctx.pcap))
    return MultiLaurent.from_series(ctx, diff, {uvid: 1}).invert()


def _ratio_factor(ctx, fgl, uvid, numerator):
    """numerator/(u -_F x_j) style pieces are assembled by the caller;
    this just Laurent-ifies a series over u."""
    return MultiLaurent.from_series(ctx, numerator, {uvid: 1})


def _tail_factor(ctx, fgl, uvid, bs, j):
    """(u +_F b_j)/u."""
    sc = ctx.series_cap(1)
    s = fgl.formal_sum(_u_var_series(uvid, sc, ctx.pcap),
                       bs.value(j, sc, ctx.pcap))
    return MultiLaurent.from_series(ctx, s, {uvid: 1})


def _t_var(cap, pcap):
    return TruncSeries.variable(T, cap, pcap)


def _two_series_unit(fgl, arg, scalar_series, divisor):
    """[s](arg) = s * divisor * unit; returns the unit (constant term 1).

    ``divisor`` is the plain series with [s](arg)/(s*divisor) a unit,
    e.g. arg itself for s = t, or (u - x) style differences."""
    w = fgl.t_series(arg, scalar_series)
    return w.exact_divide(divisor).exact_divide(scalar_series)


def _hl_unit_factor(ctx, fgl, uvid):
    """u/(u +_F [t](ubar)) = u/[1-t](u): returns (Laurent factor,
    prefactor to divide the extraction by)."""
    sc = ctx.series_cap(1)
    uu = _u_var_series(uvid, sc, ctx.pcap)
    one_minus_t = 1 - _t_var(sc, ctx.pcap)
    w = fgl.t_series(uu, one_minus_t)
    unit = w.exact_divide(uu).exact_divide(one_minus_t)
    return MultiLaurent.from_series(ctx, unit.invert_unit()), one_minus_t


def _p_unit_factor(ctx, fgl, uvid):
    """u/(u +_F u) = u/[2](u): Laurent factor and rational prefactor."""
    sc = ctx.series_cap(1)
    uu = _u_var_series(uvid, sc, ctx.pcap)
    w = fgl.t_series(uu, 2)
    unit = w.exact_divide(uu).scaled(Fraction(1, 2))
    return MultiLaurent.from_series(ctx, unit.invert_unit()), Fraction(2)


def _cross_numerator(ctx, fgl, uvid_i, uvid_j):
    """(u_j +_F ubar_i)/u_j for positions i < j."""
    sc = ctx.series_cap(1)
    s = fgl.formal_diff(_u_var_series(uvid_j, sc, ctx.pcap),
                        _u_var_series(uvid_i, sc, ctx.pcap))
    return MultiLaurent.from_series(ctx, s, {uvid_j: 1})


def _cross_pq_denominator(ctx, fgl, uvid_i, uvid_j):
    """inverse of (u_j +_F u_i)/u_j."""
    sc = ctx.series_cap(1)
    s = fgl.formal_sum(_u_var_series(uvid_j, sc, ctx.pcap),
                       _u_var_series(uvid_i, sc, ctx.pcap))
    return MultiLaurent.from_series(ctx, s, {uvid_j: 1}).invert()


def _cross_hl_denominator(ctx, fgl, uvid_i, uvid_j):
    """inverse of (u_j +_F [t](ubar_i))/u_j."""
    sc = ctx.series_cap(1)
    ti = fgl.t_series(fgl.formal_inverse(_u_var_series(uvid_i, sc, ctx.pcap)),
                      _t_var(sc, ctx.pcap))
    s = fgl.formal_sum(_u_var_series(uvid_j, sc, ctx.pcap), ti)
    return MultiLaurent.from_series(ctx, s, {uvid_j: 1}).invert()


def _region_difference_inverse(ctx, big_uvid, small_uvid):
    """1/(u_big - u_small) expanded in the region (small index first):
    sum_p u_small^p u_big^{-1-p}."""
    pb = ctx.position(big_uvid)
    ps = ctx.position(small_uvid)
    terms = {}
    one = TruncSeries.const(1, ctx.cap, ctx.pcap)
    p = 0
    while True:
        evec = [0] * len(ctx.uvars)
        evec[ps] = p
        evec[pb] = -1 - p
        evec = tuple(evec)
        if not ctx.inside(evec):
            if p > ctx.hi[ps]:
                break
            p += 1
            continue
        terms[evec] = one
        p += 1
    return MultiLaurent(ctx, terms)


# ---------------------------------------------------------------------------
# Segre series and the push-forward formula
# ---------------------------------------------------------------------------


def segre_series(roots, fgl, cap, pcap=None, uvar=1):
    """Generating series of Segre classes for the bundle with the given
    x-root indices: (1/P(z)) prod_j z/(z -_F x_j) with z the u-variable.
    Index m of a class is read at exponent -m."""
    if pcap is None:
        pcap = cap
    uvid = U(uvar)
    ctx = LaurentContext.for_target((uvid,), (0,), cap, pcap)
    factors = [_log_derivative_factor(ctx, fgl, uvid)]
    for j in roots:
        factors.append(_root_inverse_factor(ctx, fgl, uvid, j))
    return _prod(ctx, factors)


def relative_segre(roots_e, roots_f, fgl, cap, pcap=None, uvar=1):
    """Relative Segre series (1/P) * S(E)/S(F); the quotient by S(F)
    is realized by multiplying with P(z) * prod (z -_F x_j)/z."""
    if pcap is None:
        pcap = cap
    uvid = U(uvar)
    ctx = LaurentContext.for_target((uvid,), (0,), cap, pcap)
    sc = ctx.series_cap(1)
    factors = [_log_derivative_factor(ctx, fgl, uvid),
               _log_derivative_factor(ctx, fgl, uvid)]
    for j in roots_e:
        factors.append(_root_inverse_factor(ctx, fgl, uvid, j))
    factors.append(MultiLaurent.from_series(
        ctx, fgl.p_series(uvid, sc, ctx.pcap)))
    for j in roots_f:
        diff = fgl.formal_diff(_u_var_series(uvid, sc, ctx.pcap),
                               _x_series(j, sc, ctx.pcap))
        factors.append(MultiLaurent.from_series(ctx, diff, {uvid: 1}))
    return _prod(ctx, factors)


def dp_pushforward(f, n, r, fgl, cap, pcap=None):
    """Push-forward along the r-step flag tower, computed as the stated
    coefficient extraction

        [u_1^{n-1} ... u_r^{n-1}] ( f(u) prod_{i<j} (u_j -_F u_i)
                                         prod_i S_{1/u_i}(roots) )

    for a polynomial f in x_1..x_r (substituted by u_1..u_r)."""
    if r < 0 or r > n:
        raise ValueError("need 0 <= r <= n")
    deg_f = max((mono_weight(mn) for mn in f.terms), default=0)
    fiber_dim = n * r - r * (r + 1) // 2
    if pcap is None:
        pcap = max(cap - (f.min_weight() - fiber_dim), 0)
    if r == 0:
        return f.truncated(cap, pcap)
    uvids = tuple(U(i) for i in range(1, r + 1))
    target = (n - 1,) * r
    ctx = LaurentContext.for_target(uvids, target, cap, pcap,
                                    degree_sum=deg_f + r * (r - 1) // 2)
    sc = ctx.series_cap(1)
    fu = f.truncated(None, None).substitute(
        {X(i): _u_var_series(U(i), sc, ctx.pcap) for i in range(1, r + 1)})
    stages = [(None, [MultiLaurent.from_series(ctx, fu)])]
    per_position = {p: [] for p in range(r)}
    for i in range(r):
        for j in range(i + 1, r):
            s = fgl.formal_diff(_u_var_series(uvids[j], sc, ctx.pcap),
                                _u_var_series(uvids[i], sc, ctx.pcap))
            per_position[j].append(MultiLaurent.from_series(ctx, s))
    segre = _pervar_canonical(fgl, "s_kl", n, 0, None, cap, pcap)
    for i in range(r):
        per_position[i].append(_remap(ctx, segre.terms, (i,)))
    stages.extend((p, per_position[p]) for p in range(r - 1, -1, -1))
    return _staged_extract(ctx, stages, target).truncated(cap, pcap)


def dp_pushforward_table(n, r, fgl, cap, max_shift=3, pcap=None):
    """Push-forward extractions for a whole grid of monomials at once.

    Returns a function mapping an exponent tuple e (length r, entries
    up to ``max_shift``) to the push-forward of x^e.  The underlying
    Laurent product does not depend on the numerator, so it is built
    once; each numerator is then a single coefficient lookup."""
    if r < 0 or r > n:
        raise ValueError("need 0 <= r <= n")
    fiber_dim = n * r - r * (r + 1) // 2
    if pcap is None:
        pcap = cap + fiber_dim
    if r == 0:
        def at_zero(e, case_pcap=None):
            return TruncSeries.const(1, cap, case_pcap)
        return at_zero
    uvids = tuple(U(i) for i in range(1, r + 1))
    extra = 2
    deg_sum = r * (r - 1) // 2
    span = cap + pcap + extra + deg_sum
    lo = tuple(n - 1 - max_shift - span for _ in range(r))
    hi = tuple(n - 1 + span for _ in range(r))
    ctx = LaurentContext(uvids, cap, pcap, lo, hi,
                         r * (n - 1 - max_shift) - cap - extra,
                         r * (n - 1) + pcap + extra + deg_sum)
    sc = ctx.series_cap(1)
    factors = []
    for i in range(r):
        for j in range(i + 1, r):
            s = fgl.formal_diff(_u_var_series(uvids[j], sc, ctx.pcap),
                                _u_var_series(uvids[i], sc, ctx.pcap))
            factors.append(MultiLaurent.from_series(ctx, s))
    segre = _pervar_canonical(fgl, "s_kl", n, 0, None, cap, pcap)
    for i in range(r):
        factors.append(_remap(ctx, segre.terms, (i,)))
    boxes = [(n - 1 - max_shift, n - 1)] * r
    table = _fold_with_prune_box(ctx, factors, boxes)

    def extract(e, case_pcap=None):
        if len(e) != r or any(ei < 0 or ei > max_shift for ei in e):
            raise ValueError("exponents out of table range")
        target = tuple(n - 1 - ei for ei in e)
        got = table.coefficient_at(target)
        return got.truncated(cap, case_pcap)

    return extract


# ---------------------------------------------------------------------------
# Family extractions
# ---------------------------------------------------------------------------


def _pervar_ratio_factors(ctx, fgl, uvid, n, kind):
    """prod_j numerator_j/(u -_F x_j) with the family's numerator."""
    sc = ctx.series_cap(1)
    out = []
    tvar = _t_var(sc, ctx.pcap)
    for j in range(1, n + 1):
        uu = _u_var_series(uvid, sc, ctx.pcap)
        xj = _x_series(j, sc, ctx.pcap)
        if kind == "skl":
            num = None
        elif kind == "pq":
            num = fgl.formal_sum(uu, xj)
        else:  # hl
            num = fgl.formal_sum(
                uu, fgl.t_series(fgl.formal_inverse(xj), tvar))
        if num is not None:
            out.append(_ratio_factor(ctx, fgl, uvid, num))
        out.append(_root_inverse_factor(ctx, fgl, uvid, j))
    return out


def _tails(ctx, fgl, uvid, bs, count):
    return [_tail_factor(ctx, fgl, uvid, bs, j) for j in range(1, count + 1)]


def _cached(key, build):
    got = _FACTOR_CACHE.get(key)
    if got is None:
        got = build()
        _FACTOR_CACHE[key] = got
    return got


def _ceil2(k):
    return k + (k & 1)


_RATIO_KIND = {"s_kl": "skl", "p": "pq", "q": "pq", "hp": "hl", "hq": "hl",
               "hl_ratios": "hl"}


def _pervar_canonical(fgl, family, n, tail_k, b_limit, cap, pcap):
    """Full per-variable Laurent factor in the canonical one-variable
    context (head unit for p/hp included; scalar prefactors are the
    caller's business).  Built at caps rounded up so nearby truncations
    share one cache entry; callers re-truncate on remap."""
    cap, pcap = _ceil2(cap), _ceil2(pcap)
    key = ("pervar", fgl, family, n, tail_k, b_limit, cap, pcap)

    def build():
        if tail_k > 0:
            prev = _pervar_canonical(fgl, family, n, tail_k - 1, b_limit,
                                     cap, pcap)
            ctx = prev.ctx
            return prev * _tail_factor(ctx, fgl, ctx.uvars[0],
                                       BSequence(0, b_limit), tail_k)
        ctx = _canonical_ctx(cap, pcap, 1)
        uvid = ctx.uvars[0]
        if family == "tails":
            return MultiLaurent.one(ctx)
        if family == "hp_head":
            return _hl_unit_factor(ctx, fgl, uvid)[0]
        if family == "logderiv":
            return _log_derivative_factor(ctx, fgl, uvid)
        factors = []
        if family == "p":
            factors.append(_p_unit_factor(ctx, fgl, uvid)[0])
        elif family == "hp":
            factors.append(_hl_unit_factor(ctx, fgl, uvid)[0])
        if family != "hl_ratios":
            factors.append(_log_derivative_factor(ctx, fgl, uvid))
        factors.extend(
            _pervar_ratio_factors(ctx, fgl, uvid, n, _RATIO_KIND[family]))
        return _prod(ctx, factors)

    return _cached(key, build)


def _cross_canonical(fgl, den_kind, cap, pcap):
    """Cross factor (u_2 -_F u_1)/D in the canonical two-variable
    context; u_1 is the smaller position.  den_kind is None (D = u_2),
    'pq' (D = u_2 +_F u_1) or 'hl' (D = u_2 +_F [t](ubar_1))."""
    cap, pcap = _ceil2(cap), _ceil2(pcap)
    key = ("cross", fgl, den_kind, cap, pcap)

    def build():
        ctx = _canonical_ctx(cap, pcap, 2)
        u1, u2 = ctx.uvars
        out = _cross_numerator(ctx, fgl, u1, u2)
        if den_kind == "pq":
            out = out * _cross_pq_denominator(ctx, fgl, u1, u2)
        elif den_kind == "hl":
            out = out * _cross_hl_denominator(ctx, fgl, u1, u2)
        return out

    return _cached(key, build)


def _w_product_canonical(fgl, n, cap, pcap):
    """prod_j W_j with [t](u -_F x_j) = t (u -_F x_j) W_j, canonical
    one-variable context."""
    cap, pcap = _ceil2(cap), _ceil2(pcap)
    key = ("wprod", fgl, n, cap, pcap)

    def build():
        ctx = _canonical_ctx(cap, pcap, 1)
        sc = ctx.series_cap(1)
        uu = _u_var_series(ctx.uvars[0], sc, ctx.pcap)
        tvar = _t_var(sc, ctx.pcap)
        w_prod = TruncSeries.const(1, sc, ctx.pcap)
        for j in range(1, n + 1):
            wij = fgl.formal_diff(uu, _x_series(j, sc, ctx.pcap))
            w_prod = w_prod * _two_series_unit(fgl, wij, tvar, wij)
        return MultiLaurent.from_series(ctx, w_prod)

    return _cached(key, build)


def _corr_pair_canonical(fgl, cap, pcap):
    """The u-pair content of the correction term, canonical context with
    u_1 the smaller position:

        (u_2 +_F [t](ubar_1)) / ( unit((u_2 -_F u_1)/(u_2 - u_1))
                                  * unit([t](u_2 -_F u_1)/(t(u_2 -_F u_1))) )

    The remaining 1/(u_2 - u_1) is a region expansion added per call."""
    cap, pcap = _ceil2(cap), _ceil2(pcap)
    key = ("corrpair", fgl, cap, pcap)

    def build():
        ctx = _canonical_ctx(cap, pcap, 2)
        sc = ctx.series_cap(1)
        ou = _u_var_series(ctx.uvars[0], sc, ctx.pcap)
        uu = _u_var_series(ctx.uvars[1], sc, ctx.pcap)
        tvar = _t_var(sc, ctx.pcap)
        wp = fgl.formal_diff(uu, ou)
        unit_p = wp.exact_divide(uu - ou)
        v_unit = _two_series_unit(fgl, wp, tvar, wp)
        numer = fgl.formal_sum(uu,
                               fgl.t_series(fgl.formal_inverse(ou), tvar))
        piece = numer * unit_p.invert_unit() * v_unit.invert_unit()
        return MultiLaurent.from_series(ctx, piece)

    return _cached(key, build)


def gf_coefficient(spec, hp_variant="shift"):
    """Coefficient extraction for one family instance.

    For factorial hp the two published generating identities differ:
    ``hp_variant='shift'`` computes the value at the once-shifted
    parameter sequence (compare against the symmetrizer route with
    b_shift=1), while ``hp_variant='correction'`` uses the subtracted
    correction term and matches the unshifted value directly.
    """
    if isinstance(spec, dict):
        spec = FamilySpec(**spec)
    if spec.family == "s_uf":
        raise ValueError("no generating-function identity for family s_uf")
    if spec.b_shift:
        raise ValueError("the generating route fixes its own parameter "
                         "indexing; use b_shift on the symmetrizer side")
    lam = spec.lam
    r = lam.length
    n = spec.n
    fgl = spec.fgl
    cap, pcap = spec.cap, spec.pcap
    if r == 0:
        return TruncSeries.const(1, cap, pcap)
    if spec.family == "hp" and spec.factorial and hp_variant == "correction":
        return gf_hp_factorial_correction(lam, n, fgl, cap, pcap,
                                          b_limit=spec.b_limit)

    uvids = tuple(U(i) for i in range(1, r + 1))
    target = tuple(-p for p in lam.parts)
    ctx = LaurentContext.for_target(uvids, target, cap, pcap)

    den_pref = TruncSeries.const(1)
    if spec.family == "p":
        den_pref = TruncSeries.const(2 ** r)
    elif spec.family == "hp":
        den_pref = (1 - _t_var(None, None)) ** r

    den_kind = {"s_kl": None, "p": "pq", "q": "pq",
                "hp": "hl", "hq": "hl"}[spec.family]
    per_position = {p: [] for p in range(r)}
    for i in range(1, r + 1):
        if spec.family == "s_kl":
            tail_k = lam[i - 1] - i + n
        else:
            tail_k = lam[i - 1] - 1
        if not spec.factorial:
            tail_k = 0
        pv = _pervar_canonical(spec.fgl, spec.family, n, tail_k,
                               spec.b_limit, cap, pcap)
        per_position[i - 1].append(_remap(ctx, pv.terms, (i - 1,)))
    if den_kind or r > 1:
        cross = _cross_canonical(spec.fgl, den_kind, cap, pcap)
        for i in range(r):
            for j in range(i + 1, r):
                per_position[j].append(_remap(ctx, cross.terms, (i, j)))

    stages = [(p, per_position[p]) for p in range(r - 1, -1, -1)]
    extraction = _staged_extract(ctx, stages, target)
    if den_pref == TruncSeries.const(1):
        return extraction.truncated(cap, pcap)
    return extraction.exact_divide(den_pref).truncated(cap, pcap)


def gf_hp_factorial_correction(lam, n, fgl, cap=None, pcap=None,
                               b_limit=None):
    """Factorial hp extraction with the subtracted correction term;
    produces the value at the *unshifted* parameter sequence."""
    from .symfun import default_cap, default_pcap
    lam = Partition(lam)
    if cap is None:
        cap = default_cap(lam, n)
    if pcap is None:
        pcap = default_pcap(lam, cap)
    r = lam.length
    if r == 0:
        return TruncSeries.const(1, cap, pcap)
    uvids = tuple(U(i) for i in range(1, r + 1))
    target = tuple(-p for p in lam.parts)
    ctx = LaurentContext.for_target(uvids, target, cap, pcap)

    den_pref = (1 - _t_var(None, None)) ** r
    head = _pervar_canonical(fgl, "hp_head", 0, 0, None, cap, pcap)
    logderiv = _pervar_canonical(fgl, "logderiv", 0, 0, None, cap, pcap)
    ratios = _pervar_canonical(fgl, "hl_ratios", n, 0, None, cap, pcap)
    wprod = _w_product_canonical(fgl, n, cap, pcap)
    pair = _corr_pair_canonical(fgl, cap, pcap)
    cross = _cross_canonical(fgl, "hl", cap, pcap)

    per_position = {p: [] for p in range(r)}
    for i in range(1, r + 1):
        pos = i - 1
        factors = per_position[pos]
        # first branch: prod_j (u_i +_F [t](xbar_j)) / (u_i -_F x_j)
        branch_a = _remap(ctx, ratios.terms, (pos,))
        # second branch: t^{n-i+1} prod_j W_j  prod_{j<i} pair pieces,
        # where [t](u_i -_F x_j) = t (u_i -_F x_j) W_j and the pair
        # pieces expand 1/[t](u_i -_F u_j) against (u_i +_F [t](ubar_j)).
        branch_b = _remap(ctx, wprod.terms, (pos,))
        for j in range(1, i):
            branch_b = branch_b * _remap(ctx, pair.terms, (j - 1, pos))
            branch_b = branch_b * _region_difference_inverse(
                ctx, uvids[pos], uvids[j - 1])
        branch_b = branch_b * _t_var(ctx.cap, ctx.pcap) ** (n - i + 1)
        factors.append(_remap(ctx, head.terms, (pos,))
                       * (branch_a - branch_b))
        factors.append(_remap(ctx, logderiv.terms, (pos,)))
        tails = _pervar_canonical(fgl, "tails", 0, lam[pos], b_limit,
                                  cap, pcap)
        factors.append(_remap(ctx, tails.terms, (pos,)))

    for i in range(r):
        for j in range(i + 1, r):
            per_position[j].append(_remap(ctx, cross.terms, (i, j)))

    stages = [(p, per_position[p]) for p in range(r - 1, -1, -1)]
    extraction = _staged_extract(ctx, stages, target)
    return extraction.exact_divide(den_pref).truncated(cap, pcap)


def two_row_q(exts, tails, n, fgl, cap, pcap=None, factorial=True,
              b_limit=None):
    """Two-variable extraction used by the Pfaffian closed forms:

        [u_1^{-k} u_2^{-l}] ( Q(u_1)^{(p)} Q(u_2)^{(q)}
                              (u_2 -_F u_1)/(u_2 +_F u_1) )

    with exts = (k, l) and tails = (p, q); tails are clipped at 0."""
    if pcap is None:
        pcap = cap
    k, l = exts
    p, q = (max(tails[0], 0), max(tails[1], 0)) if factorial else (0, 0)
    uvids = (U(1), U(2))
    target = (-k, -l)
    ctx = LaurentContext.for_target(uvids, target, cap, pcap)
    cross = _cross_canonical(fgl, "pq", cap, pcap)
    stages = []
    for pos, tail_k in ((1, q), (0, p)):
        pv = _pervar_canonical(fgl, "q", n, tail_k, b_limit, cap, pcap)
        factors = [_remap(ctx, pv.terms, (pos,))]
        if pos == 1:
            factors.append(_remap(ctx, cross.terms, (0, 1)))
        stages.append((pos, factors))
    return _staged_extract(ctx, stages, target).truncated(cap, pcap)
