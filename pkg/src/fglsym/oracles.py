"""Independent classical implementations, used only as test oracles.

Everything here is deliberately computed by a different code path from
the engine under test: tableau enumeration, alternant ratios, and
per-term rational-function arithmetic over Q(t) via sympy.  No formal
group law machinery is involved.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy as sp

from .partitions import Partition
from .series import T, TruncSeries, X, mono_from_pairs, x

__all__ = [
    "schur_tableaux", "factorial_schur_bialternant", "hl_classical",
    "phi_poly", "v_poly", "b_lambda", "v_lambda", "sympy_to_series",
]


def schur_tableaux(lam, n):
    """Schur polynomial as a sum over semistandard tableaux of shape
    lam with entries in 1..n."""
    lam = Partition(lam)
    if lam.length > n:
        raise ValueError("shape longer than variable count")
    if lam.length == 0:
        return TruncSeries.const(1)

    rows = lam.parts
    total = {}

    def fill(row_idx, filled):
        if row_idx == len(rows):
            content = [0] * (n + 1)
            for row in filled:
                for e in row:
                    content[e] += 1
            key = mono_from_pairs([(X(i), content[i])
                                   for i in range(1, n + 1) if content[i]])
            total[key] = total.get(key, 0) + 1
            return
        width = rows[row_idx]
        above = filled[row_idx - 1] if row_idx else None

        def cells(col, row):
            if col == width:
                fill(row_idx + 1, filled + [tuple(row)])
                return
            lo = row[col - 1] if col else 1
            lo = max(lo, above[col] + 1 if above is not None else 1)
            for v in range(lo, n + 1):
                row.append(v)
                cells(col + 1, row)
                row.pop()

        cells(0, [])

    fill(0, [])
    return TruncSeries({mono: Fraction(c) for mono, c in total.items()})


def _alternant(exponent_rows, n, a_values):
    """det( (x_j | a)^{k_i} ) with (x|a)^k = (x - a_1)...(x - a_k)."""
    from .detpfaff import det
    rows = []
    for k in exponent_rows:
        row = []
        for j in range(1, n + 1):
            xj = x(j)
            entry = TruncSeries.const(1)
            for idx in range(1, k + 1):
                entry = entry * (xj - a_values(idx))
            row.append(entry)
        rows.append(row)
    return det(rows)


def factorial_schur_bialternant(lam, n, a_values=None):
    """Factorial Schur polynomial as a ratio of alternants.

    ``a_values`` maps an index i >= 1 to the i-th shift parameter (a
    TruncSeries); defaults to 0, recovering the plain bialternant.
    """
    lam = Partition(lam)
    if lam.length > n:
        raise ValueError("shape longer than variable count")
    if a_values is None:
        a_values = lambda idx: TruncSeries.zero()  # noqa: E731
    top = _alternant([lam.part(i) + n - i for i in range(1, n + 1)],
                     n, a_values)
    bottom = _alternant([n - i for i in range(1, n + 1)], n, a_values)
    return top.exact_divide(bottom)


# -- classical Hall-Littlewood polynomials over Q(t) -------------------------


def _sym_vars(n):
    return [sp.Symbol("x%d" % i) for i in range(1, n + 1)]


def phi_poly(mm, tsym):
    """phi_m(t) = prod_{i=1..m} (1 - t^i)."""
    out = sp.Integer(1)
    for i in range(1, mm + 1):
        out *= 1 - tsym ** i
    return sp.expand(out)


def v_poly(mm, tsym):
    """v_m(t) = phi_m(t) / (1-t)^m."""
    return sp.expand(sp.cancel(phi_poly(mm, tsym) / (1 - tsym) ** mm))


def b_lambda(lam, tsym):
    """b_lam(t) = prod over part values i of phi_{mult_i(lam)}(t)."""
    lam = Partition(lam)
    out = sp.Integer(1)
    for i in set(lam.parts):
        out *= phi_poly(lam.parts.count(i), tsym)
    return sp.expand(out)


def v_lambda(lam, n, tsym):
    """v_lam(t) = prod_{i>=0} v_{mult_i}(t) with mult_0 = n - len(lam)."""
    lam = Partition(lam)
    out = v_poly(n - lam.length, tsym)
    for i in set(lam.parts):
        out *= v_poly(lam.parts.count(i), tsym)
    return sp.expand(out)


def hl_classical(lam, n, kind="Q"):
    """Classical Hall-Littlewood polynomial over Q(t).

    P comes from the full symmetric-group sum divided by v_lam(t); Q
    from the coset sum scaled by (1-t)^{len(lam)}.  Taking both from
    genuinely different sums keeps the relation Q = b_lam * P an
    actual consistency check.
    """
    lam = Partition(lam)
    if lam.length > n:
        raise ValueError("shape longer than variable count")
    xs = _sym_vars(n)
    tsym = sp.Symbol("t")
    r = lam.length

    if kind == "P":
        total = sp.Integer(0)
        for w in itertools.permutations(range(n)):
            term = sp.Integer(1)
            for i in range(n):
                term *= xs[w[i]] ** lam.part(i + 1)
            for i in range(n):
                for j in range(i + 1, n):
                    term *= (xs[w[i]] - tsym * xs[w[j]])
                    term /= (xs[w[i]] - xs[w[j]])
            total += sp.cancel(term)
        total = sp.cancel(total / v_lambda(lam, n, tsym))
    elif kind == "Q":
        total = sp.Integer(0)
        rest = range(r, n)
        for head in itertools.permutations(range(n), r):
            tail = [i for i in range(n) if i not in head]
            w = list(head) + tail
            term = sp.Integer(1)
            for i in range(r):
                term *= xs[w[i]] ** lam[i]
            for i in range(r):
                for j in range(i + 1, n):
                    term *= (xs[w[i]] - tsym * xs[w[j]])
                    term /= (xs[w[i]] - xs[w[j]])
            total += sp.cancel(term)
        total = sp.expand((1 - tsym) ** r * total)
    else:
        raise ValueError("kind must be 'P' or 'Q'")
    total = sp.cancel(sp.together(total))
    return sympy_to_series(total, n)


def sympy_to_series(expr, n):
    """Convert an expanded sympy polynomial in x1..xn, t to TruncSeries."""
    expr = sp.expand(expr)
    num, den = sp.fraction(sp.cancel(sp.together(expr)))
    if not den.is_Number:
        raise ValueError("expression is not polynomial: denominator %s" % den)
    num = sp.expand(num)
    gens = _sym_vars(n) + [sp.Symbol("t")]
    vids = [X(i) for i in range(1, n + 1)] + [T]
    poly = sp.Poly(num, *gens, domain="QQ")
    terms = {}
    for exps, coeff in poly.terms():
        mono = mono_from_pairs([(vid, int(e))
                                for vid, e in zip(vids, exps) if e])
        terms[mono] = Fraction(coeff.p, coeff.q) / Fraction(den.p, den.q)
    return TruncSeries(terms)
