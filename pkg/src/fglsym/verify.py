"""Verification suites: each suite runs a list of exact identity checks
and reports one (case, ok, seconds) triple per case.  The acceptance
tests and the command line front end both drive these."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from .detpfaff import (
    gq_pfaffian, grothendieck_det, jacobi_trudi_schur, one_row_series,
    q_pfaffian,
)
from .fgl import FormalGroupLaw, fgl_specialize
from .genfun import (
    dp_pushforward, dp_pushforward_table, gf_coefficient,
    gf_hp_factorial_correction, relative_segre, segre_series,
)
from .oracles import (
    b_lambda, factorial_schur_bialternant, hl_classical, schur_tableaux,
    sympy_to_series, v_lambda, v_poly,
)
from .partitions import (
    Partition, partitions_up_to_weight, strict_partitions_up_to_weight,
)
from .series import B, T, TruncSeries, X, b, mono_pairs, t, x
from .symfun import FamilySpec, eval_family, gysin_symmetrize

__all__ = ["CaseResult", "SUITES", "run_suite", "suite_names"]


@dataclass
class CaseResult:
    case: str
    ok: bool
    seconds: float
    detail: str = ""


def _lawset(which=("additive", "multiplicative", "universal")):
    out = []
    for kind in which:
        if kind == "custom":
            from fractions import Fraction
            out.append(FormalGroupLaw.custom(
                [Fraction(1, k + 2) for k in range(12)]))
        else:
            out.append(FormalGroupLaw(kind))
    return out


def _case(results, name, fn):
    t0 = time.time()
    try:
        ok, detail = fn()
    except Exception as exc:  # deliberate: a crash is a failed case
        ok, detail = False, "%s: %s" % (type(exc).__name__, exc)
    results.append(CaseResult(name, ok, time.time() - t0, detail))


# ---------------------------------------------------------------------------
# 1. formal group law axioms
# ---------------------------------------------------------------------------


def suite_fgl_axioms(cap=8, **_):
    results = []
    laws = _lawset(("additive", "multiplicative", "universal", "custom"))
    for F in laws:
        name = F.kind
        x1, x2, x3 = x(1, cap), x(2, cap), x(3, cap)

        _case(results, "%s: unit F(x,0)=x" % name, lambda F=F, x1=x1: (
            F.formal_sum(x1, TruncSeries.zero(cap)) == x1, ""))
        _case(results, "%s: commutativity" % name, lambda F=F, x1=x1, x2=x2: (
            F.formal_sum(x1, x2) == F.formal_sum(x2, x1), ""))
        _case(results, "%s: associativity" % name,
              lambda F=F, x1=x1, x2=x2, x3=x3: (
                  F.formal_sum(x1, F.formal_sum(x2, x3))
                  == F.formal_sum(F.formal_sum(x1, x2), x3), ""))
        _case(results, "%s: inverse law" % name, lambda F=F, x1=x1: (
            F.formal_sum(x1, F.formal_inverse(x1)).is_zero(), ""))
        _case(results, "%s: log additivity" % name,
              lambda F=F, x1=x1, x2=x2: (
                  F.log_apply(F.formal_sum(x1, x2))
                  == F.log_apply(x1) + F.log_apply(x2), ""))
        for k in range(-3, 4):
            _case(results, "%s: [%d]-series" % (name, k),
                  lambda F=F, x1=x1, k=k: (
                      F.t_series(x1, k) == F.n_series(x1, k), ""))
        _case(results, "%s: l'(z) P(z) = 1" % name, lambda F=F: (
            F.log_derivative(X(1), cap) * F.p_series(X(1), cap)
            == TruncSeries.const(1), ""))
    return results


# ---------------------------------------------------------------------------
# 2. route equivalence
# ---------------------------------------------------------------------------


def _route_cases(max_weight, n_values, laws, cap_extra=2):
    for n in n_values:
        for lam in partitions_up_to_weight(max_weight, n):
            strict = lam.is_strict() and lam.length > 0
            for F in laws:
                for factorial in (False, True):
                    yield ("s_kl", lam, n, F, factorial, None)
                    if strict:
                        yield ("p", lam, n, F, factorial, None)
                        yield ("q", lam, n, F, factorial, None)
                    yield ("hq", lam, n, F, factorial, None)
                    if not factorial:
                        yield ("hp", lam, n, F, False, None)
                    else:
                        yield ("hp", lam, n, F, True, "shift")
                        yield ("hp", lam, n, F, True, "correction")


def suite_route_equivalence(max_weight=4, n_values=(2, 3), laws=None,
                            cap_extra=2, **_):
    results = []
    if laws is None:
        laws = _lawset()
    for fam, lam, n, F, factorial, variant in _route_cases(
            max_weight, n_values, laws, cap_extra):
        if lam.length == 0 and fam != "s_kl":
            continue
        cap = lam.weight + n + cap_extra
        t_on = fam in ("hp", "hq")
        name = "%s lam=%s n=%d %s%s%s" % (
            fam, lam, n, F.kind,
            " factorial" if factorial else "",
            " [%s]" % variant if variant else "")

        def run(fam=fam, lam=lam, n=n, F=F, factorial=factorial,
                variant=variant, cap=cap, t_on=t_on):
            shift = 1 if (fam == "hp" and factorial
                          and variant == "shift") else 0
            sym = eval_family(FamilySpec(fam, lam, n, F, factorial=factorial,
                                         t_on=t_on, cap=cap, b_shift=shift))
            gf = gf_coefficient(
                FamilySpec(fam, lam, n, F, factorial=factorial,
                           t_on=t_on, cap=cap),
                hp_variant=variant or "shift")
            return sym == gf, ""

        _case(results, name, run)
    return results


# ---------------------------------------------------------------------------
# 3. push-forward formula vs symmetrizer
# ---------------------------------------------------------------------------


def suite_dp(max_exp=3, n_max=3, cap=8, laws=None, **_):
    results = []
    if laws is None:
        laws = _lawset(("additive", "universal"))
    for F in laws:
        for n in range(1, n_max + 1):
            for r in range(0, n + 1):
                fiber = n * r - r * (r + 1) // 2
                table = dp_pushforward_table(n, r, F, cap,
                                             max_shift=max_exp)
                for e in itertools.product(range(max_exp + 1), repeat=r):
                    name = "dp n=%d r=%d e=%s %s" % (n, r, e, F.kind)

                    def run(n=n, r=r, e=e, F=F, table=table, fiber=fiber):
                        case_pcap = max(cap - (sum(e) - fiber), 0)
                        got = table(e, case_pcap)
                        mono = TruncSeries.const(1, None)
                        for i, ei in enumerate(e, start=1):
                            mono = mono * x(i) ** ei
                        work = cap + n * (n - 1) // 2
                        want = gysin_symmetrize(
                            mono.truncated(work, case_pcap), n, r, F)
                        return got == want.truncated(cap, case_pcap), ""

                    _case(results, name, run)
    return results


# ---------------------------------------------------------------------------
# 4. worked examples
# ---------------------------------------------------------------------------


def suite_examples(**_):
    results = []
    Fu = FormalGroupLaw.universal()
    Fa = FormalGroupLaw.additive()

    _case(results, "s_kl empty partition is 1", lambda: (
        eval_family(FamilySpec("s_kl", Partition([]), 3, Fu))
        == TruncSeries.const(1), ""))

    # two-term coset sum for lam = (k, k) on two variables, checked with
    # denominators cleared:  S * d12 * d21 == N1 * d21 + N2 * d12
    for k in (1, 2):
        def run(k=k):
            cap = 2 * k + 4
            work = cap + 1
            spec = FamilySpec("s_kl", Partition([k, k]), 2, Fu,
                              factorial=True, cap=cap)
            val = eval_family(spec)
            pc = val.pcap
            d12 = Fu.formal_diff(x(1, work, pc), x(2, work, pc))
            d21 = Fu.formal_diff(x(2, work, pc), x(1, work, pc))
            from .symfun import factorial_power
            n1 = factorial_power(1, k + 1, Fu, True, cap=work, pcap=pc) * \
                factorial_power(2, k, Fu, True, cap=work, pcap=pc)
            n2 = factorial_power(2, k + 1, Fu, True, cap=work, pcap=pc) * \
                factorial_power(1, k, Fu, True, cap=work, pcap=pc)
            lhs = val * d12 * d21
            rhs = n1 * d21 + n2 * d12
            return lhs == rhs.truncated(cap, pc), ""
        _case(results, "two-term sum lam=(%d,%d) n=2" % (k, k), run)

    def hp_example():
        got = eval_family(FamilySpec("hp", Partition([1]), 3, Fa,
                                     factorial=True, t_on=True))
        tt = t()
        want = x(1) + x(2) + x(3) + b(1) * (1 + tt + tt ** 2)
        return got == want, repr(got)
    _case(results, "hp (1) on x_3 with parameters", hp_example)

    def hq_example():
        got = eval_family(FamilySpec("hq", Partition([1]), 3, Fa,
                                     factorial=True, t_on=True))
        want = (1 - t()) * (x(1) + x(2) + x(3))
        return got == want, repr(got)
    _case(results, "hq (1) on x_3 with parameters", hq_example)
    return results


# ---------------------------------------------------------------------------
# 5. specialization regressions
# ---------------------------------------------------------------------------


def suite_specializations(max_weight=4, n_max=3, **_):
    results = []
    Fa = FormalGroupLaw.additive()
    Fu = FormalGroupLaw.universal()
    zero_t = {T: TruncSeries.zero()}
    minus_t = {T: TruncSeries.const(-1)}
    for n in range(2, n_max + 1):
        for lam in partitions_up_to_weight(max_weight, n):
            if lam.length == 0:
                continue
            cap = lam.weight + n + 2

            def t0_check(lam=lam, n=n, cap=cap):
                skl = eval_family(FamilySpec("s_kl", lam, n, Fu, cap=cap))
                hp = eval_family(FamilySpec("hp", lam, n, Fu, t_on=True,
                                            cap=cap))
                hq = eval_family(FamilySpec("hq", lam, n, Fu, t_on=True,
                                            cap=cap))
                return (hp.substitute(zero_t) == skl
                        and hq.substitute(zero_t) == skl), ""
            _case(results, "t->0: hp=hq=s_kl lam=%s n=%d" % (lam, n),
                  t0_check)

            def tableau_check(lam=lam, n=n, cap=cap):
                got = eval_family(FamilySpec("s_kl", lam, n, Fa, cap=cap))
                return got == schur_tableaux(lam, n), ""
            _case(results, "additive s_kl = tableau Schur lam=%s n=%d"
                  % (lam, n), tableau_check)

            def bialternant_check(lam=lam, n=n, cap=cap):
                got = eval_family(FamilySpec("s_kl", lam, n, Fa,
                                             factorial=True, cap=cap))
                want = factorial_schur_bialternant(
                    lam, n, lambda idx: -b(idx))
                return got == want.truncated(cap), ""
            _case(results, "factorial s_kl = bialternant lam=%s n=%d"
                  % (lam, n), bialternant_check)

            def hq_classical(lam=lam, n=n, cap=cap):
                got = eval_family(FamilySpec("hq", lam, n, Fa, t_on=True,
                                             cap=cap))
                want = hl_classical(lam, n, "Q")
                return got == want.truncated(cap), ""
            _case(results, "additive hq = classical Q lam=%s n=%d"
                  % (lam, n), hq_classical)

            if lam.is_strict():
                for factorial in (False, True):
                    def tm1_check(lam=lam, n=n, cap=cap,
                                  factorial=factorial):
                        hp = eval_family(FamilySpec(
                            "hp", lam, n, Fu, factorial=factorial,
                            t_on=True, cap=cap))
                        hq = eval_family(FamilySpec(
                            "hq", lam, n, Fu, factorial=factorial,
                            t_on=True, cap=cap))
                        pv = eval_family(FamilySpec(
                            "p", lam, n, Fu, factorial=factorial, cap=cap))
                        qv = eval_family(FamilySpec(
                            "q", lam, n, Fu, factorial=factorial, cap=cap))
                        return (hp.substitute(minus_t) == pv
                                and hq.substitute(minus_t) == qv), ""
                    _case(results, "t->-1: hp,hq = p,q lam=%s n=%d%s"
                          % (lam, n, " factorial" if factorial else ""),
                          tm1_check)
    return results


# ---------------------------------------------------------------------------
# 6. closed forms
# ---------------------------------------------------------------------------


def suite_closed_forms(max_weight=5, max_q_weight=6, n_max=4, cap_extra=4,
                       **_):
    results = []
    Fa = FormalGroupLaw.additive()
    Fm = FormalGroupLaw.multiplicative()
    for n in range(2, n_max + 1):
        for lam in partitions_up_to_weight(max_weight, n):
            if lam.length == 0:
                continue
            cap = lam.weight + n + cap_extra
            for factorial in (False, True):
                tag = " factorial" if factorial else ""

                def jt_check(lam=lam, n=n, cap=cap, factorial=factorial):
                    got = jacobi_trudi_schur(lam, n, factorial, cap)
                    want = eval_family(FamilySpec(
                        "s_kl", lam, n, Fa, factorial=factorial, cap=cap))
                    return got == want.truncated(cap, got.pcap), ""
                _case(results, "jacobi-trudi lam=%s n=%d%s" % (lam, n, tag),
                      jt_check)

                def gd_check(lam=lam, n=n, cap=cap, factorial=factorial):
                    got = grothendieck_det(lam, n, factorial, cap)
                    want = eval_family(FamilySpec(
                        "s_kl", lam, n, Fm, factorial=factorial, cap=cap))
                    return got == want.truncated(cap, got.pcap), ""
                _case(results, "grothendieck det lam=%s n=%d%s"
                      % (lam, n, tag), gd_check)

        for nu in strict_partitions_up_to_weight(max_q_weight, min(3, n)):
            cap = nu.weight + n + cap_extra
            for factorial in (False, True):
                tag = " factorial" if factorial else ""

                def qpf_check(nu=nu, n=n, cap=cap, factorial=factorial):
                    got = q_pfaffian(nu, n, factorial, cap)
                    want = eval_family(FamilySpec(
                        "q", nu, n, Fa, factorial=factorial, cap=cap))
                    return got == want.truncated(cap, got.pcap), ""
                _case(results, "q pfaffian nu=%s n=%d%s" % (nu, n, tag),
                      qpf_check)

                def gqpf_check(nu=nu, n=n, cap=cap, factorial=factorial):
                    got = gq_pfaffian(nu, n, factorial, cap)
                    want = eval_family(FamilySpec(
                        "q", nu, n, Fm, factorial=factorial, cap=cap))
                    return got == want.truncated(cap, got.pcap), ""
                _case(results, "gq pfaffian nu=%s n=%d%s" % (nu, n, tag),
                      gqpf_check)
    return results


# ---------------------------------------------------------------------------
# 7. Segre identities
# ---------------------------------------------------------------------------


def suite_segre(k_max=5, n_max=3, **_):
    results = []
    for F in _lawset(("additive", "multiplicative", "universal", "custom")):
        for n in range(1, n_max + 1):
            for k in range(1, k_max + 1):
                def run(F=F, n=n, k=k):
                    cap = k + n + 2
                    seg = segre_series(range(1, n + 1), F, cap)
                    skl = eval_family(FamilySpec(
                        "s_kl", Partition([k]), n, F, cap=cap))
                    return seg.coefficient_at((-k,)) == skl, ""
                _case(results, "one-row s_kl(%d) = Segre class, n=%d, %s"
                      % (k, n, F.kind), run)
    Fm = FormalGroupLaw.multiplicative()
    Fu = FormalGroupLaw.universal()

    def degenerate_empty():
        cap = 6
        rel = relative_segre(range(1, 3), (), Fu, cap)
        seg = segre_series(range(1, 3), Fu, cap)
        ok = all(rel.coefficient_at((e,)) == seg.coefficient_at((e,))
                 for e in range(-cap, 3))
        return ok, ""
    _case(results, "relative Segre with empty second bundle", degenerate_empty)

    def degenerate_equal():
        # S(E - E) = 1/P(u^{-1}) = l'(u): bucket +k holds the z^k
        # coefficient of the logarithm derivative (an m-polynomial).
        cap = 6
        rel = relative_segre(range(1, 3), range(1, 3), Fu, cap)
        lder = Fu.log_derivative(X(9), cap)
        want = {}
        for mono, c in lder.terms.items():
            rest = []
            e = 0
            for vid, exp in mono_pairs(mono):
                if vid == X(9):
                    e = exp
                else:
                    rest.append((vid, exp))
            key = (e,)
            cur = want.get(key, TruncSeries.zero(cap))
            want[key] = cur + TruncSeries.monomial(rest, c, cap)
        got = {e: s for e, s in rel.terms.items() if not s.is_zero()}
        want = {e: s for e, s in want.items() if not s.is_zero()}
        return (set(got) == set(want)
                and all(got[e] == want[e] for e in got)), ""
    _case(results, "relative Segre of E - E is 1/P", degenerate_equal)

    def relative_matches_deformed(k=2, n=2, cap=6):
        rel = relative_segre(range(1, n + 1), range(n + 1, n + 1 + k),
                             Fm, cap)
        sub = {X(n + j): Fm.formal_inverse(b(j, cap, cap))
               for j in range(1, k + 1)}
        table = one_row_series("G", k, n, True, None, cap)
        ok = True
        for mm in range(-k - 1, cap + 1):
            got = rel.coefficient_at((-mm,)).substitute(sub)
            want = table.get(mm, TruncSeries.zero(cap, cap))
            ok = ok and got == want.truncated(cap, got.pcap)
        return ok, ""
    _case(results, "relative Segre matches deformed one-row family",
          relative_matches_deformed)
    return results


# ---------------------------------------------------------------------------
# 8. relation between the full-sum and coset families
# ---------------------------------------------------------------------------


def suite_s_uf_relation(max_weight=3, n=3, cap=7, **_):
    results = []
    Fu = FormalGroupLaw.universal()
    for lam in partitions_up_to_weight(max_weight, n):
        def run(lam=lam):
            spec = FamilySpec("s_uf", lam, n, Fu, factorial=True, cap=cap)
            want = eval_family(spec)
            r = lam.length
            pcap = spec.pcap
            work = cap + n * (n - 1) // 2
            from .symfun import factorial_power
            num = TruncSeries.const(1, work, pcap)
            for i in range(1, r + 1):
                num = num * factorial_power(i, lam[i - 1] - i + n, Fu, True,
                                            cap=work, pcap=pcap)
            tail_n = n - r
            empty = eval_family(FamilySpec("s_uf", Partition([]), tail_n, Fu,
                                           factorial=True, cap=work,
                                           pcap=pcap)) \
                if tail_n > 0 else TruncSeries.const(1, work, pcap)
            shifted = empty.substitute(
                {X(i): x(i + r, work, pcap) for i in range(1, tail_n + 1)})
            got = gysin_symmetrize(num * shifted, n, r, Fu)
            return got.truncated(cap, pcap) == want, ""
        _case(results, "s_uf via coset relation lam=%s" % (lam,), run)
    return results


# ---------------------------------------------------------------------------
# 9. determinism of the CLI
# ---------------------------------------------------------------------------


def suite_determinism(**_):
    import subprocess
    import sys
    results = []

    def run():
        argv = [sys.executable, "-m", "fglsym.cli", "compute",
                "--family", "hq", "--lambda", "2,1", "--n", "3",
                "--fgl", "universal", "--factorial", "--route",
                "symmetrizer", "--out", "json"]
        outs = []
        for threads in ("1", "4"):
            env = dict(__import__("os").environ, SYMFUN_THREADS=threads)
            proc = subprocess.run(argv, capture_output=True, env=env)
            if proc.returncode != 0:
                return False, proc.stderr.decode()[:200]
            outs.append(proc.stdout)
        return outs[0] == outs[1], ""
    _case(results, "byte-identical output across thread counts", run)
    return results


SUITES = {
    "fgl-axioms": suite_fgl_axioms,
    "route-equivalence": suite_route_equivalence,
    "dp": suite_dp,
    "examples": suite_examples,
    "specializations": suite_specializations,
    "closed-forms": suite_closed_forms,
    "segre": suite_segre,
    "s-uf-relation": suite_s_uf_relation,
    "determinism": suite_determinism,
}


def suite_names():
    return list(SUITES)


def run_suite(name, **params):
    if name == "all":
        out = []
        for nm in SUITES:
            out.extend(run_suite(nm, **params))
        return out
    if name == "gf-vs-symmetrizer":
        name = "route-equivalence"
    if name not in SUITES:
        raise ValueError("unknown suite %r (choose from %s)"
                         % (name, ", ".join(SUITES)))
    return SUITES[name](**params)
