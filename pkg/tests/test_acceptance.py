"""Acceptance suite: every criterion runs all of its cases at the
stated bounds with exact equality and prints one pass/fail line."""

import pytest

from fglsym.verify import run_suite


def _report(name, results):
    bad = [r for r in results if not r.ok]
    total = sum(r.seconds for r in results)
    print("%s: %s (%d cases, %.1fs)"
          % (name, "FAIL" if bad else "pass", len(results), total))
    for r in bad:
        print("  FAILED %s %s" % (r.case, r.detail))
    assert not bad, "%d failed cases in %s" % (len(bad), name)


def test_criterion_1_fgl_axioms():
    _report("1 formal-group-law axioms (cap 8, four laws)",
            run_suite("fgl-axioms", cap=8))


def test_criterion_2_route_equivalence():
    _report("2 symmetrizer = generating function (weight <= 4, n in {2,3}, "
            "three laws, deformed and plain)",
            run_suite("route-equivalence", max_weight=4, n_values=(2, 3)))


def test_criterion_3_pushforward_formula():
    _report("3 push-forward extraction = symmetrizer (exponents <= 3, "
            "n <= 3, cap 8)",
            run_suite("dp", max_exp=3, n_max=3, cap=8))


def test_criterion_4_worked_examples():
    _report("4 worked examples", run_suite("examples"))


def test_criterion_5_specializations():
    _report("5 specialization regressions (weight <= 4, n <= 3)",
            run_suite("specializations", max_weight=4, n_max=3))


def test_criterion_6_closed_forms():
    _report("6 determinant and Pfaffian closed forms (weight <= 5 / "
            "strict <= 6, n <= 4)",
            run_suite("closed-forms", max_weight=5, max_q_weight=6,
                      n_max=4))


def test_criterion_7_segre_identities():
    _report("7 Segre identities (k <= 5, n <= 3, four laws)",
            run_suite("segre", k_max=5, n_max=3))


def test_criterion_8_full_sum_relation():
    _report("8 full-sum family via the coset relation (weight <= 3, "
            "n = 3, cap 7)",
            run_suite("s-uf-relation", max_weight=3, n=3, cap=7))


def test_criterion_9_determinism():
    _report("9 deterministic output across thread counts",
            run_suite("determinism"))
