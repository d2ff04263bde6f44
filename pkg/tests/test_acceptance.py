"""End-to-end acceptance criteria over the bundled catalogue.

Each test prints one ``PASS``/``FAIL criterion N`` line, then asserts.
"""

from fractions import Fraction

import pytest

from orehom.bimodule import certify_bimodule_resolution
from orehom.catalogue import ses_fixtures
from orehom.cone import upper_bound_check
from orehom.differentials import derivation_check, exactness_check
from orehom.homology import Dimension, bidim, gldim, subadditivity_check, twist_invariance_check
from orehom.ore import opposite_iso_check, ring_axioms_check
from orehom.scenario import data_text, parse_scenario
from orehom.suites import Context, koszul_check, lower_bound_witness, padded_ext_pair
from orehom.topology import (
    check_tempered,
    crossed_algebra_check,
    crossed_estimate_check,
    holo_suite,
)

MAX_K = 6


@pytest.fixture(scope="module")
def ctx():
    return Context(parse_scenario(data_text("catalogue.json")))


@pytest.fixture
def report(capsys):
    def emit(n: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}"
            print("\n" + line + (f" ({detail})" if detail else ""))
        assert ok, detail or title
    return emit


def finite_g(ctx, sig):
    g = gldim(sig.base, MAX_K)
    return None if g.capped else g.value


def test_criterion_01_ring_axioms(ctx, report):
    sigs = ctx.sc.signatures
    bad = [n for n, s in sigs.items() if not ring_axioms_check(s, ctx.rng(f"acc:ring:{n}"), 200, 4)]
    report(1, f"ring axioms on {len(sigs)} signatures x 200 triples", len(sigs) == 5 and not bad, ", ".join(bad))


def test_criterion_02_opposite_isomorphism(ctx, report):
    sigs = {n: s for n, s in ctx.sc.signatures.items() if s.alpha.invertible}
    bad = [n for n, s in sigs.items() if not opposite_iso_check(s, ctx.rng(f"acc:iso:{n}"), 200, 4)]
    report(2, f"opposite isomorphism on {len(sigs)} signatures", bool(sigs) and not bad, ", ".join(bad))


def test_criterion_03_differentials(ctx, report):
    bad = []
    for n, s in ctx.sc.signatures.items():
        if not exactness_check(s, ctx.rng(f"acc:exact:{n}"), 100, 4):
            bad.append(f"{n}/exactness")
        if not derivation_check(s, ctx.rng(f"acc:deriv:{n}"), 100, 4):
            bad.append(f"{n}/derivation")
    report(3, "differentials package", not bad, ", ".join(bad))


def test_criterion_04_baselines(ctx, report):
    a = ctx.sc.algebras
    got = {n: str(gldim(x, MAX_K)) for n, x in a.items()}
    want = {"Q": "0", "QxQ": "0", "T2": "1", "Qeps": "at-least-6"}
    bi = {n: bidim(a[n], MAX_K) for n in ("QxQ", "T2")}
    padded = all(p == q for x in a.values() for p, q in
                 [padded_ext_pair(s, MAX_K) for s in ctx.base_modules(x)])
    ok = got == want and bi == {"QxQ": Dimension(0), "T2": Dimension(1)} and padded
    shown = {k: str(v) for k, v in bi.items()}
    report(4, "gldim/bidim baselines and padding independence", ok, f"gldim={got} bidim={shown} padded={padded}")


def test_criterion_05_upper_bound(ctx, report):
    bad, count = [], 0
    for n, s in ctx.sc.signatures.items():
        if finite_g(ctx, s) is None:
            continue
        fixtures = ctx.ore_fixtures(s)
        for m in fixtures:
            count += 1
            chk = upper_bound_check(m, fixtures, MAX_K, D=2)
            if not chk:
                bad.append(f"{n}/{m.name}")
    report(5, f"cone Ext vanishes above g+1 for {count} fixtures", count > 0 and not bad, ", ".join(bad))


def test_criterion_06_lower_bound(ctx, report):
    bad, seen = [], []
    for n, s in ctx.sc.signatures.items():
        g = finite_g(ctx, s)
        if g is None:
            continue
        chk = lower_bound_witness(ctx, s, g)
        seen.append(f"{n}:g={g}")
        if not chk:
            bad.append(n)
    report(6, "Ext^g witnesses and retraction for " + ", ".join(seen), bool(seen) and not bad, ", ".join(bad))


def test_criterion_07_koszul(ctx, report):
    chk = koszul_check(ctx.sc.signatures["Q[t]"], MAX_K)
    report(7, f"Koszul desk check Ext = {chk.details['ext']}", bool(chk))


def test_criterion_08_twist_invariance(ctx, report):
    bad, count = [], 0
    for an, alpha in ctx.sc.morphisms.items():
        if not alpha.invertible:
            continue
        for m in ctx.base_modules(alpha.source):
            count += 1
            if not twist_invariance_check(m, alpha, MAX_K):
                bad.append(f"{an}/{m.name}")
    report(8, f"dh(M) = dh(M_alpha) on {count} pairs", count > 0 and not bad, ", ".join(bad))


def test_criterion_09_subadditivity(ctx, report):
    seqs = [q for n in ("T2", "Qeps") for q in ses_fixtures(ctx.sc.algebras[n])]
    radical = [q for q in seqs if "rad(" in q.name]
    bad = [q.name for q in seqs if not subadditivity_check(q, MAX_K)]
    ok = len(seqs) >= 20 and radical and not bad
    report(9, f"subadditivity on {len(seqs)} sequences ({len(radical)} radical)", bool(ok), ", ".join(bad))


def test_criterion_10_holomorphic(ctx, report):
    grid = [Fraction(1, 2), Fraction(1), Fraction(2)]
    bad, ratios = [], {}
    for n, s in ctx.sc.signatures.items():
        chk = holo_suite(s, ctx.family(s.base), ctx.rng(f"acc:holo:{n}"), 100, 12, grid)
        ratios[n] = chk.details["max_ratio"]
        if not chk:
            bad.append(n)
    report(10, "holomorphic estimates, worst lhs/rhs " + ", ".join(f"{k}={v}" for k, v in ratios.items()),
           not bad, ", ".join(bad))


def test_criterion_11_crossed_products(ctx, report):
    acts = ctx.sc.actions
    swap, double = acts["swap"].action, acts["double"].action
    fam = ctx.family(swap.algebra)
    parts = {
        "swap algebra": crossed_algebra_check(swap, ctx.rng("acc:crossed:swap"), 200, 3).passed,
        "conj algebra": crossed_algebra_check(acts["conj"].action, ctx.rng("acc:crossed:conj"), 200, 3).passed,
        "swap estimates": crossed_estimate_check(swap, fam, ctx.rng("acc:est:swap"), 50, 8, (0, 1, 2, 3)).passed,
        "swap tempered": check_tempered(swap, fam).given_ok,
        "doubling rejected": not check_tempered(double, ctx.family(double.algebra)).passed,
    }
    bad = [k for k, v in parts.items() if not v]
    report(11, "crossed products: " + ", ".join(parts), not bad, ", ".join(bad))


def test_criterion_12_bimodule_resolution(ctx, report):
    sig = ctx.sc.signatures["T2[t;conj,ad]"]
    chk = certify_bimodule_resolution(sig, 4)
    want = bidim(sig.base, MAX_K).value + 1
    ok = bool(chk) and chk.details["length"] == want == 2
    report(12, f"bimodule resolution length {chk.details['length']}, truncation dims {chk.details['dims'][4]}",
           ok, str(chk.failures[:3]))
