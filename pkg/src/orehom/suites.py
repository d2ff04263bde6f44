"""Verification suites over a parsed scenario and the report they produce."""

from __future__ import annotations

import hashlib
import json
import time
from fractions import Fraction
from typing import Any, Callable, Iterator

from . import __version__
from . import linalg as la
from .algebra import FDAlgebra, RightModule, simple_modules
from .bimodule import certify_bimodule_resolution
from .catalogue import base_module_candidates, ore_modules_for, seminorm_weights, ses_fixtures
from .checks import Check
from .cone import cone_ext, induced_ext, retraction_check, upper_bound_check
from .differentials import derivation_check, exactness_check, induced_sequence_check
from .homology import Dimension, Resolution, bidim, ext_dims, gldim, subadditivity_check, twist_invariance_check
from .ore import (
    OreModule,
    OreSignature,
    check_ore_module,
    module_action_check,
    opposite_iso_check,
    ring_axioms_check,
)
from .rng import Rng
from .scenario import SUITES, Scenario, fmt_rational
from .topology import (
    Seminorm,
    check_tempered,
    crossed_algebra_check,
    crossed_estimate_check,
    holo_suite,
    localizability_constant,
    seminorm_axioms_check,
    submultiplicativity_check,
    unit_split_stable,
)


def jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return fmt_rational(x)
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Dimension):
        return x.as_json()
    return repr(x)


class Context:
    """Scenario plus derived fixtures; every case draws from its own forked stream."""

    def __init__(self, sc: Scenario):
        self.sc = sc
        p = sc.parameters
        self.trials, self.max_degree, self.max_k = p["trials"], p["max_degree"], p["max_k"]
        self.seed = p["seed"]
        self._fixtures: dict[str, list[OreModule]] = {}
        self._bases: dict[str, list[RightModule]] = {}

    def rng(self, key: str) -> Rng:
        return Rng(self.seed).fork(key)

    def ore_fixtures(self, sig: OreSignature) -> list[OreModule]:
        if sig.name not in self._fixtures:
            given = [m for m in self.sc.ore_modules.values() if m.sig is sig]
            self._fixtures[sig.name] = given + ore_modules_for(sig)
        return self._fixtures[sig.name]

    def base_modules(self, a: FDAlgebra) -> list[RightModule]:
        if a.name not in self._bases:
            given = [m for m in self.sc.modules.values() if m.algebra is a]
            self._bases[a.name] = given + base_module_candidates(a)
        return self._bases[a.name]

    def family(self, a: FDAlgebra) -> list[Seminorm]:
        given = [s for s in self.sc.seminorms.values() if s.algebra is a]
        if given:
            return given
        return [Seminorm(a, w, f"{a.name}:w{i}") for i, w in enumerate(seminorm_weights(a))]


Case = tuple[str, Callable[[], Check]]


# ------------------------------------------------------------------ suites


def ore_axioms_cases(ctx: Context) -> Iterator[Case]:
    for name, sig in ctx.sc.signatures.items():
        yield f"{name}/signature", sig.check
        yield f"{name}/ring", lambda sig=sig, name=name: ring_axioms_check(
            sig, ctx.rng(f"ring:{name}"), 2 * ctx.trials, ctx.max_degree)
        for m in ctx.ore_fixtures(sig):
            def run(m=m, name=name):
                chk = check_ore_module(m)
                chk.merge(module_action_check(m, ctx.rng(f"module:{name}:{m.name}"), max(ctx.trials // 4, 1),
                                              min(ctx.max_degree, 3)))
                return chk
            yield f"{name}/module/{m.name}", run


def iso3_cases(ctx: Context) -> Iterator[Case]:
    for name, sig in ctx.sc.signatures.items():
        if sig.alpha.invertible:
            yield f"{name}", lambda sig=sig, name=name: opposite_iso_check(
                sig, ctx.rng(f"iso3:{name}"), 2 * ctx.trials, ctx.max_degree)


def differentials_cases(ctx: Context) -> Iterator[Case]:
    for name, sig in ctx.sc.signatures.items():
        yield f"{name}/exactness", lambda sig=sig, name=name: exactness_check(
            sig, ctx.rng(f"exact:{name}"), ctx.trials, ctx.max_degree)
        yield f"{name}/derivation", lambda sig=sig, name=name: derivation_check(
            sig, ctx.rng(f"deriv:{name}"), ctx.trials, ctx.max_degree)
        for m in ctx.ore_fixtures(sig):
            yield f"{name}/induced/{m.name}", lambda m=m, name=name: induced_sequence_check(
                m, ctx.rng(f"induced:{name}:{m.name}"), max(ctx.trials // 10, 1), min(ctx.max_degree, 3))


def seminorm_cases(ctx: Context) -> Iterator[Case]:
    grid = ctx.sc.rationals("rho_grid")
    for a in ctx.sc.algebras.values():
        for s in ctx.family(a):
            def run(s=s):
                chk = seminorm_axioms_check(s, ctx.rng(f"axioms:{s.label}"), ctx.trials)
                chk.merge(submultiplicativity_check(s, ctx.rng(f"submult:{s.label}"), ctx.trials))
                return chk
            yield f"{a.name}/{s.label}", run
    for name, sig in ctx.sc.signatures.items():
        def constants(sig=sig):
            chk = Check(f"localizability constants {sig.name}")
            ops = {"alpha": sig.alpha.matrix, "delta": sig.delta.matrix}
            if sig.alpha.invertible:
                ops["alpha^-1"] = sig.alpha.inverse_matrix
            chk.details = {s.label: {k: localizability_constant(op, s) for k, op in ops.items()}
                           for s in ctx.family(sig.base)}
            return chk
        yield f"{name}/constants", constants
        yield f"{name}/holomorphic", lambda sig=sig, name=name: holo_suite(
            sig, ctx.family(sig.base), ctx.rng(f"holo:{name}"), ctx.trials, ctx.sc.parameters["holo_degree"], grid)


def bounds_cases(ctx: Context) -> Iterator[Case]:
    K = ctx.max_k
    for a in ctx.sc.algebras.values():
        def baseline(a=a):
            chk = Check(f"baselines {a.name}")
            chk.details = {"gldim": gldim(a, K), "bidim": bidim(a, K)}
            for s in simple_modules(a):
                plain, padded = padded_ext_pair(s, K)
                chk.record(plain == padded, ("padding changed Ext", s.name, plain, padded))
            return chk
        yield f"{a.name}/baseline", baseline
    for name, sig in ctx.sc.signatures.items():
        g = gldim(sig.base, K)
        fixtures = ctx.ore_fixtures(sig)
        if not g.capped:
            for m in fixtures:
                yield f"{name}/upper/{m.name}", lambda m=m: upper_bound_check(m, fixtures, K, D=2)
            yield f"{name}/lower", lambda sig=sig, g=g: lower_bound_witness(ctx, sig, g.value)
        if _is_koszul(sig):
            yield f"{name}/koszul", lambda sig=sig: koszul_check(sig, K)
        b = bidim(sig.base, K)
        if not b.capped and not sig.laurent and not sig.opposite:
            def bimodule(sig=sig, b=b):
                chk = certify_bimodule_resolution(sig, ctx.sc.parameters["truncation"], ctx.seed)
                chk.record(chk.details["length"] == b.value + 1, ("length", chk.details["length"], b.value + 1))
                return chk
            yield f"{name}/bimodule", bimodule


def padded_ext_pair(s: RightModule, max_k: int) -> tuple[list[int], list[int]]:
    return ext_dims(Resolution(s), s, max_k), ext_dims(Resolution(s, pad=2, seed=7), s, max_k)


def _is_koszul(sig: OreSignature) -> bool:
    return sig.base.dim == 1 and sig.kind == "polynomial" and sig.delta.is_zero and sig.alpha.matrix[0][0] == 1


def koszul_check(sig: OreSignature, max_k: int) -> Check:
    """Trivial module over k[t]: Ext is (1, 1, 0, ...)."""
    chk = Check(f"koszul {sig.name}")
    s0 = OreModule(sig, simple_modules(sig.base)[0], la.zeros(1, 1), name="S0")
    dims = cone_ext(s0, s0, max_k)
    chk.details = {"ext": dims}
    chk.record(dims == [1, 1] + [0] * (max_k - 1), dims)
    return chk


def lower_bound_witness(ctx: Context, sig: OreSignature, g: int) -> Check:
    chk = Check(f"lower bound {sig.name}")
    for m in ctx.base_modules(sig.base):
        for n in ctx.ore_fixtures(sig):
            dims = induced_ext(m, n, g)
            if dims[g]:
                chk.details = {"g": g, "M": m.name, "N": n.name, "ext": dims}
                chk.merge(retraction_check(m, sig))
                return chk
    chk.record(False, ("no module pair with nonzero Ext", g))
    return chk


def subadditivity_cases(ctx: Context) -> Iterator[Case]:
    for a in ctx.sc.algebras.values():
        for ses in ses_fixtures(a):
            yield f"{ses.name}", lambda ses=ses: subadditivity_check(ses, ctx.max_k)


def twist_cases(ctx: Context) -> Iterator[Case]:
    for alpha_name, alpha in ctx.sc.morphisms.items():
        if not alpha.invertible:
            continue
        for m in ctx.base_modules(alpha.source):
            yield f"{alpha_name}/{m.name}", lambda m=m, alpha=alpha: twist_invariance_check(m, alpha, ctx.max_k)


def retraction_cases(ctx: Context) -> Iterator[Case]:
    for name, sig in ctx.sc.signatures.items():
        for m in ctx.base_modules(sig.base):
            yield f"{name}/{m.name}", lambda m=m, sig=sig: retraction_check(m, sig)


def crossed_cases(ctx: Context) -> Iterator[Case]:
    ks = ctx.sc.parameters["k_grid"]
    radius = ctx.sc.parameters["support_radius"]
    for name, entry in ctx.sc.actions.items():
        act = entry.action
        family = ctx.family(act.algebra)

        def tempered(entry=entry, family=family):
            rep = check_tempered(entry.action, family)
            chk = Check(f"tempered {entry.name}")
            chk.details = {"given_p": rep.given_ok, "tempered": rep.passed, "expected": entry.expect_tempered,
                           "suggestion": None if rep.suggestion is None
                           else {"C": rep.suggestion[0], "m": rep.suggestion[1]},
                           "witness": rep.witness}
            chk.record(rep.passed == entry.expect_tempered, ("unexpected verdict", rep.passed))
            return chk

        yield f"{name}/tempered", tempered
        yield f"{name}/algebra", lambda act=act, name=name: crossed_algebra_check(
            act, ctx.rng(f"crossed:{name}"), 2 * ctx.trials)
        if entry.expect_tempered:
            yield f"{name}/estimates", lambda act=act, name=name, family=family: crossed_estimate_check(
                act, family, ctx.rng(f"estimates:{name}"), max(ctx.trials // 2, 1), radius, ks,
                unit_factor=not unit_split_stable(act, family))


SUITE_CASES: dict[str, Callable[[Context], Iterator[Case]]] = {
    "ore-axioms": ore_axioms_cases,
    "iso3": iso3_cases,
    "differentials": differentials_cases,
    "seminorms": seminorm_cases,
    "bounds": bounds_cases,
    "subadditivity": subadditivity_cases,
    "twist": twist_cases,
    "retraction": retraction_cases,
    "crossed": crossed_cases,
}
assert set(SUITE_CASES) == set(SUITES)


# ------------------------------------------------------------------ report


def run(sc: Scenario, text: str = "", suites: list[str] | None = None) -> dict:
    """Execute the requested suites (default: the scenario's list) and build the report."""
    ctx = Context(sc)
    chosen = sorted(set(suites or sc.suites))
    cases, timing = [], {}
    start = time.perf_counter()
    for suite in chosen:
        t0 = time.perf_counter()
        for key, fn in SUITE_CASES[suite](ctx):
            chk = fn()
            cases.append({
                "key": f"{suite}/{key}",
                "suite": suite,
                "check": chk.name,
                "pass": bool(chk.passed),
                "samples": chk.samples,
                "details": jsonable(chk.details),
                "witnesses": jsonable(chk.failures),
            })
        timing[suite] = round(time.perf_counter() - t0, 3)
    timing["total"] = round(time.perf_counter() - start, 3)
    cases.sort(key=lambda c: c["key"])
    failed = [c["key"] for c in cases if not c["pass"]]
    return {
        "engine": "orehom",
        "version": __version__,
        "scenario": sc.name,
        "scenario_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "seed": ctx.seed,
        "parameters": jsonable(sc.parameters),
        "suites": chosen,
        "cases": cases,
        "summary": {"total": len(cases), "passed": len(cases) - len(failed), "failed": failed},
        "passed": not failed,
        "timing": timing,
    }


def without_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


def emit_report(report: dict, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    lines = [f"orehom {report['version']}  scenario={report['scenario'] or '-'}  seed={report['seed']}"]
    for c in report["cases"]:
        lines.append(f"{'PASS' if c['pass'] else 'FAIL'}  {c['key']}  ({c['samples']} samples)")
        for w in c["witnesses"]:
            lines.append(f"      witness: {json.dumps(w, ensure_ascii=False)}")
    s = report["summary"]
    lines.append(f"{s['passed']}/{s['total']} cases passed in {report['timing']['total']}s")
    return "\n".join(lines) + "\n"
