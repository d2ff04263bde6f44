"""JSON scenarios: schema validation, object graph construction and canonical emission.

Rationals travel as ``"p/q"`` strings (plain integers are accepted on input).
Syntax errors carry line and column; everything else carries the JSON path
of the offending value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any

import jsonschema

from . import linalg as la
from .algebra import (
    AlgebraMorphism,
    FDAlgebra,
    RightModule,
    SigmaDerivation,
    check_algebra,
    check_alpha_derivation,
)
from .ore import OreModule, OreSignature, check_ore_module
from .topology import Seminorm, TemperedAction

SUITES = ("differentials", "seminorms", "bounds", "subadditivity", "twist", "retraction",
          "ore-axioms", "iso3", "crossed")

DEFAULTS: dict[str, Any] = {
    "max_degree": 4,
    "max_k": 6,
    "trials": 100,
    "seed": 0,
    "holo_degree": 12,
    "support_radius": 8,
    "truncation": 4,
    "rho_grid": ["1/2", "1", "2"],
    "k_grid": [0, 1, 2, 3],
}


class ScenarioError(ValueError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message, self.path, self.line, self.column = message, path, line, column

    def __str__(self) -> str:
        if self.line is not None:
            return f"line {self.line}, column {self.column}: {self.message}"
        if self.path is not None:
            return f"{self.path}: {self.message}"
        return self.message


def data_text(name: str) -> str:
    return resources.files("orehom").joinpath("data", name).read_text(encoding="utf-8")


def load_schema(name: str) -> dict:
    return json.loads(data_text(name))


def json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def fmt_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _rational(x, path: str) -> Fraction:
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"not a rational: {x!r}", path) from exc


@dataclass
class ActionSpec:
    name: str
    action: TemperedAction
    expect_tempered: bool = True


@dataclass
class Scenario:
    name: str = ""
    algebras: dict[str, FDAlgebra] = field(default_factory=dict)
    morphisms: dict[str, AlgebraMorphism] = field(default_factory=dict)
    derivations: dict[str, SigmaDerivation] = field(default_factory=dict)
    signatures: dict[str, OreSignature] = field(default_factory=dict)
    modules: dict[str, RightModule] = field(default_factory=dict)
    ore_modules: dict[str, OreModule] = field(default_factory=dict)
    seminorms: dict[str, Seminorm] = field(default_factory=dict)
    actions: dict[str, ActionSpec] = field(default_factory=dict)
    suites: list[str] = field(default_factory=list)
    parameters: dict[str, Any] = field(default_factory=lambda: dict(DEFAULTS))

    def rationals(self, key: str) -> list[Fraction]:
        return [Fraction(x) for x in self.parameters[key]]


# ------------------------------------------------------------------ parse


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    validator = jsonschema.Draft202012Validator(load_schema("scenario.schema.json"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = errors[0]
        raise ScenarioError(err.message, json_path(err.absolute_path))
    return _Builder(doc).build()


class _Builder:
    def __init__(self, doc: dict):
        self.doc = doc
        self.sc = Scenario(name=doc.get("name", ""))

    def _lookup(self, table: dict, name: str, kind: str, path: str):
        if name not in table:
            raise ScenarioError(f"unknown {kind} {name!r}", path)
        return table[name]

    def _element(self, a: FDAlgebra, entry: dict, path: str) -> tuple:
        v = [Fraction(0)] * a.dim
        for lab, c in entry.items():
            if lab not in a.labels:
                raise ScenarioError(f"{lab!r} is not a basis element of {a.name}", f"{path}.{lab}")
            v[a.labels.index(lab)] = _rational(c, f"{path}.{lab}")
        return tuple(v)

    def _matrix(self, rows: list, n: int, path: str) -> la.Matrix:
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ScenarioError(f"expected a {n}x{n} matrix", path)
        return [[_rational(x, f"{path}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]

    def build(self) -> Scenario:
        d, sc = self.doc, self.sc
        for name, entry in d.get("algebras", {}).items():
            sc.algebras[name] = self.algebra(name, entry, f"$.algebras.{name}")
        for name, entry in d.get("morphisms", {}).items():
            sc.morphisms[name] = self.morphism(name, entry, f"$.morphisms.{name}")
        for name, entry in d.get("derivations", {}).items():
            sc.derivations[name] = self.derivation(name, entry, f"$.derivations.{name}")
        for name, entry in d.get("signatures", {}).items():
            sc.signatures[name] = self.signature(name, entry, f"$.signatures.{name}")
        for name, entry in d.get("modules", {}).items():
            sc.modules[name] = self.module(name, entry, f"$.modules.{name}")
        for name, entry in d.get("ore_modules", {}).items():
            sc.ore_modules[name] = self.ore_module(name, entry, f"$.ore_modules.{name}")
        for name, entry in d.get("seminorms", {}).items():
            sc.seminorms[name] = self.seminorm(name, entry, f"$.seminorms.{name}")
        for name, entry in d.get("actions", {}).items():
            sc.actions[name] = self.action(name, entry, f"$.actions.{name}")
        sc.suites = list(d.get("suites", []))
        params = dict(DEFAULTS)
        params.update(d.get("parameters", {}))
        for i, x in enumerate(params["rho_grid"]):
            if _rational(x, f"$.parameters.rho_grid[{i}]") <= 0:
                raise ScenarioError("radii must be positive", f"$.parameters.rho_grid[{i}]")
        params["rho_grid"] = [fmt_rational(Fraction(x)) for x in params["rho_grid"]]
        sc.parameters = params
        return sc

    def algebra(self, name: str, entry: dict, path: str) -> FDAlgebra:
        labels = entry["basis"]
        if len(set(labels)) != len(labels):
            raise ScenarioError("duplicate basis labels", f"{path}.basis")
        products: dict = {}
        for i, (x, y, res) in enumerate(entry["products"]):
            for lab in (x, y, *res):
                if lab not in labels:
                    raise ScenarioError(f"{lab!r} is not a basis element of {name}", f"{path}.products[{i}]")
            if (x, y) in products:
                raise ScenarioError(f"product {x}*{y} given twice", f"{path}.products[{i}]")
            products[(x, y)] = {c: _rational(v, f"{path}.products[{i}]") for c, v in res.items()}
        for lab in entry["unit"]:
            if lab not in labels:
                raise ScenarioError(f"{lab!r} is not a basis element of {name}", f"{path}.unit")
        a = FDAlgebra.from_products(labels, products, {k: _rational(v, f"{path}.unit") for k, v in entry["unit"].items()},
                                    name=name)
        chk = check_algebra(a)
        if not chk:
            raise ScenarioError(f"not a unital associative algebra: {chk.failures[0]}", path)
        return a

    def morphism(self, name: str, entry: dict, path: str) -> AlgebraMorphism:
        a = self._lookup(self.sc.algebras, entry["algebra"], "algebra", f"{path}.algebra")
        cols = []
        for lab in entry["images"]:
            if lab not in a.labels:
                raise ScenarioError(f"{lab!r} is not a basis element of {a.name}", f"{path}.images")
        for lab in a.labels:
            cols.append(self._element(a, entry["images"].get(lab, {}), f"{path}.images.{lab}"))
        phi = AlgebraMorphism(a, a, la.from_columns(cols, a.dim), name)
        chk = phi.check()
        if not chk:
            raise ScenarioError(f"not an algebra morphism: {chk.failures[0]}", path)
        return phi

    def derivation(self, name: str, entry: dict, path: str) -> SigmaDerivation:
        alpha = self._lookup(self.sc.morphisms, entry["alpha"], "morphism", f"{path}.alpha")
        a = alpha.source
        flavor = entry.get("flavor", "standard")
        if "inner" in entry:
            if flavor != "standard":
                raise ScenarioError("inner derivations are standard", f"{path}.flavor")
            d = SigmaDerivation.inner(alpha, self._element(a, entry["inner"], f"{path}.inner"), name)
        else:
            for lab in entry["images"]:
                if lab not in a.labels:
                    raise ScenarioError(f"{lab!r} is not a basis element of {a.name}", f"{path}.images")
            cols = [self._element(a, entry["images"].get(lab, {}), f"{path}.images.{lab}") for lab in a.labels]
            d = SigmaDerivation(a, alpha, la.from_columns(cols, a.dim), flavor, name)
        chk = check_alpha_derivation(d)
        if not chk:
            raise ScenarioError(f"twisted Leibniz rule fails at {chk.failures[0]}", path)
        return d

    def signature(self, name: str, entry: dict, path: str) -> OreSignature:
        alpha = self._lookup(self.sc.morphisms, entry["alpha"], "morphism", f"{path}.alpha")
        kind = entry.get("kind", "polynomial")
        if entry.get("delta") is None:
            delta = SigmaDerivation.zero(alpha, "opposite" if kind.startswith("opposite") else "standard")
        else:
            delta = self._lookup(self.sc.derivations, entry["delta"], "derivation", f"{path}.delta")
            if delta.alpha is not alpha:
                raise ScenarioError(f"derivation {delta.name!r} is twisted by {delta.alpha.name!r}, not {alpha.name!r}",
                                    f"{path}.delta")
        try:
            return OreSignature(alpha.source, alpha, delta, kind, name)
        except ValueError as exc:
            raise ScenarioError(str(exc), path) from exc

    def module(self, name: str, entry: dict, path: str) -> RightModule:
        a = self._lookup(self.sc.algebras, entry["algebra"], "algebra", f"{path}.algebra")
        n = entry["dim"]
        missing = [lab for lab in a.labels if lab not in entry["action"]]
        extra = [lab for lab in entry["action"] if lab not in a.labels]
        if missing or extra:
            raise ScenarioError(f"action must list exactly {list(a.labels)}", f"{path}.action")
        acts = tuple(self._matrix(entry["action"][lab], n, f"{path}.action.{lab}") for lab in a.labels)
        m = RightModule(a, n, acts, name)
        chk = m.check()
        if not chk:
            raise ScenarioError(f"not a right module: {chk.failures[0]}", path)
        return m

    def ore_module(self, name: str, entry: dict, path: str) -> OreModule:
        sig = self._lookup(self.sc.signatures, entry["signature"], "signature", f"{path}.signature")
        mod = self._lookup(self.sc.modules, entry["module"], "module", f"{path}.module")
        if mod.algebra is not sig.base:
            raise ScenarioError(f"module {mod.name!r} is not over {sig.base.name}", f"{path}.module")
        try:
            m = OreModule(sig, mod, self._matrix(entry["T"], mod.dim, f"{path}.T"), name=name)
        except ValueError as exc:
            raise ScenarioError(str(exc), f"{path}.T") from exc
        chk = check_ore_module(m)
        if not chk:
            raise ScenarioError(f"t-action is not compatible: {chk.failures[0]}", f"{path}.T")
        return m

    def seminorm(self, name: str, entry: dict, path: str) -> Seminorm:
        a = self._lookup(self.sc.algebras, entry["algebra"], "algebra", f"{path}.algebra")
        w = tuple(_rational(x, f"{path}.weights") for x in entry["weights"])
        if len(w) != a.dim or any(x <= 0 for x in w):
            raise ScenarioError(f"need {a.dim} positive weights", f"{path}.weights")
        return Seminorm(a, w, name)

    def action(self, name: str, entry: dict, path: str) -> ActionSpec:
        alpha = self._lookup(self.sc.morphisms, entry["alpha1"], "morphism", f"{path}.alpha1")
        if not alpha.invertible:
            raise ScenarioError(f"{alpha.name!r} is not invertible", f"{path}.alpha1")
        poly = tuple(_rational(x, f"{path}.poly") for x in entry.get("poly", ["1"]))
        act = TemperedAction(alpha, poly, entry.get("check_range", 32))
        return ActionSpec(name, act, entry.get("expect_tempered", True))


# ------------------------------------------------------------------- emit


def _element_doc(a: FDAlgebra, v) -> dict:
    return {lab: fmt_rational(c) for lab, c in zip(a.labels, v) if c}


def _matrix_doc(m) -> list:
    return [[fmt_rational(x) for x in row] for row in m]


def scenario_document(sc: Scenario) -> dict:
    doc: dict[str, Any] = {"name": sc.name, "algebras": {}}
    for name, a in sc.algebras.items():
        products = []
        for i in range(a.dim):
            for j in range(a.dim):
                if any(a.structure[i][j]):
                    products.append([a.labels[i], a.labels[j], _element_doc(a, a.structure[i][j])])
        doc["algebras"][name] = {"basis": list(a.labels), "products": products, "unit": _element_doc(a, a.unit)}
    doc["morphisms"] = {
        name: {"algebra": phi.source.name,
               "images": {lab: _element_doc(phi.source, col)
                          for lab, col in zip(phi.source.labels, la.columns(phi.matrix))}}
        for name, phi in sc.morphisms.items()
    }
    doc["derivations"] = {
        name: {"alpha": d.alpha.name, "flavor": d.flavor,
               "images": {lab: _element_doc(d.algebra, col) for lab, col in zip(d.algebra.labels, la.columns(d.matrix))}}
        for name, d in sc.derivations.items()
    }
    named = {id(d) for d in sc.derivations.values()}
    doc["signatures"] = {
        name: {"alpha": s.alpha.name, "delta": s.delta.name if id(s.delta) in named else None, "kind": s.kind}
        for name, s in sc.signatures.items()
    }
    doc["modules"] = {
        name: {"algebra": m.algebra.name, "dim": m.dim,
               "action": {lab: _matrix_doc(act) for lab, act in zip(m.algebra.labels, m.action)}}
        for name, m in sc.modules.items()
    }
    doc["ore_modules"] = {
        name: {"signature": m.sig.name, "module": m.base_module.name, "T": _matrix_doc(m.T)}
        for name, m in sc.ore_modules.items()
    }
    doc["seminorms"] = {
        name: {"algebra": s.algebra.name, "weights": [fmt_rational(w) for w in s.weights]}
        for name, s in sc.seminorms.items()
    }
    doc["actions"] = {
        name: {"alpha1": entry.action.alpha1.name, "poly": [fmt_rational(c) for c in entry.action.poly],
               "check_range": entry.action.check_range, "expect_tempered": entry.expect_tempered}
        for name, entry in sc.actions.items()
    }
    doc["suites"] = list(sc.suites)
    doc["parameters"] = dict(sc.parameters)
    return doc


def emit_scenario(sc: Scenario) -> str:
    return json.dumps(scenario_document(sc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
