"""Standard algebras, Ore signatures and module fixtures used by the suites and tests."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import linalg as la
from .algebra import (
    AlgebraMorphism,
    FDAlgebra,
    RightModule,
    SigmaDerivation,
    direct_sum,
    free_module,
    inner_automorphism,
    quotient_module,
    radical,
    regular_module,
    restrict,
    simple_modules,
    submodule_span,
)
from .homology import ShortExactSequence
from .ore import OreModule, OreSignature, solve_t_actions


def rationals() -> FDAlgebra:
    return FDAlgebra.from_products(["1"], {("1", "1"): {"1": 1}}, {"1": 1}, name="Q")


def split_pair() -> FDAlgebra:
    """Q x Q with orthogonal idempotents e1, e2."""
    return FDAlgebra.from_products(
        ["e1", "e2"], {("e1", "e1"): {"e1": 1}, ("e2", "e2"): {"e2": 1}}, {"e1": 1, "e2": 1}, name="QxQ"
    )


def upper_triangular() -> FDAlgebra:
    """T2: upper triangular 2x2 matrices with matrix units e11, e12, e22."""
    products = {
        ("e11", "e11"): {"e11": 1},
        ("e11", "e12"): {"e12": 1},
        ("e12", "e22"): {"e12": 1},
        ("e22", "e22"): {"e22": 1},
    }
    return FDAlgebra.from_products(["e11", "e12", "e22"], products, {"e11": 1, "e22": 1}, name="T2")


def dual_numbers() -> FDAlgebra:
    """Q[eps]/(eps^2)."""
    products = {("1", "1"): {"1": 1}, ("1", "eps"): {"eps": 1}, ("eps", "1"): {"eps": 1}}
    return FDAlgebra.from_products(["1", "eps"], products, {"1": 1}, name="Qeps")


@lru_cache(maxsize=None)
def algebras() -> dict[str, FDAlgebra]:
    return {a.name: a for a in (rationals(), split_pair(), upper_triangular(), dual_numbers())}


def _identity_signature(a: FDAlgebra, name: str) -> OreSignature:
    alpha = AlgebraMorphism.identity(a)
    return OreSignature(a, alpha, SigmaDerivation.zero(alpha), "polynomial", name)


@lru_cache(maxsize=None)
def signatures() -> dict[str, OreSignature]:
    """The five verification signatures, keyed by name."""
    alg = algebras()
    q, qq, t2, qe = alg["Q"], alg["QxQ"], alg["T2"], alg["Qeps"]

    swap = AlgebraMorphism.from_images(qq, {"e1": {"e2": 1}, "e2": {"e1": 1}}, name="swap")
    u = t2.element({"e11": 1, "e12": 1, "e22": 1})
    u_inv = t2.element({"e11": 1, "e12": -1, "e22": 1})
    conj = inner_automorphism(t2, u, u_inv, name="conj")
    inner = SigmaDerivation.inner(conj, t2.element({"e12": 1}), name="ad_e12")
    neg = AlgebraMorphism.from_images(qe, {"1": {"1": 1}, "eps": {"eps": -1}}, name="neg")

    sigs = [
        _identity_signature(q, "Q[t]"),
        OreSignature(qq, swap, SigmaDerivation.zero(swap), "polynomial", "QxQ[t;swap]"),
        OreSignature(t2, conj, inner, "polynomial", "T2[t;conj,ad]"),
        OreSignature(qe, neg, SigmaDerivation.zero(neg), "polynomial", "Qeps[t;neg]"),
        OreSignature(qq, swap, SigmaDerivation.zero(swap), "laurent", "QxQ[t,t^-1;swap]"),
    ]
    return {s.name: s for s in sigs}


def koszul_signature() -> OreSignature:
    return signatures()["Q[t]"]


def doubling() -> AlgebraMorphism:
    """eps -> 2 eps on Q[eps]/(eps^2): an automorphism of infinite order with eigenvalue 2."""
    qe = algebras()["Qeps"]
    return AlgebraMorphism.from_images(qe, {"1": {"1": 1}, "eps": {"eps": 2}}, name="double")


def gldim_known() -> dict[str, int | None]:
    """Global dimensions of the base algebras (None for infinite)."""
    return {"Q": 0, "QxQ": 0, "T2": 1, "Qeps": None}


# ---------------------------------------------------------------- fixtures


def base_module_candidates(a: FDAlgebra) -> list[RightModule]:
    simples = simple_modules(a)
    mods = list(simples) + [regular_module(a)]
    if len(simples) > 1:
        mods.append(direct_sum(*simples))
    return mods


def t_action_candidates(sig: OreSignature, mod: RightModule) -> list[la.Matrix]:
    """A few compatible t-actions: the particular solution and its shifts by homogeneous solutions."""
    part, hom = solve_t_actions(sig, mod)
    if part is None:
        return []
    out = [part]
    for h in hom:
        out.append(la.add(part, h))
    if len(hom) > 1:
        total = part
        for h in hom:
            total = la.add(total, h)
        out.append(total)
    if sig.laurent:
        out = [t for t in out if la.inverse(t) is not None]
    seen, uniq = set(), []
    for t in out:
        key = tuple(map(tuple, t))
        if key not in seen:
            seen.add(key)
            uniq.append(t)
    return uniq


def ore_modules_for(sig: OreSignature, per_module: int = 2) -> list[OreModule]:
    """Simple, regular and semisimple base modules, each with up to ``per_module`` compatible t-actions."""
    out = []
    for mod in base_module_candidates(sig.base):
        for i, t in enumerate(t_action_candidates(sig, mod)[:per_module]):
            out.append(OreModule(sig, mod, t, name=f"{mod.name}/T{i}"))
    return out


@lru_cache(maxsize=None)
def ore_module_fixtures(sig_name: str) -> tuple[OreModule, ...]:
    return tuple(ore_modules_for(signatures()[sig_name]))


def seminorm_weights(a: FDAlgebra) -> list[tuple[Fraction, ...]]:
    """All-ones weights and a variant putting weight 2 on non-idempotent basis elements."""
    ones = tuple(Fraction(1) for _ in range(a.dim))
    heavy = tuple(
        Fraction(1) if a.structure[i][i] == a.basis(i) else Fraction(2) for i in range(a.dim)
    )
    return [ones] if heavy == ones else [ones, heavy]


# ------------------------------------------------------ exact sequences


def _radical_of_module(m: RightModule) -> list:
    """``M . rad(A)`` as a list of spanning vectors."""
    rad = radical(m.algebra)
    return [la.matvec(m.rho(r), la.unit_vector(m.dim, i)) for r in rad for i in range(m.dim)]


def sub_quotient_sequence(m: RightModule, vectors, name: str) -> ShortExactSequence:
    """``0 -> N -> M -> M/N -> 0`` with N generated by ``vectors``."""
    basis = submodule_span(m, vectors)
    sub = restrict(m, basis, f"{name}:sub")
    quo, proj = quotient_module(m, basis, f"{name}:quo")
    inc = la.from_columns(basis, m.dim) if basis else la.zeros(m.dim, 0)
    return ShortExactSequence(sub, m, quo, inc, proj, name)


def split_sequence(x: RightModule, y: RightModule, name: str) -> ShortExactSequence:
    n, k = x.dim, y.dim
    inc = [[la.ONE if i == j else la.ZERO for j in range(n)] for i in range(n + k)]
    proj = [[la.ONE if j == n + i else la.ZERO for j in range(n + k)] for i in range(k)]
    return ShortExactSequence(x, direct_sum(x, y), y, inc, proj, name)


def ses_fixtures(a: FDAlgebra) -> list[ShortExactSequence]:
    """Radical, sub/quotient and split sequences over ``a``."""
    simples = simple_modules(a)
    reg = regular_module(a)
    free2 = free_module(a, 2)
    big = direct_sum(reg, *simples)
    out = []
    for m in (reg, free2, big):
        out.append(sub_quotient_sequence(m, _radical_of_module(m), f"{a.name}:rad({m.name})"))
    for i in range(a.dim):
        out.append(sub_quotient_sequence(reg, [a.basis(i)], f"{a.name}:{a.labels[i]}A"))
    ones = tuple(la.ONE for _ in range(free2.dim))
    out.append(sub_quotient_sequence(free2, [ones], f"{a.name}:diag"))
    for i in range(2):
        v = la.unit_vector(big.dim, i)
        out.append(sub_quotient_sequence(big, [v], f"{a.name}:gen{i}({big.name})"))
    for s in simples:
        out.append(split_sequence(s, reg, f"{a.name}:{s.name}+reg"))
    out.append(split_sequence(reg, reg, f"{a.name}:reg+reg"))
    if len(simples) > 1:
        out.append(split_sequence(simples[0], simples[-1], f"{a.name}:{simples[0].name}+{simples[-1].name}"))
    return out
