"""Skew polynomial rings over finite-dimensional algebras.

Standard kinds (``polynomial``, ``laurent``) store left coefficients,
``sum a_k t^k`` with ``t a = alpha(a) t + delta(a)``.  Opposite kinds
(``opposite-polynomial``, ``opposite-laurent``) store right coefficients,
``sum t^k a_k`` with ``a t = t alpha(a) + delta(a)``; for them the stored
``alpha``/``delta`` are the tilde maps.

Both cases share one operator recursion: ``N[n][k]`` moves an element of R
across ``t^n``, so ``t^n a = sum_k N[n][k](a) t^k`` (standard) and
``a t^n = sum_k t^k N[n][k](a)`` (opposite).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .algebra import AlgebraMorphism, FDAlgebra, RightModule, SigmaDerivation, check_alpha_derivation
from .checks import Check
from .linalg import Matrix, Vector
from .rng import Rng

KINDS = ("polynomial", "laurent", "opposite-polynomial", "opposite-laurent")


class SignatureMismatch(ValueError):
    pass


@dataclass(eq=False)
class OreSignature:
    base: FDAlgebra
    alpha: AlgebraMorphism
    delta: SigmaDerivation
    kind: str = "polynomial"
    name: str = ""
    _ops: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        want = "opposite" if self.opposite else "standard"
        if self.delta.flavor != want:
            raise ValueError(f"{self.kind} signature needs a {want} derivation")
        if self.laurent:
            if not self.delta.is_zero:
                raise ValueError("laurent kinds require delta = 0")
            if not self.alpha.invertible:
                raise ValueError("laurent kinds require an invertible alpha")

    @property
    def laurent(self) -> bool:
        return self.kind.endswith("laurent")

    @property
    def opposite(self) -> bool:
        return self.kind.startswith("opposite")

    @property
    def dim(self) -> int:
        return self.base.dim

    def check(self) -> Check:
        chk = self.alpha.check()
        chk.merge(check_alpha_derivation(self.delta))
        chk.name = f"signature {self.name}"
        return chk

    def rewrite(self, n: int, k: int) -> Matrix:
        """The operator ``N[n][k]`` (zero outside its support)."""
        if n < 0:
            if not self.laurent:
                raise SignatureMismatch("negative powers need a laurent kind")
            if k != n:
                return la.zeros(self.dim, self.dim)
            key = (n, n)
            if key not in self._ops:
                self._ops[key] = self.alpha.power(n).matrix
            return self._ops[key]
        if k < 0 or k > n:
            return la.zeros(self.dim, self.dim)
        key = (n, k)
        if key not in self._ops:
            if n == 0:
                self._ops[key] = la.identity(self.dim)
            else:
                a = la.matmul(self.alpha.matrix, self.rewrite(n - 1, k - 1)) if k >= 1 else None
                d = la.matmul(self.delta.matrix, self.rewrite(n - 1, k)) if k <= n - 1 else None
                if a is None:
                    self._ops[key] = d
                elif d is None:
                    self._ops[key] = a
                else:
                    self._ops[key] = la.add(a, d)
        return self._ops[key]

    def move(self, n: int, a: Sequence) -> dict[int, Vector]:
        """``{k: N[n][k](a)}`` without zero entries."""
        ks = [n] if n < 0 else range(n + 1)
        out = {}
        for k in ks:
            v = la.matvec(self.rewrite(n, k), a)
            if any(v):
                out[k] = v
        return out

    def __repr__(self) -> str:
        return f"OreSignature({self.name or '?'}, {self.kind})"


def rewrite_ops(sig: OreSignature, n: int) -> dict[int, Matrix]:
    if n < 0:
        return {n: sig.rewrite(n, n)}
    return {k: sig.rewrite(n, k) for k in range(n + 1)}


def opposite_signature(sig: OreSignature) -> OreSignature:
    """The right-coefficient presentation of the same ring: ``alpha^-1`` and ``-delta alpha^-1``."""
    if sig.opposite:
        raise ValueError("already an opposite signature")
    if not sig.alpha.invertible:
        raise ValueError(f"alpha of {sig.name or '?'} is not invertible")
    inv = sig.alpha.inverse()
    mat = la.scale(-1, la.matmul(sig.delta.matrix, inv.matrix))
    dt = SigmaDerivation(sig.base, inv, mat, "opposite", f"-{sig.delta.name}*{inv.name}")
    kind = "opposite-laurent" if sig.laurent else "opposite-polynomial"
    return OreSignature(sig.base, inv, dt, kind, f"{sig.name}~")


def _clean(coeffs: dict) -> dict:
    return {k: tuple(v) for k, v in sorted(coeffs.items()) if any(v)}


class OrePoly:
    """Finitely supported element of an Ore extension (see module docstring for the coefficient side)."""

    __slots__ = ("sig", "coeffs")

    def __init__(self, sig: OreSignature, coeffs: dict[int, Sequence] | None = None):
        coeffs = _clean(coeffs or {})
        if not sig.laurent and any(k < 0 for k in coeffs):
            raise SignatureMismatch("negative degree in a non-laurent signature")
        self.sig = sig
        self.coeffs = coeffs

    @classmethod
    def constant(cls, sig: OreSignature, a: Sequence) -> "OrePoly":
        return cls(sig, {0: a})

    @classmethod
    def one(cls, sig: OreSignature) -> "OrePoly":
        return cls(sig, {0: sig.base.unit})

    @classmethod
    def zero(cls, sig: OreSignature) -> "OrePoly":
        return cls(sig, {})

    @classmethod
    def monomial(cls, sig: OreSignature, a: Sequence, k: int) -> "OrePoly":
        return cls(sig, {k: a})

    @classmethod
    def t(cls, sig: OreSignature, k: int = 1) -> "OrePoly":
        return cls(sig, {k: sig.base.unit})

    def _same(self, other: "OrePoly"):
        if other.sig is not self.sig:
            raise SignatureMismatch(f"{self.sig!r} vs {other.sig!r}")

    def __add__(self, other: "OrePoly") -> "OrePoly":
        self._same(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = la.vadd(out[k], v) if k in out else v
        return OrePoly(self.sig, out)

    def __neg__(self) -> "OrePoly":
        return OrePoly(self.sig, {k: la.vscale(-1, v) for k, v in self.coeffs.items()})

    def __sub__(self, other: "OrePoly") -> "OrePoly":
        return self + (-other)

    def scale(self, c) -> "OrePoly":
        return OrePoly(self.sig, {k: la.vscale(c, v) for k, v in self.coeffs.items()})

    def __mul__(self, other: "OrePoly") -> "OrePoly":
        return ore_mul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, OrePoly) and other.sig is self.sig and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    @property
    def low_degree(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def coeff(self, k: int) -> Vector:
        return self.coeffs.get(k, self.sig.base.zero)

    def __repr__(self) -> str:
        base = self.sig.base
        if not self.coeffs:
            return "0"
        parts = []
        for k, v in self.coeffs.items():
            c = f"({base.format(v)})"
            parts.append(f"t^{k}{c}" if self.sig.opposite else f"{c}t^{k}")
        return " + ".join(parts)


def ore_mul(f: OrePoly, g: OrePoly) -> OrePoly:
    f._same(g)
    sig, base = f.sig, f.sig.base
    out: dict[int, Vector] = {}

    def acc(k, v):
        out[k] = la.vadd(out[k], v) if k in out else v

    if not sig.opposite:
        # a t^i . b t^j = sum_k a N[i][k](b) t^(k+j)
        for i, a in f.coeffs.items():
            for j, b in g.coeffs.items():
                for k, nb in sig.move(i, b).items():
                    acc(k + j, base.mul(a, nb))
    else:
        # t^i a . t^j b = sum_k t^(i+k) N[j][k](a) b
        for i, a in f.coeffs.items():
            for j, b in g.coeffs.items():
                for k, na in sig.move(j, a).items():
                    acc(i + k, base.mul(na, b))
    return OrePoly(sig, out)


def laurent_mul(f: OrePoly, g: OrePoly) -> OrePoly:
    if not f.sig.laurent:
        raise SignatureMismatch("laurent_mul needs a laurent signature")
    return ore_mul(f, g)


def to_opposite(f: OrePoly, target: OreSignature) -> OrePoly:
    """Rewrite ``sum a_k t^k`` into right normal form over ``target``."""
    if f.sig.opposite or not target.opposite:
        raise SignatureMismatch("to_opposite maps a standard signature to an opposite one")
    out: dict[int, Vector] = {}
    for k, a in f.coeffs.items():
        for m, v in target.move(k, a).items():
            out[m] = la.vadd(out[m], v) if m in out else v
    return OrePoly(target, out)


def from_opposite(f: OrePoly, target: OreSignature) -> OrePoly:
    """Inverse of :func:`to_opposite`: ``t^m b = sum_k N[m][k](b) t^k``."""
    if not f.sig.opposite or target.opposite:
        raise SignatureMismatch("from_opposite maps an opposite signature to a standard one")
    out: dict[int, Vector] = {}
    for m, b in f.coeffs.items():
        for k, v in target.move(m, b).items():
            out[k] = la.vadd(out[k], v) if k in out else v
    return OrePoly(target, out)


def random_poly(sig: OreSignature, rng: Rng, max_degree: int = 4, terms: int | None = None) -> OrePoly:
    lo = -max_degree if sig.laurent else 0
    degrees = list(range(lo, max_degree + 1))
    count = terms if terms is not None else rng.between(1, min(len(degrees), 4))
    coeffs = {}
    for _ in range(count):
        coeffs[rng.choice(degrees)] = rng.vector(sig.dim)
    return OrePoly(sig, coeffs)


# ---------------------------------------------------------------- modules


@dataclass(eq=False)
class OreModule:
    """A finite-dimensional right module over an Ore extension: an R-module plus the action T of t."""

    sig: OreSignature
    base_module: RightModule
    T: Matrix
    T_inv: Matrix | None = None
    name: str = ""

    def __post_init__(self):
        if self.T_inv is None and self.sig.laurent:
            self.T_inv = la.inverse(self.T)
            if self.T_inv is None:
                raise ValueError(f"t must act invertibly on {self.name or 'the module'}")

    @property
    def dim(self) -> int:
        return self.base_module.dim

    def t_power(self, k: int) -> Matrix:
        m = la.identity(self.dim)
        step = self.T if k >= 0 else self.T_inv
        if k < 0 and step is None:
            raise SignatureMismatch("negative powers need a laurent kind")
        for _ in range(abs(k)):
            m = la.matmul(step, m)
        return m


def check_ore_module(m: OreModule) -> Check:
    """Standard kinds: rho(a) T = T rho(alpha a) + rho(delta a).
    Opposite kinds: T rho(a) = rho(alpha a) T + rho(delta a)."""
    sig, mod = m.sig, m.base_module
    chk = Check(f"ore module {m.name}")
    chk.merge(mod.check())
    for i in range(sig.dim):
        e = sig.base.basis(i)
        ra = mod.action[i]
        if not sig.opposite:
            lhs = la.matmul(ra, m.T)
            rhs = la.add(la.matmul(m.T, mod.rho(sig.alpha(e))), mod.rho(sig.delta(e)))
        else:
            lhs = la.matmul(m.T, ra)
            rhs = la.add(la.matmul(mod.rho(sig.alpha(e)), m.T), mod.rho(sig.delta(e)))
        chk.record(lhs == rhs, f"compatibility fails at {sig.base.labels[i]}")
    if sig.laurent:
        n = m.dim
        chk.record(la.matmul(m.T, m.T_inv) == la.identity(n), "T T^-1 != I")
        chk.record(la.matmul(m.T_inv, m.T) == la.identity(n), "T^-1 T != I")
    return chk


def act(m: OreModule, v: Sequence, f: OrePoly) -> Vector:
    """``v . f``: standard terms apply rho(a) then t^k; opposite terms apply t^k then rho(a)."""
    if f.sig is not m.sig:
        raise SignatureMismatch("polynomial and module use different signatures")
    out = la.zero_vector(m.dim)
    for k, a in f.coeffs.items():
        ra = m.base_module.rho(a)
        tk = m.t_power(k)
        w = la.matvec(tk, la.matvec(ra, v)) if not m.sig.opposite else la.matvec(ra, la.matvec(tk, v))
        out = la.vadd(out, w)
    return out


def restrict_to_base(m: OreModule) -> RightModule:
    return m.base_module


# ------------------------------------------------------------ property checks


def ring_axioms_check(sig: OreSignature, rng: Rng, trials: int = 200, max_degree: int = 4) -> Check:
    chk = Check(f"ring axioms {sig.name}")
    one = OrePoly.one(sig)
    for _ in range(trials):
        f, g, h = (random_poly(sig, rng, max_degree) for _ in range(3))
        chk.record((f * g) * h == f * (g * h), ("associativity", f, g, h))
        chk.record(f * (g + h) == f * g + f * h, ("left distributivity", f, g, h))
        chk.record((f + g) * h == f * h + g * h, ("right distributivity", f, g, h))
        chk.record(one * f == f and f * one == f, ("unit", f))
    return chk


def opposite_iso_check(sig: OreSignature, rng: Rng, trials: int = 200, max_degree: int = 4) -> Check:
    """Unital, bijective on degree slices, multiplicative on random pairs."""
    chk = Check(f"opposite isomorphism {sig.name}")
    op = opposite_signature(sig)
    one = OrePoly.one(sig)
    chk.record(to_opposite(one, op) == OrePoly.one(op), "not unital")
    lo = -max_degree if sig.laurent else 0
    for k in range(lo, max_degree + 1):
        for i in range(sig.dim):
            f = OrePoly.monomial(sig, sig.base.basis(i), k)
            img = to_opposite(f, op)
            chk.record(from_opposite(img, sig) == f, ("left inverse", f))
            g = OrePoly.monomial(op, sig.base.basis(i), k)
            chk.record(to_opposite(from_opposite(g, sig), op) == g, ("right inverse", g))
            chk.record(img.is_zero() or img.degree <= k, ("degree grows", f))
    for _ in range(trials):
        f, g = random_poly(sig, rng, max_degree), random_poly(sig, rng, max_degree)
        chk.record(to_opposite(f * g, op) == to_opposite(f, op) * to_opposite(g, op), ("multiplicativity", f, g))
    return chk


def module_action_check(m: OreModule, rng: Rng, trials: int = 50, max_degree: int = 3) -> Check:
    chk = Check(f"module action {m.name}")
    for _ in range(trials):
        v = rng.vector(m.dim)
        f, g = random_poly(m.sig, rng, max_degree), random_poly(m.sig, rng, max_degree)
        chk.record(act(m, v, f * g) == act(m, act(m, v, f), g), ("v.(fg) != (v.f).g", v, f, g))
    return chk


def solve_t_actions(sig: OreSignature, mod: RightModule) -> tuple[Matrix | None, list[Matrix]]:
    """Affine space of matrices T satisfying the compatibility identity: (particular, homogeneous basis)."""
    n = mod.dim
    rows, rhs = [], []
    for i in range(sig.dim):
        e = sig.base.basis(i)
        ra, rb, rd = mod.action[i], mod.rho(sig.alpha(e)), mod.rho(sig.delta(e))
        if sig.opposite:
            ra, rb = rb, ra
        # ra T - T rb = rd (negated for opposite kinds); T flattened row-major
        for p in range(n):
            for q in range(n):
                row = [Fraction(0)] * (n * n)
                for s in range(n):
                    row[s * n + q] += ra[p][s]
                    row[p * n + s] -= rb[s][q]
                if sig.opposite:
                    row = [-x for x in row]
                rows.append(row)
                rhs.append(rd[p][q])
    sol = la.solve(rows, rhs, n * n)
    hom = la.kernel_basis(rows, n * n)

    def unflat(v):
        return [list(v[p * n:(p + 1) * n]) for p in range(n)]

    return (unflat(sol) if sol is not None else None), [unflat(h) for h in hom]


def action_matrix(m: OreModule, f: OrePoly) -> Matrix:
    """Matrix of ``v -> v . f``."""
    if f.sig is not m.sig:
        raise SignatureMismatch("polynomial and module use different signatures")
    out = la.zeros(m.dim, m.dim)
    for k, a in f.coeffs.items():
        ra, tk = m.base_module.rho(a), m.t_power(k)
        out = la.add(out, la.matmul(ra, tk) if m.sig.opposite else la.matmul(tk, ra))
    return out
