"""Weighted l1 seminorms, truncated holomorphic Ore elements and crossed products by Z.

All norms are exact rationals.  The projective tensor seminorm of an element
of ``A_alpha (x)_R A`` is bounded from above by the cost of an explicit
representation ``sum f_j (x) t^j``; each term may also be split along a
decomposition of the unit into orthogonal idempotent basis elements
``1 = sum eps_i``, using ``f (x) t^j = sum_i (f o eps_i) (x) eps_i t^j``.
The cheaper of the two representations is charged, which keeps the value an
upper bound for the true seminorm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .algebra import AlgebraMorphism, FDAlgebra
from .checks import Check
from .differentials import D_poly, TensorElement
from .linalg import Matrix, Vector
from .ore import OrePoly, OreSignature, random_poly
from .rng import Rng


@dataclass(frozen=True, eq=False)
class Seminorm:
    algebra: FDAlgebra
    weights: tuple
    label: str = ""

    def __post_init__(self):
        if len(self.weights) != self.algebra.dim or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive, one per basis element")

    def __call__(self, x: Sequence) -> Fraction:
        return sum((abs(c) * w for c, w in zip(x, self.weights)), Fraction(0))


def localizability_constant(op: Matrix, s: Seminorm) -> Fraction:
    """Smallest C with ``||op x|| <= C ||x||``: the worst ratio over basis vectors."""
    n = s.algebra.dim
    return max(s(la.matvec(op, la.unit_vector(n, i))) / s.weights[i] for i in range(n))


def unit_decompositions(a: FDAlgebra) -> list[list[Vector]]:
    """``[1]`` plus, when it exists, the split of 1 into orthogonal idempotent basis elements."""
    out = [[a.unit]]
    support = [i for i, c in enumerate(a.unit) if c]
    if all(a.unit[i] == 1 for i in support) and len(support) > 1:
        idems = [a.basis(i) for i in support]
        ok = all(a.mul(e, f) == (e if p == q else a.zero) for p, e in enumerate(idems) for q, f in enumerate(idems))
        if ok:
            out.append(idems)
    return out


def submultiplicativity_check(s: Seminorm, rng: Rng, trials: int = 100) -> Check:
    chk = Check(f"submultiplicative {s.label}")
    a = s.algebra
    for _ in range(trials):
        x, y = rng.vector(a.dim), rng.vector(a.dim)
        chk.record(s(a.mul(x, y)) <= s(x) * s(y), (x, y))
    return chk


def seminorm_axioms_check(s: Seminorm, rng: Rng, trials: int = 100) -> Check:
    chk = Check(f"seminorm axioms {s.label}")
    n = s.algebra.dim
    for _ in range(trials):
        x, y, c = rng.vector(n), rng.vector(n), rng.rational()
        chk.record(s(la.vadd(x, y)) <= s(x) + s(y), ("triangle", x, y))
        chk.record(s(la.vscale(c, x)) == abs(c) * s(x), ("homogeneity", c, x))
    return chk


# ------------------------------------------------------------ holomorphic


def holo_norm(f: OrePoly, s: Seminorm, rho: Fraction) -> Fraction:
    """``sum_k ||a_k|| rho^|k|``."""
    return sum((s(a) * rho ** abs(k) for k, a in f.coeffs.items()), Fraction(0))


def holo_pieces(x: TensorElement) -> list:
    """Per ``t^j``, every candidate representation as ``(f o eps_i, eps_i)`` pairs."""
    sig = x.sig
    out = []
    for j, f in x.coeffs.items():
        reps = []
        for dec in unit_decompositions(sig.base):
            if len(dec) == 1:
                reps.append([(f, dec[0])])
            else:
                reps.append([(f * OrePoly.constant(sig, sig.alpha(e)), e) for e in dec])
        out.append((j, reps))
    return out


def holo_gamma(x: TensorElement | list, s1: Seminorm, rho1: Fraction, s2: Seminorm, rho2: Fraction,
               memo: dict | None = None) -> Fraction:
    """Upper bound for the projective seminorm of ``x`` in ``A_alpha (x)_R A``."""
    pieces = holo_pieces(x) if isinstance(x, TensorElement) else x
    total = Fraction(0)
    for j, reps in pieces:
        best = min(sum((sum((v * rho1 ** k for k, v in _degree_norms(g, s1, memo)), Fraction(0)) * s2(e)
                        for g, e in rep), Fraction(0)) for rep in reps)
        total += best * rho2 ** abs(j)
    return total


def _degree_norms(g: OrePoly, s: Seminorm, memo: dict | None) -> list:
    key = (id(g), id(s))
    if memo is None or key not in memo:
        val = [(abs(k), s(a)) for k, a in g.coeffs.items()]
        if memo is None:
            return val
        memo[key] = val
    return memo[key]


def holo_D(f: OrePoly, degree: int) -> TensorElement:
    """D on a truncated element; terms above ``degree`` are dropped first."""
    return D_poly(OrePoly(f.sig, {k: v for k, v in f.coeffs.items() if abs(k) <= degree}))


def holo_radius(sig: OreSignature, rho1: Fraction, rho2: Fraction) -> Fraction:
    if sig.laurent:
        return 2 * (rho1 + rho2 + 1)
    return 2 * max(rho1, rho2, Fraction(1))


def verify_holo_estimate(f: OrePoly, s1: Seminorm, s2: Seminorm, rho1: Fraction, rho2: Fraction,
                         d: TensorElement | list | None = None, memo: dict | None = None
                         ) -> tuple[bool, Fraction, Fraction]:
    d = d if d is not None else holo_pieces(D_poly(f))
    lhs = holo_gamma(d, s1, rho1, s2, rho2, memo)
    rhs = holo_norm(f, s1, holo_radius(f.sig, rho1, rho2))
    return lhs <= rhs, lhs, rhs


def holo_suite(sig: OreSignature, family: Sequence[Seminorm], rng: Rng, trials: int = 100, degree: int = 12,
               grid: Sequence[Fraction] = (Fraction(1, 2), Fraction(1), Fraction(2))) -> Check:
    chk = Check(f"holomorphic estimate {sig.name}")
    samples = [OrePoly.t(sig, n) for n in range(-3 if sig.laurent else 0, 7)]
    samples += [random_poly(sig, rng, degree, terms=rng.between(1, 6)) for _ in range(trials)]
    worst = Fraction(0)
    for f in samples:
        d = holo_pieces(D_poly(f))
        memo: dict = {}
        for s1 in family:
            for s2 in family:
                for r1 in grid:
                    for r2 in grid:
                        ok, lhs, rhs = verify_holo_estimate(f, s1, s2, r1, r2, d, memo)
                        chk.record(ok, (repr(f), s1.label, s2.label, str(r1), str(r2), str(lhs), str(rhs)))
                        if rhs:
                            worst = max(worst, lhs / rhs)
    chk.details = {"max_ratio": str(worst)}
    return chk


# ---------------------------------------------------------- crossed products


@dataclass(eq=False)
class TemperedAction:
    """A Z-action generated by an invertible ``alpha1``; ``poly`` lists coefficients of p in |n|."""

    alpha1: AlgebraMorphism
    poly: tuple = (Fraction(1),)
    check_range: int = 32
    _powers: dict = field(default_factory=dict, repr=False)

    @property
    def algebra(self) -> FDAlgebra:
        return self.alpha1.source

    def power(self, n: int) -> Matrix:
        if n not in self._powers:
            if n == 0:
                self._powers[n] = la.identity(self.algebra.dim)
            elif n > 0:
                self._powers[n] = la.matmul(self.alpha1.matrix, self.power(n - 1))
            else:
                self._powers[n] = la.matmul(self.alpha1.inverse_matrix, self.power(n + 1))
        return self._powers[n]

    def __call__(self, n: int, r: Sequence) -> Vector:
        return la.matvec(self.power(n), r)

    def p(self, n: int) -> Fraction:
        x = Fraction(abs(n))
        return abs(sum((c * x ** i for i, c in enumerate(self.poly)), Fraction(0)))


class CrossedElement:
    """Finitely supported ``sum_n f^(n) e_n`` with coefficients in R."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: FDAlgebra, coeffs: dict[int, Sequence] | None = None):
        self.algebra = algebra
        self.coeffs = {n: tuple(v) for n, v in sorted((coeffs or {}).items()) if any(v)}

    def __add__(self, other: "CrossedElement") -> "CrossedElement":
        out = dict(self.coeffs)
        for n, v in other.coeffs.items():
            out[n] = la.vadd(out[n], v) if n in out else v
        return CrossedElement(self.algebra, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, CrossedElement) and other.coeffs == self.coeffs

    def __repr__(self) -> str:
        return " + ".join(f"({self.algebra.format(v)})e_{n}" for n, v in self.coeffs.items()) or "0"


def crossed_unit(a: FDAlgebra) -> CrossedElement:
    return CrossedElement(a, {0: a.unit})


def _accumulate(out: dict, n: int, v: Vector):
    out[n] = la.vadd(out[n], v) if n in out else v


def convolve(f: CrossedElement, g: CrossedElement, act: TemperedAction) -> CrossedElement:
    """``(f * g)(x) = sum_y f(y) alpha_y(g(x - y))``."""
    a = f.algebra
    out: dict = {}
    for m, r in f.coeffs.items():
        for n, s in g.coeffs.items():
            _accumulate(out, m + n, a.mul(r, act(m, s)))
    return CrossedElement(a, out)


def convolve_opposite(f: CrossedElement, g: CrossedElement, act: TemperedAction) -> CrossedElement:
    """``(r e_m) *' (s e_n) = alpha_(-n)(r) s e_(m+n)``."""
    a = f.algebra
    out: dict = {}
    for m, r in f.coeffs.items():
        for n, s in g.coeffs.items():
            _accumulate(out, m + n, a.mul(act(-n, r), s))
    return CrossedElement(a, out)


def iso_i(f: CrossedElement, act: TemperedAction) -> CrossedElement:
    return CrossedElement(f.algebra, {n: act(-n, v) for n, v in f.coeffs.items()})


def iso_i_inverse(f: CrossedElement, act: TemperedAction) -> CrossedElement:
    return CrossedElement(f.algebra, {n: act(n, v) for n, v in f.coeffs.items()})


def crossed_norm(f: CrossedElement, s: Seminorm, k: int) -> Fraction:
    return sum((s(v) * (abs(n) + 1) ** k for n, v in f.coeffs.items()), Fraction(0))


def crossed_D(f: CrossedElement) -> dict[int, CrossedElement]:
    """``D f`` as ``{j: f_j}`` meaning ``sum_j f_j (x) e_j``."""
    a = f.algebra
    out: dict[int, dict] = {}
    for n, r in f.coeffs.items():
        if n > 0:
            for k in range(n):
                _accumulate(out.setdefault(n - k - 1, {}), k, r)
        elif n < 0:
            for k in range(1, -n + 1):
                _accumulate(out.setdefault(n + k - 1, {}), -k, la.vscale(-1, r))
    return {j: CrossedElement(a, c) for j, c in sorted(out.items()) if CrossedElement(a, c).coeffs}


def crossed_gamma(d: dict[int, CrossedElement], act: TemperedAction, s1: Seminorm, k1: int,
                  s2: Seminorm, k2: int) -> Fraction:
    a = act.algebra
    decomps = unit_decompositions(a)
    total = Fraction(0)
    for j, f in d.items():
        best = None
        for dec in decomps:
            cost = Fraction(0)
            for e in dec:
                pulled = convolve(f, CrossedElement(a, {0: e}), act) if len(dec) > 1 else f
                cost += crossed_norm(pulled, s1, k1) * s2(e)
            best = cost if best is None else min(best, cost)
        total += best * (abs(j) + 1) ** k2
    return total


def random_crossed(a: FDAlgebra, rng: Rng, radius: int, terms: int = 3) -> CrossedElement:
    return CrossedElement(a, {rng.between(-radius, radius): rng.vector(a.dim) for _ in range(terms)})


def crossed_algebra_check(act: TemperedAction, rng: Rng, trials: int = 200, radius: int = 3) -> Check:
    """Associativity and unit for * and *', and i(f * g) = i(f) *' i(g)."""
    a = act.algebra
    chk = Check(f"crossed product {act.alpha1.name}")
    one = crossed_unit(a)
    for _ in range(trials):
        f, g, h = (random_crossed(a, rng, radius) for _ in range(3))
        chk.record(convolve(convolve(f, g, act), h, act) == convolve(f, convolve(g, h, act), act), ("assoc *", f, g, h))
        chk.record(convolve(f, one, act) == f and convolve(one, f, act) == f, ("unit *", f))
        chk.record(convolve_opposite(convolve_opposite(f, g, act), h, act)
                   == convolve_opposite(f, convolve_opposite(g, h, act), act), ("assoc *'", f, g, h))
        chk.record(convolve_opposite(f, one, act) == f and convolve_opposite(one, f, act) == f, ("unit *'", f))
        chk.record(iso_i(convolve(f, g, act), act) == convolve_opposite(iso_i(f, act), iso_i(g, act), act),
                   ("i not multiplicative", f, g))
        chk.record(iso_i_inverse(iso_i(f, act), act) == f, ("i not invertible", f))
    return chk


def unit_split_stable(act: TemperedAction, family: Sequence[Seminorm]) -> bool:
    """True when ``||1|| = 1`` throughout the family, or alpha1 permutes an idempotent split of 1.

    Otherwise the single-term bounds only hold up to the factor ``||1||``.
    """
    a = act.algebra
    if all(s(a.unit) == 1 for s in family):
        return True
    for dec in unit_decompositions(a)[1:]:
        if all(act.alpha1(e) in dec for e in dec) and all(s(e) == 1 for s in family for e in dec):
            return True
    return False


def crossed_estimate_check(act: TemperedAction, family: Sequence[Seminorm], rng: Rng, trials: int = 50,
                           radius: int = 8, ks: Sequence[int] = (0, 1, 2, 3), unit_factor: bool = False) -> Check:
    """Single-term and summed bounds for ``gamma(D f)``; ``unit_factor`` scales each bound by ``||1||_l2``."""
    a = act.algebra
    chk = Check(f"crossed estimates {act.alpha1.name}")
    chk.details = {"unit_factor": unit_factor}
    singles = [CrossedElement(a, {n: a.basis(i)}) for n in range(-radius, radius + 1) if n for i in range(a.dim)]
    randoms = [random_crossed(a, rng, radius, terms=rng.between(1, 5)) for _ in range(trials)]
    for s1 in family:
        for s2 in family:
            scale = s2(a.unit) if unit_factor else Fraction(1)
            for k1 in ks:
                for k2 in ks:
                    K = max(k1, k2)
                    for f in singles:
                        (n,) = f.coeffs
                        lhs = crossed_gamma(crossed_D(f), act, s1, k1, s2, k2)
                        if n >= 1:
                            rhs = scale * crossed_norm(f, s1, 2 * K + 1)
                        else:
                            rhs = scale * 2 * crossed_norm(f, s1, 4 * K + 1)
                        chk.record(lhs <= rhs, ("single term", n, s1.label, s2.label, k1, k2, str(lhs), str(rhs)))
                    for f in randoms:
                        lhs = crossed_gamma(crossed_D(f), act, s1, k1, s2, k2)
                        rhs = scale * 2 * crossed_norm(f, s1, 4 * K + 1)
                        chk.record(lhs <= rhs, ("sum", repr(f), s1.label, s2.label, k1, k2, str(lhs), str(rhs)))
    return chk


@dataclass
class TemperedReport:
    given_ok: bool
    suggestion: tuple | None  # (C, m) with ||alpha_n r|| <= C (|n|+1)^m ||r||
    witness: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.given_ok or self.suggestion is not None


def check_tempered(act: TemperedAction, family: Sequence[Seminorm], max_m: int = 8) -> TemperedReport:
    """Check ``||alpha_n(r)|| <= |p(n)| ||r||`` on ``|n| <= check_range`` for basis r.

    When p fails, look for ``C (|n|+1)^m`` with m = 0..max_m: m is accepted when the
    best constant on the doubled range is at most 3/2 times the one on the base range
    (one exponent too few roughly doubles it),
    and C is the doubled-range constant.  None means no m passed.
    """
    a, N = act.algebra, act.check_range

    def ratios(limit):
        for n in range(-limit, limit + 1):
            for s in family:
                for i in range(a.dim):
                    yield n, s, i, s(act(n, a.basis(i))) / s.weights[i]

    witness = None
    given_ok = True
    for n, s, i, q in ratios(N):
        if q > act.p(n):
            given_ok = False
            witness = (n, s.label, a.labels[i], str(q), str(act.p(n)))
            break
    suggestion = None
    if not given_ok:
        wide = list(ratios(2 * N))
        for m in range(max_m + 1):
            c_base = max(q / (abs(n) + 1) ** m for n, _, _, q in wide if abs(n) <= N)
            c_wide = max(q / (abs(n) + 1) ** m for n, _, _, q in wide)
            if c_wide <= Fraction(3, 2) * c_base:
                suggestion = (c_wide, m)
                break
    return TemperedReport(given_ok, suggestion, witness)
