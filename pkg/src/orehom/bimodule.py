"""A bimodule resolution of an Ore extension A = R[t; alpha, delta] over its base.

Start from a resolution ``P -> R`` of R by R-bimodules (right ``R^e``-modules)
that ends in a projective kernel.  Tensoring gives resolutions
``A (x)_R P (x)_R A -> A (x)_R A`` and ``A_alpha (x)_R P (x)_R A -> A_alpha (x)_R A``;
the cone over a lift of ``j`` resolves A itself and is one step longer.

For an R-bimodule X, ``A (x)_R X (x)_R A`` is stored bigraded: ``{(j, l): x}``
stands for ``t^j (x) x (x) t^l``, using right coefficients on the left factor
and left coefficients on the right factor, so the pieces are independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .algebra import FDAlgebra, RightModule, enveloping, free_module, regular_bimodule, restrict, simple_modules
from .checks import Check
from .homology import cover_matrix, ext_dims, generators
from .linalg import Matrix, Vector
from .ore import OreSignature, opposite_signature
from .rng import Rng


@dataclass(eq=False)
class Bimodule:
    """An R-bimodule presented as a right module over ``R (x) R^op``."""

    base: FDAlgebra
    module: RightModule

    @property
    def dim(self) -> int:
        return self.module.dim

    def _pure(self, a: Sequence, b: Sequence) -> Vector:
        return tuple(x * y for x in a for y in b)

    def left(self, r: Sequence) -> Matrix:
        """``x -> r x``."""
        return self.module.rho(self._pure(self.base.unit, r))

    def right(self, r: Sequence) -> Matrix:
        """``x -> x r``."""
        return self.module.rho(self._pure(r, self.base.unit))


@dataclass(eq=False)
class BiElement:
    space: Bimodule
    twisted: bool
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {k: tuple(v) for k, v in sorted(self.coeffs.items()) if any(v)}

    def __add__(self, other: "BiElement") -> "BiElement":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = la.vadd(out[k], v) if k in out else v
        return BiElement(self.space, self.twisted, out)

    def scale(self, c) -> "BiElement":
        return BiElement(self.space, self.twisted, {k: la.vscale(c, v) for k, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, BiElement) and other.space is self.space
                and other.twisted == self.twisted and other.coeffs == self.coeffs)


class BigradedOps:
    """Bimodule actions of A on ``A (x)_R X (x)_R A`` (or with ``A_alpha`` on the left)."""

    def __init__(self, sig: OreSignature):
        if sig.opposite or not sig.alpha.invertible:
            raise ValueError("need a standard signature with invertible alpha")
        self.sig = sig
        self.op = opposite_signature(sig)
        self.alpha_inv = sig.alpha.inverse()

    def left_mul_R(self, x: BiElement, r: Sequence) -> BiElement:
        # r t^j = sum_m t^m N~[j][m](r); in A_alpha, t^m b = t^m o alpha^-1(b)
        out: dict = {}
        for (j, l), v in x.coeffs.items():
            for m, b in self.op.move(j, r).items():
                if x.twisted:
                    b = self.alpha_inv(b)
                w = la.matvec(x.space.left(b), v)
                out[(m, l)] = la.vadd(out[(m, l)], w) if (m, l) in out else w
        return BiElement(x.space, x.twisted, out)

    def right_mul_R(self, x: BiElement, r: Sequence) -> BiElement:
        # t^l r = sum_m N[l][m](r) t^m
        out: dict = {}
        for (j, l), v in x.coeffs.items():
            for m, b in self.sig.move(l, r).items():
                w = la.matvec(x.space.right(b), v)
                out[(j, m)] = la.vadd(out[(j, m)], w) if (j, m) in out else w
        return BiElement(x.space, x.twisted, out)

    @staticmethod
    def left_mul_t(x: BiElement, k: int = 1) -> BiElement:
        return BiElement(x.space, x.twisted, {(j + k, l): v for (j, l), v in x.coeffs.items()})

    @staticmethod
    def right_mul_t(x: BiElement, k: int = 1) -> BiElement:
        return BiElement(x.space, x.twisted, {(j, l + k): v for (j, l), v in x.coeffs.items()})

    @staticmethod
    def apply(x: BiElement, matrix: Matrix, target: Bimodule, twisted: bool | None = None) -> BiElement:
        """``1 (x) f (x) 1`` for a bimodule map f given by its matrix."""
        tw = x.twisted if twisted is None else twisted
        return BiElement(target, tw, {k: la.matvec(matrix, v) for k, v in x.coeffs.items()})

    def map_j(self, x: BiElement) -> BiElement:
        """``t^a (x) r (x) t^b -> (a, b+1): alpha(r) - (a+1, b): r + (a, b): delta(r)`` on ``X = R``."""
        out = BiElement(x.space, False, {})
        for (a, b), r in x.coeffs.items():
            out = out + BiElement(x.space, False, {
                (a, b + 1): self.sig.alpha(r),
                (a, b): self.sig.delta(r),
            }) + BiElement(x.space, False, {(a + 1, b): la.vscale(-1, r)})
        return out

    def multiply(self, x: BiElement) -> dict[int, Vector]:
        """``t^j (x) r (x) t^l -> t^j r t^l`` in left normal form, for ``X = R``."""
        out: dict[int, Vector] = {}
        for (j, l), r in x.coeffs.items():
            for k, v in self.sig.move(j, r).items():
                out[k + l] = la.vadd(out[k + l], v) if k + l in out else v
        return out


@dataclass
class BaseBimoduleResolution:
    """``0 -> X_L -> ... -> X_0 -> R`` with free ``X_0 .. X_(L-1)`` and projective ``X_L``."""

    base: FDAlgebra
    terms: list[Bimodule]
    eps: Matrix
    diffs: list[Matrix]  # diffs[k]: X_k -> X_(k-1), k >= 1
    free_ranks: list[int]  # rank over R^e of each free term

    @property
    def length(self) -> int:
        return len(self.terms) - 1


def resolve_base_bimodule(r: FDAlgebra, max_len: int = 6, seed: int = 0) -> BaseBimoduleResolution:
    """Free covers of R over R^e until the kernel is projective (Ext^1 against all simples vanishes)."""
    ae = enveloping(r)
    simples = simple_modules(ae)
    rng = Rng(seed)
    current = regular_bimodule(r, ae)
    inclusion = la.identity(r.dim)
    if all(ext_dims(current, s, 1)[1] == 0 for s in simples):
        return BaseBimoduleResolution(r, [Bimodule(r, current)], inclusion, [None], [])
    terms, diffs, ranks = [], [], []
    eps = None
    for _ in range(max_len + 1):
        gens = generators(current, rng=rng)
        cover = cover_matrix(current, gens)
        full = la.matmul(inclusion, cover)
        free = free_module(ae, len(gens))
        terms.append(Bimodule(r, free))
        ranks.append(len(gens))
        if eps is None:
            eps = full
        else:
            diffs.append(full)
        ker = la.kernel_basis(cover, free.dim)
        if not ker:
            break
        kernel = restrict(free, ker, name=f"K{len(terms)}")
        inc = la.from_columns(ker, free.dim)
        if all(ext_dims(kernel, s, 1)[1] == 0 for s in simples):
            terms.append(Bimodule(r, kernel))
            diffs.append(inc)
            break
        current, inclusion = kernel, inc
    else:
        raise RuntimeError("no projective kernel within the length bound")
    return BaseBimoduleResolution(r, terms, eps, [None] + diffs, ranks)


class AResolution:
    """The cone over ``u: A_alpha (x) P (x) A -> A (x) P (x) A`` lifting ``j``."""

    def __init__(self, sig: OreSignature, seed: int = 0):
        self.sig = sig
        self.ops = BigradedOps(sig)
        self.P = resolve_base_bimodule(sig.base, seed=seed)
        self.R = Bimodule(sig.base, regular_bimodule(sig.base, enveloping(sig.base)))
        self._u_gen: list[list[BiElement]] = []
        self._build_u()

    @property
    def length(self) -> int:
        return self.P.length + 1

    # u on generators of the free terms, then on everything by bilinearity
    def _lift(self, rhs: BiElement, matrix: Matrix, target: Bimodule) -> BiElement:
        out = {}
        for key, v in rhs.coeffs.items():
            y = la.solve(matrix, v, target.dim)
            if y is None:
                raise ArithmeticError(f"no lift at bidegree {key}")
            out[key] = y
        return BiElement(target, False, out)

    def _build_u(self):
        P, ops = self.P, self.ops
        n2 = self.sig.base.dim ** 2
        for k in range(len(P.free_ranks)):
            X = P.terms[k]
            comps = []
            for i in range(P.free_ranks[k]):
                g = list(la.zero_vector(X.dim))
                g[i * n2:(i + 1) * n2] = self._enveloping_unit()
                g = tuple(g)
                if k == 0:
                    c = la.matvec(P.eps, g)
                    rhs = ops.map_j(BiElement(self.R, True, {(0, 0): c}))
                    comps.append(self._lift(rhs, P.eps, X))
                else:
                    src = BiElement(P.terms[k - 1], True, {(0, 0): la.matvec(P.diffs[k], g)})
                    rhs = self.u(k - 1, src)
                    comps.append(self._lift(rhs, P.diffs[k], X))
            self._u_gen.append(comps)

    def _enveloping_unit(self) -> Vector:
        unit = self.sig.base.unit
        return tuple(x * y for x in unit for y in unit)

    def u(self, k: int, x: BiElement) -> BiElement:
        """``u_k`` on a twisted element of ``A_alpha (x) X_k (x) A``."""
        P, ops, base = self.P, self.ops, self.sig.base
        X = P.terms[k]
        out = BiElement(X, False, {})
        if k < len(P.free_ranks):
            n = base.dim
            n2 = n * n
            for (j, l), v in x.coeffs.items():
                for idx, c in enumerate(v):
                    if not c:
                        continue
                    i, rest = divmod(idx, n2)
                    a, b = divmod(rest, n)  # g_i . (e_a (x) e_b) = e_b g_i e_a
                    y = self._u_gen[k][i]
                    y = ops.right_mul_R(y, base.basis(a))
                    y = ops.right_mul_t(y, l)
                    y = ops.left_mul_R(y, self.sig.alpha(base.basis(b)))
                    y = ops.left_mul_t(y, j)
                    out = out + y.scale(c)
            return out
        if k == 0:
            # R itself is projective and eps = id
            return self._lift(ops.map_j(BiElement(self.R, True, x.coeffs)), P.eps, X)
        # projective last term: d is injective, so u_k = d^-1 u_(k-1) d
        src = ops.apply(x, P.diffs[k], P.terms[k - 1])
        return self._lift(self.u(k - 1, src), P.diffs[k], X)

    # ------------------------------------------------------------ truncation

    def truncated(self, D: int):
        """Basis lists and matrices of the augmented cone on total degrees ``<= D`` (Q part ``<= D-1``)."""
        P, ops, n = self.P, self.ops, self.sig.base.dim
        L = P.length

        def pairs(top):
            return [(j, s - j) for s in range(top + 1) for j in range(s + 1)]

        def part_basis(tag, k, top):
            X = P.terms[k]
            return [(tag, k, jl, i) for jl in pairs(top) for i in range(X.dim)]

        bases = []
        for c in range(L + 2):
            b = []
            if c <= L:
                b += part_basis("P", c, D)
            if c >= 1:
                b += part_basis("Q", c - 1, D - 1)
            bases.append(b)
        index = [{(tag, k, jl, i): pos for pos, (tag, k, jl, i) in enumerate(bs)} for bs in bases]
        chk = Check("truncation is a subcomplex")

        def place(col, c, tag, k, el: BiElement, sign=1):
            for jl, v in el.coeffs.items():
                for i, val in enumerate(v):
                    if val:
                        pos = index[c].get((tag, k, jl, i))
                        if chk.record(pos is not None, ("leaves truncation", c, tag, k, jl)):
                            col[pos] += sign * val

        # augmentation C_0 -> A_{<=D}
        aug_cols = []
        for (tag, k, jl, i) in bases[0]:
            x = la.unit_vector(P.terms[0].dim, i)
            el = BiElement(self.R, False, {jl: la.matvec(P.eps, x)})
            prod = ops.multiply(el)
            col = [Fraction(0)] * (n * (D + 1))
            for deg, v in prod.items():
                ok = chk.record(0 <= deg <= D, ("augmentation leaves truncation", jl))
                if ok:
                    for q, val in enumerate(v):
                        col[deg * n + q] += val
            aug_cols.append(col)
        mats = [la.from_columns(aug_cols, n * (D + 1))]
        for c in range(1, L + 2):
            cols = []
            rows_n = len(bases[c - 1])
            for (tag, k, jl, i) in bases[c]:
                col = [Fraction(0)] * rows_n
                x = la.unit_vector(P.terms[k].dim, i)
                if tag == "P":
                    place(col, c - 1, "P", k - 1, BiElement(P.terms[k - 1], False, {jl: la.matvec(P.diffs[k], x)}))
                else:
                    el = BiElement(P.terms[k], True, {jl: x})
                    place(col, c - 1, "P", k, self.u(k, el))
                    if k >= 1:
                        place(col, c - 1, "Q", k - 1,
                              BiElement(P.terms[k - 1], True, {jl: la.matvec(P.diffs[k], x)}), sign=-1)
                cols.append(col)
            mats.append(la.from_columns(cols, rows_n))
        return [len(b) for b in bases], mats, chk


def certify_bimodule_resolution(sig: OreSignature, D: int = 4, seed: int = 0) -> Check:
    """Length, ``d d = 0`` and exactness of the augmented truncation for every ``D' <= D``."""
    res = AResolution(sig, seed)
    chk = Check(f"bimodule resolution of {sig.name}")
    dims_by_D = {}
    for d in range(1, D + 1):
        dims, mats, sub = res.truncated(d)
        chk.merge(sub)
        n = sig.base.dim
        ranks = [la.rank(m) for m in mats]
        chk.record(ranks[0] == n * (d + 1), ("augmentation not onto", d))
        for c in range(len(dims)):
            nxt = ranks[c + 1] if c + 1 < len(ranks) else 0
            chk.record(ranks[c] + nxt == dims[c], ("not exact", d, c, ranks[c], nxt, dims[c]))
            if c + 1 < len(mats):
                chk.record(la.is_zero(la.matmul(mats[c], mats[c + 1])), ("d d != 0", d, c))
        dims_by_D[d] = dims
    chk.details = {"length": res.length, "base_length": res.P.length, "dims": dims_by_D}
    return chk
