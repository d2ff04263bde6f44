"""Finite-dimensional unital associative algebras given by structure constants.

Conventions
-----------
An element is a coordinate tuple in the basis ``e_0 .. e_{n-1}``.
``structure[i][j]`` holds the coordinates of ``e_i * e_j``.

Right modules store one matrix per basis element acting on coordinate
columns, ``v . a = rho(a) v``.  Since ``(v . a) . b = v . (ab)`` the
stored matrices satisfy ``rho(b) rho(a) = rho(ab)``: an anti-homomorphism.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg as la
from .checks import Check
from .linalg import Matrix, Vector


class NotSplit(ValueError):
    """The semisimple quotient is not a product of matrix algebras over Q."""


@dataclass(frozen=True, eq=False)
class FDAlgebra:
    labels: tuple
    structure: tuple  # structure[i][j] -> Vector
    unit: Vector
    name: str = ""

    @classmethod
    def from_products(cls, labels, products, unit, name=""):
        """Build from a sparse table ``{(a, b): {c: coeff}}`` keyed by labels."""
        labels = tuple(labels)
        index = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (a, b), res in products.items():
            for c, coeff in res.items():
                table[index[a]][index[b]][index[c]] += la.frac(coeff)
        u = [Fraction(0)] * n
        for c, coeff in unit.items():
            u[index[c]] = la.frac(coeff)
        return cls(labels, tuple(tuple(tuple(v) for v in row) for row in table), tuple(u), name)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def basis(self, i: int) -> Vector:
        return la.unit_vector(self.dim, i)

    @property
    def one(self) -> Vector:
        return self.unit

    @property
    def zero(self) -> Vector:
        return la.zero_vector(self.dim)

    def element(self, coeffs: dict | Sequence) -> Vector:
        if isinstance(coeffs, dict):
            v = [Fraction(0)] * self.dim
            for lab, c in coeffs.items():
                v[self.labels.index(lab)] = la.frac(c)
            return tuple(v)
        return la.vector(coeffs)

    def mul(self, x: Sequence, y: Sequence) -> Vector:
        n = self.dim
        out = [Fraction(0)] * n
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.structure[i]
            for j, b in ys:
                ab = a * b
                for k, c in enumerate(row[j]):
                    if c:
                        out[k] += ab * c
        return tuple(out)

    @cached_property
    def left_basis_matrices(self) -> list[Matrix]:
        """``L[i]`` is the matrix of ``v -> e_i v``."""
        n = self.dim
        return [[[self.structure[i][j][k] for j in range(n)] for k in range(n)] for i in range(n)]

    @cached_property
    def right_basis_matrices(self) -> list[Matrix]:
        """``R[i]`` is the matrix of ``v -> v e_i``."""
        n = self.dim
        return [[[self.structure[j][i][k] for j in range(n)] for k in range(n)] for i in range(n)]

    def left_matrix(self, x: Sequence) -> Matrix:
        return la.lincomb(x, self.left_basis_matrices, self.dim, self.dim)

    def right_matrix(self, x: Sequence) -> Matrix:
        return la.lincomb(x, self.right_basis_matrices, self.dim, self.dim)

    def format(self, x: Sequence) -> str:
        terms = [f"{la.fmt(c)}*{lab}" for c, lab in zip(x, self.labels) if c]
        return " + ".join(terms) or "0"

    def __repr__(self) -> str:
        return f"FDAlgebra({self.name or '?'}, dim={self.dim})"


def check_algebra(a: FDAlgebra) -> Check:
    chk = Check("algebra")
    n = a.dim
    for i in range(n):
        ei = a.basis(i)
        for j in range(n):
            eij = a.structure[i][j]
            for k in range(n):
                left = a.mul(eij, a.basis(k))
                right = a.mul(ei, a.structure[j][k])
                chk.record(left == right, f"associativity fails on ({a.labels[i]},{a.labels[j]},{a.labels[k]})")
    for i in range(n):
        ei = a.basis(i)
        chk.record(a.mul(a.unit, ei) == ei, f"unit fails on the left of {a.labels[i]}")
        chk.record(a.mul(ei, a.unit) == ei, f"unit fails on the right of {a.labels[i]}")
    return chk


def opposite(a: FDAlgebra) -> FDAlgebra:
    n = a.dim
    table = tuple(tuple(a.structure[j][i] for j in range(n)) for i in range(n))
    name = a.name[:-3] if a.name.endswith("^op") else (a.name + "^op" if a.name else "")
    return FDAlgebra(a.labels, table, a.unit, name)


def tensor_product(a: FDAlgebra, b: FDAlgebra, name: str = "") -> FDAlgebra:
    """``a (x) b`` with basis ``e_i (x) f_k`` at index ``i * dim(b) + k``."""
    na, nb = a.dim, b.dim
    labels = tuple(f"{x}@{y}" for x in a.labels for y in b.labels)
    table = []
    for i in range(na):
        for k in range(nb):
            row = []
            for j in range(na):
                for l in range(nb):
                    row.append(tuple(la.kron([list(a.structure[i][j])], [list(b.structure[k][l])])[0]))
            table.append(tuple(row))
    unit = tuple(la.kron([list(a.unit)], [list(b.unit)])[0])
    return FDAlgebra(labels, tuple(table), unit, name)


def enveloping(a: FDAlgebra) -> FDAlgebra:
    """``A (x) A^op``; bimodules are right modules over it via ``m.(x (x) y) = y m x``."""
    return tensor_product(a, opposite(a), name=f"{a.name}^e")


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    source: FDAlgebra
    target: FDAlgebra
    matrix: Matrix  # column i = image of e_i
    name: str = ""

    @classmethod
    def identity(cls, a: FDAlgebra) -> "AlgebraMorphism":
        return cls(a, a, la.identity(a.dim), "id")

    @classmethod
    def from_images(cls, a: FDAlgebra, images: dict, name: str = "", target: FDAlgebra | None = None):
        target = target or a
        cols = []
        for lab in a.labels:
            cols.append(target.element(images.get(lab, {})))
        return cls(a, target, la.from_columns(cols, target.dim), name)

    def __call__(self, x: Sequence) -> Vector:
        return la.matvec(self.matrix, x)

    def compose(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """``self o other``."""
        return AlgebraMorphism(other.source, self.target, la.matmul(self.matrix, other.matrix),
                               f"{self.name}*{other.name}")

    def power(self, k: int) -> "AlgebraMorphism":
        if k < 0:
            return self.inverse().power(-k)
        m = la.identity(self.source.dim)
        for _ in range(k):
            m = la.matmul(self.matrix, m)
        return AlgebraMorphism(self.source, self.target, m, f"{self.name}^{k}")

    @cached_property
    def inverse_matrix(self) -> Matrix | None:
        return la.inverse(self.matrix)

    @property
    def invertible(self) -> bool:
        return self.inverse_matrix is not None

    def inverse(self) -> "AlgebraMorphism":
        inv = self.inverse_matrix
        if inv is None:
            raise ValueError(f"morphism {self.name or '?'} is not invertible")
        return AlgebraMorphism(self.target, self.source, inv, f"{self.name}^-1")

    def check(self) -> Check:
        chk = Check(f"morphism {self.name}")
        s, t = self.source, self.target
        for i in range(s.dim):
            for j in range(s.dim):
                lhs = self(s.structure[i][j])
                rhs = t.mul(self(s.basis(i)), self(s.basis(j)))
                chk.record(lhs == rhs, f"phi({s.labels[i]}*{s.labels[j]}) != phi*phi")
        chk.record(self(s.unit) == t.unit, "phi(1) != 1")
        return chk


def inner_automorphism(a: FDAlgebra, u: Sequence, u_inv: Sequence, name: str = "") -> AlgebraMorphism:
    """``x -> u x u^-1``."""
    cols = [a.mul(a.mul(u, a.basis(i)), u_inv) for i in range(a.dim)]
    return AlgebraMorphism(a, a, la.from_columns(cols, a.dim), name)


@dataclass(frozen=True, eq=False)
class SigmaDerivation:
    algebra: FDAlgebra
    alpha: AlgebraMorphism
    matrix: Matrix
    flavor: str = "standard"  # or "opposite"
    name: str = ""

    @classmethod
    def zero(cls, alpha: AlgebraMorphism, flavor: str = "standard") -> "SigmaDerivation":
        n = alpha.source.dim
        return cls(alpha.source, alpha, la.zeros(n, n), flavor, "0")

    @classmethod
    def inner(cls, alpha: AlgebraMorphism, c: Sequence, name: str = "") -> "SigmaDerivation":
        """``x -> c x - alpha(x) c``, always a standard alpha-derivation."""
        a = alpha.source
        cols = [la.vsub(a.mul(c, a.basis(i)), a.mul(alpha(a.basis(i)), c)) for i in range(a.dim)]
        return cls(a, alpha, la.from_columns(cols, a.dim), "standard", name)

    def __call__(self, x: Sequence) -> Vector:
        return la.matvec(self.matrix, x)

    @property
    def is_zero(self) -> bool:
        return la.is_zero(self.matrix)


def check_alpha_derivation(d: SigmaDerivation) -> Check:
    """Twisted Leibniz rule on all basis pairs.

    standard: d(ab) = d(a) b + alpha(a) d(b)
    opposite: d(ab) = d(a) alpha(b) + a d(b)
    """
    a = d.algebra
    chk = Check(f"{d.flavor} alpha-derivation {d.name}")
    for i in range(a.dim):
        x = a.basis(i)
        for j in range(a.dim):
            y = a.basis(j)
            lhs = d(a.structure[i][j])
            if d.flavor == "standard":
                rhs = la.vadd(a.mul(d(x), y), a.mul(d.alpha(x), d(y)))
            else:
                rhs = la.vadd(a.mul(d(x), d.alpha(y)), a.mul(x, d(y)))
            chk.record(lhs == rhs, (a.labels[i], a.labels[j]))
    chk.record(la.is_zero(d(a.unit)), "d(1) != 0")
    return chk


# ---------------------------------------------------------------- modules


@dataclass(frozen=True, eq=False)
class RightModule:
    algebra: FDAlgebra
    dim: int
    action: tuple  # action[i] = matrix of v -> v . e_i
    name: str = ""

    def rho(self, x: Sequence) -> Matrix:
        return la.lincomb(x, self.action, self.dim, self.dim)

    def act(self, v: Sequence, x: Sequence) -> Vector:
        return la.matvec(self.rho(x), v)

    def check(self) -> Check:
        a = self.algebra
        chk = Check(f"right module {self.name}")
        chk.record(self.rho(a.unit) == la.identity(self.dim), "rho(1) != I")
        for i in range(a.dim):
            for j in range(a.dim):
                lhs = la.matmul(self.action[j], self.action[i])
                rhs = self.rho(a.structure[i][j])
                chk.record(lhs == rhs, f"(v.{a.labels[i]}).{a.labels[j]} != v.({a.labels[i]}{a.labels[j]})")
        return chk

    def same_as(self, other: "RightModule") -> bool:
        return self.dim == other.dim and list(self.action) == list(other.action)

    def __repr__(self) -> str:
        return f"RightModule({self.name or '?'}, dim={self.dim}, over {self.algebra.name})"


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: RightModule
    target: RightModule
    matrix: Matrix

    def __call__(self, v: Sequence) -> Vector:
        return la.matvec(self.matrix, v)

    def check(self) -> Check:
        chk = Check("module map")
        for i in range(self.source.algebra.dim):
            lhs = la.matmul(self.matrix, self.source.action[i])
            rhs = la.matmul(self.target.action[i], self.matrix)
            chk.record(lhs == rhs, f"fails to intertwine {self.source.algebra.labels[i]}")
        return chk


def regular_module(a: FDAlgebra) -> RightModule:
    return RightModule(a, a.dim, tuple(a.right_basis_matrices), f"{a.name}_reg")


def free_module(a: FDAlgebra, rank: int) -> RightModule:
    n = a.dim
    acts = tuple(la.block_diag([a.right_basis_matrices[i]] * rank, [(n, n)] * rank) for i in range(n))
    return RightModule(a, n * rank, acts, f"{a.name}^{rank}")


def twist_module(m: RightModule, alpha: AlgebraMorphism) -> RightModule:
    """Same space, action ``v o a = v . alpha(a)``."""
    a = m.algebra
    acts = tuple(m.rho(alpha(a.basis(i))) for i in range(a.dim))
    return RightModule(a, m.dim, acts, f"{m.name}_{alpha.name}")


def direct_sum(*mods: RightModule) -> RightModule:
    a = mods[0].algebra
    acts = tuple(la.block_diag([m.action[i] for m in mods], [(m.dim, m.dim) for m in mods])
                 for i in range(a.dim))
    return RightModule(a, sum(m.dim for m in mods), acts, "+".join(m.name for m in mods))


def bimodule_as_module(a: FDAlgebra, ae: FDAlgebra, dim: int, left: Sequence[Matrix],
                       right: Sequence[Matrix], name: str = "") -> RightModule:
    """Right module over ``ae = enveloping(a)`` from commuting left/right actions."""
    n = a.dim
    acts = []
    for i in range(n):
        for j in range(n):
            acts.append(la.matmul(left[j], right[i]))
    return RightModule(ae, dim, tuple(acts), name)


def regular_bimodule(a: FDAlgebra, ae: FDAlgebra | None = None) -> RightModule:
    ae = ae or enveloping(a)
    return bimodule_as_module(a, ae, a.dim, a.left_basis_matrices, a.right_basis_matrices, f"{a.name}_bi")


def submodule_span(m: RightModule, vectors: Sequence[Sequence]) -> list[Vector]:
    """Basis (rref) of the submodule generated by ``vectors``."""
    basis = la.column_space_basis([v for v in vectors], m.dim)
    while True:
        images = list(basis)
        for v in basis:
            for act in m.action:
                images.append(la.matvec(act, v))
        new = la.column_space_basis(images, m.dim)
        if len(new) == len(basis):
            return new
        basis = new


def coordinates(basis: Sequence[Sequence], vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    """Coordinates of each vector in the (independent) basis; raises if outside the span."""
    mat = la.from_columns(basis, dim)
    sols = la.solve_many(mat, vectors, len(basis))
    for s in sols:
        if s is None:
            raise ValueError("vector outside the span")
    return sols


def restrict(m: RightModule, basis: Sequence[Sequence], name: str = "") -> RightModule:
    """The submodule spanned by ``basis`` (must be invariant), in its own coordinates."""
    k = len(basis)
    acts = []
    for act in m.action:
        images = [la.matvec(act, v) for v in basis]
        coords = coordinates(basis, images, m.dim) if k else []
        acts.append(la.from_columns(coords, k))
    return RightModule(m.algebra, k, tuple(acts), name)


def complement_indices(basis: Sequence[Sequence], dim: int) -> list[int]:
    _, pivots = la.rref([list(v) for v in basis], dim) if basis else ([], [])
    piv = set(pivots)
    return [i for i in range(dim) if i not in piv]


def quotient_module(m: RightModule, basis: Sequence[Sequence], name: str = "") -> tuple[RightModule, Matrix]:
    """Quotient by an invariant subspace; returns the module and the projection matrix."""
    comp = complement_indices(basis, m.dim)
    full = [la.unit_vector(m.dim, i) for i in comp] + [tuple(v) for v in basis]
    inv = la.inverse(la.from_columns(full, m.dim))
    proj = inv[: len(comp)]
    acts = []
    for act in m.action:
        images = [la.matvec(act, la.unit_vector(m.dim, i)) for i in comp]
        acts.append(la.from_columns([la.matvec(proj, w) for w in images], len(comp)))
    return RightModule(m.algebra, len(comp), tuple(acts), name), proj


# -------------------------------------------------------- radical, simples


def radical(a: FDAlgebra) -> list[Vector]:
    """Jacobson radical via the trace form (characteristic zero)."""
    n = a.dim
    traces = []
    for i in range(n):
        row = []
        for j in range(n):
            lm = a.left_matrix(a.structure[i][j])
            row.append(sum((lm[k][k] for k in range(n)), Fraction(0)))
        traces.append(row)
    return la.kernel_basis(traces, n)


def _quotient_algebra(a: FDAlgebra, rad: list[Vector]):
    comp = complement_indices(rad, a.dim)
    full = [a.basis(i) for i in comp] + list(rad)
    inv = la.inverse(la.from_columns(full, a.dim))
    proj = inv[: len(comp)]
    m = len(comp)
    table = tuple(tuple(la.matvec(proj, a.structure[comp[i]][comp[j]]) for j in range(m)) for i in range(m))
    unit = la.matvec(proj, a.unit)
    b = FDAlgebra(tuple(a.labels[i] for i in comp), table, unit, f"{a.name}/J")
    return b, proj


def _rational_roots(mat: Matrix):
    """Eigenvalues of ``mat`` if its characteristic polynomial splits over Q, else None."""
    import sympy

    if not mat:
        return []
    x = sympy.Symbol("x")
    poly = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in mat]).charpoly(x)
    _, factors = sympy.factor_list(poly.as_expr(), x)
    roots = []
    for f, mult in factors:
        p = sympy.Poly(f, x)
        if p.degree() > 1:
            return None
        c1, c0 = p.all_coeffs()
        r = -sympy.Rational(c0) / sympy.Rational(c1)
        roots.append((Fraction(int(r.p), int(r.q)), mult))
    return roots


def _central_idempotents(b: FDAlgebra, rng: random.Random) -> list[Vector]:
    n = b.dim
    stacked = []
    for j in range(n):
        diff = la.sub(b.right_basis_matrices[j], b.left_basis_matrices[j])
        stacked.extend(diff)
    center = la.kernel_basis(stacked, n)
    r = len(center)
    if r == 1:
        return [b.unit]
    for _ in range(20):
        z = tuple(sum((Fraction(rng.randint(-5, 5)) * c[k] for c in center), Fraction(0)) for k in range(n))
        images = [b.mul(z, c) for c in center]
        mz = la.from_columns(coordinates(center, images, n), r)
        roots = _rational_roots(mz)
        if roots is None:
            raise NotSplit(f"center of {b.name} is not a product of copies of Q")
        if len(roots) < r:
            continue
        idems = []
        lambdas = [lam for lam, _ in roots]
        for lam in lambdas:
            e = b.unit
            for mu in lambdas:
                if mu != lam:
                    e = b.mul(e, la.vscale(1 / (lam - mu), la.vsub(z, la.vscale(mu, b.unit))))
            idems.append(e)
        return idems
    raise NotSplit(f"could not separate the center of {b.name}")


def _minimal_right_ideal(b: FDAlgebra, c: Vector, rng: random.Random) -> list[Vector]:
    n = b.dim
    block = la.column_space_basis([b.mul(c, b.basis(j)) for j in range(n)], n)
    size = len(block)
    d = round(size ** 0.5)
    if d * d != size:
        raise NotSplit(f"block of dimension {size} in {b.name} is not a full matrix algebra")
    if d == 1:
        return [c]
    for _ in range(50):
        a = tuple(sum((Fraction(rng.randint(-3, 3)) * v[k] for v in block), Fraction(0)) for k in range(n))
        images = [b.mul(a, v) for v in block]
        la_mat = la.from_columns(coordinates(block, images, n), size)
        roots = _rational_roots(la_mat)
        if not roots:
            continue
        for lam, _ in roots:
            shifted = la.sub(la_mat, la.scale(lam, la.identity(size)))
            ker = la.kernel_basis(shifted, size)
            if len(ker) == d:
                return [tuple(sum((k[i] * block[i][t] for i in range(size)), Fraction(0)) for t in range(n))
                        for k in ker]
    raise NotSplit(f"no rank-one element found in a block of {b.name}")


def simple_modules(a: FDAlgebra, seed: int = 0) -> list[RightModule]:
    """One simple right module per matrix block of ``A/rad A``."""
    rng = random.Random(seed)
    rad = radical(a)
    b, proj = _quotient_algebra(a, rad)
    out = []
    for idx, c in enumerate(_central_idempotents(b, rng)):
        ideal = _minimal_right_ideal(b, c, rng)
        acts = []
        for i in range(a.dim):
            xi = la.matvec(proj, a.basis(i))
            images = [b.mul(v, xi) for v in ideal]
            acts.append(la.from_columns(coordinates(ideal, images, b.dim), len(ideal)))
        out.append(RightModule(a, len(ideal), tuple(acts), f"S{idx}"))
    out.sort(key=lambda s: [row for act in s.action for row in act], reverse=True)
    return [RightModule(a, s.dim, s.action, f"S{i}") for i, s in enumerate(out)]
