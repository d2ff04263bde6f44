"""Ext over an Ore extension A = R[t; alpha, delta] through induced resolutions.

Free A-modules are written ``P (x)_R A`` for a free R-module ``P = R^p``; an
element is a p-tuple of elements of A (one per generator), and a map between
free A-modules is a matrix of elements of A: row j lists the coefficients of
the image of generator j.  ``Hom_A(A^p, N) = N^p`` for an A-module N, so
every Hom complex only needs the action matrices of those entries on N.

The cone resolution of an A-module M glues the induced resolutions of
``M|_R`` and ``M_alpha|_R`` along a lift of ``j'``:
``C_k = P_k (x) A  +  Q_(k-1) (x) A`` with ``d(p, q) = (d p + u q, -d q)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg as la
from .algebra import RightModule, twist_module
from .checks import Check
from .differentials import PLAIN, InducedElement
from .homology import Resolution, dh, hom_cohomology
from .linalg import Matrix, Vector
from .ore import OreModule, OrePoly, OreSignature, act, action_matrix


class LiftFailed(RuntimeError):
    """A lift through a free resolution did not exist; this indicates a bug."""


Row = tuple  # tuple of OrePoly, one per generator of the target


@dataclass
class FreeAComplex:
    """``... -> A^{r_1} -> A^{r_0} -> M`` with matrices of elements of A."""

    sig: OreSignature
    ranks: list[int]
    diffs: list[list[Row]]  # diffs[k] for k >= 1; diffs[0] unused
    augmentation: list[Vector]  # eps(g_j) in M
    target: OreModule | None = None

    def rank(self, k: int) -> int:
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def entry(self, k: int, j: int, l: int) -> OrePoly:
        return self.diffs[k][j][l]


def ext_from_complex(c: FreeAComplex, n: OreModule, max_k: int) -> list[int]:
    cache: dict = {}

    def block(k, j, l):
        key = (k, j, l)
        if key not in cache:
            cache[key] = action_matrix(n, c.entry(k + 1, j, l))
        return cache[key]

    return hom_cohomology(c.rank, block, n.dim, max_k)


def _const(sig: OreSignature, x: Sequence) -> OrePoly:
    return OrePoly.constant(sig, x)


def induced_complex(res: Resolution, sig: OreSignature, length: int) -> FreeAComplex:
    """``P_. (x)_R A``: the same generators, the R-coefficients read as constants of A."""
    res.extend(length)
    ranks = [res.rank(k) for k in range(length + 1)]
    diffs: list[list[Row]] = [[]]
    for k in range(1, len(ranks)):
        rows = []
        for j in range(ranks[k]):
            rows.append(tuple(_const(sig, res.coefficient(k, j, l)) for l in range(ranks[k - 1])))
        diffs.append(rows)
    aug = list(res.images[0]) if ranks and ranks[0] else []
    return FreeAComplex(sig, ranks, diffs, aug)


def induced_ext(m: RightModule, n: OreModule, max_k: int = 6, res: Resolution | None = None) -> list[int]:
    """``dim Ext_A^k(M (x)_R A, N)`` from the induced free resolution."""
    if m.algebra is not n.sig.base:
        raise ValueError("module and signature have different base algebras")
    res = res or Resolution(m)
    c = induced_complex(res, n.sig, max_k + 1)
    return ext_from_complex(c, n, max_k)


# ------------------------------------------------------------------ cone


def _rmul_row(row: Row, x: OrePoly) -> Row:
    return tuple(a * x for a in row)


def _radd_row(r1: Row, r2: Row) -> Row:
    return tuple(a + b for a, b in zip(r1, r2))


def _lift(sig: OreSignature, matrix: Matrix, rank: int, by_degree: dict[int, Vector]) -> Row:
    """Solve ``(d (x) 1) y = rhs`` degree by degree; ``y`` as a row over ``rank`` generators."""
    n = sig.dim
    coeffs: list[dict[int, Vector]] = [dict() for _ in range(rank)]
    for deg, vec in by_degree.items():
        if not any(vec):
            continue
        y = la.solve(matrix, vec, rank * n)
        if y is None:
            raise LiftFailed(f"no lift in degree {deg}")
        for j in range(rank):
            coeffs[j][deg] = y[j * n:(j + 1) * n]
    return tuple(OrePoly(sig, c) for c in coeffs)


def _row_by_degree(row: Row, n: int) -> dict[int, Vector]:
    degrees = sorted({d for a in row for d in a.coeffs})
    out = {}
    for d in degrees:
        vec = []
        for a in row:
            vec.extend(a.coeff(d))
        out[d] = tuple(vec)
    return out


@dataclass
class ConeResolution:
    module: OreModule
    P: Resolution
    Q: Resolution
    u: list[list[Row]]  # u[k][j] = image of generator j of Q_k in P_k (x) A
    complex: FreeAComplex

    @property
    def sig(self) -> OreSignature:
        return self.module.sig


def lift_chain_map(m: OreModule, P: Resolution, Q: Resolution, length: int) -> list[list[Row]]:
    """Components ``u_k: Q_k (x) A -> P_k (x) A`` over ``j'``, built generator by generator."""
    sig = m.sig
    P.extend(length + 1)
    Q.extend(length + 1)
    u: list[list[Row]] = []
    for k in range(length + 1):
        qk, pk = Q.rank(k), P.rank(k)
        if qk == 0:
            u.append([])
            continue
        if pk == 0:
            raise LiftFailed(f"P_{k} vanishes but Q_{k} does not")
        comps = []
        for j in range(qk):
            if k == 0:
                w = Q.images[0][j]
                rhs = {1: w, 0: la.vscale(-1, la.matvec(m.T, w))}
                comps.append(_lift(sig, P.matrices[0], pk, rhs))
            else:
                total = tuple(OrePoly.zero(sig) for _ in range(P.rank(k - 1)))
                for i in range(Q.rank(k - 1)):
                    x = Q.coefficient(k, j, i)
                    if any(x):
                        total = _radd_row(total, _rmul_row(u[k - 1][i], _const(sig, x)))
                comps.append(_lift(sig, P.matrices[k], pk, _row_by_degree(total, sig.dim)))
        u.append(comps)
    return u


def cone_resolution(m: OreModule, length: int, seed: int = 0) -> ConeResolution:
    """A free A-resolution of M with terms ``C_0 .. C_length``."""
    sig = m.sig
    if not sig.alpha.invertible:
        raise ValueError("the cone construction needs an invertible alpha")
    if sig.opposite:
        raise ValueError("the cone construction uses a standard signature")
    base = m.base_module
    P = Resolution(base, seed=seed)
    Q = Resolution(twist_module(base, sig.alpha), seed=seed + 1)
    u = lift_chain_map(m, P, Q, length)
    zero = OrePoly.zero(sig)
    ranks, diffs = [], [[]]
    for k in range(length + 1):
        ranks.append(P.rank(k) + Q.rank(k - 1))
    for k in range(1, length + 1):
        pk1, qk2 = P.rank(k - 1), Q.rank(k - 2)
        rows = []
        for j in range(P.rank(k)):
            head = tuple(_const(sig, P.coefficient(k, j, l)) for l in range(pk1))
            rows.append(head + (zero,) * qk2)
        for j in range(Q.rank(k - 1)):
            head = u[k - 1][j]
            tail = tuple(_const(sig, la.vscale(-1, Q.coefficient(k - 1, j, i))) for i in range(qk2))
            rows.append(tuple(head) + tail)
        diffs.append(rows)
    while len(ranks) > 1 and ranks[-1] == 0:
        ranks.pop()
        diffs.pop()
    cx = FreeAComplex(sig, ranks, diffs, list(P.images[0]), target=m)
    return ConeResolution(m, P, Q, u, cx)


def cone_ext(m: OreModule, n: OreModule, max_k: int = 6, cone: ConeResolution | None = None) -> list[int]:
    """``dim Ext_A^k(M, N)`` from the cone resolution."""
    if m.sig is not n.sig:
        raise ValueError("modules over different signatures")
    cone = cone or cone_resolution(m, max_k + 1)
    return ext_from_complex(cone.complex, n, max_k)


# -------------------------------------------------------- certificates


def check_complex_squares(c: FreeAComplex) -> Check:
    """``d d = 0`` exactly in A, and ``eps d = 0``."""
    chk = Check("d d = 0")
    sig = c.sig
    for k in range(2, len(c.ranks)):
        for j in range(c.ranks[k]):
            for mm in range(c.ranks[k - 2]):
                total = OrePoly.zero(sig)
                for l in range(c.ranks[k - 1]):
                    total = total + c.entry(k - 1, l, mm) * c.entry(k, j, l)
                chk.record(total.is_zero(), (k, j, mm))
    if c.target is not None and len(c.ranks) > 1:
        for j in range(c.ranks[1]):
            v = la.zero_vector(c.target.dim)
            for l in range(c.ranks[0]):
                v = la.vadd(v, act(c.target, c.augmentation[l], c.entry(1, j, l)))
            chk.record(not any(v), ("eps d", j))
    return chk


def _window(sig: OreSignature, top: int, D: int) -> range:
    lo = -D if sig.laurent else 0
    return range(lo, top + 1)


def truncated_matrices(cone: ConeResolution, D: int) -> tuple[list[int], list[Matrix], Check]:
    """Degree truncation ``P (x) A_[.., D] + Q (x) A_[.., D-1]`` of the augmented cone.

    Returns the term dimensions, the matrices (index 0 is the augmentation) and a
    check that every differential stays inside the truncation.
    """
    sig, c = cone.sig, cone.complex
    n = sig.dim
    chk = Check("truncation is a subcomplex")

    def basis(k):
        out = []
        for j in range(c.rank(k)):
            top = D if j < cone.P.rank(k) else D - 1
            for d in _window(sig, top, D):
                for i in range(n):
                    out.append((j, d, i))
        return out

    bases = [basis(k) for k in range(len(c.ranks))]
    index = [{b: pos for pos, b in enumerate(bs)} for bs in bases]
    mats = []
    m = cone.module
    cols = []
    for (j, d, i) in bases[0]:
        cols.append(act(m, c.augmentation[j], OrePoly.monomial(sig, sig.base.basis(i), d)))
    mats.append(la.from_columns(cols, m.dim))
    for k in range(1, len(c.ranks)):
        rows_n = len(bases[k - 1])
        cols = []
        for (j, d, i) in bases[k]:
            col = [la.ZERO] * rows_n
            x = OrePoly.monomial(sig, sig.base.basis(i), d)
            for l in range(c.rank(k - 1)):
                img = c.entry(k, j, l) * x
                for deg, vec in img.coeffs.items():
                    for ii, val in enumerate(vec):
                        if not val:
                            continue
                        pos = index[k - 1].get((l, deg, ii))
                        if chk.record(pos is not None, ("leaves truncation", k, j, d, i)):
                            col[pos] += val
            cols.append(tuple(col))
        mats.append(la.from_columns(cols, rows_n))
    return [len(b) for b in bases], mats, chk


def certify_cone(cone: ConeResolution, D: int, upto: int | None = None) -> Check:
    """d d = 0 in A plus exactness of the augmented truncation by rank arithmetic."""
    chk = Check(f"cone certificate {cone.module.name} D={D}")
    chk.merge(check_complex_squares(cone.complex))
    dims, mats, sub = truncated_matrices(cone, D)
    chk.merge(sub)
    ranks = [la.rank(mx) if mx and mx[0] else 0 for mx in mats]
    chk.record(ranks[0] == cone.module.dim, "augmentation not onto M")
    top = len(dims) if upto is None else min(len(dims), upto + 1)
    finished = cone.P.finished and cone.Q.finished and len(dims) == len(cone.complex.ranks)
    for k in range(top):
        nxt = ranks[k + 1] if k + 1 < len(ranks) else None
        if nxt is None:
            if not finished:
                continue
            nxt = 0
        chk.record(ranks[k] + nxt == dims[k], ("not exact", k, ranks[k], nxt, dims[k]))
        if k + 1 < len(mats):
            chk.record(la.is_zero(la.matmul(mats[k], mats[k + 1])), ("d d != 0 on truncation", k))
    chk.details = {"dims": dims, "ranks": ranks}
    return chk


def hom_dimension(m: OreModule, n: OreModule) -> int:
    """``dim Hom_A(M, N)`` by direct linear algebra: F rho_M = rho_N F and F T_M = T_N F."""
    a, b = m.dim, n.dim
    rows = []
    mats = [(m.base_module.action[i], n.base_module.action[i]) for i in range(m.sig.dim)] + [(m.T, n.T)]
    for sm, sn in mats:
        for p in range(b):
            for q in range(a):
                row = [la.ZERO] * (a * b)
                for s in range(a):
                    row[p * a + s] += sm[s][q]
                for s in range(b):
                    row[s * a + q] -= sn[p][s]
                rows.append(row)
    return len(la.kernel_basis(rows, a * b))


def upper_bound_check(m: OreModule, ns: Sequence[OreModule], max_k: int = 6, D: int = 2) -> Check:
    """Cone Ext vanishes above ``dh_R(M|_R) + 1`` and the cone itself is certified."""
    chk = Check(f"upper bound {m.name}")
    d = dh(m.base_module, max_k)
    cone = cone_resolution(m, max_k + 1)
    chk.merge(certify_cone(cone, D, upto=max_k))
    bound = float("inf") if d.capped else d.value + 1
    table = {}
    for n in ns:
        dims = cone_ext(m, n, max_k, cone)
        table[n.name] = dims
        chk.record(all(x == 0 for k, x in enumerate(dims) if k > bound), ("Ext above the bound", n.name, dims))
        chk.record(dims[0] == hom_dimension(m, n), ("Ext^0 != Hom", n.name, dims[0]))
    chk.details = {"dh_R": str(d), "ext": table}
    return chk


def include(m: RightModule, sig: OreSignature, v: Sequence) -> InducedElement:
    """``i(v) = v (x) 1``."""
    return InducedElement(m, sig, PLAIN, {0: v})


def retract(x: InducedElement) -> Vector:
    """The coordinate functional at ``t^0``."""
    return x.coeffs.get(0, la.zero_vector(x.module.dim))


def retraction_check(m: RightModule, sig: OreSignature, degrees: int = 3) -> Check:
    """r i = id on a basis, i injective, and r kills every shifted tensor."""
    chk = Check(f"retraction {m.name}")
    lo = -degrees if sig.laurent else 0
    images = []
    for q in range(m.dim):
        v = la.unit_vector(m.dim, q)
        x = include(m, sig, v)
        chk.record(retract(x) == v, ("r i != id", q))
        images.append(x.coeffs[0])
        for j in range(lo, degrees + 1):
            if j:
                y = InducedElement(m, sig, PLAIN, {j: v})
                chk.record(not any(retract(y)), ("r nonzero on a shift", q, j))
    chk.record(not images or la.rank(la.from_columns(images, m.dim)) == m.dim, "i not injective")
    return chk
