"""Free resolutions, Ext and projective dimensions over finite-dimensional algebras.

Free modules ``A^p`` use coordinates ``j * dim(A) + i`` for ``g_j e_i``.  A
resolution records, for each generator of ``P_k``, its image in ``P_{k-1}``
(or in M for k = 0); those images determine every Hom complex.

``dh`` is detected against the simple modules: for a finite-dimensional
algebra ``Ext^k(M, S) = 0`` for all simples S forces ``Ext^(k+1)(M, -) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg as la
from .algebra import (
    AlgebraMorphism,
    FDAlgebra,
    ModuleMap,
    RightModule,
    enveloping,
    free_module,
    regular_bimodule,
    restrict,
    simple_modules,
    submodule_span,
    twist_module,
)
from .checks import Check
from .linalg import Matrix, Vector
from .rng import Rng


class NotExact(ValueError):
    pass


def generators(m: RightModule, pad: int = 0, rng: Rng | None = None) -> list[Vector]:
    """A generating set chosen greedily, plus ``pad`` redundant extras.

    Each new generator is the candidate (coordinate vectors, the all-ones
    vector, then a few random small-integer vectors) that enlarges the generated submodule most.
    Random candidates keep covers close to minimal, which keeps ranks bounded
    along a resolution.
    """
    if m.dim == 0:
        raise ValueError("the zero module has no free cover")
    rng = rng or Rng(0)
    gens: list[Vector] = []
    span: list[Vector] = []
    while len(span) < m.dim:
        best, best_span = None, span
        cands = [la.unit_vector(m.dim, i) for i in range(m.dim)]
        cands.append(tuple(Fraction(1) for _ in range(m.dim)))
        cands += [tuple(Fraction(rng.between(-2, 2)) for _ in range(m.dim)) for _ in range(3)]
        for c in cands:
            cand_span = submodule_span(m, gens + [c])
            if len(cand_span) > len(best_span):
                best, best_span = c, cand_span
                if len(cand_span) == m.dim:
                    break
        gens.append(best)
        span = best_span
    for i in range(pad):
        gens.append(la.vscale(i + 2, gens[i % len(gens)]))
    return gens


def cover_matrix(m: RightModule, gens: Sequence[Vector]) -> Matrix:
    """Matrix of ``A^p -> M``, ``g_j e_i -> gens[j] . e_i``."""
    cols = []
    for g in gens:
        for act in m.action:
            cols.append(la.matvec(act, g))
    return la.from_columns(cols, m.dim)


def free_cover(m: RightModule, pad: int = 0, seed: int = 0) -> tuple[RightModule, ModuleMap]:
    gens = generators(m, pad, Rng(seed))
    free = free_module(m.algebra, len(gens))
    return free, ModuleMap(free, m, cover_matrix(m, gens))


@dataclass
class Resolution:
    """Lazily extended free resolution ``... -> A^{p_1} -> A^{p_0} -> M``."""

    module: RightModule
    pad: int = 0
    seed: int = 0
    ranks: list[int] = field(default_factory=list)
    images: list[list[Vector]] = field(default_factory=list)
    matrices: list[Matrix] = field(default_factory=list)
    finished: bool = False
    _kernel: RightModule | None = None
    _inclusion: Matrix | None = None
    _rng: Rng | None = None

    def __post_init__(self):
        self._rng = Rng(self.seed)
        self._kernel = self.module
        self._inclusion = la.identity(self.module.dim)
        if self.module.dim == 0:
            self.finished = True

    @property
    def algebra(self) -> FDAlgebra:
        return self.module.algebra

    def length(self) -> int | None:
        return len(self.ranks) - 1 if self.finished else None

    def _step(self):
        k_mod, incl = self._kernel, self._inclusion
        gens = generators(k_mod, self.pad, self._rng)
        cover = cover_matrix(k_mod, gens)
        full = la.matmul(incl, cover)
        target_dim = len(incl)
        self.ranks.append(len(gens))
        self.images.append([tuple(la.matvec(incl, g)) for g in gens])
        self.matrices.append(full if full else la.zeros(target_dim, 0))
        n = self.algebra.dim
        ker = la.kernel_basis(cover, len(gens) * n)
        if not ker:
            self.finished = True
            self._kernel = None
            return
        self._kernel = restrict(free_module(self.algebra, len(gens)), ker)
        self._inclusion = la.from_columns(ker, len(gens) * n)

    def extend(self, length: int) -> "Resolution":
        """Make sure ``P_0 .. P_length`` exist (or the resolution has ended)."""
        while not self.finished and len(self.ranks) <= length:
            self._step()
        return self

    def rank(self, k: int) -> int:
        self.extend(k)
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def generator_image(self, k: int, j: int) -> Vector:
        """``d(g_j)`` for a generator of ``P_k`` (``eps(g_j)`` when k = 0), as a vector."""
        self.extend(k)
        if k == 0:
            return self.images[0][j]
        return self.images[k][j]

    def coefficient(self, k: int, j: int, l: int) -> Vector:
        """The R-coordinate of ``d(g_j)`` on generator ``l`` of ``P_{k-1}``."""
        n = self.algebra.dim
        return self.images[k][j][l * n:(l + 1) * n]

    def certify(self, upto: int) -> Check:
        """d d = 0 and rank exactness at every computed degree, including the augmentation."""
        self.extend(upto + 1)
        chk = Check(f"resolution of {self.module.name}")
        n = self.algebra.dim
        mats = self.matrices
        top = len(mats)
        ranks = [la.rank(m) if m and m[0] else 0 for m in mats]
        chk.record(ranks[0] == self.module.dim if top else self.module.dim == 0, "augmentation not surjective")
        for k in range(min(top, upto + 1)):
            dim_pk = self.ranks[k] * n
            if k + 1 < top:
                chk.record(la.is_zero(la.matmul(mats[k], mats[k + 1])), f"d d != 0 at {k}")
                nxt = ranks[k + 1]
            else:
                nxt = 0
                if not self.finished:
                    continue
            chk.record(ranks[k] + nxt == dim_pk, f"not exact at P_{k}")
        for k in range(min(top, upto + 1)):
            mat = mats[k]
            src = free_module(self.algebra, self.ranks[k])
            tgt = self.module if k == 0 else free_module(self.algebra, self.ranks[k - 1])
            chk.merge(ModuleMap(src, tgt, mat).check())
        return chk


def hom_cohomology(rank: Callable[[int], int], block: Callable[[int, int, int], Matrix], dim_n: int,
                   max_k: int) -> list[int]:
    """Cohomology dims of ``0 -> N^{p_0} -> N^{p_1} -> ...`` for a free complex.

    ``block(k, j, l)`` is the ``dim_n x dim_n`` matrix by which generator ``j``
    of ``C_{k+1}`` pulls back the value on generator ``l`` of ``C_k``.
    """
    ranks_of_delta = []
    for k in range(max_k + 1):
        p, q = rank(k), rank(k + 1)
        if p == 0 or q == 0 or dim_n == 0:
            ranks_of_delta.append(0)
            continue
        rows = []
        for j in range(q):
            blocks = [block(k, j, l) for l in range(p)]
            rows.extend(la.hstack(blocks, dim_n))
        ranks_of_delta.append(la.rank(rows))
    out = []
    for k in range(max_k + 1):
        prev = ranks_of_delta[k - 1] if k else 0
        out.append(rank(k) * dim_n - ranks_of_delta[k] - prev)
    return out


def ext_dims(m: RightModule | Resolution, n: RightModule, max_k: int = 6) -> list[int]:
    """``dim Ext^k(M, N)`` for ``k = 0 .. max_k``."""
    res = m if isinstance(m, Resolution) else Resolution(m)
    res.extend(max_k + 1)

    def block(k, j, l):
        return n.rho(res.coefficient(k + 1, j, l))

    return hom_cohomology(res.rank, block, n.dim, max_k)


@dataclass(frozen=True)
class Dimension:
    """A homological dimension; ``capped`` means only ``value <= dh`` is known."""

    value: int
    capped: bool = False

    def as_float(self) -> float:
        return float("inf") if self.capped else float(self.value)

    def __str__(self) -> str:
        return f"at-least-{self.value}" if self.capped else str(self.value)

    def as_json(self):
        return str(self) if self.capped else self.value


def dh(m: RightModule, max_k: int = 6, simples: Sequence[RightModule] | None = None, pad: int = 0,
       trace: dict | None = None) -> Dimension:
    """Projective dimension of M, or ``at-least-max_k`` if Ext^max_k(M, S) is still nonzero."""
    if m.dim == 0:
        return Dimension(-1)
    simples = simple_modules(m.algebra) if simples is None else simples
    res = Resolution(m, pad=pad)
    rows = {s.name: [] for s in simples}
    for k in range(max_k + 1):
        res.extend(k + 1)
        dims = {s.name: ext_dims(res, s, k)[k] for s in simples}
        for name, d in dims.items():
            rows[name].append(d)
        if all(d == 0 for d in dims.values()):
            if trace is not None:
                trace.update(rows)
            return Dimension(k - 1)
        if res.finished and k >= len(res.ranks) - 1:
            # nothing beyond the last term: the next Ext vanishes
            if trace is not None:
                trace.update(rows)
            return Dimension(k)
    if trace is not None:
        trace.update(rows)
    return Dimension(max_k, capped=True)


def gldim(a: FDAlgebra, max_k: int = 6) -> Dimension:
    simples = simple_modules(a)
    dims = [dh(s, max_k, simples) for s in simples]
    return max(dims, key=lambda d: (d.as_float(), d.value))


def bidim(a: FDAlgebra, max_k: int = 6) -> Dimension:
    ae = enveloping(a)
    return dh(regular_bimodule(a, ae), max_k, simple_modules(ae))


def twist_invariance_check(m: RightModule, alpha: AlgebraMorphism, max_k: int = 6) -> Check:
    chk = Check(f"twist invariance {m.name} by {alpha.name}")
    simples = simple_modules(m.algebra)
    tw = twist_module(m, alpha)
    before, after = {}, {}
    d1 = dh(m, max_k, simples, trace=before)
    d2 = dh(tw, max_k, simples, trace=after)
    chk.details = {"dh": str(d1), "dh_twisted": str(d2), "ext": before, "ext_twisted": after}
    chk.record(d1 == d2, (str(d1), str(d2)))
    return chk


# ------------------------------------------------------------ subadditivity


@dataclass
class ShortExactSequence:
    left: RightModule
    middle: RightModule
    right: RightModule
    f: Matrix  # left -> middle
    g: Matrix  # middle -> right
    name: str = ""

    def check_exact(self) -> Check:
        chk = Check(f"exactness {self.name}")
        chk.merge(ModuleMap(self.left, self.middle, self.f).check())
        chk.merge(ModuleMap(self.middle, self.right, self.g).check())
        rf = la.rank(self.f) if self.left.dim else 0
        rg = la.rank(self.g) if self.right.dim else 0
        chk.record(rf == self.left.dim, "first map not injective")
        chk.record(rg == self.right.dim, "second map not surjective")
        gf = la.matmul(self.g, self.f) if self.left.dim and self.right.dim else []
        chk.record(la.is_zero(gf) if gf else True, "composite not zero")
        chk.record(self.left.dim + self.right.dim == self.middle.dim, "dimensions do not add up")
        return chk


def subadditivity_check(ses: ShortExactSequence, max_k: int = 6) -> Check:
    """The three inequalities between dh of the terms; capped values count as infinite."""
    exact = ses.check_exact()
    if not exact:
        raise NotExact(f"{ses.name}: {exact.failures}")
    simples = simple_modules(ses.middle.algebra)
    d1, d, d2 = (dh(x, max_k, simples) for x in (ses.left, ses.middle, ses.right))
    a, b, c = d1.as_float(), d.as_float(), d2.as_float()
    chk = Check(f"subadditivity {ses.name}")
    chk.details = {"dh": [str(d1), str(d), str(d2)]}
    chk.record(b <= max(a, c), ("dh(X) > max(dh X', dh X'')", str(d1), str(d), str(d2)))
    chk.record(a <= max(b, c - 1), ("dh(X') > max(dh X, dh X'' - 1)", str(d1), str(d), str(d2)))
    chk.record(c <= max(b, a + 1), ("dh(X'') > max(dh X, dh X' + 1)", str(d1), str(d), str(d2)))
    return chk
