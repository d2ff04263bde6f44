"""Relative differential 1-forms of an Ore extension, modelled as ``A_alpha (x)_R A``.

An element is stored in the normal form ``sum_j f_j (x) t^j``: A is free as a left
R-module on the powers of t, so every R-coefficient on the right factor can be
pushed across the tensor sign.  In the twisted tensor ``A_alpha (x)_R A`` that
push goes through alpha: ``f (x) r g = f alpha(r) (x) g``.

Maps (all on standard kinds):

* ``D(a t^n)``: the universal derivation transported to the normal form.
* ``j: A_alpha (x) A -> A (x) A``, ``f (x) t^j -> f (x) t^(j+1) - f t (x) t^j``.
* ``m: A (x) A -> A``, multiplication.
* ``sigma(a) = a (x) 1`` and ``rho(sum f_j (x) t^j) = sum f_j D(t^j)``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import linalg as la
from .algebra import RightModule
from .checks import Check
from .linalg import Vector
from .ore import OreModule, OrePoly, OreSignature, SignatureMismatch, act, random_poly
from .rng import Rng

TWISTED = "alpha"
PLAIN = "none"


class TensorElement:
    __slots__ = ("sig", "twist", "coeffs")

    def __init__(self, sig: OreSignature, twist: str, coeffs: dict[int, OrePoly] | None = None):
        if sig.opposite:
            raise SignatureMismatch("tensor normal forms use a standard signature")
        if twist not in (TWISTED, PLAIN):
            raise ValueError(f"unknown twist {twist!r}")
        self.sig = sig
        self.twist = twist
        self.coeffs = {j: f for j, f in sorted((coeffs or {}).items()) if not f.is_zero()}

    @classmethod
    def zero(cls, sig: OreSignature, twist: str) -> "TensorElement":
        return cls(sig, twist, {})

    @classmethod
    def simple(cls, f: OrePoly, j: int, twist: str) -> "TensorElement":
        return cls(f.sig, twist, {j: f})

    def _same(self, other: "TensorElement"):
        if other.sig is not self.sig or other.twist != self.twist:
            raise SignatureMismatch("tensor elements live in different bimodules")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._same(other)
        out = dict(self.coeffs)
        for j, f in other.coeffs.items():
            out[j] = out[j] + f if j in out else f
        return TensorElement(self.sig, self.twist, out)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.sig, self.twist, {j: -f for j, f in self.coeffs.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        return TensorElement(self.sig, self.twist, {j: f.scale(c) for j, f in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TensorElement)
            and other.sig is self.sig
            and other.twist == self.twist
            and other.coeffs == self.coeffs
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"[{f!r}](x)t^{j}" for j, f in self.coeffs.items())


def _pull(sig: OreSignature, twist: str, b: Sequence) -> OrePoly:
    """The element of A that ``b`` in R becomes after crossing the tensor sign."""
    return OrePoly.constant(sig, sig.alpha(b) if twist == TWISTED else b)


def tensor_normalize(pairs: Iterable[tuple[OrePoly, OrePoly]], twist: str, sig: OreSignature | None = None) -> TensorElement:
    """``sum f_i (x) g_i`` in normal form."""
    pairs = list(pairs)
    if sig is None:
        if not pairs:
            raise ValueError("empty sum needs an explicit signature")
        sig = pairs[0][0].sig
    out = TensorElement.zero(sig, twist)
    for f, g in pairs:
        if f.sig is not sig or g.sig is not sig:
            raise SignatureMismatch("pairs must share the signature")
        for l, b in g.coeffs.items():
            out = out + TensorElement.simple(f * _pull(sig, twist, b), l, twist)
    return out


def D_monomial(sig: OreSignature, n: int) -> TensorElement:
    """``D(t^n)``."""
    out = {}
    if n > 0:
        for k in range(n):
            j = n - k - 1
            out[j] = out[j] + OrePoly.t(sig, k) if j in out else OrePoly.t(sig, k)
    elif n < 0:
        for k in range(1, -n + 1):
            j = n + k - 1
            term = -OrePoly.t(sig, -k)
            out[j] = out[j] + term if j in out else term
    return TensorElement(sig, TWISTED, out)


def left_act(a: OrePoly, x: TensorElement) -> TensorElement:
    if a.sig is not x.sig:
        raise SignatureMismatch("left_act across signatures")
    return TensorElement(x.sig, x.twist, {j: a * f for j, f in x.coeffs.items()})


def right_act(x: TensorElement, g: OrePoly) -> TensorElement:
    if g.sig is not x.sig:
        raise SignatureMismatch("right_act across signatures")
    sig = x.sig
    pairs = [(f, OrePoly.t(sig, j) * g) for j, f in x.coeffs.items()]
    return tensor_normalize(pairs, x.twist, sig)


def D_poly(f: OrePoly) -> TensorElement:
    sig = f.sig
    if sig.opposite:
        raise SignatureMismatch("D is defined on standard signatures")
    out = TensorElement.zero(sig, TWISTED)
    for n, a in f.coeffs.items():
        out = out + left_act(OrePoly.constant(sig, a), D_monomial(sig, n))
    return out


def map_j(x: TensorElement) -> TensorElement:
    if x.twist != TWISTED:
        raise ValueError("j starts on the twisted tensor")
    sig = x.sig
    t = OrePoly.t(sig)
    out = TensorElement.zero(sig, PLAIN)
    for j, f in x.coeffs.items():
        out = out + TensorElement.simple(f, j + 1, PLAIN) - TensorElement.simple(f * t, j, PLAIN)
    return out


def map_m(x: TensorElement) -> OrePoly:
    if x.twist != PLAIN:
        raise ValueError("m starts on the untwisted tensor")
    out = OrePoly.zero(x.sig)
    for j, f in x.coeffs.items():
        out = out + f * OrePoly.t(x.sig, j)
    return out


def section_sigma(a: OrePoly) -> TensorElement:
    return TensorElement.simple(a, 0, PLAIN)


def retraction_rho(x: TensorElement) -> TensorElement:
    if x.twist != PLAIN:
        raise ValueError("rho starts on the untwisted tensor")
    out = TensorElement.zero(x.sig, TWISTED)
    for j, f in x.coeffs.items():
        out = out + left_act(f, D_monomial(x.sig, j))
    return out


def leibniz_check(f: OrePoly, g: OrePoly) -> Check:
    chk = Check("leibniz")
    lhs = D_poly(f * g)
    rhs = right_act(D_poly(f), g) + left_act(f, D_poly(g))
    chk.record(lhs == rhs, (f, g))
    return chk


def random_tensor(sig: OreSignature, twist: str, rng: Rng, max_degree: int = 4) -> TensorElement:
    lo = -max_degree if sig.laurent else 0
    out = {}
    for _ in range(rng.between(1, 3)):
        out[rng.between(lo, max_degree)] = random_poly(sig, rng, max_degree)
    return TensorElement(sig, twist, out)


def exactness_check(sig: OreSignature, rng: Rng, trials: int = 100, max_degree: int = 4) -> Check:
    """m j = 0, rho j = id, m sigma = id and j rho + sigma m = id on random elements."""
    chk = Check(f"split exact sequence {sig.name}")
    for _ in range(trials):
        x = random_tensor(sig, TWISTED, rng, max_degree)
        y = random_tensor(sig, PLAIN, rng, max_degree)
        a = random_poly(sig, rng, max_degree)
        jx = map_j(x)
        chk.record(map_m(jx).is_zero(), ("m j != 0", x))
        chk.record(retraction_rho(jx) == x, ("rho j != id", x))
        chk.record(map_m(section_sigma(a)) == a, ("m sigma != id", a))
        chk.record(map_j(retraction_rho(y)) + section_sigma(map_m(y)) == y, ("j rho + sigma m != id", y))
    return chk


def derivation_check(sig: OreSignature, rng: Rng, trials: int = 100, max_degree: int = 4) -> Check:
    """Leibniz on random pairs, D(t^n r) = D(t^n) r, telescoping and laurent cancellations."""
    chk = Check(f"derivation {sig.name}")
    for _ in range(trials):
        chk.merge(leibniz_check(random_poly(sig, rng, max_degree), random_poly(sig, rng, max_degree)))
    for n in range(7):
        tn = OrePoly.t(sig, n)
        for i in range(sig.dim):
            r = OrePoly.constant(sig, sig.base.basis(i))
            chk.record(D_poly(tn * r) == right_act(D_poly(tn), r), ("D(t^n r)", n, i))
    lo = -4 if sig.laurent else 0
    one = OrePoly.one(sig)
    for n in range(lo, 7):
        tn = OrePoly.t(sig, n)
        want = TensorElement.simple(one, n, PLAIN) - TensorElement.simple(tn, 0, PLAIN)
        chk.record(map_j(D_monomial(sig, n)) == want, ("telescoping", n))
    if sig.laurent:
        for m in range(-4, 5):
            for n in range(-4, 5):
                chk.merge(leibniz_check(OrePoly.t(sig, m), OrePoly.t(sig, n)))
    return chk


# ------------------------------------------------------- induced modules


class InducedElement:
    """``sum_j m_j (x) t^j`` in ``M (x)_R A`` or ``M_alpha (x)_R A``."""

    __slots__ = ("module", "sig", "twist", "coeffs")

    def __init__(self, module: RightModule, sig: OreSignature, twist: str, coeffs: dict[int, Sequence] | None = None):
        self.module = module
        self.sig = sig
        self.twist = twist
        self.coeffs = {j: tuple(v) for j, v in sorted((coeffs or {}).items()) if any(v)}

    def __add__(self, other: "InducedElement") -> "InducedElement":
        out = dict(self.coeffs)
        for j, v in other.coeffs.items():
            out[j] = la.vadd(out[j], v) if j in out else v
        return InducedElement(self.module, self.sig, self.twist, out)

    def __neg__(self) -> "InducedElement":
        return InducedElement(self.module, self.sig, self.twist, {j: la.vscale(-1, v) for j, v in self.coeffs.items()})

    def __sub__(self, other: "InducedElement") -> "InducedElement":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, InducedElement)
            and other.module is self.module
            and other.twist == self.twist
            and other.coeffs == self.coeffs
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self) -> str:
        return " + ".join(f"{tuple(map(str, v))}(x)t^{j}" for j, v in self.coeffs.items()) or "0"


def induced_normalize(module: RightModule, sig: OreSignature, twist: str,
                      pairs: Iterable[tuple[Sequence, OrePoly]]) -> InducedElement:
    """``sum m_i (x) g_i`` with ``m (x) b t^l = (m . b) (x) t^l`` (through alpha when twisted)."""
    out: dict[int, Vector] = {}
    for m, g in pairs:
        for l, b in g.coeffs.items():
            c = sig.alpha(b) if twist == TWISTED else b
            v = module.act(m, c)
            out[l] = la.vadd(out[l], v) if l in out else v
    return InducedElement(module, sig, twist, out)


def induced_j_prime(x: InducedElement, m: OreModule) -> InducedElement:
    """``m (x) g -> m (x) t g - (m . t) (x) g`` for an Ore module M."""
    if x.twist != TWISTED:
        raise ValueError("j' starts on the twisted induced module")
    sig = m.sig
    t = OrePoly.t(sig)
    pairs = []
    for j, v in x.coeffs.items():
        tj = OrePoly.t(sig, j)
        pairs.append((v, t * tj))
        pairs.append((la.vscale(-1, la.matvec(m.T, v)), tj))
    return induced_normalize(m.base_module, sig, PLAIN, pairs)


def induced_multiplication(x: InducedElement, m: OreModule) -> Vector:
    """``sum m_j (x) t^j -> sum m_j . t^j``."""
    out = la.zero_vector(m.dim)
    for j, v in x.coeffs.items():
        out = la.vadd(out, la.matvec(m.t_power(j), v))
    return out


def contract(m: OreModule, v: Sequence, x: TensorElement) -> InducedElement:
    """``v (x)_A x`` for ``x`` in ``A_alpha (x) A`` or ``A (x) A``: ``sum (v . f_j) (x) t^j``."""
    return InducedElement(m.base_module, m.sig, x.twist, {j: act(m, v, f) for j, f in x.coeffs.items()})


def induced_sequence_check(m: OreModule, rng: Rng, trials: int = 30, max_degree: int = 3) -> Check:
    """j' agrees with the functor applied to j, and the induced multiplication kills its image."""
    chk = Check(f"induced sequence {m.name}")
    sig = m.sig
    lo = -max_degree if sig.laurent else 0
    for _ in range(trials):
        v = rng.vector(m.dim)
        x = random_tensor(sig, TWISTED, rng, max_degree)
        lhs = induced_j_prime(contract(m, v, x), m)
        rhs = contract(m, v, map_j(x))
        chk.record(lhs == rhs, ("j' != 1 (x) j", v, x))
        y = InducedElement(m.base_module, sig, TWISTED, {rng.between(lo, max_degree): rng.vector(m.dim)})
        chk.record(not any(induced_multiplication(induced_j_prime(y, m), m)), ("mu j' != 0", y))
    return chk
