import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from orehom import linalg as la
from orehom.algebra import simple_modules
from orehom.catalogue import algebras, ore_module_fixtures, signatures
from orehom.ore import (
    OreModule,
    OrePoly,
    SignatureMismatch,
    act,
    check_ore_module,
    from_opposite,
    laurent_mul,
    module_action_check,
    opposite_iso_check,
    opposite_signature,
    random_poly,
    rewrite_ops,
    ring_axioms_check,
    to_opposite,
)
from orehom.rng import Rng

SIGS = list(signatures())
M = sympy.Matrix


def _basis_reps():
    """Faithful matrix models of the base algebras."""
    return {
        "Q": [M([[1]])],
        "QxQ": [M([[1, 0], [0, 0]]), M([[0, 0], [0, 1]])],
        "T2": [M([[1, 0], [0, 0]]), M([[0, 1], [0, 0]]), M([[0, 0], [0, 1]])],
        "Qeps": [M([[1, 0], [0, 1]]), M([[0, 1], [0, 0]])],
    }


# image of t as a polynomial in a central variable z with matrix coefficients
T_IMAGE = {
    "Q[t]": {1: M([[1]])},
    "QxQ[t;swap]": {1: M([[0, 1], [1, 0]])},
    "QxQ[t,t^-1;swap]": {1: M([[0, 1], [1, 0]])},
    "T2[t;conj,ad]": {0: M([[0, 1], [0, 0]]), 1: M([[1, 1], [0, 1]])},
    "Qeps[t;neg]": {1: M([[1, 0], [0, -1]])},
}
T_INVERSE = {"QxQ[t,t^-1;swap]": {-1: M([[0, 1], [1, 0]])}}


def pmul(p, q):
    out = {}
    for i, a in p.items():
        for j, b in q.items():
            out[i + j] = out.get(i + j, sympy.zeros(a.rows, b.cols)) + a * b
    return {k: v for k, v in out.items() if v != sympy.zeros(v.rows, v.cols)}


def padd(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if v != sympy.zeros(v.rows, v.cols)}


def ppow(name, k):
    size = _basis_reps()[signatures()[name].base.name][0].rows
    out = {0: sympy.eye(size)}
    step = T_IMAGE[name] if k >= 0 else T_INVERSE[name]
    for _ in range(abs(k)):
        out = pmul(out, step)
    return out


def rep(name, v):
    reps = _basis_reps()[signatures()[name].base.name]
    total = sympy.zeros(reps[0].rows, reps[0].cols)
    for c, r in zip(v, reps):
        total += sympy.Rational(c.numerator, c.denominator) * r
    return {0: total}


def phi(name, f: OrePoly):
    """Image in M_n(Q[z, z^-1]); opposite kinds put the coefficient on the right."""
    out = {}
    for k, a in f.coeffs.items():
        term = pmul(ppow(name, k), rep(name, a)) if f.sig.opposite else pmul(rep(name, a), ppow(name, k))
        out = padd(out, term)
    return out


@pytest.mark.parametrize("name", SIGS)
def test_model_satisfies_commutation_rule(name):
    # t a = alpha(a) t + delta(a) in the model, so phi is a well-defined ring map
    sig = signatures()[name]
    for i in range(sig.dim):
        a = sig.base.basis(i)
        lhs = pmul(T_IMAGE[name], rep(name, a))
        rhs = padd(pmul(rep(name, sig.alpha(a)), T_IMAGE[name]), rep(name, sig.delta(a)))
        assert lhs == rhs


@pytest.mark.parametrize("name", SIGS)
@given(seed=st.integers(0, 2**32))
def test_multiplication_matches_model(name, seed):
    sig = signatures()[name]
    rng = Rng(seed)
    f, g = random_poly(sig, rng, 4), random_poly(sig, rng, 4)
    assert phi(name, f * g) == pmul(phi(name, f), phi(name, g))


@pytest.mark.parametrize("name", SIGS)
@given(seed=st.integers(0, 2**32))
def test_opposite_presentation_matches_model(name, seed):
    sig = signatures()[name]
    op = opposite_signature(sig)
    rng = Rng(seed)
    f, g = random_poly(sig, rng, 3), random_poly(sig, rng, 3)
    F, G = to_opposite(f, op), to_opposite(g, op)
    assert phi(name, F) == phi(name, f)
    assert phi(name, F * G) == pmul(phi(name, F), phi(name, G))
    assert from_opposite(F, sig) == f


@pytest.mark.parametrize("name", SIGS)
def test_ring_axioms(name):
    chk = ring_axioms_check(signatures()[name], Rng(11), trials=60)
    assert chk, chk.failures


@pytest.mark.parametrize("name", SIGS)
def test_opposite_iso(name):
    chk = opposite_iso_check(signatures()[name], Rng(12), trials=60)
    assert chk, chk.failures


def test_rewrite_ops_low_degrees():
    sig = signatures()["T2[t;conj,ad]"]
    A, D = sig.alpha.matrix, sig.delta.matrix
    ops1 = rewrite_ops(sig, 1)
    assert ops1[1] == A and ops1[0] == D
    ops2 = rewrite_ops(sig, 2)
    assert ops2[2] == la.matmul(A, A)
    assert ops2[1] == la.add(la.matmul(A, D), la.matmul(D, A))
    assert ops2[0] == la.matmul(D, D)
    swap = signatures()["QxQ[t;swap]"]
    ops3 = rewrite_ops(swap, 3)
    assert ops3[3] == swap.alpha.power(3).matrix
    assert all(la.is_zero(ops3[k]) for k in range(3))


def test_spec_products():
    q = signatures()["Q[t]"]
    assert OrePoly.t(q) * OrePoly.t(q) == OrePoly.t(q, 2)
    qq = signatures()["QxQ[t;swap]"]
    e1, e2 = qq.base.basis(0), qq.base.basis(1)
    lhs = OrePoly.monomial(qq, e1, 1) * OrePoly.monomial(qq, e2, 1)
    assert lhs == OrePoly.monomial(qq, e1, 2)
    qe = signatures()["Qeps[t;neg]"]
    eps_t = OrePoly.monomial(qe, qe.base.basis(1), 1)
    assert (eps_t * eps_t).is_zero()


def test_laurent_products():
    lq = signatures()["QxQ[t,t^-1;swap]"]
    assert laurent_mul(OrePoly.t(lq), OrePoly.t(lq, -1)) == OrePoly.one(lq)
    a, b = lq.base.element({"e1": 2, "e2": 3}), lq.base.element({"e1": 5})
    lhs = OrePoly.monomial(lq, a, -1) * OrePoly.monomial(lq, b, 1)
    assert lhs == OrePoly.constant(lq, lq.base.mul(a, lq.alpha.inverse()(b)))
    with pytest.raises(SignatureMismatch):
        laurent_mul(OrePoly.t(signatures()["Q[t]"]), OrePoly.t(signatures()["Q[t]"]))


def test_to_opposite_examples():
    sig = signatures()["T2[t;conj,ad]"]
    op = opposite_signature(sig)
    a = sig.base.element({"e11": 1})
    assert to_opposite(OrePoly.constant(sig, a), op) == OrePoly.constant(op, a)
    assert to_opposite(OrePoly.t(sig), op) == OrePoly.t(op)
    # a t = t alpha^-1(a) - delta(alpha^-1(a))
    ainv = sig.alpha.inverse()(a)
    want = OrePoly(op, {1: ainv, 0: la.vscale(-1, sig.delta(ainv))})
    assert to_opposite(OrePoly.monomial(sig, a, 1), op) == want


def test_check_ore_module_examples():
    q = signatures()["Q[t]"]
    s = simple_modules(q.base)[0]
    assert check_ore_module(OreModule(q, s, la.matrix([[7]])))
    assert check_ore_module(OreModule(q, s, la.matrix([[0]])))
    qq = signatures()["QxQ[t;swap]"]
    s1 = simple_modules(qq.base)[0]
    assert not check_ore_module(OreModule(qq, s1, la.matrix([[1]])))


@pytest.mark.parametrize("name", SIGS)
def test_fixture_modules(name):
    fixtures = ore_module_fixtures(name)
    assert fixtures
    for m in fixtures:
        assert check_ore_module(m)
        assert module_action_check(m, Rng(3), trials=10)


def test_act_examples():
    m = ore_module_fixtures("T2[t;conj,ad]")[0]
    sig = m.sig
    v = tuple(la.ONE for _ in range(m.dim))
    assert act(m, v, OrePoly.one(sig)) == v
    a = sig.base.element({"e11": 1, "e12": 3})
    assert act(m, v, OrePoly.monomial(sig, a, 1)) == la.matvec(m.T, m.base_module.act(v, a))


def test_negative_power_needs_laurent():
    m = ore_module_fixtures("Q[t]")[0]
    with pytest.raises(SignatureMismatch):
        m.t_power(-1)


def test_random_poly_is_reproducible():
    sig = signatures()["T2[t;conj,ad]"]
    assert random_poly(sig, Rng(5), 4) == random_poly(sig, Rng(5), 4)
    assert algebras()["T2"] is sig.base


def _associates_brute_force(m):
    """v.(t a) == (v.t).a on every basis pair, with t a expanded by ring multiplication."""
    sig = m.sig
    t = OrePoly.t(sig)
    for q in range(m.dim):
        v = la.unit_vector(m.dim, q)
        for i in range(sig.dim):
            a = OrePoly.constant(sig, sig.base.basis(i))
            lhs = act(m, v, t * a) if not sig.opposite else act(m, v, a * t)
            rhs = act(m, act(m, v, t), a) if not sig.opposite else act(m, act(m, v, a), t)
            if lhs != rhs:
                return False
    return True


@given(st.integers(0, 10**6))
def test_compatibility_identity_matches_brute_force(seed):
    rng = Rng(seed)
    for name in ("QxQ[t;swap]", "T2[t;conj,ad]", "Qeps[t;neg]"):
        sig = signatures()[name]
        for m in ore_module_fixtures(name):
            assert check_ore_module(m) and _associates_brute_force(m)
            if sig.laurent:
                continue
            noise = la.matrix([[rng.rational() if rng.chance(la.ONE / 3) else 0 for _ in range(m.dim)]
                               for _ in range(m.dim)])
            other = OreModule(sig, m.base_module, la.add(m.T, noise))
            assert bool(check_ore_module(other)) == _associates_brute_force(other)
        op = opposite_signature(sig)
        for m in ore_module_fixtures(name):
            flipped = OreModule(op, m.base_module, m.T)
            assert bool(check_ore_module(flipped)) == _associates_brute_force(flipped)
