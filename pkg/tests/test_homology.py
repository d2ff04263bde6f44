import pytest

from orehom import linalg as la
from orehom.algebra import (
    RightModule,
    direct_sum,
    regular_module,
    simple_modules,
)
from orehom.catalogue import algebras, base_module_candidates, ses_fixtures, signatures
from orehom.homology import (
    Dimension,
    NotExact,
    Resolution,
    ShortExactSequence,
    bidim,
    dh,
    ext_dims,
    gldim,
    subadditivity_check,
    twist_invariance_check,
)


def hom_oracle(m: RightModule, n: RightModule) -> int:
    """dim {F : M -> N | rho_N(a) F = F rho_M(a)}."""
    a = m.algebra
    cols = m.dim * n.dim
    rows = []
    for i in range(a.dim):
        rows += _commutator_rows(n.action[i], m.action[i], n.dim, m.dim)
    return cols - la.rank(rows) if rows else cols


def _commutator_rows(rn, rm, dn, dm):
    # F flattened row-major (dn x dm): rows of rn F - F rm
    out = []
    for p in range(dn):
        for q in range(dm):
            row = [la.ZERO] * (dn * dm)
            for s in range(dn):
                row[s * dm + q] += rn[p][s]
            for s in range(dm):
                row[p * dm + s] -= rm[s][q]
            out.append(row)
    return out


def ext1_oracle(m: RightModule, n: RightModule) -> int:
    """Extensions 0 -> N -> E -> M -> 0 with rho_E(a) = [[rho_N(a), c(a)], [0, rho_M(a)]], modulo coboundaries."""
    a = m.algebra
    dn, dm, k = n.dim, m.dim, a.dim
    block = dn * dm
    nvars = k * block  # c(e_i) flattened
    rows = []
    for i in range(k):
        for j in range(k):
            # c(e_i e_j) = rho_N(e_j) c(e_i) + c(e_j) rho_M(e_i)
            for p in range(dn):
                for q in range(dm):
                    row = [la.ZERO] * nvars
                    for l, coeff in enumerate(a.structure[i][j]):
                        row[l * block + p * dm + q] += coeff
                    for s in range(dn):
                        row[i * block + s * dm + q] -= n.action[j][p][s]
                    for s in range(dm):
                        row[j * block + p * dm + s] -= m.action[i][s][q]
                    rows.append(row)
    cocycles = nvars - la.rank(rows)
    # coboundaries: c(a) = rho_N(a) F - F rho_M(a)
    images = []
    for p in range(dn):
        for q in range(dm):
            f = [[la.ONE if (r, c) == (p, q) else la.ZERO for c in range(dm)] for r in range(dn)]
            vec = []
            for i in range(k):
                d = la.sub(la.matmul(n.action[i], f), la.matmul(f, m.action[i]))
                vec += [x for row in d for x in row]
            images.append(vec)
    coboundaries = la.rank(images) if images else 0
    return cocycles - coboundaries


def module_pairs():
    for name in ("QxQ", "T2", "Qeps"):
        mods = base_module_candidates(algebras()[name])
        for m in mods:
            for n in mods:
                yield pytest.param(m, n, id=f"{m.name}-{n.name}")


@pytest.mark.parametrize("m,n", list(module_pairs()))
def test_low_ext_matches_yoneda_oracle(m, n):
    dims = ext_dims(m, n, 1)
    assert dims[0] == hom_oracle(m, n)
    assert dims[1] == ext1_oracle(m, n)


def test_resolution_certificates():
    for name in ("T2", "Qeps", "QxQ"):
        for m in base_module_candidates(algebras()[name]):
            res = Resolution(m)
            chk = res.certify(4)
            assert chk, chk.failures


def test_padding_does_not_change_ext():
    t2 = algebras()["T2"]
    for m in base_module_candidates(t2):
        for n in simple_modules(t2):
            assert ext_dims(Resolution(m), n, 4) == ext_dims(Resolution(m, pad=3, seed=5), n, 4)


def test_dh_values():
    a = algebras()
    s0, s1 = simple_modules(a["T2"])
    assert sorted([dh(s0).value, dh(s1).value]) == [0, 1]
    (se,) = simple_modules(a["Qeps"])
    d = dh(se, 6)
    assert d.capped and str(d) == "at-least-6" and d.as_json() == "at-least-6"
    assert dh(RightModule(a["T2"], 0, tuple(la.zeros(0, 0) for _ in range(3)), "0")) == Dimension(-1)
    assert dh(regular_module(a["Qeps"])) == Dimension(0)


def test_dimension_baselines():
    a = algebras()
    assert gldim(a["Q"]) == Dimension(0)
    assert gldim(a["QxQ"]) == Dimension(0)
    assert gldim(a["T2"]) == Dimension(1)
    assert str(gldim(a["Qeps"])) == "at-least-6"
    assert bidim(a["QxQ"]) == Dimension(0)
    assert bidim(a["T2"]) == Dimension(1)


def test_twist_invariance():
    for sig in signatures().values():
        if not sig.alpha.invertible:
            continue
        for m in base_module_candidates(sig.base):
            chk = twist_invariance_check(m, sig.alpha, 4)
            assert chk, chk.details


@pytest.mark.parametrize("name", ["T2", "Qeps"])
def test_subadditivity_fixtures(name):
    fixtures = ses_fixtures(algebras()[name])
    assert len(fixtures) >= 10
    for ses in fixtures:
        chk = subadditivity_check(ses, 6)
        assert chk, (ses.name, chk.failures)


def test_radical_sequence_of_t2():
    (ses,) = [s for s in ses_fixtures(algebras()["T2"]) if s.name == "T2:rad(T2_reg)"]
    assert subadditivity_check(ses, 4).details["dh"] == ["0", "0", "1"]


def test_not_exact_is_rejected():
    t2 = algebras()["T2"]
    s0, s1 = simple_modules(t2)
    m = direct_sum(s0, s1)
    zero = la.zeros(2, 1)
    bad = ShortExactSequence(s0, m, s1, zero, [[la.ZERO, la.ONE]], "bad")
    with pytest.raises(NotExact):
        subadditivity_check(bad)
