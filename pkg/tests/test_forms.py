import numpy as np
import pytest

from ymlab.forms import (
    PAIRS,
    component,
    contract_estar,
    form_inner,
    hodge_star,
    interior,
    project_pm,
    wedge11,
    wedge_scalar,
)
from ymlab.groups import SU2, SU3, U1


def basis_2form(mu, nu):
    f = np.zeros(6)
    f[PAIRS.index((mu, nu))] = 1.0
    return f


def rand_scalar_2form(rng, batch=()):
    return rng.normal(size=(6,) + batch)


def rand_ad_2form(g, rng, batch=()):
    return g.random_algebra(rng, (6,) + batch, 1.0)


def rand_ad_1form(g, rng, batch=()):
    return g.random_algebra(rng, (4,) + batch, 1.0)


# -- hodge star -----------------------------------------------------------------


def test_star_orientation_examples():
    # star(e0^e1) = e2^e3 and star(e0^e2) = -e1^e3
    assert np.array_equal(hodge_star(basis_2form(0, 1)), basis_2form(2, 3))
    assert np.array_equal(hodge_star(basis_2form(0, 2)), -basis_2form(1, 3))
    assert np.array_equal(hodge_star(basis_2form(2, 3)), basis_2form(0, 1))


def test_star_involution():
    rng = np.random.default_rng(0)
    f = rand_scalar_2form(rng, (100,))
    assert np.allclose(hodge_star(hodge_star(f)), f, atol=0)


# -- projectors -------------------------------------------------------------------


def test_projector_examples():
    p = project_pm(basis_2form(0, 1), +1)
    assert np.allclose(p, 0.5 * (basis_2form(0, 1) + basis_2form(2, 3)))


def test_projector_algebra():
    rng = np.random.default_rng(1)
    f = rand_scalar_2form(rng, (200,))
    fp = project_pm(f, +1)
    fm = project_pm(f, -1)
    assert np.allclose(fp + fm, f, atol=1e-15)
    assert np.max(np.abs(project_pm(fp, -1))) < 1e-15
    assert np.max(np.abs(hodge_star(fp) - fp)) < 1e-15
    # eigenspace: P+ f = f when star f = f
    assert np.allclose(project_pm(fp, +1), fp, atol=1e-15)


def test_projector_norm_split():
    rng = np.random.default_rng(2)
    f = rand_ad_2form(SU2, rng, (50,))
    fp, fm = project_pm(f, +1), project_pm(f, -1)
    n = np.sum(form_inner(f, f, SU2))
    npm = np.sum(form_inner(fp, fp, SU2)) + np.sum(form_inner(fm, fm, SU2))
    assert abs(n - npm) < 1e-13 * (1 + abs(n))
    assert abs(np.sum(form_inner(fp, fm, SU2))) < 1e-13


def test_project_pm_bad_sign():
    with pytest.raises(ValueError):
        project_pm(basis_2form(0, 1), 2)


# -- interior product ---------------------------------------------------------------


def test_interior_examples():
    f = basis_2form(0, 1)
    i0 = interior(0, f)
    expected = np.zeros(4)
    expected[1] = 1.0
    assert np.array_equal(i0, expected)
    assert np.max(np.abs(interior(2, f))) == 0.0


def test_interior_degree_identity():
    # sum_mu e_mu ^ i_mu f = 2 f for 2-forms
    rng = np.random.default_rng(3)
    f = rand_scalar_2form(rng, (50,))
    acc = np.zeros_like(f)
    for mu in range(4):
        imu = interior(mu, f)
        e = np.zeros((4,) + imu.shape[1:])
        e[mu] = 1.0
        acc += wedge_scalar(e, imu)
    assert np.allclose(acc, 2.0 * f, atol=1e-13)


def test_interior_out_of_range():
    with pytest.raises(ValueError):
        interior(4, basis_2form(0, 1))


# -- wedges -----------------------------------------------------------------------


def test_wedge11_abelian_self_vanishes():
    rng = np.random.default_rng(4)
    psi = rand_ad_1form(U1, rng, (10,))
    assert np.max(np.abs(wedge11(psi, psi, U1))) == 0.0


def test_wedge11_self_gives_bracket():
    rng = np.random.default_rng(5)
    psi = rand_ad_1form(SU2, rng)
    w = wedge11(psi, psi, SU2)
    assert np.allclose(w[PAIRS.index((0, 1))], SU2.commutator(psi[0], psi[1]), atol=1e-14)


def test_wedge11_bilinear():
    rng = np.random.default_rng(6)
    a, b, c = (rand_ad_1form(SU3, rng) for _ in range(3))
    lhs = wedge11(a + 2.0 * b, c, SU3)
    rhs = wedge11(a, c, SU3) + 2.0 * wedge11(b, c, SU3)
    assert np.max(np.abs(lhs - rhs)) < 1e-13


# -- contraction -------------------------------------------------------------------


def test_contract_estar_abelian_zero():
    rng = np.random.default_rng(7)
    psi = rand_ad_1form(U1, rng, (5,))
    f = rand_ad_2form(U1, rng, (5,))
    assert np.max(np.abs(contract_estar(psi, f, U1))) == 0.0


def test_contract_estar_zero_form():
    rng = np.random.default_rng(8)
    psi = rand_ad_1form(SU2, rng)
    f = np.zeros((6, 2, 2), dtype=complex)
    assert np.max(np.abs(contract_estar(psi, f, SU2))) == 0.0


@pytest.mark.parametrize("g", [SU2, SU3])
def test_contract_estar_is_wedge_adjoint_up_to_constant(g):
    # <f, psi ^ w> = -1/2 <e*(psi) f, w> with the 1/2-bracket wedge convention
    rng = np.random.default_rng(9)
    for _ in range(10):
        psi, w = rand_ad_1form(g, rng), rand_ad_1form(g, rng)
        f = rand_ad_2form(g, rng)
        lhs = np.sum(form_inner(f, wedge11(psi, w, g), g))
        rhs = -0.5 * np.sum(form_inner(contract_estar(psi, f, g), w, g))
        assert abs(lhs - rhs) < 1e-12 * (1 + abs(lhs))


# -- the closure and cyclic identities ----------------------------------------------


def rand_sd_scalar(rng, sign=+1):
    return project_pm(rand_scalar_2form(rng), sign)


@pytest.mark.parametrize("sign", [+1, -1])
def test_scalar_bilinear_closure(sign):
    # for scalar 2-forms f, g of definite duality, sum_a i_a f ^ i_a g has the
    # same duality (the self-wedge of a single scalar form is identically 0)
    rng = np.random.default_rng(10)
    for _ in range(25):
        f = rand_sd_scalar(rng, sign)
        g = rand_sd_scalar(rng, sign)
        acc = np.zeros(6)
        for a in range(4):
            acc += wedge_scalar(interior(a, f), interior(a, g))
        assert np.max(np.abs(project_pm(acc, -sign))) < 1e-13
        self_wedge = sum(wedge_scalar(interior(a, f), interior(a, f)) for a in range(4))
        assert np.max(np.abs(self_wedge)) == 0.0


@pytest.mark.parametrize("sign", [+1, -1])
def test_ad_valued_closure(sign):
    # sum_a i_a f ^ i_a f (bracket wedge) inherits the duality of f
    rng = np.random.default_rng(11)
    for _ in range(10):
        f = project_pm(rand_ad_2form(SU2, rng), sign)
        acc = np.zeros_like(f)
        for a in range(4):
            ia = interior(a, f)
            acc += wedge11(ia, ia, SU2)
        assert np.max(np.abs(project_pm(acc, -sign))) < 1e-13


def test_cyclic_identity():
    # sum_a <phi1, i_a phi2 ^ i_a phi3> = sum_a <phi3, i_a phi1 ^ i_a phi2>
    rng = np.random.default_rng(12)
    for g in (SU2, SU3):
        for _ in range(10):
            p1, p2, p3 = (rand_ad_2form(g, rng) for _ in range(3))
            lhs = sum(
                np.sum(form_inner(p1, wedge11(interior(a, p2), interior(a, p3), g), g))
                for a in range(4)
            )
            rhs = sum(
                np.sum(form_inner(p3, wedge11(interior(a, p1), interior(a, p2), g), g))
                for a in range(4)
            )
            assert abs(lhs - rhs) < 1e-12 * (1 + abs(lhs))


def test_component_antisymmetric_access():
    rng = np.random.default_rng(13)
    f = rand_scalar_2form(rng)
    assert component(f, 1, 0) == -f[PAIRS.index((0, 1))]
    assert component(f, 2, 2) == 0.0
