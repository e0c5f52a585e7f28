import numpy as np
import pytest

from ymlab.action import topological_charge, wilson_energy
from ymlab.fields import (
    abelian_flux_start,
    apply_gauge,
    clover,
    cold_start,
    conjugate_site_field,
    covariant_diff,
    hot_start,
    plaquette,
    plaquette_field,
    random_gauge,
)
from ymlab.groups import SU2, SU3, U1
from ymlab.lattice import Lattice

LAT4 = Lattice((4, 4, 4, 4))
LAT2 = Lattice((2, 2, 2, 2))
LAT3 = Lattice((3, 3, 3))


def plaquette_phase_oracle(U, x, mu, nu):
    """Independent per-site U(1) plaquette phase from raw link angles."""
    lat = U.lattice
    th = U.u
    xm = lat.shift(x, mu, +1)
    xn = lat.shift(x, nu, +1)
    p = th[(mu,) + x] + th[(nu,) + xm] - th[(mu,) + xn] - th[(nu,) + x]
    return np.mod(p + np.pi, 2 * np.pi) - np.pi


# -- starts ---------------------------------------------------------------------


def test_cold_start_trivial():
    U = cold_start(LAT2, SU2)
    assert wilson_energy(U) == 0.0
    assert np.max(np.abs(clover(U).c)) == 0.0
    assert topological_charge(U) == 0.0


def test_hot_start_zero_amplitude_is_cold():
    U = hot_start(LAT2, SU3, 5, 0.0)
    C = cold_start(LAT2, SU3)
    assert np.array_equal(U.u, C.u)


def test_hot_start_deterministic():
    a = hot_start(LAT2, SU2, 9, 0.5)
    b = hot_start(LAT2, SU2, 9, 0.5)
    assert np.array_equal(a.u, b.u)


def test_hot_start_energy_grows_with_amplitude():
    amps = (0.1, 0.2, 0.35, 0.5)
    means = []
    for amp in amps:
        means.append(
            np.mean([wilson_energy(hot_start(LAT2, SU2, s, amp)) for s in range(10)])
        )
    assert all(a < b for a, b in zip(means, means[1:]))


# -- abelian flux -------------------------------------------------------------------


def test_flux_zero_is_cold():
    U = abelian_flux_start(LAT4, (0, 0, 0, 0, 0, 0))
    assert np.max(np.abs(U.u)) == 0.0


def test_flux_plaquette_phases_oracle():
    # n_01 = 1 on 4^4: every (0,1)-plaquette phase 2 pi/16, all others zero
    U = abelian_flux_start(LAT4, {(0, 1): 1})
    expected = 2 * np.pi / 16
    for x in [(0, 0, 0, 0), (3, 0, 0, 0), (3, 3, 0, 0), (1, 2, 3, 0), (3, 3, 3, 3)]:
        assert plaquette_phase_oracle(U, x, 0, 1) == pytest.approx(expected, abs=1e-12)
        for mu, nu in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]:
            assert plaquette_phase_oracle(U, x, mu, nu) == pytest.approx(0.0, abs=1e-12)


def test_flux_every_site_uniform():
    U = abelian_flux_start(Lattice((2, 3, 2, 2)), {(0, 1): 1, (2, 3): -2})
    p01 = np.cos(plaquette_field(U, 0, 1))
    p23 = np.cos(plaquette_field(U, 2, 3))
    assert np.max(np.abs(p01 - np.cos(2 * np.pi / 6))) < 1e-12
    assert np.max(np.abs(p23 - np.cos(-4 * np.pi / 4))) < 1e-12


def test_flux_clover_constant():
    U = abelian_flux_start(LAT4, {(0, 1): 1})
    F = clover(U)
    expected = 1j * np.sin(2 * np.pi / 16)
    assert np.max(np.abs(F.c[0] - expected)) < 1e-12
    assert np.max(np.abs(F.c[1:])) < 1e-13


def test_flux_is_critical_point():
    from ymlab.action import force, force_sup_norm

    U = abelian_flux_start(Lattice((6, 6, 6, 6)), {(0, 1): 1, (2, 3): 1})
    assert force_sup_norm(U, force(U)) < 1e-12


def test_flux_rejects_non_integer():
    with pytest.raises(ValueError):
        abelian_flux_start(LAT4, (0.5, 0, 0, 0, 0, 0))


def test_flux_needs_d4():
    with pytest.raises(ValueError):
        abelian_flux_start(LAT3, (1, 0, 0))


# -- gauge transformations ------------------------------------------------------------


def test_identity_gauge_is_noop():
    U = hot_start(LAT2, SU2, 1, 0.4)
    t = random_gauge(LAT2, SU2, 0, 0.0)
    assert np.allclose(apply_gauge(U, t).u, U.u, atol=1e-15)


@pytest.mark.parametrize("g", [U1, SU2, SU3])
def test_energy_gauge_invariance(g):
    U = hot_start(LAT2, g, 2, 0.4)
    t = random_gauge(LAT2, g, 3, 1.0)
    e0, e1 = wilson_energy(U), wilson_energy(apply_gauge(U, t))
    assert abs(e0 - e1) < 1e-11 * (1 + abs(e0))


def test_clover_gauge_covariance():
    U = hot_start(LAT2, SU2, 4, 0.4)
    t = random_gauge(LAT2, SU2, 5, 1.0)
    F = clover(U)
    Fg = clover(apply_gauge(U, t))
    for k in range(6):
        expected = conjugate_site_field(t, F.c[k])
        assert np.max(np.abs(Fg.c[k] - expected)) < 1e-11


# -- plaquettes and clover --------------------------------------------------------------


def test_plaquette_cold_identity():
    U = cold_start(LAT2, SU3)
    p = plaquette(U, (0, 1, 0, 1), 0, 2)
    assert np.allclose(p, np.eye(3), atol=1e-15)


def test_plaquette_reversal_is_dagger():
    U = hot_start(LAT2, SU2, 6, 0.5)
    x = (1, 0, 1, 0)
    p = plaquette(U, x, 0, 1)
    q = plaquette(U, x, 1, 0)
    assert np.allclose(q, SU2.dag(p), atol=1e-13)
    assert SU2.retrace(p) == pytest.approx(SU2.retrace(q), abs=1e-13)


def test_plaquette_field_matches_single():
    U = hot_start(LAT2, SU3, 7, 0.5)
    pf = plaquette_field(U, 1, 3)
    for x in [(0, 0, 0, 0), (1, 1, 0, 1)]:
        assert np.allclose(pf[x], plaquette(U, x, 1, 3), atol=1e-13)


def test_plaquette_rejects_equal_directions():
    U = cold_start(LAT2, SU2)
    with pytest.raises(ValueError):
        plaquette(U, (0, 0, 0, 0), 1, 1)


def test_clover_is_algebra_valued():
    U = hot_start(LAT2, SU3, 8, 0.6)
    F = clover(U)
    for k in range(6):
        assert np.max(np.abs(F.c[k] - SU3.project_algebra(F.c[k]))) < 1e-13


# -- covariant difference ----------------------------------------------------------------


def test_covariant_diff_constant_on_cold():
    U = cold_start(LAT3, SU2)
    s = np.broadcast_to(SU2.random_algebra(1), LAT3.dims + (2, 2)).copy()
    assert np.max(np.abs(covariant_diff(U, s, 0))) == 0.0


def test_covariant_diff_u1_is_forward_difference():
    U = hot_start(LAT3, U1, 2, 0.7)
    s = U1.random_algebra(3, LAT3.dims, 1.0)
    for mu in range(3):
        expected = np.roll(s, -1, axis=mu) - s
        assert np.allclose(covariant_diff(U, s, mu), expected, atol=1e-15)


def test_covariant_diff_gauge_covariance():
    U = hot_start(LAT2, SU2, 10, 0.5)
    s = SU2.random_algebra(11, LAT2.dims, 1.0)
    t = random_gauge(LAT2, SU2, 12, 1.0)
    Ug = apply_gauge(U, t)
    sg = conjugate_site_field(t, s)
    for mu in range(4):
        lhs = covariant_diff(Ug, sg, mu)
        rhs = conjugate_site_field(t, covariant_diff(U, s, mu))
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_mismatched_fields_rejected():
    U = hot_start(LAT2, SU2, 1, 0.1)
    t = random_gauge(LAT2, SU3, 1, 0.1)
    with pytest.raises(ValueError):
        apply_gauge(U, t)
