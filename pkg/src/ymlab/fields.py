"""Gauge field configurations on periodic lattices.

Array layouts (lattice axes always in coordinate order x_0 .. x_{d-1}):

* links:            (d, *dims, *elem)   one group element per (site, direction)
* site sections:    (*dims, *alg)      ad-valued scalar per site
* 1-form fields:    (d, *dims, *alg)
* 2-form fields:    (npairs, *dims, *alg), component order forms.pairs_for_dim

``shift_site(a, mu, +1)[x] == a[x + mu_hat]`` with periodic wraparound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forms import pairs_for_dim
from .groups import Group
from .lattice import Lattice


def shift_site(a: np.ndarray, mu: int, s: int) -> np.ndarray:
    """Value of a site array at x + s*mu_hat (s = +1 or -1)."""
    return np.roll(a, -s, axis=mu)


def _check_match(a, b):
    if a.lattice.dims != b.lattice.dims or a.group.kind != b.group.kind:
        raise ValueError(
            f"mismatched fields: {a.group.name} on {a.lattice.dims} vs "
            f"{b.group.name} on {b.lattice.dims}"
        )


@dataclass
class LinkField:
    """The discrete connection: one group element per (site, direction)."""

    lattice: Lattice
    group: Group
    u: np.ndarray

    def copy(self) -> "LinkField":
        return LinkField(self.lattice, self.group, self.u.copy())

    def unitarity_defect(self) -> float:
        return self.group.unitarity_defect(self.u)

    def reunitarized(self) -> "LinkField":
        return LinkField(self.lattice, self.group, self.group.reunitarize(self.u))


@dataclass
class GaugeTransform:
    lattice: Lattice
    group: Group
    g: np.ndarray


@dataclass
class TwoFormField:
    """Site-centered ad-valued 2-form, e.g. the clover field strength."""

    lattice: Lattice
    group: Group
    c: np.ndarray

    @property
    def pairs(self) -> tuple:
        return pairs_for_dim(self.lattice.d)


@dataclass
class OneFormField:
    lattice: Lattice
    group: Group
    c: np.ndarray


# -- starts -------------------------------------------------------------------


def cold_start(lattice: Lattice, group: Group) -> LinkField:
    u = group.identity((lattice.d,) + lattice.dims)
    return LinkField(lattice, group, u)


def hot_start(lattice: Lattice, group: Group, seed: int, amplitude: float) -> LinkField:
    """Links exp(X) with X drawn by random_algebra; deterministic in seed."""
    rng = np.random.default_rng(seed)
    x = group.random_algebra(rng, (lattice.d,) + lattice.dims, amplitude)
    return LinkField(lattice, group, group.exp_map(x))


def abelian_flux_start(lattice: Lattice, flux) -> LinkField:
    """U(1) configuration with constant plaquette phase per plane.

    ``flux`` maps plane (mu, nu), mu < nu, to an integer n; every plaquette in
    that plane then carries phase 2*pi*n/(L_mu*L_nu), the clover F is
    site-independent, and the configuration is a critical point of the Wilson
    energy.  Accepts a dict keyed by (mu, nu) or a flat sequence in plane
    order.
    """
    from .groups import U1

    if lattice.d != 4:
        raise ValueError("abelian flux start needs a 4-dimensional lattice")
    planes = lattice.planes
    if isinstance(flux, dict):
        bad = set(flux) - set(planes)
        if bad:
            raise ValueError(f"flux keys must be ordered planes, got {sorted(bad)}")
        ns = [flux.get(p, 0) for p in planes]
    else:
        ns = list(flux)
        if len(ns) != len(planes):
            raise ValueError(f"need {len(planes)} flux integers, got {len(ns)}")
    for n in ns:
        if int(n) != n:
            raise ValueError(f"flux quanta must be integers, got {n!r}")
    ns = [int(n) for n in ns]

    dims = lattice.dims
    theta = np.zeros((lattice.d,) + dims, dtype=np.float64)
    coord = np.indices(dims).astype(np.float64)
    for (mu, nu), n in zip(planes, ns):
        if n == 0:
            continue
        Lmu, Lnu = dims[mu], dims[nu]
        # nu-links ramp with x_mu; mu-links at the x_mu boundary carry the twist
        theta[nu] += 2.0 * np.pi * n * coord[mu] / (Lmu * Lnu)
        boundary = coord[mu] == Lmu - 1
        theta[mu] -= np.where(boundary, 2.0 * np.pi * n * coord[nu] / Lnu, 0.0)
    return LinkField(lattice, U1, theta)


def random_gauge(lattice: Lattice, group: Group, seed: int, amplitude: float = 1.0) -> GaugeTransform:
    rng = np.random.default_rng(seed)
    x = group.random_algebra(rng, lattice.dims, amplitude)
    return GaugeTransform(lattice, group, group.exp_map(x))


# -- gauge action ---------------------------------------------------------------


def apply_gauge(U: LinkField, t: GaugeTransform) -> LinkField:
    """U_mu(x) -> g(x) U_mu(x) g(x+mu)^dag."""
    _check_match(U, t)
    g = U.group
    out = np.empty_like(U.u)
    for mu in range(U.lattice.d):
        out[mu] = g.mul(g.mul(t.g, U.u[mu]), g.dag(shift_site(t.g, mu, +1)))
    return LinkField(U.lattice, U.group, out)


def conjugate_site_field(t: GaugeTransform, s: np.ndarray) -> np.ndarray:
    """g(x) S(x) g(x)^dag for an ad-valued site field."""
    return t.group.conj_by(t.g, s)


# -- loops and field strength ----------------------------------------------------


def plaquette(U: LinkField, coords, mu: int, nu: int):
    """Single plaquette U_mu(x) U_nu(x+mu) U_mu(x+nu)^dag U_nu(x)^dag.

    Returns a group element (an angle for U(1)).
    """
    if mu == nu:
        raise ValueError("plaquette plane needs two distinct directions")
    g = U.group
    lat = U.lattice
    x = tuple(coords)
    xm = lat.shift(x, mu, +1)
    xn = lat.shift(x, nu, +1)
    p = g.mul(U.u[(mu,) + x], U.u[(nu,) + xm])
    p = g.mul(p, g.dag(U.u[(mu,) + xn]))
    return g.mul(p, g.dag(U.u[(nu,) + x]))


def plaquette_field(U: LinkField, mu: int, nu: int) -> np.ndarray:
    """All plaquettes of one plane at once, shape (*dims, *elem)."""
    if mu == nu:
        raise ValueError("plaquette plane needs two distinct directions")
    g = U.group
    a = U.u[mu]
    b = shift_site(U.u[nu], mu, +1)
    c = g.dag(shift_site(U.u[mu], nu, +1))
    d = g.dag(U.u[nu])
    return g.mul(g.mul(a, b), g.mul(c, d))


def _clover_loops(U: LinkField, mu: int, nu: int):
    """The four same-orientation quadrant loops based at x, as group elements."""
    g = U.group
    umu, unu = U.u[mu], U.u[nu]
    umu_m = shift_site(umu, mu, -1)            # U_mu(x-mu)
    unu_m = shift_site(unu, mu, -1)            # U_nu(x-mu)
    umu_n = shift_site(umu, nu, -1)            # U_mu(x-nu)
    unu_n = shift_site(unu, nu, -1)            # U_nu(x-nu)

    q1 = plaquette_field(U, mu, nu)
    # x -> x+nu -> x+nu-mu -> x-mu -> x
    q2 = g.mul(
        g.mul(unu, g.dag(shift_site(umu_m, nu, +1))),
        g.mul(g.dag(unu_m), umu_m),
    )
    # x -> x-mu -> x-mu-nu -> x-nu -> x
    q3 = g.mul(
        g.mul(g.dag(umu_m), g.dag(shift_site(unu_m, nu, -1))),
        g.mul(shift_site(umu_m, nu, -1), unu_n),
    )
    # x -> x-nu -> x-nu+mu -> x+mu -> x
    q4 = g.mul(
        g.mul(g.dag(unu_n), umu_n),
        g.mul(shift_site(unu_n, mu, +1), g.dag(umu)),
    )
    return q1, q2, q3, q4


def clover(U: LinkField) -> TwoFormField:
    """Clover field strength: F_{mu nu}(x) = P_alg(sum of 4 quadrant loops)/4.

    O(a^2) accurate and reflection symmetric, which the SD/ASD split and the
    topological charge need.
    """
    g = U.group
    pairs = pairs_for_dim(U.lattice.d)
    comps = []
    for mu, nu in pairs:
        q1, q2, q3, q4 = _clover_loops(U, mu, nu)
        total = g.embed(q1) + g.embed(q2) + g.embed(q3) + g.embed(q4)
        comps.append(g.project_algebra(total) / 4.0)
    return TwoFormField(U.lattice, U.group, np.stack(comps, axis=0))


def covariant_diff(U: LinkField, s: np.ndarray, mu: int) -> np.ndarray:
    """Forward covariant difference
    (nabla_mu S)(x) = U_mu(x) S(x+mu) U_mu(x)^dag - S(x)."""
    U.lattice.check_direction(mu)
    return U.group.conj_by(U.u[mu], shift_site(s, mu, +1)) - s
