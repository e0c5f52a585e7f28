"""Structure checks at (near-)critical configurations.

Every check is exposed as a normalized residual with a documented tolerance
rather than an assertion of exact vanishing: the statements being probed are
continuum statements, and lattice artifacts enter at O(a) in nabla F and
O(a^2) in F itself.

Killing fields are exactly the d coordinate translations of the torus.  A
1-form test direction psi lives on sites; the link perturbation uses the site
value at the link's base point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import LinkField, OneFormField, TwoFormField, clover, covariant_diff
from .flow import line_probe
from .forms import component, contract_estar, interior, pairs_for_dim, project_pm
from .groups import Group

_EPS = 1e-30


@dataclass
class DiagnosticsReport:
    dims: int
    commutator_max: float
    commutator_argmax: tuple
    estar_residual: float
    nabla_f_norm: float
    nabla_f_relative: float
    ric_note: str | None = None


@dataclass
class VariationReport:
    psi_label: str
    fd_first: float
    fd_second: float
    direct_second: float
    h: float


def commutator_diagnostic(F: TwoFormField):
    """max_x,jk ||[F+_j(x), F-_k(x)]|| / (rms||F+|| rms||F-|| + eps) and the
    arg max location (site coords, SD pair, ASD pair).  Zero when either part
    vanishes.  4d only."""
    if F.lattice.d != 4:
        raise ValueError("SD/ASD commutator diagnostic needs d = 4")
    g = F.group
    fp = project_pm(F.c, +1)
    fm = project_pm(F.c, -1)
    return _pairwise_commutator_max(F, fp, fm, g)


def _pairwise_commutator_max(F: TwoFormField, a: np.ndarray, b: np.ndarray, g: Group):
    na = float(np.sqrt(np.mean(g.norm2(a))))
    nb = float(np.sqrt(np.mean(g.norm2(b))))
    if g.is_abelian:
        return 0.0, ((0,) * F.lattice.d, F.pairs[0], F.pairs[0])
    comm = a[:, None] @ b[None, :] - b[None, :] @ a[:, None]
    n2 = g.norm2(comm)  # (ncomp, ncomp, *dims)
    flat = int(np.argmax(n2))
    idx = np.unravel_index(flat, n2.shape)
    value = float(np.sqrt(n2[idx])) / (na * nb + _EPS)
    site = tuple(int(i) for i in idx[2:])
    return value, (site, F.pairs[idx[0]], F.pairs[idx[1]])


def commutator_diagnostic_components(F: TwoFormField):
    """Same residual over plain component pairs of F (no SD/ASD split);
    this is the commutativity statement measured on 3-dimensional lattices."""
    return _pairwise_commutator_max(F, F.c, F.c, F.group)


def estar_residual(psi: OneFormField, F: TwoFormField, sign: int | None) -> float:
    """rms_x || e*(psi) P^sign F || normalized by rms||psi|| rms||F||.

    ``sign`` +1/-1 selects the SD/ASD part (d = 4); None contracts against F
    itself (the 3-dimensional flat-commutative check).
    """
    if psi.lattice.dims != F.lattice.dims or psi.group.kind != F.group.kind:
        raise ValueError("mismatched geometry or group between psi and F")
    g = F.group
    d = F.lattice.d
    if sign is None:
        target = F.c
    else:
        if d != 4:
            raise ValueError("SD/ASD selection needs d = 4")
        target = project_pm(F.c, sign)
    res_comps = []
    if d == 4:
        res = contract_estar(psi.c, target, g)
        res2 = np.sum(g.norm2(res), axis=0)
    else:
        rows = []
        for nu in range(d):
            acc = None
            for mu in range(d):
                if mu == nu:
                    continue
                term = g.commutator(psi.c[mu], component(target, mu, nu, F.pairs))
                acc = term if acc is None else acc + term
            rows.append(g.norm2(acc))
        res2 = np.sum(np.stack(rows), axis=0)
    num = float(np.sqrt(np.mean(res2)))
    npsi = float(np.sqrt(np.mean(np.sum(g.norm2(psi.c), axis=0))))
    nf = float(np.sqrt(np.mean(np.sum(g.norm2(F.c), axis=0))))
    return num / (npsi * nf + _EPS)


def build_killing_variation(F: TwoFormField, mu: int, sign: int) -> OneFormField:
    """psi_nu(x) = (P^sign F(x))_{mu nu}: interior product of the SD/ASD part
    with the coordinate Killing field e_mu.  4d only."""
    if F.lattice.d != 4:
        raise ValueError("Killing variations are built on d = 4")
    F.lattice.check_direction(mu)
    part = project_pm(F.c, sign)
    return OneFormField(F.lattice, F.group, interior(mu, part))


def dual_oneform_3d(F: TwoFormField) -> OneFormField:
    """psi = *F on a 3-dimensional lattice: psi_mu = 1/2 eps_{mu nu rho} F_{nu rho}."""
    if F.lattice.d != 3:
        raise ValueError("dual_oneform_3d needs d = 3")
    c = np.stack([F.c[2], -F.c[1], F.c[0]], axis=0)
    return OneFormField(F.lattice, F.group, c)


def exterior_derivative(U: LinkField, psi: OneFormField) -> TwoFormField:
    """(d_A psi)_{mu nu} = nabla_mu psi_nu - nabla_nu psi_mu (forward covariant
    differences; O(a) accurate)."""
    comps = []
    for mu, nu in pairs_for_dim(U.lattice.d):
        comps.append(covariant_diff(U, psi.c[nu], mu) - covariant_diff(U, psi.c[mu], nu))
    return TwoFormField(U.lattice, U.group, np.stack(comps, axis=0))


def second_variation(U: LinkField, psi: OneFormField, h: float, label: str = "psi") -> VariationReport:
    """Finite-difference first/second energy variations along exp(t psi), and
    the direct lattice evaluation of ||d_A psi||^2 + 2 <F, psi ^ psi>.

    Note the exact relation fd_second ~= 2 * direct_second + O(h^2) + O(a):
    fd_second is the raw second derivative of the energy, direct_second the
    stability form itself.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    g = U.group
    e_minus, e0, e_plus = line_probe(U, psi.c, (-h, 0.0, h))
    fd_first = (e_plus - e_minus) / (2.0 * h)
    fd_second = (e_plus - 2.0 * e0 + e_minus) / (h * h)

    dpsi = exterior_derivative(U, psi)
    F = clover(U)
    direct = float(np.sum(g.norm2(dpsi.c)))
    pairs = F.pairs
    for k, (mu, nu) in enumerate(pairs):
        bracket = g.commutator(psi.c[mu], psi.c[nu])
        direct += 2.0 * float(np.sum(g.inner(F.c[k], bracket)))
    return VariationReport(label, float(fd_first), float(fd_second), direct, h)


def nabla_f_norm(U: LinkField, F: TwoFormField | None = None):
    """(absolute, relative): sum ||nabla_mu F_{nu rho}||^2 over sites,
    directions and component pairs, and the same normalized by ||F||^2
    (0 by convention when F vanishes identically)."""
    if F is None:
        F = clover(U)
    g = U.group
    absolute = 0.0
    for k in range(F.c.shape[0]):
        for mu in range(U.lattice.d):
            dmu = covariant_diff(U, F.c[k], mu)
            absolute += float(np.sum(g.norm2(dmu)))
    den = float(np.sum(g.norm2(F.c)))
    return absolute, (absolute / den if den > 0.0 else 0.0)


def killing_variations(F: TwoFormField):
    """All 8 labelled Killing variations (mu in 0..3) x (SD, ASD)."""
    out = []
    for sign, tag in ((+1, "plus"), (-1, "minus")):
        for mu in range(4):
            out.append((f"killing_mu{mu}_{tag}", build_killing_variation(F, mu, sign)))
    return out


def diagnostics_report(U: LinkField) -> DiagnosticsReport:
    """The standard per-configuration diagnostics bundle.

    d = 4: SD/ASD commutator residual, the Lemma-style contraction residual
    maximized over the 8 Killing variations, covariant constancy of F.
    d = 3: commutativity of the F components, contraction against psi = *F,
    covariant constancy; the Ricci term of the flat torus is identically zero
    and is recorded as a note, not a computed quantity.
    """
    F = clover(U)
    absolute, relative = nabla_f_norm(U, F)
    if U.lattice.d == 4:
        cmax, argmax = commutator_diagnostic(F)
        residuals = []
        for mu in range(4):
            psi_p = build_killing_variation(F, mu, +1)
            psi_m = build_killing_variation(F, mu, -1)
            residuals.append(estar_residual(psi_p, F, -1))
            residuals.append(estar_residual(psi_m, F, +1))
        return DiagnosticsReport(
            dims=4,
            commutator_max=cmax,
            commutator_argmax=argmax,
            estar_residual=max(residuals),
            nabla_f_norm=absolute,
            nabla_f_relative=relative,
        )
    cmax, argmax = commutator_diagnostic_components(F)
    psi = dual_oneform_3d(F)
    return DiagnosticsReport(
        dims=3,
        commutator_max=cmax,
        commutator_argmax=argmax,
        estar_residual=estar_residual(psi, F, None),
        nabla_f_norm=absolute,
        nabla_f_relative=relative,
        ric_note="flat torus: Ric = 0, so Ric(*F,*F) vanishes identically",
    )
