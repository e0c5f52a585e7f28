"""Pointwise exterior algebra of 2-forms on an oriented Euclidean R^4 fiber.

A 2-form value is an array whose FIRST axis runs over the six independent
components in the fixed order

    PAIRS = ((0,1), (0,2), (0,3), (1,2), (1,3), (2,3)),

followed by arbitrary batch axes and, for ad-valued forms, the element axes.
Antisymmetric components are computed on access, never stored.  A 1-form
value likewise has its direction axis first (length 4).

The orientation is e0^e1^e2^e3 (epsilon_{0123} = +1); the self-dual /
anti-self-dual conventions of every downstream module inherit it.
"""

from __future__ import annotations

import numpy as np

from .groups import Group

PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PAIR_INDEX = {p: k for k, p in enumerate(PAIRS)}

# (star f)[k] = STAR_SIGN[k] * f[STAR_PERM[k]]
STAR_PERM = (5, 4, 3, 2, 1, 0)
STAR_SIGN = (1.0, -1.0, 1.0, 1.0, -1.0, 1.0)

PAIRS_3D = ((0, 1), (0, 2), (1, 2))


def pairs_for_dim(d: int) -> tuple:
    if d == 4:
        return PAIRS
    if d == 3:
        return PAIRS_3D
    raise ValueError(f"no 2-form component table for d={d}")


def component(f: np.ndarray, mu: int, nu: int, pairs=PAIRS) -> np.ndarray:
    """f_{mu nu} with antisymmetric extension; zero when mu == nu."""
    if mu == nu:
        return np.zeros_like(f[0])
    if (mu, nu) in pairs:
        return f[pairs.index((mu, nu))]
    return -f[pairs.index((nu, mu))]


def hodge_star(f: np.ndarray) -> np.ndarray:
    """(star f)_{mu nu} = 1/2 eps_{mu nu rho sigma} f_{rho sigma}; involutive."""
    sign = np.asarray(STAR_SIGN).reshape((6,) + (1,) * (f.ndim - 1))
    return sign * f[list(STAR_PERM)]


def project_pm(f: np.ndarray, sign: int) -> np.ndarray:
    """P+- f = (f +- star f)/2.  `sign` is +1 or -1."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    return 0.5 * (f + sign * hodge_star(f))


def interior(mu: int, f: np.ndarray) -> np.ndarray:
    """(i_mu f)_nu = f_{mu nu}, a 1-form value (direction axis first)."""
    if not 0 <= mu < 4:
        raise ValueError("direction out of range")
    return np.stack([component(f, mu, nu) for nu in range(4)], axis=0)


def wedge11(psi: np.ndarray, phi: np.ndarray, group: Group) -> np.ndarray:
    """Wedge of ad-valued 1-forms with the bracket convention
    (psi ^ phi)_{mu nu} = ([psi_mu, phi_nu] - [psi_nu, phi_mu]) / 2,
    so that (psi ^ psi)_{mu nu} = [psi_mu, psi_nu]."""
    comps = []
    for mu, nu in PAIRS:
        comps.append(
            0.5
            * (
                group.commutator(psi[mu], phi[nu])
                - group.commutator(psi[nu], phi[mu])
            )
        )
    return np.stack(comps, axis=0)


def wedge_scalar(psi: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Plain exterior product of scalar-valued 1-forms:
    (psi ^ phi)_{mu nu} = psi_mu phi_nu - psi_nu phi_mu."""
    comps = [psi[mu] * phi[nu] - psi[nu] * phi[mu] for mu, nu in PAIRS]
    return np.stack(comps, axis=0)


def contract_estar(psi: np.ndarray, f: np.ndarray, group: Group) -> np.ndarray:
    """The contraction 1-form (e*(psi) f)_nu = sum_mu [psi_mu, f_{mu nu}].

    Used as a residual: it vanishes identically iff every bracket in the sum
    cancels.  Up to a conventional factor -1/2 it is the adjoint of the
    bracket wedge under the component inner products (see tests).
    """
    comps = []
    for nu in range(4):
        acc = None
        for mu in range(4):
            if mu == nu:
                continue
            term = group.commutator(psi[mu], component(f, mu, nu))
            acc = term if acc is None else acc + term
        comps.append(acc)
    return np.stack(comps, axis=0)


def form_inner(f: np.ndarray, g: np.ndarray, group: Group) -> np.ndarray:
    """Pointwise inner product summed over the leading component axis."""
    if f.shape[0] != g.shape[0]:
        raise ValueError("component count mismatch")
    return sum(group.inner(f[k], g[k]) for k in range(f.shape[0]))
