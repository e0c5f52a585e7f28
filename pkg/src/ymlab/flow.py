"""Gradient-flow minimization of the Wilson energy.

Backtracking descent: U_mu(x) <- exp(-step * force_mu(x)) U_mu(x), accepted
only if the energy strictly decreases, so the recorded energy history is
non-increasing by construction.  Convergence is declared on the sup norm of
the force (the residual of the lattice Yang-Mills equation), not on energy
deltas: the structure checks downstream concern critical points.

The flow finds *some* critical point; no claim of global minimality is made.
Reports carry the force residual so downstream analysis can reject saddles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .action import energy_split, force, force_sup_norm, wilson_energy
from .fields import LinkField

HISTORY_COLUMNS = ("iter", "energy", "e_plus", "e_minus", "q", "force_inf", "step")

_STEP_UNDERFLOW = 1e-15


@dataclass
class FlowConfig:
    step_init: float
    tol_force: float
    max_iters: int
    step_shrink: float = 0.5
    step_grow: float = 1.1
    measure_every: int = 100
    reunitarize_every: int = 100

    def __post_init__(self):
        if not (0.0 < self.step_shrink < 1.0 < self.step_grow):
            raise ValueError("need 0 < step_shrink < 1 < step_grow")
        if self.tol_force <= 0 or self.step_init <= 0:
            raise ValueError("tol_force and step_init must be positive")
        if self.max_iters < 0 or self.measure_every < 1 or self.reunitarize_every < 1:
            raise ValueError("invalid iteration controls")


@dataclass
class MinimizeReport:
    converged: bool
    stalled: bool
    iters: int
    energy: float
    e_plus: float
    e_minus: float
    q: float
    force_inf: float
    history: list = field(default_factory=list)  # rows of HISTORY_COLUMNS


def _measure(U: LinkField, energy: float):
    if U.lattice.d == 4:
        s = energy_split(U)
        return s.e_plus, s.e_minus, s.q
    return math.nan, math.nan, math.nan


def minimize(U: LinkField, cfg: FlowConfig, observer=None):
    """Run the flow; returns (final LinkField, MinimizeReport).

    ``observer(iteration, field)`` is invoked at every measurement point; the
    field passed to it must not be mutated.  Step underflow without an energy
    decrease yields a 'stalled' report, not an exception.
    """
    U = U.copy()
    step = cfg.step_init
    step_cap = 10.0 * cfg.step_init
    energy = wilson_energy(U)
    f = force(U)
    f_inf = force_sup_norm(U, f)
    history = []
    it = 0
    stalled = False
    since_reunit = 0
    last_measured = None

    def record(iteration):
        nonlocal last_measured
        ep, em, q = _measure(U, energy)
        history.append((iteration, energy, ep, em, q, f_inf, step))
        last_measured = iteration
        if observer is not None:
            observer(iteration, U)

    record(0)
    while it < cfg.max_iters and f_inf >= cfg.tol_force:
        trial = LinkField(U.lattice, U.group, U.group.mul(U.group.exp_map(-step * f), U.u))
        if since_reunit + 1 >= cfg.reunitarize_every:
            trial = trial.reunitarized()
        trial_energy = wilson_energy(trial)
        if trial_energy < energy:
            since_reunit = 0 if since_reunit + 1 >= cfg.reunitarize_every else since_reunit + 1
            U = trial
            energy = trial_energy
            step = min(step * cfg.step_grow, step_cap)
            f = force(U)
            f_inf = force_sup_norm(U, f)
            it += 1
            if it % cfg.measure_every == 0:
                record(it)
        else:
            step *= cfg.step_shrink
            if step < _STEP_UNDERFLOW:
                stalled = True
                break
    if last_measured != it:
        record(it)
    ep, em, q = _measure(U, energy)
    report = MinimizeReport(
        converged=bool(f_inf < cfg.tol_force),
        stalled=stalled,
        iters=it,
        energy=energy,
        e_plus=ep,
        e_minus=em,
        q=q,
        force_inf=f_inf,
        history=history,
    )
    return U, report


def line_probe(U: LinkField, psi: np.ndarray, ts) -> list:
    """Energies of the fields with U_mu(x) replaced by exp(t psi_mu(x)) U_mu(x).

    ``psi`` is an algebra-valued array shaped like the links; the input field
    is not modified.
    """
    if psi.shape[: 1 + U.lattice.d] != U.u.shape[: 1 + U.lattice.d]:
        raise ValueError("perturbation does not match the link geometry")
    g = U.group
    out = []
    for t in ts:
        if t == 0.0:
            out.append(wilson_energy(U))
            continue
        trial = LinkField(U.lattice, g, g.mul(g.exp_map(t * psi), U.u))
        out.append(wilson_energy(trial))
    return out
