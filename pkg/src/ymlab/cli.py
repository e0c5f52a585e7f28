"""Command line entry points.

Exit codes: 0 success, 1 invalid input (bad flags, config, snapshot),
2 stalled minimization or failed verification.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import diagnostics as diag
from .action import energy_split, topological_charge, wilson_energy
from .config import ConfigError, RunConfig, canonical_text, config_hash, parse_config
from .fields import LinkField, OneFormField, abelian_flux_start, clover, cold_start, hot_start
from .flow import minimize
from .groups import group_by_name
from .lattice import Lattice
from .persist import (
    SnapshotError,
    atomic_write_text,
    history_csv_text,
    json_text,
    load_snapshot,
    save_snapshot,
    write_json,
)
from .reduction import build_system, rref, sphere_moment, verify_forces_zero


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="ymlab", description="Lattice Yang-Mills minimization laboratory")
    sub = p.add_subparsers(dest="command", metavar="command")

    m = sub.add_parser("minimize", help="run the gradient flow from a config file")
    m.add_argument("config", help="path to a run configuration file")

    a = sub.add_parser("analyze", help="structure diagnostics of a snapshot")
    a.add_argument("snapshot")
    a.add_argument("--json", help="write the report here instead of stdout")

    v = sub.add_parser("variation", help="second-variation probes of a snapshot")
    v.add_argument("snapshot")
    v.add_argument("--mu", type=int, help="Killing direction (0-based, d = 4 only)")
    v.add_argument("--sign", choices=["+", "-"], help="SD (+) or ASD (-) part for --mu")
    v.add_argument("--random", type=int, default=0, metavar="K", help="K random directions")
    v.add_argument("--h", type=float, default=1e-3, help="finite-difference step")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--amplitude", type=float, default=0.05)
    v.add_argument("--json", help="write the reports here instead of stdout")

    c = sub.add_parser("charge", help="topological charge of a snapshot")
    c.add_argument("snapshot")

    r = sub.add_parser("verify-reduction", help="exact bracket-system verification")
    r.add_argument("--n-max", type=int, required=True)
    r.add_argument("--samples", type=int, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--json", help="write the combined report here")
    r.add_argument("--certificate", help="dump row-echelon certificates here")

    mo = sub.add_parser("moments", help="exact unit-sphere monomial moments")
    mo.add_argument("--alpha", required=True, help="comma-separated exponents, e.g. 2,0,0,0")
    mo.add_argument("--dim", type=int, required=True)

    return p


def _start_field(cfg: RunConfig) -> LinkField:
    lattice = Lattice(cfg.extents)
    group = group_by_name(cfg.group)
    if cfg.start == "cold":
        return cold_start(lattice, group)
    if cfg.start == "hot":
        return hot_start(lattice, group, cfg.seed, cfg.amplitude)
    return abelian_flux_start(lattice, cfg.flux)


def _variation_reports(U: LinkField, cfg: RunConfig):
    reports = []
    if U.lattice.d == 4:
        F = clover(U)
        for label, psi in diag.killing_variations(F):
            reports.append(diag.second_variation(U, psi, cfg.variation_h, label))
    rng = np.random.default_rng(cfg.variation_seed)
    shape = (U.lattice.d,) + U.lattice.dims
    for k in range(cfg.variations):
        psi = OneFormField(
            U.lattice, U.group, U.group.random_algebra(rng, shape, cfg.variation_amplitude)
        )
        reports.append(diag.second_variation(U, psi, cfg.variation_h, f"random_{k}"))
    return reports


def run_minimize(cfg: RunConfig, observer=None):
    """Flow + diagnostics + artifacts.  Returns (exit_code, report dict).

    ``observer`` is forwarded to flow.minimize; it only reads the field at
    measurement points, so it cannot affect the run or its artifacts.
    """
    U0 = _start_field(cfg)
    U, rep = minimize(U0, cfg.flow_config(), observer=observer)

    report = {
        "config_hash": config_hash(cfg),
        "group": cfg.group,
        "dims": cfg.dims,
        "extents": list(cfg.extents),
        "converged": rep.converged,
        "iters": rep.iters,
        "energy": rep.energy,
        "e_plus": rep.e_plus,
        "e_minus": rep.e_minus,
        "q": rep.q,
        "force_inf": rep.force_inf,
        "commutator_max": None,
        "commutator_argmax": None,
        "estar_residual": None,
        "nabla_f_relative": None,
        "variations": [],
    }
    if cfg.diagnostics:
        d = diag.diagnostics_report(U)
        report["commutator_max"] = d.commutator_max
        report["commutator_argmax"] = list(map(list, d.commutator_argmax))
        report["estar_residual"] = d.estar_residual
        report["nabla_f_relative"] = d.nabla_f_relative
        for vr in _variation_reports(U, cfg):
            report["variations"].append(
                {
                    "psi_label": vr.psi_label,
                    "fd_first": vr.fd_first,
                    "fd_second": vr.fd_second,
                    "direct_second": vr.direct_second,
                    "h": vr.h,
                }
            )

    out = cfg.out
    os.makedirs(out, exist_ok=True)
    atomic_write_text(os.path.join(out, "config.txt"), canonical_text(cfg))
    atomic_write_text(os.path.join(out, "history.csv"), history_csv_text(rep.history))
    write_json(os.path.join(out, "report.json"), report)
    save_snapshot(U, os.path.join(out, "final.ymf"))

    status = "stalled" if rep.stalled else ("converged" if rep.converged else "max-iters")
    print(
        f"{status}: iters={rep.iters} energy={rep.energy:.6e} "
        f"force_inf={rep.force_inf:.3e} -> {out}"
    )
    return (2 if rep.stalled else 0), report


def _cmd_minimize(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    code, _ = run_minimize(cfg)
    return code


def _load(path: str) -> LinkField:
    return load_snapshot(path)


def _cmd_analyze(args) -> int:
    U = _load(args.snapshot)
    d = diag.diagnostics_report(U)
    out = {
        "group": U.group.name,
        "dims": U.lattice.d,
        "extents": list(U.lattice.dims),
        "energy": wilson_energy(U),
        "commutator_max": d.commutator_max,
        "commutator_argmax": list(map(list, d.commutator_argmax)),
        "estar_residual": d.estar_residual,
        "nabla_f_norm": d.nabla_f_norm,
        "nabla_f_relative": d.nabla_f_relative,
        "ric_note": d.ric_note,
    }
    if U.lattice.d == 4:
        s = energy_split(U)
        out.update({"e_plus": s.e_plus, "e_minus": s.e_minus, "q": s.q})
    if args.json:
        write_json(args.json, out)
    else:
        print(json_text(out), end="")
    return 0


def _cmd_variation(args) -> int:
    U = _load(args.snapshot)
    if args.h <= 0:
        print("error: --h must be positive", file=sys.stderr)
        return 1
    reports = []
    if args.mu is not None:
        if args.sign is None:
            print("error: --mu needs --sign + or -", file=sys.stderr)
            return 1
        if U.lattice.d != 4:
            print("error: Killing variations need a 4-dimensional snapshot", file=sys.stderr)
            return 1
        sign = +1 if args.sign == "+" else -1
        psi = diag.build_killing_variation(clover(U), args.mu, sign)
        tag = "plus" if sign > 0 else "minus"
        reports.append(diag.second_variation(U, psi, args.h, f"killing_mu{args.mu}_{tag}"))
    if args.random:
        rng = np.random.default_rng(args.seed)
        shape = (U.lattice.d,) + U.lattice.dims
        for k in range(args.random):
            psi = OneFormField(U.lattice, U.group, U.group.random_algebra(rng, shape, args.amplitude))
            reports.append(diag.second_variation(U, psi, args.h, f"random_{k}"))
    if not reports:
        print("error: nothing to do; pass --mu/--sign or --random K", file=sys.stderr)
        return 1
    out = [
        {
            "psi_label": r.psi_label,
            "fd_first": r.fd_first,
            "fd_second": r.fd_second,
            "direct_second": r.direct_second,
            "h": r.h,
        }
        for r in reports
    ]
    if args.json:
        write_json(args.json, out)
    else:
        print(json_text(out), end="")
    return 0


def _cmd_charge(args) -> int:
    U = _load(args.snapshot)
    if U.lattice.d != 4:
        print("error: topological charge needs a 4-dimensional snapshot", file=sys.stderr)
        return 1
    q = topological_charge(U)
    out = {
        "q": q,
        "sector": int(round(q)),
        "ambiguous": bool(abs(q - round(q)) > 0.25),
    }
    print(json_text(out), end="")
    return 0


def _cmd_verify_reduction(args) -> int:
    if args.n_max < 1:
        print("error: --n-max must be >= 1", file=sys.stderr)
        return 1
    reports = []
    certificates = []
    for n in range(1, args.n_max + 1):
        rep = verify_forces_zero(n, args.samples, args.seed)
        reports.append(rep)
        print(
            f"N={n}: {'PASS' if rep.passed else 'FAIL'} "
            f"(kernel dims {sorted({s.kernel_dim for s in rep.samples})}, "
            f"{rep.elapsed_ms:.0f} ms)"
        )
        if args.certificate:
            sys0 = build_system(n, reports[-1].samples[0].u)
            rows, pivots = rref(sys0.matrix)
            certificates.append(_certificate_text(sys0, rows, pivots))
    combined = {
        "reports": [r.to_jsonable() for r in reports],
        "pass": all(r.passed for r in reports),
    }
    if args.json:
        write_json(args.json, combined)
    if args.certificate:
        atomic_write_text(args.certificate, "\n".join(certificates))
    return 0 if combined["pass"] else 2


def _certificate_text(system, rows, pivots) -> str:
    head = (
        f"# echelon certificate: N={system.n_level} "
        f"u=({', '.join(str(x) for x in system.u)}) rank={len(pivots)}\n"
        f"# pivot columns: {[system.labels[c] for c in pivots]}\n"
    )
    body = "\n".join(" ".join(str(x) for x in row) for row in rows)
    return head + body + "\n"


def _cmd_moments(args) -> int:
    try:
        alpha = tuple(int(tok) for tok in args.alpha.split(","))
    except ValueError:
        print("error: --alpha must be comma-separated integers", file=sys.stderr)
        return 1
    try:
        value = sphere_moment(alpha, args.dim)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(value)
    return 0


_COMMANDS = {
    "minimize": _cmd_minimize,
    "analyze": _cmd_analyze,
    "variation": _cmd_variation,
    "charge": _cmd_charge,
    "verify-reduction": _cmd_verify_reduction,
    "moments": _cmd_moments,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    handler = _COMMANDS[args.command]
    try:
        return handler(args)
    except (SnapshotError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
