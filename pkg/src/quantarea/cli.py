from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .core import DomainError, QuantareaError, QuantizationMode, constants_json
from .potentials import load_potential
from .refdata import TABLE_IDS, dump_tables, load_batch
from .reproduce import reproduce
from .scattering import (
    ScatteringCase,
    amplitude_and_differential,
    cross_sections,
    fit_depth,
    invert_R0,
)
from .solver import SpectrumResult, potential_areas, solve_bound_state, spectrum
from .tunneling import AlphaDecayCase, alpha_half_life, cold_emission, tunnel
from .wavefunction import area_function_for, sample

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE, EXIT_TOLERANCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- output --------------------------------------------------------------------


def _cell(v: Any) -> Any:
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+}j"
    return v


def emit(records: list[dict[str, Any]], as_json: bool, out=None, meta: dict[str, Any] | None = None) -> None:
    """Write records as CSV (default) or JSON; the same dicts feed both."""
    out = out or sys.stdout
    if as_json:
        payload: Any = records if meta is None else {**meta, "rows": records}
        out.write(json.dumps(payload, indent=2, default=_json_default) + "\n")
        return
    if meta:
        for k, v in meta.items():
            out.write(f"# {k}: {v}\n")
    if not records:
        return
    w = csv.writer(out, lineterminator="\n")
    keys = list(records[0])
    w.writerow(keys)
    for r in records:
        w.writerow([_cell(r.get(k, "")) for k in keys])


def _json_default(o: Any) -> Any:
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    raise TypeError(f"not serializable: {type(o).__name__}")


# -- argument helpers -------------------------------------------------------------


def _pair(text: str, name: str) -> tuple[int, int]:
    try:
        z, a = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{name} must be Z,A (two integers), got {text!r}") from None
    return z, a


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _lsj(text: str) -> tuple[int, float, float]:
    vals = _floats(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"--lsj needs L,S,J, got {text!r}")
    return int(vals[0]), vals[1], vals[2]


def _load(path: str):
    try:
        return load_potential(path)
    except FileNotFoundError:
        raise UsageError(f"potential file not found: {path}") from None
    except DomainError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _modes(text: str) -> list[QuantizationMode]:
    try:
        return [QuantizationMode.parse(t) for t in text.split(",") if t.strip()]
    except DomainError as exc:
        raise UsageError(str(exc)) from None


# -- subcommands ---------------------------------------------------------------


def cmd_spectrum(args: argparse.Namespace) -> int:
    p = _load(args.potential)
    modes = _modes(args.modes)
    if args.verify:
        res = SpectrumResult([solve_bound_state(p, m, verify=True) for m in modes])
    else:
        res = spectrum(p, modes, workers=args.workers)
    rows = []
    for s in res.states:
        a = potential_areas(s)
        rows.append({"mode": s.mode.label, "q": s.q, "d": s.d, "x0": s.x0, "x1": s.turning.x1, "x2": s.turning.x2,
                     "E": s.energy, "K": s.K, "Sp": a.Sp, "Sk": a.Sk, "SE": a.SE})
    emit(rows, args.json)
    for label, msg in sorted(res.failures.items()):
        print(f"mode {label}: {msg}", file=sys.stderr)
    return EXIT_COMPUTE if res.failures else EXIT_OK


def cmd_wavefunction(args: argparse.Namespace) -> int:
    p = _load(args.potential)
    mode = _modes(args.mode)[0]
    state = solve_bound_state(p, mode)
    g = area_function_for(state, p)
    samples = sample(state, g, args.points, args.parity)
    rows = [{"x": s.x, "re_psi": s.value.real, "im_psi": s.value.imag, "abs2_psi": abs(s.value) ** 2, "G": g(s.x)}
            for s in samples]
    emit(rows, args.json, meta={"mode": mode.label, "energy": state.energy, "d": state.d, "G": g.kind})
    return EXIT_OK


def cmd_tunnel(args: argparse.Namespace) -> int:
    p = _load(args.barrier)
    res = tunnel(p, args.energy, args.r1, args.r2)
    emit([res.as_dict()], args.json)
    return EXIT_OK


def cmd_cold_emission(args: argparse.Namespace) -> int:
    rows = []
    for f in args.field:
        res = cold_emission(args.work_function, f, args.mc2)
        rows.append({"work_function": args.work_function, "field": f, **res.as_dict()})
    emit(rows, args.json)
    return EXIT_OK


def _alpha_record(c: AlphaDecayCase) -> dict[str, Any]:
    return {
        "Z": c.Z, "A": c.A, "E_alpha": c.E_alpha, "ell": c.ell, "R0": c.R0, "U0": c.U0,
        "a": c.a, "r1": c.r1, "r2": c.r2, "r3": c.r3, "r_m": c.r_m, "E0": c.E0,
        "T_new": c.T_new, "T_wkb": c.T_wkb, "t_half_new_s": c.t_half_new, "t_half_wkb_s": c.t_half_wkb,
        "t_half_new_y": c.t_half_new_years, "t_half_wkb_y": c.t_half_wkb_years,
    }


def cmd_alpha(args: argparse.Namespace) -> int:
    if args.batch:
        try:
            cases = load_batch(args.batch, "alpha")
        except (OSError, DomainError) as exc:
            raise UsageError(str(exc)) from None
    else:
        if args.nuclide:
            args.z, args.a = args.nuclide
        if args.z is None or args.a is None or args.ealpha is None:
            raise UsageError("alpha needs --nuclide (or --z and --a) and --ealpha, or --batch")
        cases = [AlphaDecayCase(args.z, args.a, args.ealpha, args.ell, R0=args.r0, U0=args.u0,
                                mass_model=args.mass_model)]
    rows = [_alpha_record(alpha_half_life(c)) for c in cases]
    if args.t_exp is not None:
        for r in rows:
            r["t_exp_y"] = args.t_exp
            r["ratio_new"] = r["t_half_new_y"] / args.t_exp
            r["ratio_wkb"] = r["t_half_wkb_y"] / args.t_exp
    emit(rows, args.json)
    return EXIT_OK


def _scatter_case(args: argparse.Namespace, R0: float | None) -> ScatteringCase:
    (zp, ap), (zt, at) = args.projectile, args.target
    L, S, J = args.lsj
    return ScatteringCase(zp, ap, zt, at, args.elab, R0=R0, V0=args.v0, a_c=args.ac, L=L, S=S, J=J,
                          mass_model=args.mass_model)


def _resolve_r0(args: argparse.Namespace) -> float:
    if (args.r0 is None) == (args.sigma_t_exp is None):
        raise UsageError("give exactly one of --r0 and --sigma-t-exp")
    if args.r0 is not None:
        return args.r0
    return invert_R0(args.sigma_t_exp, _scatter_case(args, None))


def cmd_scatter(args: argparse.Namespace) -> int:
    case = _scatter_case(args, _resolve_r0(args))
    cs = cross_sections(case, args.sign)
    rec = {"R0": case.R0, "V0": case.V0, "a_c": case.a_c, "E_r": case.E_r, **cs.as_dict()}
    if args.theta_points:
        amp = amplitude_and_differential(case, args.sign, [
            math.pi * i / (args.theta_points - 1) for i in range(args.theta_points)])
        rows = [{"theta": t, "dsigma_s": s, "dsigma_r": r} for t, s, r in zip(amp.theta, amp.dsigma_s, amp.dsigma_r)]
        emit(rows, args.json, meta={k: _cell(v) for k, v in rec.items()})
    else:
        emit([rec], args.json)
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    case = _scatter_case(args, _resolve_r0(args))
    ss, sr = args.targets
    res = fit_depth(case, ss, sr, args.sign, V0_range=(args.v0_min, args.v0_max), V0_step=args.v0_step,
                    a_c_values=args.ac_values)
    emit([{"R0": case.R0, "V0": res.V0, "a_c": res.a_c, "gate_V0": res.gate_V0, "gate_cells": res.gate_cells,
           "sigma_s": res.sigma_s, "sigma_r": res.sigma_r, "sigma_t": res.sigma_t,
           "sigma_s_target": ss, "sigma_r_target": sr}], args.json)
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    if args.dump:
        for p in dump_tables(args.dump):
            print(f"wrote {p}", file=sys.stderr)
    ids = TABLE_IDS if args.table.lower() == "all" else [args.table]
    failed = False
    for i, tid in enumerate(ids):
        try:
            rep = reproduce(tid)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        if args.json:
            sys.stdout.write(rep.to_json())
        else:
            if i:
                sys.stdout.write("\n")
            sys.stdout.write(rep.to_csv())
        c = rep.counts
        print(f"{rep.table}: pass={c['pass']} fail={c['fail']} flagged={c['flagged']} "
              f"unsupported={c['unsupported']}", file=sys.stderr)
        failed |= not rep.ok
    return EXIT_TOLERANCE if failed else EXIT_OK


def cmd_dump_constants(args: argparse.Namespace) -> int:
    sys.stdout.write(constants_json())
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _scatter_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--projectile", type=lambda t: _pair(t, "--projectile"), required=True,
                    help="projectile charge and mass numbers Z,A (e.g. 0,1 for a neutron)")
    sp.add_argument("--target", type=lambda t: _pair(t, "--target"), required=True,
                    help="target charge and mass numbers Z,A")
    sp.add_argument("--elab", type=float, required=True, help="lab-frame projectile energy [MeV]")
    sp.add_argument("--lsj", type=_lsj, default=(0, 0.5, 0.5),
                    help="relative orbital, spin and total angular momentum L,S,J [dimensionless, hbar]")
    sp.add_argument("--r0", type=float, help="radius parameter R0 [fm]")
    sp.add_argument("--sigma-t-exp", type=float, help="measured total cross section used to invert R0 [mb]")
    sp.add_argument("--v0", type=float, default=0.0, help="Saxon-Woods depth V0 [MeV]")
    sp.add_argument("--ac", type=float, default=0.40, help="Saxon-Woods diffuseness a_c [fm]")
    sp.add_argument("--sign", choices=["lower", "upper"], default="lower",
                    help="exponent branch of the amplitude [no unit]")
    sp.add_argument("--mass-model", choices=["atomic", "mass-number"], default="atomic",
                    help="nuclear masses: tabulated atomic masses or A x 931.502 MeV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantarea",
        description="Turning-point quantization, barrier transmission, alpha decay and scattering.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_const", const="json", dest="out", help="emit JSON instead of CSV")
    common.add_argument("--out", choices=["csv", "json"], default="csv", help="output format (default csv)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("spectrum", parents=[common], help="bound-state energies")
    sp.add_argument("--potential", required=True,
                    help="potential JSON file; energies come out in the file's unit system")
    sp.add_argument("--modes", default="ground",
                    help="comma-separated modes: ground, gN (q=N pi), sN ((2N-1) pi), aN (2N pi) [dimensionless]")
    sp.add_argument("--verify", action="store_true", help="cross-check closed forms against the fixed-point solver")
    sp.add_argument("--workers", type=int, help="parallel workers for independent modes [count]")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("wavefunction", parents=[common], help="sampled normalized wave function")
    sp.add_argument("--potential", required=True, help="potential JSON file (its units set x and energy)")
    sp.add_argument("--mode", default="ground", help="one quantization mode, as for spectrum")
    sp.add_argument("--points", type=int, default=101, help="number of samples between the turning points")
    sp.add_argument("--parity", choices=["cos", "sin"], help="override the mode's parity [no unit]")
    sp.set_defaults(func=cmd_wavefunction)

    sp = sub.add_parser("tunnel", parents=[common], help="transmission through a barrier")
    sp.add_argument("--barrier", required=True, help="barrier potential JSON file")
    sp.add_argument("--energy", type=float, required=True, help="particle energy [units of the barrier file]")
    sp.add_argument("--r1", type=float, help="entry turning point [length unit of the barrier file]")
    sp.add_argument("--r2", type=float, help="exit turning point [length unit of the barrier file]")
    sp.set_defaults(func=cmd_tunnel)

    sp = sub.add_parser("cold-emission", parents=[common], help="field emission from a metal surface")
    sp.add_argument("--work-function", type=float, required=True, help="work function W [eV]")
    sp.add_argument("--field", type=_floats, required=True, help="applied field(s), comma-separated [V/cm]")
    sp.add_argument("--mc2", type=float, help="electron rest energy [MeV] (default 0.511003)")
    sp.set_defaults(func=cmd_cold_emission)

    sp = sub.add_parser("alpha", parents=[common], help="alpha-decay half-life")
    sp.add_argument("--nuclide", type=lambda t: _pair(t, "--nuclide"), help="parent nucleus Z,A")
    sp.add_argument("--t-exp", type=float, help="measured half-life [y]; adds ratio columns")
    sp.add_argument("--z", type=int, help="parent charge number Z")
    sp.add_argument("--a", type=int, help="parent mass number A")
    sp.add_argument("--ealpha", type=float, help="alpha kinetic energy [MeV]")
    sp.add_argument("--ell", type=int, default=0, help="alpha angular momentum [hbar]")
    sp.add_argument("--r0", type=float, default=1.25, help="radius parameter R0 [fm]")
    sp.add_argument("--u0", type=float, default=40.0, help="well depth U0 [MeV]")
    sp.add_argument("--mass-model", choices=["atomic", "mass-number"], default="atomic",
                    help="nuclear masses: tabulated atomic masses or A x 931.502 MeV")
    sp.add_argument("--batch", help="CSV with '# units:' header and columns z,a,ealpha[,ell,r0,u0]")
    sp.set_defaults(func=cmd_alpha)

    sp = sub.add_parser("scatter", parents=[common], help="zone radii, Y integral and cross sections [mb]")
    _scatter_args(sp)
    sp.add_argument("--theta-points", type=int, default=0,
                    help="if > 1, also emit d sigma/d theta [mb/rad] on this many angles in [0, pi]")
    sp.set_defaults(func=cmd_scatter)

    sp = sub.add_parser("fit", parents=[common], help="fit V0 (and a_c) to measured sigma_s, sigma_r")
    _scatter_args(sp)
    sp.add_argument("--targets", type=_floats, required=True, help="measured sigma_s,sigma_r [mb]")
    sp.add_argument("--v0-min", type=float, default=20.0, help="scan start for V0 [MeV]")
    sp.add_argument("--v0-max", type=float, default=60.0, help="scan end for V0 [MeV]")
    sp.add_argument("--v0-step", type=float, default=0.0001, help="scan step for V0 [MeV]")
    sp.add_argument("--ac-values", type=_floats, default=None,
                    help="comma-separated a_c values to scan [fm] (default 0.40..0.60 by 0.01)")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("reproduce-table", parents=[common], help="recompute a reference table and grade it")
    sp.add_argument("table", help=f"table id ({', '.join(TABLE_IDS)}, a bare number, or 'all')")
    sp.add_argument("--dump", metavar="DIR", help="also write every embedded table to DIR as JSON and CSV")
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("dump-constants", parents=[common], help="print the physical constants (JSON)")
    sp.set_defaults(func=cmd_dump_constants)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = args.out == "json"
    if getattr(args, "targets", None) is not None and len(args.targets) != 2:
        parser.error("--targets needs sigma_s,sigma_r")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"quantarea {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuantareaError as exc:
        print(f"quantarea {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


run = main


if __name__ == "__main__":
    sys.exit(main())
