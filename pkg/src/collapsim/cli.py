"""Command-line interface.

Subcommands
    boundary <trapped|free-flight>   critical mass for the given geometry
    tau <scenario>                   discrimination verdict for one setup
    evolve                           two-level decay trajectory as CSV/JSON
    sweep <scenario>                 one-axis grid scan with flip bisection
    curve <scenario>                 visibility-decay curve for a verdict

Quantity flags take '<number> <unit>' strings ('100 m/s', '10 um',
'2.5 GeV/c2').  Exit codes: 0 success, 2 usage error (bad flags, unknown
units, invalid parameters), 1 computation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import discrimination as disc
from .boundary import (SCENARIO_PARAMS, BoundaryReport, Scenario, SweepError,
                       SweepSpec, curve_to_csv, curve_trajectory, sweep)
from .discrimination import ValidationError
from .evolution import (EvolutionConfig, IntegrationError, Method, evolve,
                        trajectory_to_csv, trajectory_to_json)
from .states import (CollapseRateMatrix, Hamiltonian, coherence_visibility,
                     make_basis, pure_state)
from .units import (ENERGY, PER_SECOND, Quantity, UnitError, format_quantity,
                    parse_quantity, preferred_unit, quantity)

DEFAULT_MASS_UNIT = "GeV/c2"

# Default geometric mass grid for `boundary`; wide enough for any geometry
# the verdicts distinguish at desk scale.
BOUNDARY_GRID = ("1e-3", "1e12", 31)


def _quantity_arg(text: str) -> Quantity:
    try:
        return parse_quantity(text)
    except UnitError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--out", metavar="PATH", help="write output to PATH")
    p.add_argument("--unit", metavar="U", default=None,
                   help=f"mass output unit (default {DEFAULT_MASS_UNIT})")
    p.add_argument("--eta", type=float, default=1.0, metavar="REAL",
                   help="margin factor for the strong inequalities (>= 1)")


def _scenario_flags(p: argparse.ArgumentParser, names: tuple[str, ...],
                    required: bool = True) -> None:
    helps = {
        "M": "mass", "v": "speed", "D": "separation",
        "L": "source-to-plate distance", "d": "slit width",
        "E": "energy gap override", "omega0": "angular frequency",
        "gap": "resonant energy gap",
    }
    for name in names:
        if name == "n":
            p.add_argument("--n", type=int, default=None, required=required,
                           help="oscillator quantum number")
        else:
            p.add_argument(f"--{name}", type=_quantity_arg, default=None,
                           required=required, help=helps.get(name, name))


def _dump(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _verdict_text(verdict: disc.DiscriminationVerdict) -> str:
    lines = []
    if verdict.is_infinite:
        lines.append("tau: infinite")
    else:
        lines.append(f"tau: {format_quantity(verdict.tau, 's')}")
    lines.append(f"regime: {verdict.regime.value}")
    lines.append(f"reason: {verdict.reason.value}")
    if verdict.derivation:
        lines.append("derivation:")
        for sym, q in verdict.derivation:
            lines.append(f"  {sym} = {q.value:.6g} {preferred_unit(q.dim)}")
    return "\n".join(lines) + "\n"


def _cmd_boundary(args) -> str:
    scenario = Scenario(args.scenario)
    if scenario is Scenario.TRAPPED:
        fixed = {"v": args.v, "D": args.D}
    else:
        theta = args.theta
        if theta is None:
            raise ValidationError("free-flight boundary needs --theta")
        if not 0.0 < theta < 1.0:
            raise ValidationError(f"--theta must be in (0, 1), got {theta}")
        length = args.D / theta
        fixed = {"v": args.v, "D": args.D, "L": length, "d": args.D / 10.0}
    lo, hi, count = BOUNDARY_GRID
    spec = SweepSpec(scenario, "M", quantity(float(lo), DEFAULT_MASS_UNIT),
                     quantity(float(hi), DEFAULT_MASS_UNIT), count=count,
                     spacing="geometric", fixed=fixed, eta=args.eta)
    report = sweep(spec)
    if report.critical_value is None:
        raise SweepError(
            f"no regime flip for masses in [{lo}, {hi}] {DEFAULT_MASS_UNIT}")
    if args.json:
        return _dump(report.to_json())
    unit = args.unit or DEFAULT_MASS_UNIT
    return f"critical_mass: {format_quantity(report.critical_value, unit)}\n"


def _tau_verdict(args) -> disc.DiscriminationVerdict:
    kind = args.scenario
    if kind == "trapped":
        spec = disc.TrappedPairSpec(mass=args.M, mean_velocity=args.v,
                                    separation=args.D, energy_gap=args.E,
                                    margin=args.eta)
        return disc.trapped_tau(spec)
    if kind == "free-flight":
        spec = disc.FreeFlightSpec(mass=args.M, speed=args.v,
                                   slit_separation=args.D,
                                   source_distance=args.L,
                                   slit_width=args.d)
        return disc.free_flight_tau(spec)
    if kind == "photon":
        return disc.photon_tau()
    if kind == "rabi":
        return disc.rabi_tau(args.gap)
    spec = disc.OscillatorSpec(mass=args.M, angular_frequency=args.omega0,
                               quantum_number=args.n)
    return disc.oscillator_verdict(spec)


def _cmd_tau(args) -> str:
    verdict = _tau_verdict(args)
    if args.json:
        return _dump(verdict.to_json())
    return _verdict_text(verdict)


def _cmd_evolve(args) -> str:
    if args.rate.dim != PER_SECOND:
        raise ValidationError(
            f"--rate must be a rate (1/s), got {args.rate.dim.si_name()}")
    if args.rate.value < 0.0:
        raise ValidationError("--rate must be nonnegative")
    basis = make_basis("here", "there")
    r = args.rate.value
    rates = CollapseRateMatrix(basis, [[0.0, r], [r, 0.0]])
    if args.gap is not None:
        if args.gap.dim != ENERGY:
            raise ValidationError(
                f"--gap must be an energy, got {args.gap.dim.si_name()}")
        H = Hamiltonian(basis, [[0.0, 0.0], [0.0, complex(args.gap.value)]])
    else:
        H = Hamiltonian.zero(basis)
    rho0 = pure_state([1.0, 1.0], basis)
    cfg = EvolutionConfig(t_end=args.t_end, dt=args.dt,
                          method=Method(args.method),
                          record_stride=args.stride)
    traj = evolve(rho0, H, rates, cfg)
    if args.json:
        return _dump(trajectory_to_json(traj, ("here", "there")))
    return trajectory_to_csv(traj, ("here", "there"))


def _cmd_sweep(args) -> str:
    scenario = Scenario(args.scenario)
    params = SCENARIO_PARAMS[scenario]
    if args.axis not in params:
        raise ValidationError(
            f"axis '{args.axis}' is not a {scenario.value} parameter {params}")
    fixed = {}
    for name in params:
        if name == args.axis:
            continue
        value = getattr(args, name)
        if value is None:
            raise ValidationError(f"missing --{name} for {scenario.value} sweep")
        fixed[name] = Quantity(float(value)) if name == "n" else value
    if getattr(args, "E", None) is not None and scenario is Scenario.TRAPPED:
        fixed["E"] = args.E
    spec = SweepSpec(scenario, args.axis, args.min, args.max, count=args.count,
                     spacing=args.spacing, fixed=fixed, eta=args.eta)
    report = sweep(spec)
    if args.json:
        return _dump(report.to_json())
    return _report_text(report)


def _report_text(report: BoundaryReport) -> str:
    lines = [f"scenario: {report.scenario.value}  axis: {report.axis}"]
    for row in report.rows:
        tau = "infinite" if not row.tau.is_finite else f"{row.tau.value:.6g} s"
        lines.append(f"  {row.value.value:.6g} {preferred_unit(row.value.dim)}"
                     f"  tau={tau}  regime={row.regime.value}")
    if report.critical_value is None:
        lines.append("critical: none within grid")
    else:
        cv = report.critical_value
        lines.append(f"critical: {cv.value:.8g} {preferred_unit(cv.dim)}")
    return "\n".join(lines) + "\n"


def _cmd_curve(args) -> str:
    verdict = _tau_verdict(args)
    if args.t_end is not None:
        t_end = args.t_end
    elif verdict.is_infinite:
        t_end = quantity(1.0, "s")
    else:
        t_end = 5.0 * verdict.tau
    traj = curve_trajectory(verdict, t_end, dt=args.dt,
                            record_stride=args.stride)
    if args.json:
        return _dump(trajectory_to_json(traj, ("here", "there")))
    vis = [coherence_visibility(s, "here", "there") for s in traj.states]
    return curve_to_csv(traj.times, vis)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collapsim",
        description="Pairwise spontaneous-collapse timescales, master-equation "
                    "trajectories, and quantum/classical boundary sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("boundary", help="critical mass for a geometry")
    p.add_argument("scenario", choices=["trapped", "free-flight"])
    p.add_argument("--v", type=_quantity_arg, required=True, help="speed")
    p.add_argument("--D", type=_quantity_arg, required=True, help="separation")
    p.add_argument("--theta", type=float, default=None,
                   help="trajectory angle (free-flight)")
    _add_common(p)
    p.set_defaults(handler=_cmd_boundary)

    p = sub.add_parser("tau", help="discrimination verdict for one setup")
    tau_sub = p.add_subparsers(dest="scenario", required=True)
    for kind, names in (("trapped", ("M", "v", "D")),
                        ("free-flight", ("M", "v", "D", "L", "d")),
                        ("photon", ()),
                        ("rabi", ("gap",)),
                        ("oscillator", ("M", "omega0", "n"))):
        q = tau_sub.add_parser(kind)
        _scenario_flags(q, names)
        if kind == "trapped":
            q.add_argument("--E", type=_quantity_arg, default=None,
                           help="energy gap override")
        _add_common(q)
        q.set_defaults(handler=_cmd_tau)

    p = sub.add_parser("evolve", help="two-level decay trajectory")
    p.add_argument("--rate", type=_quantity_arg, required=True,
                   help="pair decay rate, e.g. '1 1/s'")
    p.add_argument("--t-end", dest="t_end", type=_quantity_arg, required=True)
    p.add_argument("--dt", type=_quantity_arg, default=None)
    p.add_argument("--gap", type=_quantity_arg, default=None,
                   help="diagonal energy gap for the second state")
    p.add_argument("--method", choices=[m.value for m in Method], default="rk4")
    p.add_argument("--stride", type=int, default=1)
    _add_common(p)
    p.set_defaults(handler=_cmd_evolve)

    p = sub.add_parser("sweep", help="one-axis grid scan")
    p.add_argument("scenario", choices=[s.value for s in Scenario])
    p.add_argument("--axis", required=True)
    p.add_argument("--min", type=_quantity_arg, required=True)
    p.add_argument("--max", type=_quantity_arg, required=True)
    p.add_argument("--count", type=int, default=21)
    p.add_argument("--spacing", choices=["geometric", "linear"],
                   default="geometric")
    _scenario_flags(p, ("M", "v", "D", "L", "d", "omega0"), required=False)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--E", type=_quantity_arg, default=None)
    _add_common(p)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("curve", help="visibility decay curve")
    curve_sub = p.add_subparsers(dest="scenario", required=True)
    for kind, names in (("trapped", ("M", "v", "D")),
                        ("free-flight", ("M", "v", "D", "L", "d")),
                        ("photon", ()),
                        ("rabi", ("gap",)),
                        ("oscillator", ("M", "omega0", "n"))):
        q = curve_sub.add_parser(kind)
        _scenario_flags(q, names)
        if kind == "trapped":
            q.add_argument("--E", type=_quantity_arg, default=None)
        q.add_argument("--t-end", dest="t_end", type=_quantity_arg, default=None)
        q.add_argument("--dt", type=_quantity_arg, default=None)
        q.add_argument("--stride", type=int, default=1)
        _add_common(q)
        q.set_defaults(handler=_cmd_curve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        text = args.handler(args)
    except (UnitError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SweepError, IntegrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
