"""Parameter sweeps that locate the quantum/classical boundary, and
visibility-decay curves that compose a verdict with the evolver.

The boundary is not a fixed mass: it is the surface in (mass, velocity,
separation, angle, ...) space where a scenario's verdict flips between a
finite collapse time and an everlasting superposition.  Sweeps evaluate the
verdict on a grid along one axis and then bisect the flip interval on the
verdict itself (not on an inverted formula), so they stay correct if the
discrimination margins change; the closed-form critical-mass operations
remain available as cross-checks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import discrimination as disc
from .discrimination import (DiscriminationVerdict, FreeFlightSpec,
                             OscillatorSpec, Regime, TrappedPairSpec,
                             ValidationError)
from .evolution import EvolutionConfig, Method, Trajectory, evolve
from .states import CollapseRateMatrix, Hamiltonian, coherence_visibility, \
    make_basis, pure_state
from .units import Quantity, preferred_unit

REPORT_SCHEMA_ID = "report/1"

BISECTION_REL_TOL = 1e-6


class SweepError(RuntimeError):
    """The regime pattern along the grid is not a single monotone flip."""


class Scenario(str, enum.Enum):
    TRAPPED = "trapped"
    FREE_FLIGHT = "free-flight"
    OSCILLATOR = "oscillator"


# Parameter names accepted per scenario; the axis must be one of them.
SCENARIO_PARAMS: dict[Scenario, tuple[str, ...]] = {
    Scenario.TRAPPED: ("M", "v", "D"),
    Scenario.FREE_FLIGHT: ("M", "v", "D", "L", "d"),
    Scenario.OSCILLATOR: ("M", "omega0", "n"),
}


@dataclass(frozen=True)
class SweepSpec:
    """One-axis scan of a scenario: grid plus fixed remaining parameters.

    Quantities throughout; the oscillator's n is a dimensionless Quantity
    and is rounded to an integer at evaluation points.  eta is the margin
    passed to the trapped analysis.
    """

    scenario: Scenario
    axis: str
    minimum: Quantity
    maximum: Quantity
    count: int
    spacing: str = "geometric"
    fixed: dict = field(default_factory=dict)
    eta: float = 1.0

    def __post_init__(self):
        params = SCENARIO_PARAMS[self.scenario]
        if self.axis not in params:
            raise ValidationError(
                f"axis '{self.axis}' is not a {self.scenario.value} parameter "
                f"(one of {params})")
        if self.count < 2:
            raise ValidationError(f"count must be >= 2, got {self.count}")
        if self.minimum.dim != self.maximum.dim:
            raise ValidationError("grid endpoints must share a dimension")
        if not self.minimum.value < self.maximum.value:
            raise ValidationError("grid needs minimum < maximum")
        if self.spacing not in ("geometric", "linear"):
            raise ValidationError(f"unknown spacing '{self.spacing}'")
        if self.spacing == "geometric" and self.minimum.value <= 0.0:
            raise ValidationError("geometric spacing needs minimum > 0")


@dataclass(frozen=True)
class SweepRow:
    value: Quantity
    tau: Quantity
    regime: Regime
    digest: str


@dataclass(frozen=True)
class BoundaryReport:
    scenario: Scenario
    axis: str
    rows: tuple[SweepRow, ...]
    critical_value: Quantity | None

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA_ID,
            "scenario": self.scenario.value,
            "axis": self.axis,
            "rows": [
                {
                    "value": row.value.value,
                    "unit": preferred_unit(row.value.dim),
                    "tau": {"value": None if not row.tau.is_finite else row.tau.value,
                            "unit": "s"},
                    "regime": row.regime.value,
                    "digest": row.digest,
                }
                for row in self.rows
            ],
            "critical_value": None if self.critical_value is None else {
                "value": self.critical_value.value,
                "unit": preferred_unit(self.critical_value.dim),
            },
        }


def _derivation_digest(verdict: DiscriminationVerdict) -> str:
    parts = [f"{sym}={q.value:.6g} {preferred_unit(q.dim)}"
             for sym, q in verdict.derivation]
    return "; ".join(parts)


def scenario_verdict(scenario: Scenario, params: dict, eta: float = 1.0
                     ) -> DiscriminationVerdict:
    """Evaluate one scenario from a {name: Quantity} parameter map."""
    if scenario is Scenario.TRAPPED:
        spec = TrappedPairSpec(mass=params["M"], mean_velocity=params["v"],
                               separation=params["D"],
                               energy_gap=params.get("E"), margin=eta)
        return disc.trapped_tau(spec)
    if scenario is Scenario.FREE_FLIGHT:
        spec = FreeFlightSpec(mass=params["M"], speed=params["v"],
                              slit_separation=params["D"],
                              source_distance=params["L"],
                              slit_width=params["d"])
        return disc.free_flight_tau(spec)
    spec = OscillatorSpec(mass=params["M"], angular_frequency=params["omega0"],
                          quantum_number=int(round(params["n"].value)))
    return disc.oscillator_verdict(spec)


def _is_finite_at(spec: SweepSpec, x: float) -> bool:
    """Finite-tau classifier at axis value x (SI scale).

    For the oscillator's n axis the threshold comparison extends naturally
    to real n, which is what bisection refines.
    """
    if spec.scenario is Scenario.OSCILLATOR and spec.axis == "n":
        probe = OscillatorSpec(mass=spec.fixed["M"],
                               angular_frequency=spec.fixed["omega0"],
                               quantum_number=0)
        verdict = disc.oscillator_verdict(probe)
        n_star = dict(verdict.derivation)["n_star"].value
        return x > n_star
    params = dict(spec.fixed)
    params[spec.axis] = Quantity(x, spec.minimum.dim)
    return not scenario_verdict(spec.scenario, params, spec.eta).is_infinite


def _bisect(spec: SweepSpec, lo: float, hi: float) -> float:
    """Refine a flip bracket to BISECTION_REL_TOL relative width."""
    lo_finite = _is_finite_at(spec, lo)
    geometric = spec.spacing == "geometric"
    while (hi - lo) > BISECTION_REL_TOL * lo:
        mid = math.sqrt(lo * hi) if geometric else 0.5 * (lo + hi)
        if _is_finite_at(spec, mid) == lo_finite:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sweep(spec: SweepSpec) -> BoundaryReport:
    """Evaluate the scenario along the grid and locate the regime flip.

    Exactly one flip is bisected to 1e-6 relative; none leaves
    critical_value at None; more than one raises SweepError naming the
    offending interval.  Output is deterministic for identical specs.
    """
    if spec.spacing == "geometric":
        grid = np.geomspace(spec.minimum.value, spec.maximum.value, spec.count)
    else:
        grid = np.linspace(spec.minimum.value, spec.maximum.value, spec.count)

    rows = []
    finite_flags = []
    for x in grid:
        if spec.scenario is Scenario.OSCILLATOR and spec.axis == "n":
            x = float(round(x))
        params = dict(spec.fixed)
        params[spec.axis] = Quantity(float(x), spec.minimum.dim)
        verdict = scenario_verdict(spec.scenario, params, spec.eta)
        rows.append(SweepRow(Quantity(float(x), spec.minimum.dim), verdict.tau,
                             verdict.regime, _derivation_digest(verdict)))
        finite_flags.append(not verdict.is_infinite)

    flips = [i for i in range(len(grid) - 1)
             if finite_flags[i] != finite_flags[i + 1]]
    if len(flips) > 1:
        i, j = flips[0], flips[1]
        raise SweepError(
            "regime flips more than once along the grid: between "
            f"{grid[i]:.6g}..{grid[i + 1]:.6g} and {grid[j]:.6g}..{grid[j + 1]:.6g} "
            f"({preferred_unit(spec.minimum.dim)})")
    critical = None
    if flips:
        i = flips[0]
        critical = Quantity(_bisect(spec, float(grid[i]), float(grid[i + 1])),
                            spec.minimum.dim)
    return BoundaryReport(spec.scenario, spec.axis, tuple(rows), critical)


def curve_trajectory(verdict: DiscriminationVerdict, t_end: Quantity, *,
                     dt: Quantity | None = None, method: Method = Method.RK4,
                     record_stride: int = 1) -> Trajectory:
    """Trajectory of an equal two-state superposition decaying at the
    verdict's rate (rate 0, hence constant, for an infinite tau).

    The default step is t_end/512, an exact divisor, so the last sample
    lands on t_end itself rather than on the next whole step past it.
    """
    basis = make_basis("here", "there")
    rate = verdict.rate.value
    rates = CollapseRateMatrix(basis, np.array([[0.0, rate], [rate, 0.0]]))
    rho0 = pure_state([1.0, 1.0], basis)
    if dt is None:
        dt = t_end / 512.0
    cfg = EvolutionConfig(t_end=t_end, dt=dt, method=method,
                          record_stride=record_stride)
    return evolve(rho0, Hamiltonian.zero(basis), rates, cfg)


def visibility_curve(verdict: DiscriminationVerdict, t_end: Quantity, *,
                     dt: Quantity | None = None, method: Method = Method.RK4,
                     record_stride: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Visibility 2|rho_01|(t) of an equal two-state superposition decaying
    at the verdict's rate; constant 1.0 for an infinite tau.

    Returns (times in seconds, visibilities).
    """
    traj = curve_trajectory(verdict, t_end, dt=dt, method=method,
                            record_stride=record_stride)
    vis = np.array([coherence_visibility(s, "here", "there")
                    for s in traj.states])
    return traj.times, vis


def curve_to_csv(times: np.ndarray, visibilities: np.ndarray) -> str:
    lines = ["time_s,visibility"]
    for t, v in zip(times, visibilities):
        lines.append(f"{float(t)!r},{float(v)!r}")
    return "\r\n".join(lines) + "\r\n"
