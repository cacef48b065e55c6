"""
Subcommands of the qcc command line, plus the qcc-init entry point

- steady:          steady state of a model file
- cost:            minimum work rate to hold a target state
- sideband:        resolved-sideband cooling steady states and sweeps
- qubit-cool:      qubit cooling power, optionally with a gap-shifting auxiliary
- qc-cost:         free-energy cost of gate noise
- protocol-check:  finite-step reset protocol convergence
- init / examples: project setup and bundled model files
"""
import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from rich.console import Console
from scipy import constants

from ..config import ProjectInitializer, QccConfig
from ..core.linalg import max_norm
from ..core.lindblad import apply_generator, steady_state
from ..core.strong import two_qubit_strong
from ..core.thermo import min_work_rate, protocol_step_check
from ..core.types import DivergentResultError, InvalidInputError
from ..examples import get_example_model_text, list_examples
from ..models.devices import qc_computation_cost, qc_free_energy_loss
from ..models.qubit import qubit_cool_power
from ..models.sideband import (
    TEUFEL_GAMMA_PRIMES,
    SidebandModel,
    scaled_model,
    sideband_fock_steady_state,
    sideband_steady_state,
    sideband_sweep,
    teufel_model,
)
from .modelspec import build_system, build_target, load_model_spec, reference_temperature
from .output import format_value, metadata_header, render_table, write_csv, write_svg
from .registry import register_command
from .units import UnitProvenance, kelvin_to_natural


@dataclass
class CliContext:
    """What every handler needs besides its own arguments"""
    console: Console
    config: QccConfig
    argv: List[str]
    output_format: str = "table"
    output: Optional[Path] = None

    def emit(self, frame: pd.DataFrame, title: str, lines: Sequence[str] = ()) -> None:
        header = metadata_header(self.argv, lines)
        if self.output is not None:
            path = self.output if self.output.is_absolute() else Path(self.config.output_dir) / self.output
            write_csv(frame, header, path=path)
            self.console.print(f"💾 Wrote {path}")
        if self.output_format == "csv" and self.output is None:
            write_csv(frame, header, stream=sys.stdout)
        elif self.output_format == "table":
            render_table(self.console, frame, title, notes=header)


@dataclass(frozen=True)
class SweepSpec:
    """`name:start:stop:count[:lin|log]`"""
    parameter: str
    start: float
    stop: float
    count: int
    scale: str = "lin"

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise InvalidInputError(f"Sweep '{text}' must look like name:start:stop:count[:lin|log]")
        try:
            spec = cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]),
                       parts[4] if len(parts) == 5 else "lin")
        except ValueError as exc:
            raise InvalidInputError(f"Cannot parse sweep '{text}': {exc}") from exc
        if spec.count < 2:
            raise InvalidInputError("A sweep needs at least two points")
        if spec.scale not in ("lin", "log"):
            raise InvalidInputError(f"Sweep scale must be lin or log, got '{spec.scale}'")
        if spec.scale == "log" and (spec.start <= 0 or spec.stop <= 0):
            raise InvalidInputError("Logarithmic sweeps need positive bounds")
        return spec

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def _context(args) -> CliContext:
    return args.ctx


def _load(args):
    spec = load_model_spec(args.model)
    system = build_system(spec)
    return spec, system


def _temperature(spec, override: Optional[float]) -> float:
    if override is None:
        return reference_temperature(spec)
    return kelvin_to_natural(override) if spec.units == "SI" else override


def _model_lines(spec) -> List[str]:
    return [f"model: {spec.name} (units: {spec.units}, internal rad/s)"]


# steady --------------------------------------------------------------------

def _configure_steady(p: argparse.ArgumentParser) -> None:
    p.add_argument("model", help="Model file (JSON)")


@register_command("steady", "Steady state of a model", _configure_steady)
def cmd_steady(args) -> int:
    ctx = _context(args)
    spec, system = _load(args)
    rho = steady_state(system)
    residual = max_norm(apply_generator(system, rho))
    eigenvalues = np.linalg.eigvalsh(rho)
    rows = [{"row": i, "col": j, "real": rho[i, j].real, "imag": rho[i, j].imag}
            for i in range(system.dim) for j in range(system.dim)]
    lines = _model_lines(spec) + [
        f"residual: {format_value(residual)}",
        "eigenvalues: " + " ".join(format_value(w) for w in eigenvalues),
    ]
    ctx.emit(pd.DataFrame(rows), "Steady state", lines)
    return 0


# cost ----------------------------------------------------------------------

def _configure_cost(p: argparse.ArgumentParser) -> None:
    p.add_argument("model", help="Model file (JSON)")
    p.add_argument("--target", default=None,
                   help="spec (default), gibbs:<T>, ground or mixed")
    p.add_argument("--temp", type=float, default=None,
                   help="Reference temperature (model units); defaults to the file's")
    p.add_argument("--scalar", action="store_true",
                   help="Print only the minimum work rate")


@register_command("cost", "Minimum work rate to hold a target state", _configure_cost)
def cmd_cost(args) -> int:
    ctx = _context(args)
    spec, system = _load(args)
    T = _temperature(spec, args.temp)
    target = build_target(spec, args.target)
    if target is None:
        raise InvalidInputError("Model file has no target_state; pass --target")
    report = min_work_rate(system, target, T)
    if args.scalar:
        print(format_value(report.scalar()))
        return 0
    lines = _model_lines(spec) + [
        f"reference_temperature: {format_value(T)}",
        f"min_work_rate: {format_value(report.min_work_rate)}",
        f"divergent: {format_value(report.divergent)}",
    ]
    if report.divergent:
        lines.append("note: target is support-deficient; holding it requires an infinite work rate")
    ctx.emit(report.to_frame(), "Control cost", lines)
    return 0


# sideband ------------------------------------------------------------------

def _configure_sideband(p: argparse.ArgumentParser) -> None:
    p.add_argument("--omega", type=float, help="Mechanical frequency")
    p.add_argument("--Omega", type=float, help="Auxiliary frequency")
    p.add_argument("--g", type=float, default=None, help="Coupling rate")
    p.add_argument("--gamma", type=float, help="Mechanical damping")
    p.add_argument("--gamma-prime", type=float, default=None, help="Auxiliary damping")
    p.add_argument("--temp", type=float, help="Bath temperature")
    p.add_argument("--teufel", action="store_true",
                   help="Electromechanical preset (all three auxiliary dampings unless --gamma-prime)")
    p.add_argument("--sweep", default=None, help="name:start:stop:count[:lin|log], e.g. g:1e3:1e7:50:log")
    p.add_argument("--svg", default=None, help="Also write an SVG plot of T_eff and efficiency")
    p.add_argument("--oracle", action="store_true",
                   help="Cross-check the first row against the two-mode Fock master equation")


def _sideband_models(args, prov: UnitProvenance) -> List[SidebandModel]:
    if args.teufel:
        g = prov.frequency("g", args.g) if args.g is not None else 0.0
        if args.gamma_prime is not None:
            return [teufel_model(g, prov.frequency("gamma_prime", args.gamma_prime))]
        return [teufel_model(g, gp) for gp in TEUFEL_GAMMA_PRIMES]
    missing = [name for name in ("omega", "Omega", "gamma", "gamma_prime", "temp")
               if getattr(args, name) is None]
    if missing:
        raise InvalidInputError(f"Missing sideband parameters: {', '.join(missing)} (or use --teufel)")
    return [SidebandModel(
        omega=prov.frequency("omega", args.omega),
        Omega=prov.frequency("Omega", args.Omega),
        g=prov.frequency("g", args.g) if args.g is not None else 0.0,
        gamma=prov.frequency("gamma", args.gamma),
        gamma_prime=prov.frequency("gamma_prime", args.gamma_prime),
        T=prov.temperature("T", args.temp),
    )]


@register_command("sideband", "Resolved-sideband cooling steady state or sweep", _configure_sideband)
def cmd_sideband(args) -> int:
    ctx = _context(args)
    prov = UnitProvenance(args.si or args.teufel)
    models = _sideband_models(args, prov)

    if args.sweep:
        sweep = SweepSpec.parse(args.sweep)
        values = sweep.values()
        if args.si or args.teufel:
            convert = prov.temperature if sweep.parameter == "T" else prov.frequency
            values = np.array([convert(sweep.parameter, v) for v in values])
        frames = [sideband_sweep(m, sweep.parameter, values, ctx.config.threads) for m in models]
    else:
        frames = [sideband_sweep(m, "g", [m.g]) for m in models]
    frame = pd.concat(frames, ignore_index=True)

    lines = prov.header()
    first = models[0]
    lines.append(f"n_bar: {format_value(first.n_bar)}  n_bar_prime: {format_value(first.n_bar_prime)}")
    if args.oracle:
        scaled = scaled_model(first.with_(g=float(frame["g"].iloc[0])))
        moments = sideband_steady_state(scaled).n_a
        fock = sideband_fock_steady_state(scaled, 25)["n_a"]
        lines.append(f"oracle (scaled to n_bar = 2): moments n_a = {format_value(moments)}, "
                     f"Fock n_a = {format_value(fock)}, "
                     f"relative difference = {format_value(abs(moments - fock) / fock)}")

    columns = ["g", "gamma_prime", "T_eff", "n_a", "Q_dot", "W_dot", "cop", "cop_ideal", "eps", "flags"]
    ctx.emit(frame[columns], "Resolved-sideband cooling", lines)
    if args.svg:
        x = args.sweep.split(":")[0] if args.sweep else "g"
        path = write_svg(frame, x, ["T_eff", "eps"], Path(args.svg), group="gamma_prime",
                         logx=bool(args.sweep and args.sweep.endswith(":log")))
        ctx.console.print(f"📈 Wrote {path}")
    return 0


# qubit-cool ----------------------------------------------------------------

def _configure_qubit_cool(p: argparse.ArgumentParser) -> None:
    p.add_argument("--E", type=float, required=True, help="Qubit gap")
    p.add_argument("--T", type=float, required=True, help="Bath temperature")
    p.add_argument("--Tc", type=float, required=True, help="Target temperature")
    p.add_argument("--gamma", type=float, required=True, help="Damping rate")
    p.add_argument("--mode", choices=("full", "approx"), default="full")
    p.add_argument("--strong", type=float, default=None, metavar="EPSILON",
                   help="Gap shift from a strongly coupled auxiliary qubit")
    p.add_argument("--aux-gap", type=float, default=None,
                   help="Auxiliary gap (default: E + EPSILON + 20 T)")


@register_command("qubit-cool", "Minimum power to cool a qubit", _configure_qubit_cool)
def cmd_qubit_cool(args) -> int:
    ctx = _context(args)
    prov = UnitProvenance(args.si)
    E = prov.frequency("E", args.E)
    gamma = prov.frequency("gamma", args.gamma)
    T = prov.temperature("T", args.T)
    T_c = prov.temperature("Tc", args.Tc)

    weak = qubit_cool_power(E, T, T_c, gamma, args.mode)
    rows = [{"quantity": f"weak ({args.mode})", "value": weak}]
    value = weak
    if args.strong is not None:
        epsilon = prov.frequency("epsilon", args.strong)
        cal_e = prov.frequency("aux_gap", args.aux_gap) if args.aux_gap is not None \
            else E + epsilon + 20.0 * T
        if T_c == 0:
            raise DivergentResultError("Cooling to T_c = 0 requires an infinite work rate")
        value = two_qubit_strong(E, cal_e, epsilon, T, T_c, gamma)
        rows.append({"quantity": "strong", "value": value})
    if not np.isfinite(value):
        raise DivergentResultError("Cooling to T_c = 0 requires an infinite work rate")

    lines = prov.header() + ["power unit: hbar * (rad/s)^2" + (" (x hbar = W)" if args.si else "")]
    if args.si:
        rows.append({"quantity": "power [W]", "value": value * constants.hbar})
    ctx.emit(pd.DataFrame(rows), "Qubit cooling power", lines)
    return 0


# qc-cost -------------------------------------------------------------------

def _configure_qc_cost(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma", type=float, required=True, help="Amplitude-damping rate")
    p.add_argument("--beta", type=float, required=True, help="Depolarizing rate")
    p.add_argument("--tau", type=float, required=True, help="Gate duration")
    p.add_argument("--E", type=float, required=True, help="Qubit gap")
    p.add_argument("--T", type=float, required=True, help="Reference temperature")
    p.add_argument("--M", type=int, default=1, help="Number of qubit-gates")
    p.add_argument("--monte-carlo", type=int, default=None, metavar="N",
                   help="Average over N Haar-random states instead of the closed form")
    p.add_argument("--seed", type=int, default=0)


@register_command("qc-cost", "Free-energy cost of gate noise", _configure_qc_cost)
def cmd_qc_cost(args) -> int:
    ctx = _context(args)
    prov = UnitProvenance(args.si)
    gamma = prov.frequency("gamma", args.gamma)
    beta = prov.frequency("beta", args.beta)
    E = prov.frequency("E", args.E)
    T = prov.temperature("T", args.T)

    if args.monte_carlo is not None:
        loss = qc_free_energy_loss(gamma, beta, args.tau, E, T, mode="monte_carlo",
                                   samples=args.monte_carlo, seed=args.seed)
    else:
        loss = qc_free_energy_loss(gamma, beta, args.tau, E, T)
    total = qc_computation_cost(loss, args.M)
    rows = [
        {"quantity": "per_qubit", "value": loss.work_to_restore},
        {"quantity": "total", "value": total},
        {"quantity": "p_beta", "value": loss.p_beta},
        {"quantity": "p_gamma", "value": loss.p_gamma},
    ]
    if loss.mode == "monte_carlo":
        rows.append({"quantity": "stderr", "value": loss.stderr})
    lines = prov.header() + [f"mode: {loss.mode}", f"valid: {format_value(loss.valid)}"]
    ctx.emit(pd.DataFrame(rows), "Quantum computation cost", lines)
    return 0


# protocol-check ------------------------------------------------------------

def _configure_protocol(p: argparse.ArgumentParser) -> None:
    p.add_argument("model", help="Model file (JSON)")
    p.add_argument("--target", default=None, help="spec (default), gibbs:<T> or mixed")
    p.add_argument("--temp", type=float, default=None, help="Reference temperature (model units)")
    p.add_argument("--dts", default=None,
                   help="Comma-separated decreasing time steps (default: halving from 1e-3/rate)")


@register_command("protocol-check", "Finite-step reset protocol convergence", _configure_protocol)
def cmd_protocol_check(args) -> int:
    ctx = _context(args)
    spec, system = _load(args)
    T = _temperature(spec, args.temp)
    target = build_target(spec, args.target)
    if target is None:
        raise InvalidInputError("Model file has no target_state; pass --target")
    dts = None
    if args.dts:
        try:
            dts = [float(v) for v in args.dts.split(",")]
        except ValueError as exc:
            raise InvalidInputError(f"Cannot parse --dts '{args.dts}'") from exc

    check = protocol_step_check(system, target, T, dts)
    lines = _model_lines(spec) + [
        f"min_work_rate: {format_value(check.min_work_rate)}",
        f"extrapolated_limit: {format_value(check.limit)}",
        f"slope: {'n/a' if check.slope is None else format_value(check.slope)}",
        f"converged: {format_value(check.converged)}",
    ] + [f"note: {n}" for n in check.notes]
    ctx.emit(check.to_frame(), "Protocol convergence", lines)
    return 0 if check.converged else 3


# init / examples -----------------------------------------------------------

def _configure_init(p: argparse.ArgumentParser) -> None:
    p.add_argument("--force", "-f", action="store_true", help="Overwrite existing files")
    p.add_argument("--dir", "-d", default=".", help="Directory to initialize")
    p.add_argument("--status", action="store_true", help="Report status without changes")


def _run_init(project_dir: Path, force: bool, status_only: bool) -> int:
    if not project_dir.exists() or not project_dir.is_dir():
        print(f"❌ Error: Not a directory: {project_dir}")
        return 2

    initializer = ProjectInitializer(str(project_dir))
    if status_only:
        status = initializer.check_project_status()
        print(f"📁 Checking status for: {project_dir}")
        print("✅ Project is initialized" if status["initialized"] else "⚠️  Project is not fully initialized")
        for folder, info in status["folders"].items():
            icon = "✅" if info["exists"] else "❌"
            count = f"({info['file_count']} files)" if info["exists"] else ""
            print(f"  {icon} {folder}/ {count}")
        for rec in status["recommendations"]:
            print(f"💡 {rec}")
        return 0

    print(f"🚀 Initializing qcontrol-cost project in: {project_dir}")
    results = initializer.initialize_project(force=force)
    if not results["success"]:
        print("❌ Project initialization failed!")
        for error in results["errors"]:
            print(f"  - {error}")
        return 2
    for folder in results["created_folders"]:
        print(f"📂 {folder}/")
    for file in results["created_files"]:
        print(f"📄 {file}")
    for file in results["existing_files"]:
        print(f"📄 {file} (kept)")
    print("🎉 Ready. Try: qcc cost models/thermal_qubit.json")
    return 0


@register_command("init", "Set up models/, results/ and a .env template", _configure_init)
def cmd_init(args) -> int:
    return _run_init(Path(args.dir).resolve(), args.force, args.status)


def _configure_examples(p: argparse.ArgumentParser) -> None:
    p.add_argument("name", nargs="?", default=None, help="Print this bundled model")


@register_command("examples", "List bundled model files or print one", _configure_examples)
def cmd_examples(args) -> int:
    if args.name is None:
        for name in list_examples():
            print(name)
        return 0
    try:
        sys.stdout.write(get_example_model_text(args.name))
    except FileNotFoundError as exc:
        raise InvalidInputError(str(exc)) from exc
    return 0


def qcc_init():
    """Entry point for the qcc-init script"""
    parser = argparse.ArgumentParser(
        prog="qcc-init",
        description="Initialize a directory with example models and a QCC_ settings template"
    )
    _configure_init(parser)
    args = parser.parse_args()
    sys.exit(_run_init(Path(args.dir).resolve(), args.force, args.status))
