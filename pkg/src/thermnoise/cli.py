"""Command-line entry point: ``thermnoise <command> [options]``.

Every command writes a CSV table (always) and optionally a JSON summary and
an SVG figure next to it. Depths on the command line are in units of the
beam radius w0; wavevector windows are in units of k0.

Exit status: 0 on success (including an empty root search), 1 for
configuration or usage errors, 2 for numerical failures.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import compensation, composite, fdt
from .model import Config, ConfigError, load_config
from .plotting import FIGURE_COLUMNS, FigureError, emit_figure
from .report import Table, format_value
from .tmm import NumericalError, StrainModel

__all__ = ["ScanRequest", "run", "main", "build_parser", "COMMANDS"]

COMMANDS = ("stack-scan", "magic", "discriminate", "fdt-corr", "fdt-q", "noise-ratio", "psd", "eigenmode")
FORMATS = ("csv", "json", "svg")


def default_config_path() -> Path:
    return Path(str(resources.files("thermnoise") / "data" / "example_config.json"))


class UsageError(ValueError):
    pass


@dataclass
class ScanRequest:
    command: str
    params: dict = field(default_factory=dict)
    out: str | None = None
    formats: tuple[str, ...] = ("csv",)
    config: str | None = None

    def output_stem(self) -> Path:
        out = Path(self.out) if self.out else Path(self.command)
        return out.with_suffix("") if out.suffix in (".csv", ".json", ".svg") else out


# --------------------------------------------------------------------------
# commands; each returns (table, one-line summary)


def _stack(config: Config, name):
    if name is None:
        raise UsageError("--stack is required")
    try:
        return config.stacks[name]
    except KeyError:
        raise ConfigError(f"unknown stack {name!r}; config has {sorted(config.stacks)}") from None


def _beam(config: Config, p):
    if config.beam is None:
        raise ConfigError("config has no 'beam' section")
    beam = config.beam
    if p.get("sigma") is not None:
        beam = beam.with_sigma(p["sigma"])
    return beam


def _zeta(config: Config, p):
    if p.get("zeta") is not None:
        return p["zeta"]
    if p.get("mode"):
        return _mode(config, p["mode"]).zeta
    raise UsageError("give --zeta or --mode")


def _mode(config, name):
    try:
        return config.modes[name]
    except KeyError:
        raise ConfigError(f"unknown mode {name!r}; config has {sorted(config.modes)}") from None


def _k_grid(stack, p):
    lo, hi = p.get("window") or compensation.DEFAULT_WINDOW
    if not 0 < lo < hi:
        raise UsageError(f"--window must satisfy 0 < lo < hi, got {lo} {hi}")
    return np.linspace(lo, hi, p.get("points") or compensation.DEFAULT_POINTS) * stack.k0


def _phase_table(points):
    return Table(
        ("k_over_k0", "delta_theta", "delta_beta", "delta_phi", "T"),
        [(pt.k_over_k0, pt.delta_theta, pt.delta_beta, pt.delta_phi, pt.T) for pt in points],
    )


def cmd_stack_scan(config, p):
    stack = _stack(config, p.get("stack"))
    zeta = _zeta(config, p)
    table = _phase_table(compensation.scan_total_phase(stack, zeta, _k_grid(stack, p), p["model"]))
    phi = np.asarray(table.column("delta_phi"))
    table.summary = {"stack": p["stack"], "zeta_per_m": zeta, "model": p["model"].value,
                     "min_abs_delta_phi": float(np.min(np.abs(phi)))}
    return table, f"{len(table)} points, min |delta_phi| = {format_value(table.summary['min_abs_delta_phi'])}"


def cmd_magic(config, p):
    stack = _stack(config, p.get("stack"))
    zeta = _zeta(config, p)
    table = _phase_table(compensation.scan_total_phase(stack, zeta, _k_grid(stack, p), p["model"]))
    window = p.get("window") or compensation.DEFAULT_WINDOW
    magic = compensation.find_magic_wavevectors(
        stack, zeta, window, p["model"], p.get("points") or compensation.DEFAULT_POINTS
    )
    table.summary = {"stack": p["stack"], "zeta_per_m": zeta, "model": p["model"].value,
                     "roots_k_over_k0": list(magic.roots), "window": list(window),
                     "search_points": magic.grid_points}
    n = len(magic.roots)
    line = f"{n} root{'s' if n != 1 else ''}"
    if n:
        line += ": k/k0 = " + ", ".join(format_value(r) for r in magic.roots)
    return table, line


def cmd_discriminate(config, p):
    a, b = _stack(config, p.get("stack_a")), _stack(config, p.get("stack_b"))
    zeta = _zeta(config, p)
    window = p.get("window") or compensation.DEFAULT_WINDOW
    points = p.get("points") or compensation.DEFAULT_POINTS
    try:
        report = compensation.discrimination_report(a, b, zeta, window, p["model"], points)
    except compensation.NoMagicRootError as exc:
        # no operating point is still an answer; the scan is written anyway
        report, missing = None, str(exc)
    grid = _k_grid(a, p)
    sa = compensation.scan_total_phase(a, zeta, grid, p["model"])
    sb = compensation.scan_total_phase(b, zeta, grid, p["model"])
    table = Table(
        ("k_over_k0", "delta_theta", "delta_phi_A", "delta_phi_B", "T_A", "T_B"),
        [(x.k_over_k0, x.delta_theta, x.delta_phi, y.delta_phi, x.T, y.T) for x, y in zip(sa, sb)],
    )
    table.summary = {"stack_a": p["stack_a"], "stack_b": p["stack_b"], "zeta_per_m": zeta,
                     "model": p["model"].value}
    if report is None:
        table.summary["no_magic_root"] = missing
        return table, f"no operating point: {missing}"
    table.summary.update(report.as_dict())
    return table, (
        f"k-_B = {format_value(report.k_minus_B)}, k+_A = {format_value(report.k_plus_A)}, "
        f"cross noise A@k-_B = {report.cross_noise_A_at_kB:.3f}, B@k+_A = {report.cross_noise_B_at_kA:.3f}"
    )


def _z2_grid(p, default_max=10.0):
    if p.get("z2") is not None:
        return np.array([p["z2"]], dtype=float)
    z_max = p.get("z2_max")
    z_max = default_max if z_max is None else z_max
    if z_max < 0:
        raise UsageError("--z2-max must be >= 0")
    return np.linspace(0.0, z_max, p.get("points") or 101)


def cmd_fdt_corr(config, p):
    beam = _beam(config, p)
    w0 = beam.w0
    z1s = p.get("z1") or [0.0]
    z2s = _z2_grid(p)
    diag = {z: fdt.correlation_N(z * w0, z * w0, beam).value for z in z2s}
    rows = []
    for z1 in z1s:
        n11 = fdt.correlation_N(z1 * w0, z1 * w0, beam).value
        for z2 in z2s:
            n12 = fdt.correlation_N(z1 * w0, z2 * w0, beam).value
            rows.append((float(z1), float(z2), n12, n12 / math.sqrt(n11 * diag[z2]), diag[z2]))
    table = Table(("z1_over_w0", "z2_over_w0", "N", "C", "N_diag"), rows)
    table.summary = {"sigma": beam.substrate.sigma}
    if len(rows) == 1:
        return table, f"N = {rows[0][2]:.6f}, C = {rows[0][3]:.6f}"
    return table, f"{len(rows)} correlation values"


def cmd_fdt_q(config, p):
    beam = _beam(config, p)
    w0 = beam.w0
    dz = p.get("dz2") or 1e-3
    z1s = p.get("z1") or [0.0, 1.0, 3.0, 10.0]
    rows = []
    for z1 in z1s:
        for z2 in _z2_grid(p):
            Q = fdt.strain_correlation_Q(z1 * w0, z2 * w0, dz * w0, beam)
            rows.append((float(z1), float(z2), dz, Q, Q / math.sqrt(dz)))
    table = Table(("z1_over_w0", "z2_over_w0", "dz2_over_w0", "Q", "Q_scaled"), rows)
    table.summary = {"sigma": beam.substrate.sigma, "dz2_over_w0": dz}
    return table, f"{len(rows)} Q values, max |Q| = {max(abs(r[3]) for r in rows):.6f}"


def _parse_alpha(values):
    out = []
    for v in values:
        if str(v).lower() in ("min", "opt"):
            out.append("min")
        else:
            try:
                out.append(float(v))
            except ValueError:
                raise UsageError(f"--alpha expects numbers or 'min', got {v!r}") from None
    return out


def cmd_noise_ratio(config, p):
    beam = _beam(config, p)
    w0 = beam.w0
    alphas = _parse_alpha(p.get("alpha") or [1.5, 0.3, 1.0, 0.7, "min"])
    coeff = p.get("transverse_coeff")
    columns = ["curve", "alpha", "z2_over_w0", "F"]
    if coeff is not None:
        columns.append("F_transverse")
    rows = []
    best = None
    for a in alphas:
        for z in _z2_grid(p):
            if a == "min":
                opt = composite.optimal_alpha(z * w0, beam)
                alpha, F = opt.alpha_min, opt.F_min
                if best is None or z >= best[0]:
                    best = (float(z), alpha, F)
            else:
                alpha, F = a, composite.noise_ratio_F(z * w0, a, beam)
            row = [("min" if a == "min" else format_value(a)), alpha, float(z), F]
            if coeff is not None:
                row.append(F + composite.transverse_penalty(z * w0, w0, coeff))
            rows.append(tuple(row))
    table = Table(tuple(columns), rows)
    table.summary = {"sigma": beam.substrate.sigma, "alphas": [str(a) for a in alphas]}
    if best is not None:
        table.summary.update({"z2_over_w0": best[0], "alpha_min": best[1], "F_min": best[2]})
        return table, f"at z2/w0 = {best[0]:g}: alpha_min = {best[1]:.4f}, F_min = {best[2]:.4f}"
    Fs = [r[3] for r in rows]
    return table, f"{len(rows)} points, F in [{min(Fs):.6f}, {max(Fs):.6f}]"


def cmd_psd(config, p):
    beam = _beam(config, p)
    if p.get("freq"):
        freqs = np.asarray(p["freq"], dtype=float)
    else:
        fmin, fmax = p.get("f_min") or 1.0, p.get("f_max") or 1e4
        if not 0 < fmin < fmax:
            raise UsageError("need 0 < --f-min < --f-max")
        freqs = np.geomspace(fmin, fmax, p.get("points") or 101)
    rows = []
    for f in freqs:
        S = fdt.surface_psd(2 * math.pi * f, beam)
        rows.append((float(f), 2 * math.pi * float(f), S, math.sqrt(S)))
    table = Table(("f_hz", "omega_rad_s", "S_q", "sqrt_S_q"), rows)
    table.summary = {"w0_m": beam.w0, "temperature_K": beam.temperature, "substrate": beam.substrate.name}
    return table, f"{len(rows)} frequencies, S_q({format_value(rows[0][0])} Hz) = {format_value(rows[0][2])} m^2/(rad/s)"


def cmd_eigenmode(config, p):
    names = [p["mode"]] if p.get("mode") else sorted(config.modes)
    if not names:
        raise ConfigError("config defines no modes")
    T = p.get("temperature")
    if T is None:
        T = config.beam.temperature if config.beam is not None else 300.0
    rows = []
    for name in names:
        m = _mode(config, name)
        rows.append((name, m.omega0, m.omega0 / (2 * math.pi), m.M0, m.zeta, T,
                     compensation.eigenmode_rms(m, T)))
    table = Table(("mode", "omega0_rad_s", "f0_hz", "M0_kg", "zeta_per_m", "temperature_K", "rms_m"), rows)
    return table, "; ".join(f"{r[0]}: rms = {r[-1]:.4g} m" for r in rows)


_HANDLERS = {
    "stack-scan": cmd_stack_scan,
    "magic": cmd_magic,
    "discriminate": cmd_discriminate,
    "fdt-corr": cmd_fdt_corr,
    "fdt-q": cmd_fdt_q,
    "noise-ratio": cmd_noise_ratio,
    "psd": cmd_psd,
    "eigenmode": cmd_eigenmode,
}


def execute(request: ScanRequest, config: Config | None = None) -> tuple[Table, str]:
    """Run a request and return its table without writing files."""
    if request.command not in _HANDLERS:
        raise UsageError(f"unknown command {request.command!r}")
    if config is None:
        config = load_config(request.config or default_config_path())
    params = dict(request.params)
    params["model"] = StrainModel(params.get("model") or StrainModel.PHOTOELASTIC)
    return _HANDLERS[request.command](config, params)


def run(request: ScanRequest, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        table, line = execute(request)
    except (ConfigError, UsageError, FigureError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=stderr)
        return 2

    stem = request.output_stem()
    stem.parent.mkdir(parents=True, exist_ok=True)
    written = [table.write_csv(stem.with_suffix(".csv"))]
    if "json" in request.formats:
        written.append(table.write_json(stem.with_suffix(".json")))
    if "svg" in request.formats and request.command not in FIGURE_COLUMNS:
        print(f"note: {request.command} has no figure; SVG skipped", file=stderr)
    elif "svg" in request.formats:
        try:
            written.append(emit_figure(table, request.command, stem.with_suffix(".svg")))
        except FigureError as exc:
            print(f"error: {exc}", file=stderr)
            return 1
    print(f"{request.command}: {line}", file=stdout)
    return 0


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thermnoise", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON config (default: bundled example)")
    common.add_argument("--out", help="output path stem (default: command name)")
    common.add_argument("--format", nargs="+", choices=FORMATS, default=["csv"],
                        help="outputs to write; CSV is always written")
    common.add_argument("--model", choices=[m.value for m in StrainModel], default="photoelastic",
                        help="coating strain model")
    common.add_argument("--sigma", type=float, help="override the substrate Poisson ratio")
    common.add_argument("--points", type=int, help="grid size")

    def scan_opts(p):
        p.add_argument("--zeta", type=float, help="axial strain per unit surface displacement (1/m)")
        p.add_argument("--mode", help="take zeta from a configured eigenmode")
        p.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"), help="k/k0 window")

    p = sub.add_parser("stack-scan", parents=[common], help="total phase and transmission vs k/k0")
    p.add_argument("--stack", required=True)
    scan_opts(p)
    p = sub.add_parser("magic", parents=[common], help="find wavevectors where the total phase vanishes")
    p.add_argument("--stack", required=True)
    scan_opts(p)
    p = sub.add_parser("discriminate", parents=[common], help="two-mirror discrimination study")
    p.add_argument("--stack-a", required=True)
    p.add_argument("--stack-b", required=True)
    scan_opts(p)

    def depth_opts(p, z1_default):
        p.add_argument("--z1", type=float, nargs="+", help=f"depths z1/w0 (default {z1_default})")
        p.add_argument("--z2", type=float, help="single depth z2/w0")
        p.add_argument("--z2-max", type=float, help="z2/w0 grid upper end (default 10)")

    p = sub.add_parser("fdt-corr", parents=[common], help="displacement correlation N and C")
    depth_opts(p, "0")
    p = sub.add_parser("fdt-q", parents=[common], help="displacement-strain correlation Q")
    depth_opts(p, "0 1 3 10")
    p.add_argument("--dz2", type=float, help="slice thickness dz2/w0 (default 1e-3)")
    p = sub.add_parser("noise-ratio", parents=[common], help="embedded-mirror noise ratio F(z2)")
    p.add_argument("--alpha", nargs="+", help="sensitivities, or 'min' for the optimum")
    p.add_argument("--z2", type=float, help="single depth z2/w0")
    p.add_argument("--z2-max", type=float, help="z2/w0 grid upper end (default 10)")
    p.add_argument("--transverse-coeff", type=float, help="add coeff*z2/w0 as an incoherent term")
    p = sub.add_parser("psd", parents=[common], help="surface displacement PSD")
    p.add_argument("--freq", type=float, nargs="+", help="frequencies in Hz")
    p.add_argument("--f-min", type=float)
    p.add_argument("--f-max", type=float)
    p = sub.add_parser("eigenmode", parents=[common], help="equipartition amplitude of configured modes")
    p.add_argument("--mode")
    p.add_argument("--temperature", type=float, help="K (default: beam temperature)")
    return parser


_NOT_PARAMS = {"command", "config", "out", "format"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in _NOT_PARAMS and v is not None}
    request = ScanRequest(
        command=args.command,
        params=params,
        out=args.out,
        formats=tuple(dict.fromkeys(["csv", *args.format])),
        config=args.config,
    )
    return run(request)


if __name__ == "__main__":
    sys.exit(main())
