"""Command-line front end: point queries, parameter sweeps, optimizers,
constants, figure-style data dumps, and closed-form-vs-oracle verification.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analytics, budget, fock_oracle, optimal_search
from .analytics import LossChannel, NoonProbe, OperatingPoint

__all__ = ["main", "entrypoint", "run_verification", "SweepSpec"]

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2

VERIFY_TOL = 1e-10
DENSE_ETAS = (0.1, 0.3, 0.5, 0.7, 0.9, 1.0)
FAST_ETAS = (0.3, 0.7, 1.0)
DENSE_THETAS = (0.0, 0.37)

SWEEP_VARIABLES = ("N", "eta", "L", "phi0")


class UsageError(Exception):
    """Bad flag combination or out-of-domain request."""


# ---------------------------------------------------------------------------
# output formatting

@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    # single-row point queries render as one JSON object; sweeps stay lists
    json_object_if_single: bool = True


def _cell_text(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return f"{value:.12g}"
    return str(value)


def _cell_json(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        # mirror the 12-significant-digit text output so CSV and JSON agree
        return float(f"{value:.12g}")
    return value


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell_text(v) for v in row])
    return buf.getvalue()


def render_json(table: Table) -> str:
    records = [dict(zip(table.columns, (_cell_json(v) for v in row))) for row in table.rows]
    doc = records[0] if len(records) == 1 and table.json_object_if_single else records
    return json.dumps(doc, indent=2) + "\n"


def render_text(table: Table) -> str:
    if len(table.rows) == 1:
        width = max(len(c) for c in table.columns)
        lines = [f"{name:<{width}} = {_cell_text(v)}" for name, v in zip(table.columns, table.rows[0])]
        return "\n".join(lines) + "\n"
    cells = [[_cell_text(v) for v in row] for row in table.rows]
    widths = [max(len(name), max(len(row[i]) for row in cells))
              for i, name in enumerate(table.columns)]
    out = ["  ".join(c.ljust(w) for c, w in zip(table.columns, widths)).rstrip()]
    for row in cells:
        out.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"


def emit(table: Table, fmt: str, out_path: str | None) -> None:
    renderer = {"csv": render_csv, "json": render_json, "text": render_text}[fmt]
    payload = renderer(table)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


# ---------------------------------------------------------------------------
# sweeps

@dataclass
class SweepSpec:
    """One swept variable over [start, stop] with the rest held fixed."""

    variable: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"
    fixed: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"sweep variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        if not self.start < self.stop:
            raise ValueError(f"start must be < stop, got [{self.start}, {self.stop}]")
        if self.steps < 2:
            raise ValueError(f"steps must be >= 2, got {self.steps}")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.start <= 0:
            raise ValueError("log scale requires start > 0")

    def grid(self) -> list:
        if self.scale == "log":
            values = np.geomspace(self.start, self.stop, self.steps)
        else:
            values = np.linspace(self.start, self.stop, self.steps)
        if self.variable == "N":
            ints = np.unique(np.rint(values).astype(np.int64))
            return [int(v) for v in ints if v >= 1]
        return [float(v) for v in values]


def _optimal_phi0(n: int, theta_t: float) -> float:
    # first solution of N(phi0 + theta_t) = pi/2
    return 0.5 * math.pi / n - theta_t


def _point_columns(n: int, eta: float, theta_t: float, phi0: float | None, dphi: float):
    ch = LossChannel(eta, theta_t)
    probe = NoonProbe(n)
    phi = _optimal_phi0(n, theta_t) if phi0 is None else phi0
    report = analytics.precision_report(probe, ch, OperatingPoint(phi, dphi))
    return report, analytics.min_phase_opt(probe, eta)


def _fig2_rows(eta: float, ns: list) -> list[list]:
    return [[n, analytics.min_phase_opt_continuous(n, eta), 1.0 / math.sqrt(2.0 * eta * n)] for n in ns]


def _fig3_rows(eta: float, ns: list) -> list[list]:
    return [[n, budget.r_noon_continuous(n, eta)] for n in ns]


# ---------------------------------------------------------------------------
# verification grid

def run_verification(max_n: int = 12, etas=DENSE_ETAS, thetas=DENSE_THETAS,
                     phases: int = 16, extra_random: int = 0, seed=None) -> tuple[float, int]:
    """Compare oracle moments against the closed forms over a grid.

    Returns the maximum absolute deviation over means and variances, and the
    number of grid points checked.  ``extra_random`` adds that many randomly
    drawn (eta, theta_t, phi) cases per photon number when a seed is given.
    """
    rng = random.Random(seed)
    max_dev = 0.0
    points = 0
    for n in range(1, max_n + 1):
        cases = [(eta, theta, 2.0 * math.pi * k / phases)
                 for eta in etas for theta in thetas for k in range(phases)]
        if seed is not None:
            cases += [(rng.uniform(0.05, 1.0), rng.uniform(-math.pi, math.pi),
                       rng.uniform(0.0, 2.0 * math.pi)) for _ in range(extra_random)]
        probe = NoonProbe(n)
        for eta, theta, phi in cases:
            ch = LossChannel(eta, theta)
            mean_o, var_o = fock_oracle.oracle_moments(n, ch, phi)
            dev = max(abs(mean_o - analytics.mean_detection(probe, ch, phi)),
                      abs(var_o - analytics.variance_detection(probe, ch, phi)))
            max_dev = max(max_dev, dev)
            points += 1
    return max_dev, points


# ---------------------------------------------------------------------------
# argument plumbing

def _read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = line.split("=", 1)
            values[key.strip().lower().replace("-", "_")] = value.strip()
    return values


_CONFIG_COERCE = {
    "steps": int, "seed": int, "max_n": int, "budget": int, "n": int, "n_cap": int,
    "start": float, "stop": float, "eta": float, "loss": float,
    "theta_t": float, "phi0": float, "dphi": float, "kappa": float,
    "format": str, "scale": str, "grid": str, "var": str, "out": str,
}


def _apply_config(args: argparse.Namespace) -> None:
    path = getattr(args, "config", None)
    if not path:
        return
    for key, raw in _read_config(path).items():
        if not hasattr(args, key) or getattr(args, key) is not None:
            continue  # flags override the file
        coerce = _CONFIG_COERCE.get(key, str)
        try:
            setattr(args, key, coerce(raw))
        except ValueError as exc:
            raise UsageError(f"config key {key}: {exc}") from exc


def _resolve_eta(args: argparse.Namespace) -> float:
    if (args.eta is None) == (args.loss is None):
        raise UsageError("exactly one of --eta or --loss is required")
    if args.eta is not None:
        return args.eta
    return 1.0 - args.loss


def _fmt(args: argparse.Namespace) -> str:
    return args.format if args.format is not None else "text"


# ---------------------------------------------------------------------------
# commands

def cmd_constants(args: argparse.Namespace) -> int:
    nu = optimal_search.solve_nu()
    mu = optimal_search.mu_from_nu(nu)
    eta_c = optimal_search.eta_critical()
    l_c = optimal_search.loss_critical()
    nu_t = budget.solve_nu_tilde()
    mu_t = budget.mu_tilde()
    l_tc = budget.l_tilde_critical()
    eta_tc = 1.0 - l_tc

    values = {
        "nu": nu,
        "mu": mu,
        "eta_c": eta_c,
        "L_c": l_c,
        "nu_tilde": nu_t,
        "mu_tilde": mu_t,
        "L_tilde_c": l_tc,
    }
    residuals = {
        "nu_residual": abs(nu - 2.0 * (math.exp(-nu) + 1.0)),
        "mu_residual": abs(mu * nu - math.sqrt(0.5 * (math.exp(nu) + 1.0))),
        "eta_c_residual": abs(3.0 * eta_c ** 2 + 4.0 * eta_c - 1.0),
        "L_c_residual": abs(l_c - (1.0 - eta_c)),
        "nu_tilde_residual": abs(nu_t - math.exp(-nu_t) - 1.0),
        "mu_tilde_residual": abs(2.0 * nu_t * mu_t ** 2 - (math.exp(nu_t) + 1.0)),
        "L_tilde_c_residual": abs(eta_tc ** 2 + 2.0 * eta_tc - 1.0),
    }

    if _fmt(args) == "text" and not args.out:
        for name, value in values.items():
            res = residuals[name + "_residual"]
            sys.stdout.write(f"{name:<10} ≈ {value:.9g}   (residual {res:.2e})\n")
        return EXIT_OK
    table = Table(list(values) + list(residuals), [list(values.values()) + list(residuals.values())])
    emit(table, _fmt(args), args.out)
    return EXIT_OK


def cmd_precision(args: argparse.Namespace) -> int:
    eta = _resolve_eta(args)
    if args.n is None:
        raise UsageError("--n is required")
    theta_t = args.theta_t if args.theta_t is not None else 0.0
    dphi = args.dphi if args.dphi is not None else 0.01
    report, mp_opt = _point_columns(args.n, eta, theta_t, args.phi0, dphi)
    phi0 = _optimal_phi0(args.n, theta_t) if args.phi0 is None else args.phi0

    columns = ["n", "eta", "loss", "theta_t", "phi0", "delta_phi", "mean", "variance",
               "snr", "degenerate", "min_phase", "log_min_phase", "min_phase_opt"]
    row = [args.n, eta, 1.0 - eta, theta_t, phi0, dphi, report.mean, report.variance,
           report.snr, report.degenerate, report.min_phase, report.log_min_phase, mp_opt]

    if args.budget is not None:
        b = budget.PhotonBudget(args.budget, args.kappa if args.kappa is not None else 1.0)
        columns += ["n_total", "kappa", "m_nearest", "delta_phi_noon", "delta_phi_un", "r_noon"]
        row += [b.n_total, b.kappa, round(b.n_total / args.n),
                budget.noon_precision_budgeted(args.n, b, eta),
                budget.unentangled_precision(b, eta),
                budget.r_noon(args.n, eta)]

    emit(Table(columns, [row]), _fmt(args), args.out)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    theta_t = args.theta_t if args.theta_t is not None else 0.0
    dphi = args.dphi if args.dphi is not None else 0.01

    if args.fig2 or args.fig3:
        eta = _resolve_eta(args)
        LossChannel(eta)  # domain check up front
        loss = 1.0 - eta
        const = optimal_search.solve_nu() if args.fig2 else budget.solve_nu_tilde()
        stop_default = max(1000.0, 10.0 * const / loss) if loss > 0 else 1e4
        start = args.start if args.start is not None else 1.0
        stop = args.stop if args.stop is not None else stop_default
        steps = args.steps if args.steps is not None else 200
        scale = args.scale
        if scale is None:
            scale = "log" if start > 0 and stop / start > 100 else "linear"
        spec = SweepSpec("N", start, stop, steps, scale)
        ns = spec.grid()
        if not ns:
            raise UsageError("sweep range contains no photon numbers >= 1")
        if args.fig2:
            table = Table(["N", "delta_phi_min", "sql_reference"], _fig2_rows(eta, ns),
                          json_object_if_single=False)
        else:
            table = Table(["N", "R_NOON"], _fig3_rows(eta, ns), json_object_if_single=False)
        emit(table, _fmt(args), args.out)
        return EXIT_OK

    if args.var is None:
        raise UsageError("one of --fig2, --fig3, or --var is required")
    if args.start is None or args.stop is None:
        raise UsageError("--start and --stop are required for generic sweeps")
    steps = args.steps if args.steps is not None else 100
    scale = args.scale if args.scale is not None else "linear"

    var = args.var
    fixed: dict = {"theta_t": theta_t, "dphi": dphi}
    if var in ("eta", "L", "phi0"):
        if args.n is None:
            raise UsageError(f"--n is required when sweeping {var}")
        fixed["n"] = args.n
    if var in ("N", "phi0"):
        fixed["eta"] = _resolve_eta(args)
    if var != "phi0":
        fixed["phi0"] = args.phi0

    spec = SweepSpec(var, args.start, args.stop, steps, scale, fixed)
    grid = spec.grid()
    if not grid:
        raise UsageError("sweep range contains no photon numbers >= 1")
    rows = []
    for value in grid:
        if var == "N":
            n, eta, phi0 = value, fixed["eta"], fixed.get("phi0")
        elif var == "eta":
            n, eta, phi0 = fixed["n"], value, fixed.get("phi0")
        elif var == "L":
            n, eta, phi0 = fixed["n"], 1.0 - value, fixed.get("phi0")
        else:
            n, eta, phi0 = fixed["n"], fixed["eta"], value
        report, mp_opt = _point_columns(n, eta, theta_t, phi0, dphi)
        rows.append([value, report.mean, report.variance, report.snr, report.min_phase, mp_opt])

    emit(Table([var, "mean", "variance", "snr", "min_phase", "min_phase_opt"], rows,
               json_object_if_single=False),
         _fmt(args), args.out)
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    eta = _resolve_eta(args)
    loss = 1.0 - eta

    if args.budget is None:
        n_cap = args.n_cap if args.n_cap is not None else optimal_search.DEFAULT_N_CAP
        res = optimal_search.n_min_integer(eta, n_cap)
        regime = "L > L_c: precision nondecreasing in N" if loss > optimal_search.loss_critical() \
            else "L < L_c: interior optimum"
        columns = ["eta", "loss", "n_star", "precision_at_opt", "continuous_n",
                   "asymptotic_n", "asymptotic_precision", "n_rel_dev", "precision_rel_dev", "regime"]
        row = [eta, loss, res.n_star, res.precision_at_opt, res.continuous_n,
               res.asymptotic_n, res.asymptotic_precision,
               (res.asymptotic_n - res.n_star) / res.n_star,
               (res.asymptotic_precision - res.precision_at_opt) / res.precision_at_opt,
               regime]
        emit(Table(columns, [row]), _fmt(args), args.out)
        return EXIT_OK

    b = budget.PhotonBudget(args.budget, args.kappa if args.kappa is not None else 1.0)
    n_tilde = budget.n_tilde_min_integer(eta, b)
    precision = budget.noon_precision_budgeted(n_tilde, b, eta)
    regime = "L > L_tilde_c: R_NOON increasing in N" if loss > budget.l_tilde_critical() \
        else "L < L_tilde_c: interior optimum"
    columns = ["eta", "loss", "n_total", "n_tilde", "r_noon_at_opt", "precision_budgeted", "regime"]
    row = [eta, loss, b.n_total, n_tilde, budget.r_noon(n_tilde, eta), precision, regime]
    if 0.0 < loss < 1.0:
        nu_t = budget.solve_nu_tilde()
        asym_n = nu_t / loss
        asym_p = budget.mu_tilde() * math.sqrt(loss / b.n_total)
        columns += ["asymptotic_n_tilde", "asymptotic_precision", "n_tilde_rel_dev"]
        row += [asym_n, asym_p, (asym_n - n_tilde) / n_tilde]
    emit(Table(columns, [row]), _fmt(args), args.out)
    return EXIT_OK


def cmd_budget(args: argparse.Namespace) -> int:
    eta = _resolve_eta(args)
    if args.budget is None:
        raise UsageError("--budget is required")
    b = budget.PhotonBudget(args.budget, args.kappa if args.kappa is not None else 1.0)
    n_tilde = budget.n_tilde_min_integer(eta, b)
    n = args.n if args.n is not None else n_tilde
    dp_noon = budget.noon_precision_budgeted(n, b, eta)
    dp_un = budget.unentangled_precision(b, eta)
    r = budget.r_noon(n, eta)
    columns = ["eta", "loss", "n_total", "kappa", "n", "m_nearest", "n_tilde",
               "delta_phi_noon", "delta_phi_un", "r_noon", "precision_ratio"]
    row = [eta, 1.0 - eta, b.n_total, b.kappa, n, round(b.n_total / n), n_tilde,
           dp_noon, dp_un, r, dp_noon / dp_un]
    emit(Table(columns, [row]), _fmt(args), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    max_n = args.max_n if args.max_n is not None else 12
    if not 1 <= max_n <= fock_oracle.MAX_PHOTONS:
        raise UsageError(f"--max-n must be in [1, {fock_oracle.MAX_PHOTONS}]")
    grid = args.grid if args.grid is not None else "dense"
    if grid not in ("dense", "fast"):
        raise UsageError("--grid must be 'dense' or 'fast'")

    if grid == "dense":
        etas, thetas, phases = DENSE_ETAS, DENSE_THETAS, 16
    else:
        etas, thetas, phases = FAST_ETAS, (0.0,), 8
        max_n = min(max_n, 6)

    if args.corrupt_prefactor:
        fock_oracle._prefactor_scale = 1.001
    try:
        max_dev, points = run_verification(
            max_n=max_n, etas=etas, thetas=thetas, phases=phases,
            extra_random=5 if args.seed is not None else 0, seed=args.seed)
    finally:
        fock_oracle._prefactor_scale = 1.0

    passed = max_dev <= VERIFY_TOL
    table = Table(
        ["max_n", "grid", "points", "max_abs_deviation", "tolerance", "passed"],
        [[max_n, grid, points, max_dev, VERIFY_TOL, int(passed)]],
    )
    emit(table, _fmt(args), args.out)
    if _fmt(args) == "text" and not args.out:
        sys.stdout.write("PASS\n" if passed else "FAIL\n")
    return EXIT_OK if passed else EXIT_VERIFY_FAIL


# ---------------------------------------------------------------------------
# parser

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "csv", "json"), default=None,
                   help="output format (default text)")
    p.add_argument("--out", default=None, metavar="FILE", help="write output to FILE instead of stdout")
    p.add_argument("--config", default=None, metavar="FILE",
                   help="key=value file providing defaults; flags win")


def _add_channel(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eta", type=float, default=None, help="intensity transmissivity, 0 < eta <= 1")
    p.add_argument("--loss", type=float, default=None, help="loss L = 1 - eta, 0 <= L < 1")
    p.add_argument("--theta-t", type=float, default=None, dest="theta_t",
                   help="transmission phase (default 0, pure loss)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noonloss",
        description="Phase-measurement precision of NOON states through a lossy arm.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="small-loss scaling constants and critical losses")
    _add_common(p)
    p.set_defaults(handler=cmd_constants)

    p = sub.add_parser("precision", help="detection statistics at one (N, eta, phi0) point")
    _add_channel(p)
    p.add_argument("--n", type=int, default=None, help="photons per NOON state")
    p.add_argument("--phi0", type=float, default=None,
                   help="operating phase (default: the optimal pi/(2N) - theta_t)")
    p.add_argument("--dphi", type=float, default=None, help="phase change to detect (default 0.01)")
    p.add_argument("--budget", type=int, default=None, metavar="N_T",
                   help="also compare against an N_T photon budget")
    p.add_argument("--kappa", type=float, default=None, help="baseline constant (default 1)")
    _add_common(p)
    p.set_defaults(handler=cmd_precision)

    p = sub.add_parser("sweep", help="sweep one variable and emit a table")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--fig2", action="store_true",
                       help="precision vs N with the 1/sqrt(2 eta N) reference column")
    group.add_argument("--fig3", action="store_true", help="R_NOON vs N")
    group.add_argument("--var", choices=SWEEP_VARIABLES, default=None, help="swept variable")
    p.add_argument("--start", type=float, default=None)
    p.add_argument("--stop", type=float, default=None)
    p.add_argument("--steps", type=int, default=None, help="number of grid points")
    p.add_argument("--scale", choices=("linear", "log"), default=None)
    _add_channel(p)
    p.add_argument("--n", type=int, default=None, help="fixed N for eta/L/phi0 sweeps")
    p.add_argument("--phi0", type=float, default=None, help="fixed operating phase")
    p.add_argument("--dphi", type=float, default=None, help="phase change for the snr column")
    _add_common(p)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("optimize", help="optimal photons per state for a given loss")
    _add_channel(p)
    p.add_argument("--budget", type=int, default=None, metavar="N_T",
                   help="optimize the budgeted ratio R_NOON instead")
    p.add_argument("--kappa", type=float, default=None, help="baseline constant (default 1)")
    p.add_argument("--n-cap", type=int, default=None, dest="n_cap",
                   help="search bound on N (default 10^9)")
    _add_common(p)
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("budget", help="budgeted NOON precision vs the unentangled baseline")
    _add_channel(p)
    p.add_argument("--budget", type=int, default=None, metavar="N_T", help="total photon budget")
    p.add_argument("--kappa", type=float, default=None, help="baseline constant (default 1)")
    p.add_argument("--n", type=int, default=None,
                   help="photons per state (default: the optimal N_tilde)")
    _add_common(p)
    p.set_defaults(handler=cmd_budget)

    p = sub.add_parser("verify", help="check closed forms against the Fock-basis oracle")
    p.add_argument("--max-n", type=int, default=None, dest="max_n",
                   help=f"largest photon number checked (<= {fock_oracle.MAX_PHOTONS}, default 12)")
    p.add_argument("--grid", choices=("dense", "fast"), default=None)
    p.add_argument("--seed", type=int, default=None,
                   help="add randomly drawn channel/phase cases per N")
    p.add_argument("--corrupt-prefactor", action="store_true", help=argparse.SUPPRESS)
    _add_common(p)
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args)
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc} (domains: 0 < eta <= 1, 0 <= L < 1, N >= 1, N_T >= 1)", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    raise SystemExit(main())
