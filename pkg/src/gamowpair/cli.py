"""Command-line front end.

    gamowpair <command> [--config PATH] [--set key=value ...] [--out PATH]

Config files hold one ``key = value`` per line; ``#`` starts a comment. A value
may be a comma-separated list for at most one key, which turns the run into a
sweep: every point is computed (possibly concurrently) and rows are emitted in
the order the values were listed.

Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NonConvergence, NonFiniteValue, StateBlowup
from .gamow import Branch, GamowMode, bilinear_pairing, gamow_eigenvalue
from .kernel import FieldConfig, effective_lagrangian, kernel_diag, pair_rate_residues
from .numerics import QuadratureSpec
from .propagators import BoundaryCondition, MomentumPoint, onshell_from_proper_time, \
    onshell_green_momentum
from .semiclassics import TunnelingSetup, hyperbolic_initial_state, integrate_trajectory, \
    sauter_rate, turning_points, wkb_closed_form, wkb_exponent

COMMANDS = ("rate", "efflag", "kernel", "wkb", "trajectory", "spectrum", "propagator")

FLOAT_KEYS = {"chi", "m", "s_min", "s_max", "rel_tol", "abs_tol", "h",
              "p0", "eps", "t_max", "p2_min", "p2_max"}
INT_KEYS = {"n_max", "s_points", "terms", "p2_points", "dyson"}
STRING_KEYS = {"out_path"}
KNOWN_KEYS = FLOAT_KEYS | INT_KEYS | STRING_KEYS

COMMON_DEFAULTS = {"m": 1.0, "rel_tol": 1e-10, "abs_tol": 1e-12, "n_max": 40, "terms": 5}
COMMAND_DEFAULTS = {
    "rate": {},
    "efflag": {},
    "kernel": {"s_min": 0.1, "s_max": 2.0, "s_points": 20},
    "wkb": {"p0": 0.0},
    "trajectory": {"s_min": 0.0, "s_max": 5.0, "h": 1e-3},
    "spectrum": {},
    "propagator": {"eps": 0.05, "t_max": 400.0, "p2_min": -2.0, "p2_max": 2.0,
                   "p2_points": 9, "dyson": 0},
}

COLUMNS = {
    "rate": ("n", "w_n", "partial_sum"),
    "efflag": ("chi", "re_renorm", "im_residue", "im_quadrature", "agreement"),
    "kernel": ("s", "re", "im", "free_re", "free_im"),
    "wkb": ("p0", "a", "b", "exponent", "closed_form", "rate"),
    "trajectory": ("s", "t", "x3", "norm_drift"),
    "spectrum": ("n", "eigen_im", "pairing_diag_err"),
    "propagator": ("p2_minus_m2", "re_closed", "im_closed", "re_pt", "im_pt"),
}


class ConfigError(ValueError):
    pass


@dataclass
class SweepSpec:
    key: str
    values: list

    def __post_init__(self):
        if not self.values:
            raise ConfigError(f"sweep over '{self.key}' has no values")


@dataclass
class RunConfig:
    command: str
    parameters: dict
    sweep: SweepSpec | None = None

    def points(self) -> list:
        if self.sweep is None:
            return [dict(self.parameters)]
        return [{**self.parameters, self.sweep.key: v} for v in self.sweep.values]


@dataclass
class OutputTable:
    header: tuple
    rows: list = field(default_factory=list)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError(f"row has {len(row)} cells, header has {len(self.header)}")


def _convert(key: str, text: str, where: str):
    if key in STRING_KEYS:
        return text
    try:
        value = int(text) if key in INT_KEYS else float(text)
    except ValueError:
        kind = "integer" if key in INT_KEYS else "number"
        raise ConfigError(f"{where}: malformed {kind} for '{key}': {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{where}: '{key}' must be finite, got {text!r}")
    return value


def _parse_assignment(line: str, where: str):
    if "=" not in line:
        raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
    key, _, raw = line.partition("=")
    key, raw = key.strip(), raw.strip()
    if key not in KNOWN_KEYS:
        raise ConfigError(f"{where}: unknown key '{key}'")
    if not raw:
        raise ConfigError(f"{where}: missing value for '{key}'")
    if "," in raw and key not in STRING_KEYS:
        return key, [_convert(key, part.strip(), where) for part in raw.split(",")]
    return key, _convert(key, raw, where)


def parse_config(command: str, path: str | None = None, overrides=()) -> RunConfig:
    """Read the config file (if any), apply ``key=value`` overrides, fill defaults."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command '{command}'")
    given = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        for lineno, line in enumerate(lines, start=1):
            line = line.split("#", 1)[0].strip()
            if line:
                where = f"{path}:{lineno}"
                key, value = _parse_assignment(line, where)
                if key in given:
                    raise ConfigError(f"{where}: duplicate key '{key}'")
                given[key] = value
    for item in overrides:
        key, value = _parse_assignment(item, f"--set {item}")
        given[key] = value

    sweeps = [k for k, v in given.items() if isinstance(v, list)]
    if len(sweeps) > 1:
        raise ConfigError(f"only one key may be swept, got {', '.join(sorted(sweeps))}")
    sweep = SweepSpec(sweeps[0], given.pop(sweeps[0])) if sweeps else None

    params = {**COMMON_DEFAULTS, **COMMAND_DEFAULTS[command], **given}
    if "chi" not in params and (sweep is None or sweep.key != "chi"):
        raise ConfigError(f"missing required key 'chi' for command '{command}'")
    cfg = RunConfig(command, params, sweep)
    for point in cfg.points():
        _validate(command, point)
    return cfg


def _validate(command: str, p: dict):
    def need(cond, msg):
        if not cond:
            raise ConfigError(msg)

    need(p["chi"] >= 0, "'chi' must be >= 0")
    need(p["m"] > 0, "'m' must be positive")
    need(p["rel_tol"] > 0 and p["abs_tol"] > 0, "tolerances must be positive")
    need(p["terms"] >= 1, "'terms' must be >= 1")
    need(0 <= p["n_max"] <= 60, "'n_max' must lie in [0, 60]")
    if command in ("rate", "wkb", "trajectory", "spectrum"):
        need(p["chi"] > 0, f"'{command}' needs chi > 0")
    if command == "kernel":
        need(0 < p["s_min"] <= p["s_max"], "need 0 < s_min <= s_max")
        need(p["s_points"] >= 1, "'s_points' must be >= 1")
    if command == "trajectory":
        need(p["h"] > 0, "'h' must be positive")
        need(p["s_max"] >= p["s_min"], "need s_max >= s_min")
    if command == "propagator":
        need(p["eps"] > 0 and p["t_max"] > 0, "'eps' and 't_max' must be positive")
        need(p["p2_points"] >= 1 and p["p2_min"] <= p["p2_max"], "bad p2 grid")
        need(p["dyson"] in (0, 1), "'dyson' is 0 (Feynman) or 1 (Dyson)")


def _grid(lo, hi, n):
    return [lo] if n == 1 else list(np.linspace(lo, hi, n))


def _rows_for(command: str, p: dict) -> list:
    field_cfg = FieldConfig.from_chi(p["chi"], p["m"])
    spec = QuadratureSpec(p["rel_tol"], p["abs_tol"])

    if command == "rate":
        series = pair_rate_residues(field_cfg, p["terms"])
        return [(n + 1, w, ps) for n, (w, ps) in
                enumerate(zip(series.terms, series.partial_sums))]

    if command == "efflag":
        lag = effective_lagrangian(field_cfg, spec)
        residue = pair_rate_residues(field_cfg, p["terms"]).total if field_cfg.a > 0 else 0.0
        return [(p["chi"], lag.real_renormalized, residue, lag.rate, abs(residue - lag.rate))]

    if command == "kernel":
        free = FieldConfig(1.0, 0.0, p["m"])
        rows = []
        for s in _grid(p["s_min"], p["s_max"], p["s_points"]):
            k, k0 = kernel_diag(s, field_cfg), kernel_diag(s, free)
            rows.append((s, k.real, k.imag, k0.real, k0.imag))
        return rows

    if command == "wkb":
        setup = TunnelingSetup(p["p0"], field_cfg)
        tp = turning_points(setup)
        return [(p["p0"], tp.a, tp.b, wkb_exponent(setup, spec), wkb_closed_form(field_cfg),
                 sauter_rate(field_cfg))]

    if command == "trajectory":
        path = integrate_trajectory(hyperbolic_initial_state(field_cfg),
                                    (p["s_min"], p["s_max"]), p["h"], field_cfg)
        return [(s, st.x[0], st.x[3], st.norm - 1.0) for s, st in path]

    if command == "spectrum":
        a = field_cfg.a
        rows = []
        for n in range(p["n_max"] + 1):
            lam = gamow_eigenvalue(GamowMode(n, Branch.DECAYING, a))
            pairing = bilinear_pairing(GamowMode(n, Branch.GROWING, a),
                                       GamowMode(n, Branch.DECAYING, a))
            rows.append((n, lam.imag, abs(pairing - 1.0)))
        return rows

    if command == "propagator":
        bc = BoundaryCondition.DYSON if p["dyson"] else BoundaryCondition.FEYNMAN
        m2 = p["m"] ** 2
        rows = []
        for d in _grid(p["p2_min"], p["p2_max"], p["p2_points"]):
            # a momentum with p^2 = m^2 + d: timelike along p0, spacelike along p3
            q2 = m2 + d
            comps = (math.sqrt(q2), 0.0, 0.0, 0.0) if q2 >= 0 else (0.0, 0.0, 0.0, math.sqrt(-q2))
            mom, mass2 = MomentumPoint(comps), m2
            closed = onshell_green_momentum(mom, mass2, bc, p["eps"])
            pt = onshell_from_proper_time(mom, mass2, bc, p["eps"], p["t_max"])
            rows.append((d, closed.real, closed.imag, pt.real, pt.imag))
        return rows

    raise ConfigError(f"unknown command '{command}'")


def run_command(cfg: RunConfig) -> OutputTable:
    """Evaluate every sweep point; rows come out in input order."""
    points = cfg.points()
    if len(points) == 1:
        chunks = [_rows_for(cfg.command, points[0])]
    else:
        with ThreadPoolExecutor() as pool:
            chunks = list(pool.map(lambda pt: _rows_for(cfg.command, pt), points))
    rows = [row for chunk in chunks for row in chunk]
    return OutputTable(COLUMNS[cfg.command], rows)


def format_float(x) -> str:
    """17 significant digits, bare exponent: 0.5 -> '5.0000000000000000e-1'."""
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteValue(f"refusing to write non-finite value {x!r}")
    mantissa, _, exponent = f"{x:.16e}".partition("e")
    return f"{mantissa}e{int(exponent)}"


def render_csv(table: OutputTable) -> str:
    lines = [",".join(table.header)]
    lines += [",".join(format_float(v) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def emit_csv(table: OutputTable, out_path: str) -> None:
    text = render_csv(table)
    if out_path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out_path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {out_path}: {exc.strerror}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamowpair", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", metavar="PATH")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE")
    parser.add_argument("--out", metavar="PATH")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        cfg = parse_config(args.command, args.config, args.overrides)
        out = args.out or cfg.parameters.get("out_path", "-")
        table = run_command(cfg)
        emit_csv(table, out)
    except ConfigError as exc:
        print(f"gamowpair: error: {exc}", file=sys.stderr)
        return 1
    except (NonConvergence, StateBlowup, NonFiniteValue, OverflowError) as exc:
        print(f"gamowpair: numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


def run():
    sys.exit(main())
