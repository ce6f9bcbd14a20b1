"""Deterministic command-line front end.

Subcommands: state | wigner | spectrum | detect | qcb.  Parameters come
from flags or from a flat ``key = value`` config file (flags override
the file; both go through the same parsers).  Output is CSV (header
row, data rows, '#'-prefixed metadata footer) or JSON with the same
schema, written to --output or stdout.  Runs are random-free: the same
resolved parameters always produce byte-identical files.

Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from . import __version__
from .errors import (
    ConvergenceError,
    DegenerateStateError,
    InvalidArgumentError,
    InvalidStateError,
    TruncationError,
)
from .gaussian import (
    QUADRATURE_NAMES,
    SqueezeParam,
    quadrature_index,
    slice_mass,
    tmsv_covariance,
    wigner_grid,
)
from .fock import tmsv_fock
from .illumination import (
    DetectionScenario,
    advantage_db,
    build_classical_hypotheses,
    build_qi_hypotheses,
    chernoff_exponent,
    classical_error_rate,
    error_probability,
    is_asymptotic,
    quantum_error_rate,
)
from .spectrum import MIXING_TYPES, PROFILE_SHAPES, SpectrumProfile, spectrum_sweep

FORMATS = ("csv", "json")
_GLOBAL_KEYS = {"output", "format", "quiet"}


# ---------------------------------------------------------------------------
# Value parsing (shared by flags and config files)
# ---------------------------------------------------------------------------


def _parse_float(raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise InvalidArgumentError(f"expected a number, got {raw!r}") from None


def _parse_int(raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise InvalidArgumentError(f"expected an integer, got {raw!r}") from None


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise InvalidArgumentError(f"expected a boolean, got {raw!r}")


def _parse_pair(raw: str) -> tuple[float, float]:
    parts = raw.split(",")
    if len(parts) != 2:
        raise InvalidArgumentError(f"expected 'a,b', got {raw!r}")
    return (_parse_float(parts[0]), _parse_float(parts[1]))


def _parse_float_list(raw: str) -> tuple[float, ...]:
    parts = [p for p in raw.split(",") if p.strip()]
    if not parts:
        raise InvalidArgumentError(f"expected a comma-separated list, got {raw!r}")
    return tuple(_parse_float(p) for p in parts)


def _parse_choice(*choices: str) -> Callable[[str], str]:
    def parse(raw: str) -> str:
        low = raw.strip().lower()
        if low not in choices:
            raise InvalidArgumentError(f"expected one of {choices}, got {raw!r}")
        return low

    return parse


def _parse_plane(raw: str) -> tuple[str, str]:
    parts = [p.strip().lower() for p in raw.split(",")]
    if len(parts) != 2 or parts[0] == parts[1]:
        raise InvalidArgumentError(f"plane must be two distinct quadratures, got {raw!r}")
    for p in parts:
        if p not in QUADRATURE_NAMES:
            raise InvalidArgumentError(f"unknown quadrature {p!r}; expected {QUADRATURE_NAMES}")
    return (parts[0], parts[1])


class Param(NamedTuple):
    name: str
    parse: Callable[[str], object]
    default: object = None
    required: bool = False
    help: str = ""


_SWEEPABLE_DETECT = ("eta", "n_s", "n_b", "t_int", "bandwidth")
_SWEEPABLE_QCB = ("eta", "n_s", "n_b")

_SPECS: dict[str, list[Param]] = {
    "state": [
        Param("kappa", _parse_float, required=True, help="squeezing modulus"),
        Param("phase", _parse_float, default=math.pi / 2, help="squeezing phase (rad)"),
        Param("cutoff", _parse_int, default=20, help="largest photon number kept"),
    ],
    "wigner": [
        Param("kappa", _parse_float, required=True, help="squeezing modulus"),
        Param("phase", _parse_float, default=math.pi / 2, help="squeezing phase (rad)"),
        Param("plane", _parse_plane, default=("qs", "ps"), help="varied quadratures, e.g. qs,pi"),
        Param("fixed", _parse_pair, default=(0.0, 0.0), help="values of the two fixed quadratures"),
        Param("range", _parse_pair, default=(-4.0, 4.0), help="axis range for both axes"),
        Param("samples", _parse_int, default=81, help="grid points per axis"),
        Param("x-range", _parse_pair, help="override range of the first plane axis"),
        Param("y-range", _parse_pair, help="override range of the second plane axis"),
        Param("x-samples", _parse_int, help="override samples of the first plane axis"),
        Param("y-samples", _parse_int, help="override samples of the second plane axis"),
    ],
    "spectrum": [
        Param("kappa-max", _parse_float, required=True, help="apical squeezing modulus"),
        Param("pump-freq", _parse_float, default=12e9, help="pump frequency (Hz)"),
        Param("band-width", _parse_float, default=8e9, help="band width (Hz)"),
        Param("band-center", _parse_float, help="band center (Hz); default set by mixing"),
        Param("mixing", _parse_choice(*MIXING_TYPES), default="3wm", help="3wm or 4wm"),
        Param("shape", _parse_choice(*PROFILE_SHAPES), default="parabolic", help="profile shape"),
        Param("nu-start", _parse_float, help="sweep start (Hz); default band edge"),
        Param("nu-stop", _parse_float, help="sweep stop (Hz); default band edge"),
        Param("steps", _parse_int, default=161, help="sweep points"),
    ],
    "detect": [
        Param("eta", _parse_float, required=True, help="target reflectance"),
        Param("n-s", _parse_float, required=True, help="signal photons per mode"),
        Param("n-b", _parse_float, required=True, help="background photons per mode"),
        Param("t-int", _parse_float, help="integration time (s)"),
        Param("bandwidth", _parse_float, help="source bandwidth (Hz)"),
        Param("pulses", _parse_float, help="pulse count M (overrides t-int * bandwidth)"),
        Param("sweep-var", _parse_choice(*_SWEEPABLE_DETECT), help="scenario variable to sweep"),
        Param("sweep-values", _parse_float_list, help="explicit sweep values"),
        Param("sweep-from", _parse_float, help="sweep start"),
        Param("sweep-to", _parse_float, help="sweep stop"),
        Param("sweep-steps", _parse_int, help="sweep point count"),
    ],
    "qcb": [
        Param("transmitter", _parse_choice("qi", "classical", "both"), required=True,
              help="transmitter type"),
        Param("n-s", _parse_float, help="signal photons per mode"),
        Param("kappa", _parse_float, help="squeezing modulus (alternative to n-s)"),
        Param("eta", _parse_float, required=True, help="target reflectance"),
        Param("n-b", _parse_float, required=True, help="background photons per mode"),
        Param("cutoff-signal", _parse_int, default=48, help="return/signal mode cutoff"),
        Param("cutoff-idler", _parse_int, default=12, help="idler mode cutoff"),
        Param("cutoff-noise", _parse_int, default=48, help="noise mode cutoff"),
        Param("cutoff", _parse_int, default=48, help="single-mode cutoff (classical)"),
        Param("sweep-var", _parse_choice(*_SWEEPABLE_QCB), help="scenario variable to sweep"),
        Param("sweep-values", _parse_float_list, help="explicit sweep values"),
        Param("sweep-from", _parse_float, help="sweep start"),
        Param("sweep-to", _parse_float, help="sweep stop"),
        Param("sweep-steps", _parse_int, help="sweep point count"),
    ],
}


# ---------------------------------------------------------------------------
# Config handling and parameter resolution
# ---------------------------------------------------------------------------


def load_config(path: str) -> dict[str, str]:
    """Read a flat 'key = value' file; '#' starts a comment line."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read config file {path}: {exc}") from None
    out: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"{path}:{line_no}: expected 'key = value'")
        key, _, value = line.partition("=")
        out[key.strip().lower().replace("-", "_")] = value.strip()
    return out


def _resolve(specs: list[Param], args: argparse.Namespace, config: dict[str, str]) -> dict:
    values: dict[str, object] = {}
    known = set()
    for spec in specs:
        attr = spec.name.replace("-", "_")
        known.add(attr)
        raw = getattr(args, attr)
        if raw is None:
            raw = config.get(attr)
        if raw is None:
            if spec.required:
                raise InvalidArgumentError(f"missing required parameter --{spec.name}")
            values[attr] = spec.default
        else:
            try:
                values[attr] = spec.parse(raw)
            except InvalidArgumentError as exc:
                raise InvalidArgumentError(f"--{spec.name}: {exc}") from None
    unknown = set(config) - known - _GLOBAL_KEYS
    if unknown:
        raise InvalidArgumentError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return values


def _sweep_values(p: dict, what: str) -> list[float]:
    if p["sweep_var"] is None:
        for key in ("sweep_values", "sweep_from", "sweep_to", "sweep_steps"):
            if p[key] is not None:
                raise InvalidArgumentError(f"--{key.replace('_', '-')} requires --sweep-var")
        return []
    if p["sweep_values"] is not None:
        return list(p["sweep_values"])
    if p["sweep_from"] is None or p["sweep_to"] is None or p["sweep_steps"] is None:
        raise InvalidArgumentError(
            f"{what} sweep needs --sweep-values or --sweep-from/--sweep-to/--sweep-steps"
        )
    if p["sweep_steps"] < 2:
        raise InvalidArgumentError("--sweep-steps must be >= 2")
    return [float(v) for v in np.linspace(p["sweep_from"], p["sweep_to"], p["sweep_steps"])]


# ---------------------------------------------------------------------------
# Subcommand implementations (columns, rows, extra metadata)
# ---------------------------------------------------------------------------


def _run_state(p: dict):
    sq = SqueezeParam(p["kappa"], p["phase"])
    state = tmsv_fock(sq, p["cutoff"])
    rows = [
        [int(n), float(c.real), float(c.imag), float(abs(c) ** 2)]
        for n, c in enumerate(state.coeffs)
    ]
    meta = {"norm_deficit": state.norm_deficit, "mean_photon": sq.mean_photon}
    return ["n", "re_c", "im_c", "prob"], rows, meta


def _run_wigner(p: dict):
    sq = SqueezeParam(p["kappa"], p["phase"])
    state = tmsv_covariance(sq)
    xname, yname = p["plane"]
    plane = (quadrature_index(xname), quadrature_index(yname))
    x_range = p["x_range"] if p["x_range"] is not None else p["range"]
    y_range = p["y_range"] if p["y_range"] is not None else p["range"]
    nx = p["x_samples"] if p["x_samples"] is not None else p["samples"]
    ny = p["y_samples"] if p["y_samples"] is not None else p["samples"]
    grid = wigner_grid(
        state, plane=plane, x_range=x_range, y_range=y_range,
        samples=(nx, ny), fixed_values=p["fixed"],
    )
    rows = []
    for ix, x in enumerate(grid.x_axis):
        for iy, y in enumerate(grid.y_axis):
            rows.append([float(x), float(y), float(grid.values[ix, iy])])
    fixed_names = [QUADRATURE_NAMES[k] for k in range(4) if k not in plane]
    meta = {
        "fixed_" + fixed_names[0]: grid.fixed_values[0],
        "fixed_" + fixed_names[1]: grid.fixed_values[1],
        "slice_mass_analytic": slice_mass(state, plane, grid.fixed_values),
        "layout": "row-major over the first plane axis",
    }
    return [xname, yname, "wigner"], rows, meta


def _run_spectrum(p: dict):
    profile = SpectrumProfile(
        kappa_max=p["kappa_max"],
        pump_freq=p["pump_freq"],
        band_width=p["band_width"],
        band_center=p["band_center"],
        mixing=p["mixing"],
        shape=p["shape"],
    )
    lo, hi = profile.band_edges
    start = p["nu_start"] if p["nu_start"] is not None else lo
    stop = p["nu_stop"] if p["nu_stop"] is not None else hi
    table = spectrum_sweep(profile, (start, stop), p["steps"])
    rows = [
        [float(table.nu_s[i]), float(table.nu_i[i]), float(table.kappa[i]),
         float(table.squeezing_db[i]), float(table.gain_db[i])]
        for i in range(len(table))
    ]
    meta = {
        "band_center_effective": profile.band_center,
        "nu_start_effective": start,
        "nu_stop_effective": stop,
        "min_squeezing_db": float(np.min(table.squeezing_db)),
        "max_gain_db": float(np.max(table.gain_db)),
    }
    return ["nu_s_hz", "nu_i_hz", "kappa", "squeezing_db", "gain_db"], rows, meta


def _detect_pulses(p: dict, scn: DetectionScenario) -> float:
    if p["pulses"] is not None:
        if p["sweep_var"] in ("t_int", "bandwidth"):
            raise InvalidArgumentError("--pulses conflicts with sweeping t-int or bandwidth")
        return float(p["pulses"])
    if p["t_int"] is None or p["bandwidth"] is None:
        raise InvalidArgumentError("provide --pulses or both --t-int and --bandwidth")
    return scn.pulses


def _run_detect(p: dict):
    sweep = _sweep_values(p, "detect")
    base = {
        "eta": p["eta"], "n_s": p["n_s"], "n_b": p["n_b"],
        "t_int": p["t_int"] if p["t_int"] is not None else 0.0,
        "bandwidth": p["bandwidth"] if p["bandwidth"] is not None else 0.0,
    }
    points = sweep if sweep else [None]
    rows = []
    for value in points:
        fields = dict(base)
        if value is not None:
            fields[p["sweep_var"]] = value
        scn = DetectionScenario(**fields)
        pulses = _detect_pulses(p, scn)
        r_cl = classical_error_rate(scn)
        r_q = quantum_error_rate(scn)
        rows.append([
            scn.eta, scn.n_s, scn.n_b, scn.snr, pulses, r_cl, r_q,
            error_probability(r_cl, pulses), error_probability(r_q, pulses),
            advantage_db(), is_asymptotic(r_cl, pulses), is_asymptotic(r_q, pulses),
        ])
    columns = ["eta", "n_s", "n_b", "snr", "pulses", "r_cl", "r_q",
               "pe_cl", "pe_q", "advantage_db", "valid_cl", "valid_q"]
    return columns, rows, {}


def _safe_ratio(num: float, den: float) -> float:
    if den > 0.0:
        return num / den
    return math.nan if num == 0.0 else math.inf


def _qcb_signal(p: dict) -> float:
    if (p["n_s"] is None) == (p["kappa"] is None):
        raise InvalidArgumentError("provide exactly one of --n-s or --kappa")
    if p["kappa"] is not None:
        if p["sweep_var"] == "n_s":
            raise InvalidArgumentError("sweeping n_s conflicts with --kappa")
        return math.sinh(p["kappa"]) ** 2
    return p["n_s"]


def _run_qcb(p: dict):
    transmitter = p["transmitter"]
    n_s0 = _qcb_signal(p)
    sweep = _sweep_values(p, "qcb")
    points = sweep if sweep else [None]
    base = {"eta": p["eta"], "n_s": n_s0, "n_b": p["n_b"]}
    meta = {
        "cutoff_signal": p["cutoff_signal"],
        "cutoff_idler": p["cutoff_idler"],
        "cutoff_noise": p["cutoff_noise"],
        "cutoff_classical": p["cutoff"],
    }
    rows = []
    for value in points:
        fields = dict(base)
        if value is not None:
            fields[p["sweep_var"]] = value
        scn = DetectionScenario(eta=fields["eta"], n_s=fields["n_s"], n_b=fields["n_b"])
        row = [scn.eta, scn.n_s, scn.n_b]
        qi = cl = None
        if transmitter in ("qi", "both"):
            sq = SqueezeParam(math.asinh(math.sqrt(scn.n_s)))
            pair = build_qi_hypotheses(
                sq, scn.eta, scn.n_b,
                p["cutoff_signal"], p["cutoff_idler"], p["cutoff_noise"],
            )
            qi = chernoff_exponent(pair)
        if transmitter in ("classical", "both"):
            pair = build_classical_hypotheses(scn.n_s, scn.eta, scn.n_b, p["cutoff"])
            cl = chernoff_exponent(pair)
        if transmitter == "qi":
            rate = quantum_error_rate(scn)
            row += [qi.s_star, qi.q_min, qi.exponent, rate, _safe_ratio(qi.exponent, rate),
                    qi.diagnostics["clipped_mass_rho0"], qi.diagnostics["clipped_mass_rho1"]]
        elif transmitter == "classical":
            rate = classical_error_rate(scn)
            row += [cl.s_star, cl.q_min, cl.exponent, rate, _safe_ratio(cl.exponent, rate),
                    cl.diagnostics["clipped_mass_rho0"], cl.diagnostics["clipped_mass_rho1"]]
        else:
            rate_q = quantum_error_rate(scn)
            rate_cl = classical_error_rate(scn)
            row += [qi.s_star, qi.exponent, rate_q, cl.s_star, cl.exponent, rate_cl,
                    _safe_ratio(qi.exponent, cl.exponent), _safe_ratio(rate_q, rate_cl)]
        rows.append(row)
    if transmitter == "both":
        columns = ["eta", "n_s", "n_b", "s_star_qi", "exponent_qi", "rate_q",
                   "s_star_cl", "exponent_cl", "rate_cl", "exponent_ratio", "rate_ratio"]
    else:
        columns = ["eta", "n_s", "n_b", "s_star", "q_min", "exponent",
                   "rate_ref", "exponent_over_rate", "clipped_rho0", "clipped_rho1"]
    return columns, rows, meta


_RUNNERS = {
    "state": _run_state,
    "wigner": _run_wigner,
    "spectrum": _run_spectrum,
    "detect": _run_detect,
    "qcb": _run_qcb,
}


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.9g}"
    return str(v)


def _meta_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (tuple, list)):
        return ",".join(_meta_value(x) for x in v)
    return str(v)


def emit_csv(columns, rows, meta) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt_cell(v) for v in row) for row in rows)
    lines.extend(f"# {k} = {_meta_value(meta[k])}" for k in sorted(meta))
    return "\n".join(lines) + "\n"


def emit_json(columns, rows, meta) -> str:
    def cell(v):
        if isinstance(v, bool):
            return v
        if isinstance(v, (int, np.integer)):
            return int(v)
        if isinstance(v, (float, np.floating)):
            # JSON has no inf/nan tokens; fall back to strings for those
            if not math.isfinite(float(v)):
                return f"{float(v):.9g}"
            return float(f"{float(v):.9g}")
        return v

    def mval(v):
        if isinstance(v, (np.integer,)):
            return int(v)
        if isinstance(v, (np.floating,)):
            return float(v)
        if isinstance(v, (tuple, list)):
            return [mval(x) for x in v]
        return v

    doc = {
        "metadata": {k: mval(meta[k]) for k in sorted(meta)},
        "columns": list(columns),
        "rows": [[cell(v) for v in row] for row in rows],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, metavar="PATH",
                        help="flat 'key = value' parameter file (flags override it)")
    common.add_argument("--output", default=None, metavar="PATH",
                        help="output file path (default: stdout)")
    common.add_argument("--format", default=None, metavar="FMT", help="csv or json")
    common.add_argument("--quiet", action="store_const", const=True, default=None,
                        help="suppress the summary line")
    parser = argparse.ArgumentParser(
        prog="mqisim",
        description="Two-mode squeezed vacuum sources and quantum-illumination numerics",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "state": "photon-pair coefficients of the squeezed vacuum",
        "wigner": "Wigner density on a 2-D phase-space slice",
        "spectrum": "squeezing and gain across the band",
        "detect": "error-rate envelopes for one or more scenarios",
        "qcb": "brute-force quantum Chernoff bound",
    }
    for name, specs in _SPECS.items():
        sp = sub.add_parser(name, parents=[common], help=helps[name])
        for spec in specs:
            sp.add_argument(f"--{spec.name}", default=None, metavar="V", help=spec.help)
    return parser


def run_subcommand(args: argparse.Namespace, config: dict[str, str]) -> tuple[str, str]:
    """Resolve parameters, run the subcommand, return (content, summary)."""
    fmt = args.format if args.format is not None else config.get("format", "csv")
    fmt = fmt.strip().lower()
    if fmt not in FORMATS:
        raise InvalidArgumentError(f"format must be one of {FORMATS}, got {fmt!r}")
    params = _resolve(_SPECS[args.subcommand], args, config)
    columns, rows, extra = _RUNNERS[args.subcommand](params)
    meta = {"tool": "mqisim", "version": __version__, "subcommand": args.subcommand}
    for key, value in params.items():
        if value is not None:
            meta["param_" + key] = value
    meta.update(extra)
    content = emit_csv(columns, rows, meta) if fmt == "csv" else emit_json(columns, rows, meta)
    return content, f"{args.subcommand}: {len(rows)} rows ({fmt})"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else {}
        output = args.output if args.output is not None else config.get("output")
        quiet = args.quiet if args.quiet is not None else _parse_bool(config.get("quiet", "false"))
        content, summary = run_subcommand(args, config)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TruncationError, ConvergenceError, DegenerateStateError, InvalidStateError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3

    if output:
        try:
            with open(output, "w", newline="\n") as fh:
                fh.write(content)
        except OSError as exc:
            print(f"error: cannot write {output}: {exc}", file=sys.stderr)
            return 2
        if not quiet:
            print(f"wrote {output}: {summary}", file=sys.stderr)
    else:
        sys.stdout.write(content)
    return 0
