"""Command-line front end: ``tw-thermo {free-energy,roots,verify}``.

Settings are resolved as command-line flags, then the config file, then
built-in defaults.  The config file is named by ``--config`` or by the
``TW_THERMO_CONFIG`` environment variable and holds either a JSON object or
flat ``key = value`` lines; keys are flag names with or without the leading
dashes (``t-min`` and ``t_min`` are both accepted).

Exit status: 0 success, 1 numerical failure, 2 usage error.
"""

import argparse
import json
import os
import sys
import warnings
from dataclasses import replace

import numpy as np

from .errors import TwThermoError
from .hte import hte_su3, hte_xxx
from .io import write_roots, write_table
from .oracle.bethe import bae_solve_su3, bae_solve_xxx, xxx_eigen_zeros
from .oracle.checks import run_suite
from .oracle.qtm import TrotterParams, eigenvalue_roots
from .su3 import Su3NlieConfig, Su3Params, solve_su3
from .xxx import ModelParams, XxxNlieConfig, solve

__all__ = ["main", "build_parser", "resolve_settings", "temperature_grid", "sweep_rows",
           "FREE_ENERGY_COLUMNS", "DEFAULTS", "ENV_VAR"]

ENV_VAR = "TW_THERMO_CONFIG"

FREE_ENERGY_COLUMNS = ("T", "h", "f_NLIE", "f_HTE", "iterations", "residual", "status")

DEFAULTS = {
    "model": "xxx",
    "J": 1.0,
    "h": "0",
    "t_min": 0.1,
    "t_max": 5.0,
    "t_steps": 20,
    "t_scale": "linear",
    "T": 1.0,
    "delta": None,
    "Delta": None,
    "grid_extent": None,
    "grid_points": None,
    "tol": None,
    "max_iter": None,
    "damping": None,
    "output": "-",
    "format": "csv",
    "seed": 0,
    "route": "bae",
    "trotter_n": None,
    "corrupt": False,
    "count": 3,
}

_CAPS = {("xxx", "operator"): 10, ("su3", "operator"): 6, ("xxx", "bae"): 800, ("su3", "bae"): 40,
         ("xxx", "verify"): 10, ("su3", "verify"): 6}


class UsageError(Exception):
    pass


def _common(parser):
    a = parser.add_argument
    a("--config", help=f"config file (default: ${ENV_VAR})")
    a("--model", choices=("xxx", "su3"))
    a("--J", type=float, help="coupling (> 0)")
    a("--output", help="output path, '-' for stdout")
    a("--format", choices=("csv", "json"))
    a("--seed", type=int)


def build_parser():
    parser = argparse.ArgumentParser(prog="tw-thermo", argument_default=argparse.SUPPRESS,
                                     description="Thermodynamics of the XXX and SU(3) chains.")
    sub = parser.add_subparsers(dest="command", required=True)

    fe = sub.add_parser("free-energy", argument_default=argparse.SUPPRESS,
                        help="NLIE free-energy sweep with the high-temperature expansion alongside")
    _common(fe)
    a = fe.add_argument
    a("--h", help="field value or comma-separated list")
    a("--t-min", dest="t_min", type=float)
    a("--t-max", dest="t_max", type=float)
    a("--t-steps", dest="t_steps", type=int)
    a("--t-scale", dest="t_scale", choices=("linear", "log"))
    a("--delta", type=float, help="inner contour offset")
    a("--Delta", type=float, help="outer line offset")
    a("--grid-extent", dest="grid_extent", type=float, help="half-width of the real grid")
    a("--grid-points", dest="grid_points", type=int, help="odd number of grid nodes")
    a("--tol", type=float)
    a("--max-iter", dest="max_iter", type=int)
    a("--damping", type=float)

    ro = sub.add_parser("roots", argument_default=argparse.SUPPRESS,
                        help="Bethe roots and eigenvalue zeros of the dominant state")
    _common(ro)
    a = ro.add_argument
    a("--h", help="field")
    a("--T", type=float, help="temperature")
    a("--route", choices=("operator", "bae"))
    a("--trotter-n", dest="trotter_n", type=int, help="Trotter number N (even)")

    ve = sub.add_parser("verify", argument_default=argparse.SUPPRESS,
                        help="randomized operator-identity, commutativity and Bethe checks")
    _common(ve)
    a = ve.add_argument
    a("--trotter-n", dest="trotter_n", help="comma-separated Trotter numbers")
    a("--count", type=int, help="random tuples per Trotter number")
    a("--corrupt", action="store_true", help="self-test: perturb the fused operators by 1%%")
    return parser


def _parse_scalar(text):
    text = text.strip()
    try:
        return json.loads(text)
    except ValueError:
        return text


def load_config(path):
    """Flat dict from a JSON object or ``key = value`` lines (``#`` comments)."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        raw = json.loads(text)
    else:
        raw = {}
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key = value")
            k, v = line.split("=", 1)
            raw[k.strip()] = _parse_scalar(v)
    out = {}
    for k, v in raw.items():
        key = k.lstrip("-").replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"unknown config key {k!r}")
        out[key] = v
    return out


def resolve_settings(args, environ=None):
    """Merge defaults < config file < flags into one dict."""
    environ = os.environ if environ is None else environ
    flags = dict(vars(args))
    path = flags.pop("config", None) or environ.get(ENV_VAR)
    settings = dict(DEFAULTS)
    if path:
        try:
            settings.update(load_config(path))
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from exc
        except ValueError as exc:
            raise UsageError(f"bad config file {path}: {exc}") from exc
    settings.update(flags)
    return settings


def _floats(spec):
    if isinstance(spec, (int, float)):
        return [float(spec)]
    if isinstance(spec, list):
        return [float(x) for x in spec]
    try:
        return [float(x) for x in str(spec).split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {spec!r}") from exc


def temperature_grid(t_min, t_max, steps, scale="linear"):
    """Ascending temperatures; raises UsageError for an empty or invalid range."""
    if steps is None or int(steps) < 1:
        raise UsageError("empty temperature range: --t-steps must be >= 1")
    if not t_min > 0:
        raise UsageError("--t-min must be positive")
    if t_max < t_min:
        raise UsageError("empty temperature range: --t-max < --t-min")
    steps = int(steps)
    if steps == 1:
        return np.array([float(t_min)])
    if scale == "log":
        return np.geomspace(t_min, t_max, steps)
    if scale != "linear":
        raise UsageError(f"unknown --t-scale {scale!r}")
    return np.linspace(t_min, t_max, steps)


def _solver_config(model, s):
    cfg = Su3NlieConfig() if model == "su3" else XxxNlieConfig()
    keys = {"delta": "delta", "Delta": "Delta", "grid_extent": "half_extent", "grid_points": "count",
            "tol": "tol", "max_iter": "max_iter", "damping": "damping"}
    over = {field: s[k] for k, field in keys.items() if s.get(k) is not None}
    if model == "su3" and "Delta" in over and over["Delta"] >= cfg.delta2:
        over.setdefault("delta2", min(0.5 * (over["Delta"] + 1.0), 0.9))
        over.setdefault("Delta2", 0.5 * (over["delta2"] + 1.0))
    try:
        return replace(cfg, **over)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid solver settings: {exc}") from exc


def sweep_rows(model, J, hs, temps, cfg):
    """Rows of the free-energy table; each h is a warm-started chain descending in T.

    Returns (rows, failed) with rows ordered by h, then ascending T.
    """
    rows, failed = [], False
    for h in hs:
        chain, warm = [], None
        for T in sorted(temps, reverse=True):
            p = (Su3Params if model == "su3" else ModelParams).from_T(float(T), J, h)
            f_hte = (hte_su3 if model == "su3" else hte_xxx)(float(T), h, J).f
            try:
                sol = solve_su3(p, cfg, warm) if model == "su3" else solve(p, cfg, warm)
            except (TwThermoError, FloatingPointError) as exc:
                failed, warm = True, None
                res = getattr(exc, "residual", None)
                chain.append((T, h, float("nan"), f_hte, -1, float("nan") if res is None else res, "failed"))
                continue
            warm = sol
            chain.append((T, h, sol.free_energy, f_hte, sol.iterations, sol.final_residual, "ok"))
        rows.extend(reversed(chain))
    return rows, failed


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit(s, writer):
    stream, close = _open_output(s["output"])
    try:
        writer(stream)
    finally:
        if close:
            stream.close()


def _check_J(s):
    J = float(s["J"])
    if not J > 0:
        raise UsageError("--J must be positive")
    return J


def cmd_free_energy(s):
    model = s["model"]
    J = _check_J(s)
    hs = _floats(s["h"])
    if not hs:
        raise UsageError("--h needs at least one value")
    temps = temperature_grid(float(s["t_min"]), float(s["t_max"]), s["t_steps"], s["t_scale"])
    cfg = _solver_config(model, s)
    rows, failed = sweep_rows(model, J, hs, temps, cfg)
    _emit(s, lambda st: write_table(st, FREE_ENERGY_COLUMNS, rows, s["format"]))
    return 1 if failed else 0


def _trotter(s, default, route):
    N = int(s["trotter_n"] if s.get("trotter_n") is not None else default)
    cap = _CAPS[(s["model"], route)]
    if N < 2 or N % 2:
        raise UsageError("--trotter-n must be even and >= 2")
    if N > cap:
        raise UsageError(f"--trotter-n {N} exceeds the {route} limit {cap} for {s['model']}")
    return N


def root_sets(model, route, N, T, h, J=1.0):
    """RootSets written by the roots command."""
    p = (Su3Params if model == "su3" else ModelParams).from_T(T, J, h)
    tp = TrotterParams.from_model(N, p)
    if route == "operator":
        if model == "xxx":
            return [eigenvalue_roots("xxx", tp, p, "z"), eigenvalue_roots("xxx", tp, p, "w")]
        return [eigenvalue_roots("su3", tp, p, kind, level) for kind in ("z", "w") for level in (1, 2)]
    if p.J * p.beta >= tp.M:
        raise UsageError(f"Trotter number too small for T={T}: need N > 2 J / T")
    if model == "xxx":
        lam = bae_solve_xxx(tp.M, p)
        z, w = xxx_eigen_zeros(lam, p)
        return [lam, z, w]
    return list(bae_solve_su3(tp, p))


def cmd_roots(s):
    route = s["route"]
    if route not in ("operator", "bae"):
        raise UsageError(f"unknown route {route!r}")
    N = _trotter(s, 8 if route == "operator" else 100, route)
    h = _floats(s["h"])
    if len(h) != 1:
        raise UsageError("roots takes a single --h value")
    T = float(s["T"])
    if not T > 0:
        raise UsageError("--T must be positive")
    sets = root_sets(s["model"], route, N, T, h[0], _check_J(s))
    _emit(s, lambda st: write_roots(st, sets, s["format"]))
    return 0


VERIFY_COLUMNS = ("check", "model", "N", "u_re", "u_im", "T", "h", "residual", "threshold", "result")


def cmd_verify(s):
    model = s["model"]
    default = "2,4,6" if model == "xxx" else "2,4"
    spec = s["trotter_n"] if s.get("trotter_n") is not None else default
    Ns = [int(x) for x in _floats(spec)]
    if not Ns:
        raise UsageError("--trotter-n needs at least one value")
    for N in Ns:
        _trotter(dict(s, trotter_n=N), N, "verify")
    results = run_suite(model, Ns, seed=int(s["seed"]), count=int(s["count"]), J=_check_J(s),
                        w_perturb=0.01 if s["corrupt"] else 0.0)
    rows = [(r.name, r.model, r.N, r.u.real, r.u.imag, r.T, r.h, r.residual, r.threshold,
             "pass" if r.passed else "FAIL") for r in results]
    _emit(s, lambda st: write_table(st, VERIFY_COLUMNS, rows, s["format"]))
    bad = [r for r in results if not r.passed]
    for r in bad:
        print(f"FAIL {r.name} N={r.N} u={r.u:.6g} T={r.T:.6g} h={r.h:.6g} "
              f"residual={r.residual:.3e} >= {r.threshold:.0e}", file=sys.stderr)
    print(f"{len(results) - len(bad)}/{len(results)} checks passed", file=sys.stderr)
    return 1 if bad else 0


_COMMANDS = {"free-energy": cmd_free_energy, "roots": cmd_roots, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    del args.command
    try:
        settings = resolve_settings(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return _COMMANDS[command](settings)
    except UsageError as exc:
        print(f"tw-thermo: error: {exc}", file=sys.stderr)
        return 2
    except TwThermoError as exc:
        print(f"tw-thermo: numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
