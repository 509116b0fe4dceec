"""Command-line front end: every computation as a reproducible, config-
driven run emitting CSV or JSON (with the full config echoed) and a
rendered figure next to the output file.

Exit codes: 0 success, 2 invalid configuration, 3 numerical guard trip.
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import gridholonomy as gh
from . import limits as lm
from . import measure as ms
from . import plots
from . import surfaces as sf
from .functionals import abelian_loop_expectation, dual_functional, \
    duality_angle
from .lie import LieBasis


class ConfigError(ValueError):
    pass


class GuardError(RuntimeError):
    pass


DEFAULTS = {
    "command": None,
    "surface": {"shape": "rectangle", "R": 1.0, "T": 1.0},
    "kind": "SU",
    "n": 2,
    "kappa": [2.0, 5.0, 10.0, 20.0],
    "cutoff": 4,
    "resolution": 32,
    "samples": 1000,
    "ode_steps": 4,
    "seed": None,
    "workers": 1,
    "out": None,
    "format": "csv",
    "strict": False,
    "connection": "su2-linear",
    "grid_sizes": [2, 3, 5],
    "holonomy_sizes": [4, 8, 16],
}

STOCHASTIC = ("mc", "grid-check")


def _parse_args(argv):
    p = argparse.ArgumentParser(
        prog="axialym",
        description="Axial-gauge Wilson loop computations.")
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--command", choices=sorted(COMMANDS))
    p.add_argument("--seed", type=int)
    p.add_argument("--kappa", type=str,
                   help="comma-separated list, e.g. 2,5,10")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--resolution", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--ode-steps", type=int, dest="ode_steps")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--strict", action="store_true", default=None)
    return p.parse_args(argv)


def build_config(argv):
    args = _parse_args(argv)
    cfg = dict(DEFAULTS)
    if args.config is not None:
        try:
            cfg.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config: {e}")
    for key in ("command", "seed", "cutoff", "resolution", "samples",
                "ode_steps", "workers", "format", "strict"):
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    if args.kappa is not None:
        try:
            cfg["kappa"] = [float(k) for k in args.kappa.split(",")]
        except ValueError:
            raise ConfigError("bad --kappa list")
    if args.out is not None:
        cfg["out"] = str(args.out)
    _validate(cfg)
    return cfg


def _validate(cfg):
    if cfg["command"] not in COMMANDS:
        raise ConfigError(f"unknown or missing command {cfg['command']!r}")
    if not cfg["kappa"] or any(k <= 0 for k in cfg["kappa"]):
        raise ConfigError("kappa values must be positive")
    if cfg["cutoff"] < 0:
        raise ConfigError("cutoff must be >= 0")
    if cfg["resolution"] < 2:
        raise ConfigError("resolution must be >= 2")
    if cfg["samples"] < 2:
        raise ConfigError("samples must be >= 2")
    if cfg["ode_steps"] < 1:
        raise ConfigError("ode_steps must be >= 1")
    if cfg["workers"] < 1:
        raise ConfigError("workers must be >= 1")
    if cfg["format"] not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if cfg["command"] in STOCHASTIC and cfg["seed"] is None:
        raise ConfigError(f"--seed is required for {cfg['command']}")
    if cfg["seed"] is None:
        cfg["seed"] = 0
    try:
        sf.make_surface(cfg["surface"])
    except (ValueError, TypeError) as e:
        raise ConfigError(f"bad surface spec: {e}")
    try:
        LieBasis(cfg["kind"], cfg["n"])
    except ValueError as e:
        raise ConfigError(str(e))


def _guard_resolution(cfg, minimum, what):
    if cfg["resolution"] < minimum:
        msg = f"resolution {cfg['resolution']} is low for {what} (< {minimum})"
        if cfg["strict"]:
            raise GuardError(msg)
        print(f"warning: {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# commands (each returns rows: list of dicts, and an optional plot callback)

def cmd_area(cfg):
    S = sf.make_surface(cfg["surface"])
    res = cfg["resolution"]
    _guard_resolution(cfg, 8, "area quadrature")
    a = sf.area(S, res=res)
    s, t = sf._midpoints(res)
    dets = sf.jacobian_dets(S, s, t)
    rho = np.sqrt(np.sum(dets ** 2, axis=-1))
    contrib = {}
    for k, (i, j) in enumerate(sf.WEDGE_PAIRS):
        mass = dets[..., k] ** 2 / np.where(rho > 0, rho, 1.0)
        contrib[f"pair_{i}{j}"] = float(np.mean(mass))
    rows = []
    for kappa in cfg["kappa"]:
        hk = sf.heat_kernel_area(S, kappa, res=res)
        rows.append({"kappa": kappa, "area": a,
                     "heat_kernel_ratio": hk / (2 * math.pi * a),
                     **contrib})

    def render(path):
        return plots.plot_kappa_series(rows, ["heat_kernel_ratio"], path,
                                       "heat-kernel area ratio", target=1.0)
    return rows, render


def cmd_abelian(cfg):
    S = sf.make_surface(cfg["surface"])
    res = cfg["resolution"]
    _guard_resolution(cfg, 8, "surface functional quadrature")
    a = sf.area(S, res=res)
    target = math.exp(-a / 8.0)
    rows = []
    for kappa in cfg["kappa"]:
        val = abelian_loop_expectation(S, kappa, res=res)
        rows.append({"kappa": kappa, "value": val, "target": target,
                     "rel_err": abs(val - target) / target})

    def render(path):
        return plots.plot_kappa_series(rows, ["value"], path,
                                       "abelian Wilson loop", target=target)
    return rows, render


def cmd_limit(cfg):
    S = sf.make_surface(cfg["surface"])
    a = sf.area(S, res=cfg["resolution"])
    groups = [("U1", 1), ("SU", 2), ("SU", 3), ("SO", 3)]
    if (cfg["kind"], cfg["n"]) not in groups:
        groups.append((cfg["kind"], cfg["n"]))
    rows = []
    for kind, n in groups:
        r = lm.area_law_limit(a, LieBasis(kind, n))
        rows.append({"group": f"{kind}({n})", "n": n, "area": a,
                     "limit": r.value,
                     "exponent_scalar": float(np.real(r.exponent_eigs[0]))})

    def render(path):
        return plots.plot_bars([r["group"] for r in rows],
                               [r["limit"] for r in rows], path,
                               "area-law limits", "Tr exp[...]")
    return rows, render


def cmd_potential(cfg):
    groups = [("U1", 1), (cfg["kind"], cfg["n"])]
    rows = []
    for kind, n in groups:
        basis = LieBasis(kind, n)
        for R in np.linspace(0.0, 4.0, 9):
            rows.append({"group": f"{kind}({n})", "R": float(R),
                         "V": lm.quark_potential(float(R), basis)})

    def render(path):
        return plots.plot_potential(rows, path)
    return rows, render


def cmd_mc(cfg):
    S = sf.make_surface(cfg["surface"])
    kappa = cfg["kappa"][0]
    mcfg = ms.MeasureConfig(kind=cfg["kind"], n=cfg["n"], kappa=kappa,
                            cutoff=cfg["cutoff"], seed=cfg["seed"])
    _guard_resolution(cfg, 4, "Wilson grid")
    try:
        est = ms.mc_expectation(S, mcfg, cfg["samples"],
                                n_grid=cfg["resolution"],
                                ode_steps=cfg["ode_steps"])
    except ZeroDivisionError as e:
        raise GuardError(str(e))
    ref = lm.area_law_limit(sf.area(S), LieBasis(cfg["kind"], cfg["n"])).value
    record = {"kappa": kappa, "mean_re": est.mean.real,
              "mean_im": est.mean.imag, "stderr": est.stderr,
              "n_samples": est.n_samples, "reference": ref,
              "mean_Y": est.moments["mean_Y"].real}
    rows = [record]

    def render(path):
        return plots.plot_mc(record, path)
    return rows, render


def cmd_grid_check(cfg):
    rng = np.random.default_rng(cfg["seed"])
    rows = []
    for n in cfg["grid_sizes"]:
        grid = gh.build_grid(n)
        worst = 0.0
        trials = 20
        for _ in range(trials):
            field = gh.random_edge_field(grid, rng, kind="SU", n=2)
            _, _, dev = gh.grid_identity_check(field, n)
            worst = max(worst, dev)
        rows.append({"n": n, "trials": trials, "max_deviation": worst})
    if cfg["strict"] and any(r["max_deviation"] > 1e-10 for r in rows):
        raise GuardError("grid identity deviation above 1e-10")

    def render(path):
        return plots.plot_bars([r["n"] for r in rows],
                               [max(r["max_deviation"], 1e-17) for r in rows],
                               path, "grid traversal identity", "deviation")
    return rows, render


def cmd_holonomy(cfg):
    S = sf.make_surface(cfg["surface"])
    conn = gh.builtin_connection(cfg["connection"])
    target = gh.boundary_holonomy(conn, S, ode_steps=256)
    rows = []
    for n in cfg["holonomy_sizes"]:
        approx = gh.surface_ordered_product(conn, S, n,
                                            ode_steps=cfg["ode_steps"])
        err = float(np.max(np.abs(approx - target)))
        rows.append({"n_grid": n, "error": err})
    for k in range(1, len(rows)):
        prev = rows[k - 1]["error"]
        rows[k]["ratio"] = rows[k - 1]["error"] / rows[k]["error"] \
            if rows[k]["error"] > 0 else float("inf")
    rows[0]["ratio"] = float("nan")

    def render(path):
        return plots.plot_convergence(rows, path,
                                      f"ordered product vs holonomy "
                                      f"({cfg['connection']})")
    return rows, render


def cmd_duality(cfg):
    S = sf.make_surface(cfg["surface"])
    basis = LieBasis(cfg["kind"], cfg["n"])
    _guard_resolution(cfg, 8, "duality quadrature")
    rep = lm.dual_area_law(S, basis, kappa_seq=cfg["kappa"],
                           res=cfg["resolution"])
    rows = [dict(r, limit=rep["limit"].value) for r in rep["rows"]]

    def render(path):
        return plots.plot_kappa_series(
            rows, ["kappa2_cross", "cos_theta"], path,
            "vortex duality diagnostics", target=0.0)
    return rows, render


COMMANDS = {
    "area": cmd_area,
    "abelian": cmd_abelian,
    "limit": cmd_limit,
    "potential": cmd_potential,
    "mc": cmd_mc,
    "grid-check": cmd_grid_check,
    "holonomy": cmd_holonomy,
    "duality": cmd_duality,
}


# ---------------------------------------------------------------------------
# output

def _echo_items(cfg):
    return {k: cfg[k] for k in sorted(cfg) if k != "out"}


def write_output(cfg, rows):
    if cfg["format"] == "json":
        text = json.dumps({"config": _echo_items(cfg), "rows": rows},
                          indent=2, default=str) + "\n"
    else:
        buf = io.StringIO()
        for k, v in _echo_items(cfg).items():
            buf.write(f"# {k} = {json.dumps(v, default=str)}\n")
        cols = list(rows[0].keys()) if rows else []
        writer = csv.DictWriter(buf, fieldnames=cols)
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    if cfg["out"]:
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    try:
        cfg = build_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        rows, render = COMMANDS[cfg["command"]](cfg)
    except GuardError as e:
        print(f"guard: {e}", file=sys.stderr)
        return 3
    write_output(cfg, rows)
    if cfg["out"]:
        fig_path = str(Path(cfg["out"]).with_suffix(".png"))
        render(fig_path)
        print(f"wrote {cfg['out']} and {fig_path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
