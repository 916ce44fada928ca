"""Command-line front end.

Every subcommand reads an INI file (``--config``), overlays it on the
defaults below, writes its CSV/JSON artifacts to ``--out`` and finishes with
``manifest.json``.  Exit codes: 0 all checks pass, 1 a check failed,
2 usage or configuration error.

JSON documents are validated against the schemas shipped in
``gardner5/schemas`` before they are written.  Output is byte-identical for
identical config and seed unless ``--timing`` adds wall-clock fields.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .core_field import Grid
from .dynamics import SimConfig, run, run_summary, write_diagnostics_csv
from .errors import (
    BlowUpError, DomainTooSmallError, InternalConsistencyError, InvalidArgumentError,
)
from .exact import (
    IDENTITY_KINDS, BreatherParams, SolitonParams, breather_eval, breather_grid,
    breather_mass_closed, identity_residual, soliton_residuals,
)
from .functionals import GardnerParams, mass
from .illposed import (
    IllposedParams, lambda_residual, norm_scan, twin_config, twin_divergence,
    write_divergence_csv, write_norm_scan_csv,
)
from .specl import spectrum_report

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "lattice": {
        "alphas": "0.5, 1, 2",
        "betas": "0.5, 1, 2",
        "mu_fractions": "0.25, 0.5, 0.75",
        "times": "0, 0.5",
    },
    "residuals": {
        "tolerance": "1e-6",
        "control_threshold": "1e-2",
        "soliton_mu": "0.5",
        "soliton_c": "1",
        "soliton_L": "40",
        "soliton_n": "2048",
        "soliton_tolerance": "1e-8",
    },
    "simulate": {
        "initial": "breather",
        "alpha": "1",
        "beta": "1",
        "mu": "0.3",
        "x1": "0",
        "x2": "0",
        "c": "1",
        "L": "60",
        "n": "4096",
        "dt": "1e-4",
        "t_end": "1",
        "scheme": "etdrk4",
        "diag_stride": "100",
        "drift_tolerance": "1e-8",
        "error_tolerance": "1e-6",
    },
    "spectrum": {
        "alpha": "1",
        "beta": "1",
        "mu": "0.3",
        "t": "0",
        "L": "auto",
        "n": "auto",
        "trials": "100",
        "eigenvalues": "6",
        "tolerance": "1e-4",
        "kernel_tolerance": "1e-5",
    },
    "illposed": {
        "N": "8",
        "delta": "0.5",
        "s": "2",
        "eps": "0.01",
        "mu": "1",
        "lambda": "1",
        "dt": "0.02",
        "t_end": "0.5",
        "diag_stride": "1",
        "scheme": "hybrid",
        "band": "auto",
        "ablation": "yes",
        "residual_tolerance": "0.2",
        "amplitude_tolerance": "0.35",
        "ablation_drop": "5",
    },
    "norms": {
        "delta": "0.5",
        "s": "2",
        "Ns": "8, 16, 32",
        "gamma": "0",
        "method": "auto",
        "tolerance": "0.02",
    },
    "mass": {
        "tolerance": "1e-8",
    },
}

SECTIONS = {
    "residuals": ("lattice", "residuals"),
    "simulate": ("simulate",),
    "spectrum": ("spectrum",),
    "illposed": ("illposed",),
    "norms-scan": ("norms",),
    "mass-check": ("lattice", "mass"),
}


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration


def load_config(path: str | None) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keys are case-sensitive (N, L)
    cp.read_dict(DEFAULTS)
    if path is None:
        return cp
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {path} not found")
    user = configparser.ConfigParser(interpolation=None)
    user.optionxform = str
    try:
        user.read(p)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    for section in user.sections():
        if section not in DEFAULTS:
            raise ConfigError(f"{path}: unknown section [{section}]")
        for key, value in user[section].items():
            if key not in DEFAULTS[section]:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            cp[section][key] = value
    return cp


def _float(sec, key) -> float:
    try:
        return float(sec[key])
    except ValueError as exc:
        raise ConfigError(f"[{sec.name}] {key} = {sec[key]!r} is not a number") from exc


def _int(sec, key) -> int:
    v = _float(sec, key)
    if v != int(v):
        raise ConfigError(f"[{sec.name}] {key} must be an integer")
    return int(v)


def _floats(sec, key) -> list:
    try:
        vals = [float(x) for x in sec[key].replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"[{sec.name}] {key} = {sec[key]!r} is not a list of numbers") from exc
    if not vals:
        raise ConfigError(f"[{sec.name}] {key} is empty")
    return vals


def _bool(sec, key) -> bool:
    try:
        return sec.getboolean(key)
    except ValueError as exc:
        raise ConfigError(f"[{sec.name}] {key} = {sec[key]!r} is not a boolean") from exc


def _auto(sec, key, cast=float):
    if sec[key].strip().lower() == "auto":
        return None
    return cast(_float(sec, key))


def lattice(cp) -> list:
    sec = cp["lattice"]
    return [BreatherParams(a, b, f * np.hypot(a, b) / 2)
            for a in _floats(sec, "alphas")
            for b in _floats(sec, "betas")
            for f in _floats(sec, "mu_fractions")]


# ---------------------------------------------------------------------------
# output


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, Path):
        return str(obj)
    return obj


def load_schema(name: str) -> dict:
    text = resources.files("gardner5").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


class Writer:
    """Collects outputs in write order; every JSON is schema-checked first."""

    def __init__(self, out: Path):
        self.out = out
        self.paths: list = []

    def path(self, name: str) -> Path:
        p = self.out / name
        p.parent.mkdir(parents=True, exist_ok=True)
        return p

    def record(self, p: Path) -> Path:
        self.paths.append(p.relative_to(self.out).as_posix())
        return p

    def json(self, name: str, doc: dict, schema: str) -> Path:
        doc = _plain(doc)
        jsonschema.validate(doc, load_schema(schema))
        p = self.path(name)
        p.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return self.record(p)


# ---------------------------------------------------------------------------
# commands; each returns True when every check passes


def _residual_point(args):
    p, t, kinds, tol, control_tol = args
    g = breather_grid(p, t, extended=True)
    rows = {}
    for kind in kinds:
        r = identity_residual(kind, p, t, g, tolerance=tol)
        ctl = identity_residual(kind, p, t, g, control=True).sup
        rows[kind] = {**r.to_json(), "control_sup": ctl, "control_pass": ctl > control_tol}
    return rows


def _pool_map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def cmd_residuals(cp, w: Writer, ctx) -> bool:
    sec = cp["residuals"]
    tol, ctl = _float(sec, "tolerance"), _float(sec, "control_threshold")
    times = _floats(cp["lattice"], "times")
    jobs = [(p, t, IDENTITY_KINDS, tol, ctl) for p in lattice(cp) for t in times]
    results = _pool_map(_residual_point, jobs, ctx["workers"])
    ok = True
    summary = {}
    for kind in IDENTITY_KINDS:
        entries = [res[kind] for res in results]
        passed = all(e["pass"] and e["control_pass"] for e in entries)
        doc = {"kind": kind, "tolerance": tol, "control_threshold": ctl, "entries": entries,
               "max_sup": max(e["sup"] for e in entries),
               "min_control_sup": min(e["control_sup"] for e in entries), "pass": passed}
        w.json(f"residuals/{kind}.json", doc, "identity_report")
        summary[kind] = passed
        ok &= passed
    sp = SolitonParams(_float(sec, "soliton_mu"), _float(sec, "soliton_c"))
    g = Grid(_float(sec, "soliton_L"), _int(sec, "soliton_n"))
    sres = soliton_residuals(sp, g)
    stol = _float(sec, "soliton_tolerance")
    spass = max(sres.values()) < stol
    w.json("residuals/soliton.json",
           {"params": {"mu": sp.mu, "c": sp.c}, "grid": {"L": g.half_length, "n": g.n},
            **sres, "tolerance": stol, "pass": spass}, "soliton_report")
    return ok and spass


def cmd_simulate(cp, w: Writer, ctx) -> bool:
    sec = cp["simulate"]
    kind = sec["initial"].strip().lower()
    mu = _float(sec, "mu")
    if kind == "breather":
        init = BreatherParams(_float(sec, "alpha"), _float(sec, "beta"), mu,
                              _float(sec, "x1"), _float(sec, "x2"))
    elif kind == "soliton":
        init = SolitonParams(mu, _float(sec, "c"), _float(sec, "x1"))
    else:
        raise ConfigError(f"[simulate] initial must be breather or soliton, got {kind!r}")
    cfg = SimConfig(GardnerParams(mu), Grid(_float(sec, "L"), _int(sec, "n")),
                    _float(sec, "dt"), _float(sec, "t_end"), init,
                    scheme=sec["scheme"].strip(), diag_stride=_int(sec, "diag_stride"))
    res = run(cfg)
    w.record(write_diagnostics_csv(res.diagnostics, w.path("diagnostics.csv")))
    summary = run_summary(cfg, res, drift_tol=_float(sec, "drift_tolerance"),
                          error_tol=_float(sec, "error_tolerance"), timing=ctx["timing"])
    if kind == "soliton":
        rows = res.diagnostics
        span = rows[-1].t - rows[0].t
        measured = (rows[-1].peak_x - rows[0].peak_x) / span
        summary["peak_speed"] = {"measured": measured, "exact": init.speed,
                                 "rel_err": abs(measured - init.speed) / init.speed}
        summary["pass_flags"]["peak_speed"] = summary["peak_speed"]["rel_err"] < 1e-3
    w.json("summary.json", summary, "simulate_summary")
    return all(summary["pass_flags"].values())


def cmd_spectrum(cp, w: Writer, ctx) -> bool:
    sec = cp["spectrum"]
    bp = BreatherParams(_float(sec, "alpha"), _float(sec, "beta"), _float(sec, "mu"))
    if not bp.in_stability_regime:
        raise InvalidArgumentError("spectral checks need alpha, beta > 0 and mu < sqrt(a^2+b^2)/2")
    t = _float(sec, "t")
    auto = breather_grid(bp, t, extended=True)
    L = _auto(sec, "L") or auto.half_length
    n = _auto(sec, "n", int) or auto.n
    report = spectrum_report(bp, t, Grid(L, n), trials=_int(sec, "trials"), seed=ctx["seed"],
                             count=_int(sec, "eigenvalues"), tol=_float(sec, "tolerance"),
                             kernel_tol=_float(sec, "kernel_tolerance"))
    report["seed"] = ctx["seed"]
    w.json("spectrum.json", report, "spectrum_report")
    return bool(report["pass"])


def _illposed_params(sec) -> IllposedParams:
    return IllposedParams(_float(sec, "N"), _float(sec, "delta"), _float(sec, "s"),
                          _float(sec, "eps"), GardnerParams(_float(sec, "mu"), _float(sec, "lambda")))


def cmd_illposed(cp, w: Writer, ctx) -> bool:
    sec = cp["illposed"]
    p = _illposed_params(sec)
    cfg = twin_config(p, dt=_float(sec, "dt"), t_end=_float(sec, "t_end"),
                      diag_stride=_int(sec, "diag_stride"), scheme=sec["scheme"].strip(),
                      band=_auto(sec, "band"))
    start = time.perf_counter()
    res = twin_divergence(p, cfg, ablation=_bool(sec, "ablation"))
    elapsed = time.perf_counter() - start
    w.record(write_divergence_csv(res, w.path("divergence.csv")))
    checks = {
        "fit_residual": res.residual < _float(sec, "residual_tolerance"),
        "amplitude": abs(res.amplitude_ratio - 1) < _float(sec, "amplitude_tolerance"),
    }
    if res.ablated_amplitude is not None:
        checks["ablation"] = res.ablation_drop > _float(sec, "ablation_drop")
    doc = {"params": p.describe(), "config_echo": cfg.echo(), "fit": res.summary(),
           "lambda_residual": lambda_residual(p, cfg.grid), "checks": checks, "pass": all(checks.values())}
    if ctx["timing"]:
        doc["runtime_seconds"] = round(elapsed, 3)
    w.json("illposed.json", doc, "illposed_summary")
    return doc["pass"]


def cmd_norms_scan(cp, w: Writer, ctx) -> bool:
    sec = cp["norms"]
    Ns = _floats(sec, "Ns")
    scan = norm_scan(_float(sec, "delta"), _float(sec, "s"), Ns, _float(sec, "gamma"),
                     sec["method"].strip())
    w.record(write_norm_scan_csv(scan, w.path("norm_scan.csv")))
    tol = _float(sec, "tolerance")
    last = scan["rows"][-1]
    scan["tolerance"] = tol
    scan["pass"] = last["rel_err"] < tol
    w.json("norm_scan.json", scan, "norm_scan")
    return scan["pass"]


def cmd_mass_check(cp, w: Writer, ctx) -> bool:
    tol = _float(cp["mass"], "tolerance")
    rows = []
    for p in lattice(cp):
        g = breather_grid(p)
        q = mass(breather_eval(p, 0.0, g))
        closed = breather_mass_closed(p)
        rows.append({"params": p.as_dict(), "grid": {"L": g.half_length, "n": g.n},
                     "quadrature": q, "closed": closed, "rel_err": abs(q - closed) / closed})
    worst = max(r["rel_err"] for r in rows)
    w.json("mass_check.json", {"rows": rows, "max_rel_err": worst, "tolerance": tol,
                               "pass": worst < tol}, "mass_check")
    return worst < tol


COMMANDS = {
    "residuals": cmd_residuals,
    "simulate": cmd_simulate,
    "spectrum": cmd_spectrum,
    "illposed": cmd_illposed,
    "norms-scan": cmd_norms_scan,
    "mass-check": cmd_mass_check,
}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gardner5", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="INI file overriding the built-in defaults")
    ap.add_argument("--out", default="out", help="output directory (default: ./out)")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    ap.add_argument("--strict", action="store_true", help="treat warnings as failures")
    ap.add_argument("--timing", action="store_true",
                    help="record wall-clock times (outputs are then not byte-reproducible)")
    ap.add_argument("--workers", type=int, default=1,
                    help="processes for lattice sweeps (residuals only)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not 0 <= args.seed < 2**64:
        print("error: --seed must be a 64-bit unsigned integer", file=sys.stderr)
        return EXIT_USAGE
    if args.workers < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    try:
        cp = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    writer = Writer(out)
    ctx = {"seed": args.seed, "timing": args.timing, "workers": args.workers}
    message = ""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            out.mkdir(parents=True, exist_ok=True)
            ok = COMMANDS[args.command](cp, writer, ctx)
            code = EXIT_PASS if ok else EXIT_FAIL
        except (ConfigError, InvalidArgumentError, DomainTooSmallError) as exc:
            code, message = EXIT_USAGE, f"configuration error: {exc}"
        except (BlowUpError, InternalConsistencyError) as exc:
            code, message = EXIT_FAIL, f"check failure: {exc}"
    warned = [f"{c.category.__name__}: {c.message}" for c in caught]
    if args.strict and warned and code == EXIT_PASS:
        code, message = EXIT_FAIL, "warnings raised under --strict"
    if message:
        print(f"error: {message}", file=sys.stderr)
    used = {s: dict(cp[s]) for s in SECTIONS[args.command]}
    manifest = {
        "command": args.command,
        "config_path": args.config,
        "seed": args.seed,
        "artifact_version": __version__,
        "outputs": list(writer.paths),
        "config": used,
        "exit_code": code,
        "message": message,
        "warnings": warned,
    }
    writer.json("manifest.json", manifest, "manifest")
    print(f"{args.command}: {'pass' if code == 0 else 'FAIL' if code == 1 else 'error'} "
          f"({len(writer.paths) - 1} outputs in {out})")
    return code


if __name__ == "__main__":
    sys.exit(main())
