"""Command-line experiment driver.

    diracweyl evolve  --eq dirac --n 1 --N 1024 --L 40 --bump a=0.5 --t 3
    diracweyl huygens --eq dirac --n 3
    diracweyl zeta    --n 2 --t 2 --r 0.5,1,1.5
    diracweyl selftest

Settings come from an optional INI file (``--config``) with sections run,
bump, kg, analysis, closedform, zeta and output; command-line flags override
the file.  Unknown sections or keys are rejected.  Every run writes its fully
resolved configuration next to its outputs, so re-running with that file
reproduces them.  Data files carry no timestamps; timings go to run.log.

Exit codes: 0 success, 2 configuration error, 3 numerical convergence
failure, 4 causality-check failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import closedform, huygens, propagator, spectral
from .clifford import clifford_residual, dirac_kernel_momentum, make_gamma_set
from .fields import (KGData, ScalarField, SpinorField, l2_norm, make_grid,
                     smooth_bump, write_field, write_field_csv)
from .interp import METHODS, PointInterpolator

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_CAUSALITY = 0, 2, 3, 4

log = logging.getLogger("diracweyl")


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        vals = [float(s) for s in str(text).replace(";", ",").split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from exc
    if not vals:
        raise ConfigError("empty number list")
    return vals


def _pair(text: str) -> tuple[int, int]:
    parts = str(text).lower().split("x")
    if len(parts) != 2:
        raise ConfigError(f"expected a rule size like 32x64, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"expected a rule size like 32x64, got {text!r}") from exc


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ConfigError(f"{text!r} is not one of {', '.join(options)}")
        return text
    return parse


def _optional(kind):
    def parse(text):
        return None if str(text).lower() in ("", "auto", "none") else kind(text)
    return parse


# section -> key -> (parser, default as written in the resolved config)
SCHEMA = {
    "run": {
        "equation": (_choice("dirac", "kg"), "dirac"),
        "n": (int, "1"),
        "L": (_optional(float), "auto"),
        "N": (_optional(int), "auto"),
        "t": (_floats, "3.0"),
        "engine": (_choice("spectral", "closedform"), "spectral"),
        "probes": (int, "200"),
        "seed": (int, "0"),
    },
    "bump": {
        "a": (float, "0.5"),
        "amplitude": (float, "1.0"),
        "center": (_floats, "0.0"),
        "component": (int, "0"),
    },
    "kg": {
        "f": (_choice("zero", "bump"), "zero"),
        "g": (_choice("zero", "bump"), "bump"),
    },
    "analysis": {
        "w": (_optional(float), "auto"),
        "tau": (float, repr(huygens.DEFAULT_TAU)),
        "causality_tol": (float, repr(huygens.CAUSALITY_TOL)),
    },
    "closedform": {
        "interpolation": (_choice(*METHODS), "bandlimited"),
        "sphere": (_pair, "32x64"),
        "disc": (_pair, "96x512"),
    },
    "zeta": {
        "n": (int, "2"),
        "t": (float, "2.0"),
        "r": (_floats, "0.5,1.0,1.5"),
        "eps": (_floats, ",".join(repr(f) for f in propagator.DEFAULT_EPS_FACTORS)),
        "rtol": (float, "1e-10"),
    },
    "output": {
        "dir": (str, "out"),
        "prefix": (str, "run"),
    },
}


class Config:
    """Raw string values per section plus parsed accessors."""

    def __init__(self):
        self.raw = {sec: {k: d for k, (_, d) in keys.items()} for sec, keys in SCHEMA.items()}

    def set(self, section: str, key: str, value) -> None:
        if section not in SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        if key not in SCHEMA[section]:
            raise ConfigError(f"unknown config key {key!r} in [{section}]")
        text = str(value).strip()
        SCHEMA[section][key][0](text)  # validate now so errors name the key
        self.raw[section][key] = text

    def get(self, section: str, key: str):
        try:
            return SCHEMA[section][key][0](self.raw[section][key])
        except (ConfigError, ValueError) as exc:
            raise ConfigError(f"[{section}] {key}: {exc}") from exc

    def load(self, path) -> None:
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str  # keys are case sensitive (L, N)
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for sec in parser.sections():
            for key, value in parser.items(sec):
                try:
                    self.set(sec, key, value)
                except (ValueError, TypeError) as exc:
                    raise ConfigError(f"[{sec}] {key}: {exc}") from exc

    def write(self, path) -> None:
        with open(path, "w") as fh:
            for sec in SCHEMA:
                fh.write(f"[{sec}]\n")
                for key in SCHEMA[sec]:
                    fh.write(f"{key} = {self.raw[sec][key]}\n")
                fh.write("\n")


# flag -> (section, key); "--bump a=0.5,center=1" is handled separately
FLAG_MAP = {
    "eq": ("run", "equation"), "n": ("run", "n"), "L": ("run", "L"), "N": ("run", "N"),
    "t": ("run", "t"), "engine": ("run", "engine"), "probes": ("run", "probes"),
    "seed": ("run", "seed"), "w": ("analysis", "w"), "tau": ("analysis", "tau"),
    "interp": ("closedform", "interpolation"), "sphere": ("closedform", "sphere"),
    "disc": ("closedform", "disc"), "out": ("output", "dir"), "prefix": ("output", "prefix"),
    "r": ("zeta", "r"), "eps": ("zeta", "eps"), "rtol": ("zeta", "rtol"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diracweyl", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="INI file with run settings")
        p.add_argument("--out", help="output directory")
        p.add_argument("--prefix", help="output file prefix")

    def run_flags(p):
        p.add_argument("--eq", help="dirac or kg")
        p.add_argument("--n", help="spatial dimension (1, 2, 3)")
        p.add_argument("--N", help="grid points per axis (power of two)")
        p.add_argument("--L", help="box length")
        p.add_argument("--t", help="time or comma-separated times")
        p.add_argument("--bump", action="append", default=[],
                       help="bump settings as key=value pairs, e.g. a=0.5,center=0")
        p.add_argument("--kg-f", dest="kg_f", help="KG initial value: zero or bump")
        p.add_argument("--kg-g", dest="kg_g", help="KG initial velocity: zero or bump")

    p = sub.add_parser("evolve", help="evolve initial data and dump fields")
    common(p)
    run_flags(p)
    p.add_argument("--engine", help="spectral or closedform")
    p.add_argument("--probes", help="probe count for 2D/3D closed-form runs")
    p.add_argument("--seed", help="probe RNG seed")
    p.add_argument("--interp", help="interpolation: " + ", ".join(METHODS))
    p.add_argument("--sphere", help="3D sphere rule, e.g. 32x64")
    p.add_argument("--disc", help="2D disc rule, e.g. 96x512")

    p = sub.add_parser("huygens", help="shell/tail analysis of a bump evolution")
    common(p)
    run_flags(p)
    p.add_argument("--w", help="shell margin (default max(2h, a/10))")
    p.add_argument("--tau", help="tail-fraction threshold")

    p = sub.add_parser("zeta", help="eps scan of the complex-segment propagator")
    common(p)
    p.add_argument("--n", help="spatial dimension (>= 2)")
    p.add_argument("--t", help="time")
    p.add_argument("--r", help="comma-separated radii")
    p.add_argument("--eps", help="comma-separated eps/t factors")
    p.add_argument("--rtol", help="quadrature relative tolerance")

    p = sub.add_parser("selftest", help="run the fast invariant suite")
    common(p)
    return ap


def resolve_config(args: argparse.Namespace) -> Config:
    cfg = Config()
    if getattr(args, "config", None):
        cfg.load(args.config)
    for flag, (sec, key) in FLAG_MAP.items():
        value = getattr(args, flag, None)
        if value is None:
            continue
        if args.command == "zeta" and flag in ("n", "t"):
            sec = "zeta"
        cfg.set(sec, key, value)
    for flag, key in (("kg_f", "f"), ("kg_g", "g")):
        if getattr(args, flag, None) is not None:
            cfg.set("kg", key, getattr(args, flag))
    for spec in getattr(args, "bump", []) or []:
        for key, value in _bump_pairs(spec):
            cfg.set("bump", key, value)
    return cfg


def _bump_pairs(spec: str):
    # "a=0.5,center=1,0" : a key starts a new item, bare values extend the previous one
    pairs = []
    for item in spec.split(","):
        if "=" in item:
            key, value = item.split("=", 1)
            pairs.append([key.strip(), value.strip()])
        elif pairs:
            pairs[-1][1] += "," + item.strip()
        else:
            raise ConfigError(f"bad --bump item {item!r}; use key=value")
    return [tuple(p) for p in pairs]


# -- setup helpers ------------------------------------------------------------

def _grid_from(cfg: Config):
    n = cfg.get("run", "n")
    if n not in (1, 2, 3):
        raise ConfigError(f"[run] n must be 1, 2 or 3, got {n}")
    dL, dN = huygens.DEFAULT_GRIDS[n]
    L = cfg.get("run", "L")
    N = cfg.get("run", "N")
    try:
        return make_grid(n, dL if L is None else L, dN if N is None else N)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _center(cfg: Config, n: int) -> np.ndarray:
    c = cfg.get("bump", "center")
    if len(c) == 1:
        c = c * n
    if len(c) != n:
        raise ConfigError(f"[bump] center needs 1 or {n} coordinates")
    return np.array(c)


def _initial_data(cfg: Config, grid):
    a = cfg.get("bump", "a")
    amp = cfg.get("bump", "amplitude")
    center = _center(cfg, grid.n)
    try:
        if cfg.get("run", "equation") == "dirac":
            return smooth_bump(grid, center, a, amp, component=cfg.get("bump", "component"))
        bump = smooth_bump(grid, center, a, amp)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    zero = ScalarField(grid, np.zeros(grid.shape, dtype=complex))
    f = bump if cfg.get("kg", "f") == "bump" else zero
    g = bump if cfg.get("kg", "g") == "bump" else zero
    return KGData(f, g)


def _outdir(cfg: Config) -> tuple[Path, str]:
    out = Path(cfg.get("output", "dir"))
    out.mkdir(parents=True, exist_ok=True)
    return out, cfg.get("output", "prefix")


def _attach_log(out: Path) -> logging.Handler:
    handler = logging.FileHandler(out / "run.log", mode="w")
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO)
    return handler


def _dump_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _check_times(times):
    if any(t < 0 for t in times):
        raise ConfigError("[run] t must be non-negative")


# -- evolve -------------------------------------------------------------------

def cmd_evolve(cfg: Config) -> int:
    grid = _grid_from(cfg)
    times = cfg.get("run", "t")
    _check_times(times)
    eq = cfg.get("run", "equation")
    engine = cfg.get("run", "engine")
    data = _initial_data(cfg, grid)
    out, prefix = _outdir(cfg)
    handler = _attach_log(out)
    try:
        cfg.write(out / f"{prefix}_config.ini")
        if eq == "dirac":
            write_field(out / f"{prefix}_init.hdw", data)
        else:
            write_field(out / f"{prefix}_init_f.hdw", data.f)
            write_field(out / f"{prefix}_init_g.hdw", data.g)
        if engine == "closedform" and grid.n > 1:
            summary = _evolve_probes(cfg, grid, data, times, out, prefix)
        else:
            summary = _evolve_fields(cfg, grid, data, times, out, prefix)
        _dump_json(out / f"{prefix}_summary.json", summary)
    finally:
        log.removeHandler(handler)
        handler.close()
    return EXIT_OK


def _evolve_fields(cfg, grid, data, times, out, prefix) -> dict:
    eq = cfg.get("run", "equation")
    engine = cfg.get("run", "engine")
    g = make_gamma_set(grid.n)
    rows = []
    if eq == "dirac":
        norm0 = l2_norm(data)
    else:
        sol = spectral.KGSolution(data)
        energy0 = sol.energy(0.0)
    for i, t in enumerate(times):
        start = time.perf_counter()
        row = {"t": t}
        if eq == "dirac":
            if engine == "spectral":
                field = spectral.evolve_dirac(g, data, t)
                rate = spectral.dirac_time_derivative(g, field)
                row["residual"] = spectral.dirac_residual(g, field, rate)
            else:
                field = closedform.evolve_dirac_1d(data, t)
            norm = l2_norm(field)
            row["norm"] = norm
            row["norm_drift"] = abs(norm - norm0) / norm0 if norm0 else 0.0
        else:
            if engine == "spectral":
                field = sol.at(t)
                row["energy"] = sol.energy(t)
                row["energy_drift"] = abs(row["energy"] - energy0) / energy0 if energy0 else 0.0
            else:
                field = closedform.evolve_kg_1d(data.f, data.g, t)
            row["norm"] = l2_norm(field)
        name = f"{prefix}_t{i}.hdw"
        write_field(out / name, field)
        if grid.n == 1:
            write_field_csv(out / f"{prefix}_t{i}.csv", field)
        row["dump"] = name
        rows.append(row)
        log.info("evolve %s %s n=%d t=%g in %.3fs", eq, engine, grid.n, t,
                 time.perf_counter() - start)
    return {"command": "evolve", "equation": eq, "engine": engine, "n": grid.n,
            "L": grid.L, "N": grid.N, "times": rows}


def _probe_points(cfg, grid, t, rng) -> np.ndarray:
    a = cfg.get("bump", "a")
    P = cfg.get("run", "probes")
    if P < 1:
        raise ConfigError("[run] probes must be positive")
    d = rng.normal(size=(P, grid.n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    rad = (t + a) * rng.random(P) ** (1.0 / grid.n)
    return _center(cfg, grid.n) + d * rad[:, None]


def _evolve_probes(cfg, grid, data, times, out, prefix) -> dict:
    if cfg.get("run", "equation") != "dirac":
        raise ConfigError("closed-form probe evaluation in 2D/3D is implemented for dirac only")
    g = make_gamma_set(grid.n)
    interp = cfg.get("closedform", "interpolation")
    rng = np.random.default_rng(cfg.get("run", "seed"))
    rows = []
    for i, t in enumerate(times):
        start = time.perf_counter()
        pts = _probe_points(cfg, grid, t, rng)
        try:
            if grid.n == 2:
                vals = closedform.evolve_dirac_2d(g, data, t, pts, disc=cfg.get("closedform", "disc"),
                                                  interpolation=interp)
            else:
                vals = closedform.evolve_dirac_3d(g, data, t, pts,
                                                  sphere=cfg.get("closedform", "sphere"),
                                                  interpolation=interp)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        ref_field = spectral.evolve_dirac(g, data, t)
        ref = np.stack([PointInterpolator(ref_field.values[c], grid, interp)(pts)
                        for c in range(ref_field.components)], axis=1)
        peak = float(np.abs(ref_field.values).max())
        err = float(np.abs(vals.values - ref).max() / peak) if peak else 0.0
        rel = float(np.linalg.norm(vals.values - ref) / np.linalg.norm(ref)) if np.any(ref) else 0.0
        name = f"{prefix}_probes_t{i}.csv"
        _write_probes(out / name, vals, ref)
        rows.append({"t": t, "probes": name, "max_error_of_peak": err, "relative_l2_error": rel})
        log.info("closedform probes n=%d t=%g in %.3fs", grid.n, t, time.perf_counter() - start)
    return {"command": "evolve", "equation": "dirac", "engine": "closedform", "n": grid.n,
            "L": grid.L, "N": grid.N, "times": rows}


def _write_probes(path, vals, ref) -> None:
    n = vals.points.shape[1]
    c = vals.values.shape[1]
    header = [f"x{j}" for j in range(n)]
    for name in ("cf", "spec"):
        for b in range(c):
            header += [f"{name}_re{b}", f"{name}_im{b}"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for p in range(len(vals.points)):
            row = [repr(float(x)) for x in vals.points[p]]
            for arr in (vals.values, ref):
                for b in range(c):
                    row += [repr(float(arr[p, b].real)), repr(float(arr[p, b].imag))]
            w.writerow(row)


# -- huygens ------------------------------------------------------------------

def cmd_huygens(cfg: Config) -> int:
    grid = _grid_from(cfg)
    times = cfg.get("run", "t")
    _check_times(times)
    eq = cfg.get("run", "equation")
    data = _initial_data(cfg, grid)
    a = cfg.get("bump", "a")
    w = cfg.get("analysis", "w")
    tau = cfg.get("analysis", "tau")
    tol = cfg.get("analysis", "causality_tol")
    center = _center(cfg, grid.n)
    out, prefix = _outdir(cfg)
    handler = _attach_log(out)
    status = EXIT_OK
    try:
        cfg.write(out / f"{prefix}_config.ini")
        g = make_gamma_set(grid.n)
        sol = spectral.KGSolution(data) if eq == "kg" else None
        reports = []
        for i, t in enumerate(times):
            start = time.perf_counter()
            field = spectral.evolve_dirac(g, data, t) if eq == "dirac" else sol.at(t)
            profile = huygens.radial_profile(field, center)
            try:
                report = huygens.huygens_report(profile, t, a, w, tau, equation=eq)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            leak = report.outside_mass / report.total if report.total else 0.0
            entry = report.to_dict()
            entry["causality"] = leak
            entry["causality_ok"] = leak < tol
            if leak >= tol:
                status = EXIT_CAUSALITY
            suffix = "" if len(times) == 1 else f"_t{i}"
            _dump_json(out / f"{prefix}_report{suffix}.json", entry)
            huygens.write_profile_csv(out / f"{prefix}_profile{suffix}.csv", profile)
            reports.append(entry)
            log.info("huygens %s n=%d t=%g: %s tail=%.3e outside=%.3e in %.3fs", eq, grid.n, t,
                     report.classification, report.tail_fraction, leak,
                     time.perf_counter() - start)
    finally:
        log.removeHandler(handler)
        handler.close()
    for entry in reports:
        print(f"n={entry['n']} {entry['equation']} t={entry['t']:g}: {entry['classification']} "
              f"(tail_fraction={entry['tail_fraction']:.3e}, outside={entry['causality']:.3e})")
    return status


# -- zeta ---------------------------------------------------------------------

def zeta_rows(n: int, t: float, radii, factors, rtol: float) -> tuple[list[dict], bool]:
    """Scan rows and limit rows for each radius; failures are recorded, not raised."""
    rows = []
    ok = True
    usable = propagator.usable_eps_factors(n, factors)
    for r in radii:
        green = _green_reference(n, t, r)
        for f in factors:
            eps = f * t
            row = {"n": n, "t": t, "r": r, "eps": eps, "row": "scan"}
            if f not in usable:
                row["status"] = "skipped: below double-precision budget"
            else:
                try:
                    val, err = propagator.zeta_integral_with_error(n, t, r, eps, rtol)
                    row.update(re=val.real, im=val.imag, est_error=err, status="ok")
                except (propagator.ConvergenceError, ValueError) as exc:
                    row["status"] = f"failed: {exc}"
            rows.append(row)
        limit = {"n": n, "t": t, "r": r, "eps": 0.0, "row": "limit"}
        if green is not None:
            limit.update(green_re=green.real, green_im=green.imag)
        try:
            ext = propagator.zeta_limit(n, t, r, factors, rtol)
            limit.update(re=ext.limit.real, im=ext.limit.imag, est_error=ext.error, status="ok")
        except (propagator.ConvergenceError, ValueError) as exc:
            limit["status"] = f"failed: {exc}"
            ok = False
        rows.append(limit)
    return rows, ok


def _green_reference(n: int, t: float, r: float) -> complex | None:
    if n not in (1, 2, 3):
        return None
    if n == 3 and r == t:
        return None  # pure shell: no pointwise value
    return propagator.green_kg(n, t, r).bulk


def cmd_zeta(cfg: Config) -> int:
    n = cfg.get("zeta", "n")
    t = cfg.get("zeta", "t")
    radii = cfg.get("zeta", "r")
    factors = cfg.get("zeta", "eps")
    rtol = cfg.get("zeta", "rtol")
    if n < 2:
        raise ConfigError("[zeta] n must be >= 2")
    if not t > 0 or any(r <= 0 for r in radii) or any(f <= 0 for f in factors):
        raise ConfigError("[zeta] t, r and eps factors must be positive")
    out, prefix = _outdir(cfg)
    handler = _attach_log(out)
    try:
        cfg.write(out / f"{prefix}_config.ini")
        start = time.perf_counter()
        rows, ok = zeta_rows(n, t, radii, factors, rtol)
        propagator.write_zeta_csv(out / f"{prefix}_zeta.csv", rows)
        log.info("zeta n=%d t=%g radii=%s in %.3fs", n, t, radii, time.perf_counter() - start)
    finally:
        log.removeHandler(handler)
        handler.close()
    for row in rows:
        if row["row"] == "limit":
            val = (f"{row['re']:+.10e} {row['im']:+.10e}i" if row["status"] == "ok"
                   else row["status"])
            print(f"n={n} t={t:g} r={row['r']:g}: {val}")
    return EXIT_OK if ok else EXIT_CONVERGENCE


# -- selftest -----------------------------------------------------------------

def selftest_checks() -> list[tuple[str, bool, str]]:
    """Fast invariants: (name, passed, detail)."""
    results = []
    rng = np.random.default_rng(0)

    res = max(clifford_residual(make_gamma_set(n)) for n in (1, 2, 3))
    results.append(("clifford residual", res == 0.0, f"{res:.1e}"))

    dev = 0.0
    for n in (1, 2, 3):
        g = make_gamma_set(n)
        for _ in range(10):
            K = dirac_kernel_momentum(g, rng.normal(size=n), rng.uniform(0, 5))
            dev = max(dev, np.abs(K.conj().T @ K - np.eye(g.dim)).max())
    results.append(("kernel unitarity", dev < 1e-13, f"{dev:.1e}"))

    grid = make_grid(1, 40.0, 1024)
    psi0 = smooth_bump(grid, 0.0, 0.5, component=0)
    g1 = make_gamma_set(1)
    a = spectral.evolve_dirac(g1, psi0, 2.5)
    b = closedform.evolve_dirac_1d(psi0, 2.5)
    err = l2_norm(SpinorField(grid, a.values - b.values)) / l2_norm(a)
    results.append(("1D cross-engine", err < 1e-9, f"{err:.1e}"))

    t = 40 * grid.h
    same = np.array_equal(closedform.propagate_with_D1(psi0, t).values,
                          closedform.evolve_dirac_1d(psi0, t).values)
    results.append(("D1 shell identity", same, "bitwise" if same else "differs"))

    exact = -1j / (2 * np.pi * np.sqrt(3.0))
    try:
        lim = propagator.zeta_limit(2, 2.0, 1.0).limit
        zerr = abs(lim - exact) / abs(exact)
    except propagator.ConvergenceError:
        zerr = float("inf")
    results.append(("zeta limit n=2", zerr < 1e-4, f"{zerr:.1e}"))

    rep, _ = huygens.dichotomy_case(1, "dirac")
    results.append(("1D Dirac huygens", rep.classification == "huygens",
                    f"tail={rep.tail_fraction:.1e}"))
    rep, _ = huygens.dichotomy_case(2, "dirac")
    results.append(("2D Dirac tail", rep.classification == "non_huygens",
                    f"tail={rep.tail_fraction:.1e}"))
    return results


def cmd_selftest(cfg: Config) -> int:
    ok = True
    for name, passed, detail in selftest_checks():
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
        ok &= passed
    return EXIT_OK if ok else EXIT_CONVERGENCE


COMMANDS = {"evolve": cmd_evolve, "huygens": cmd_huygens, "zeta": cmd_zeta,
            "selftest": cmd_selftest}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except closedform.WrapBoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except propagator.ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
