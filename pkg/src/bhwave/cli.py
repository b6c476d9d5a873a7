"""Command-line surface: analyze, portrait, wave, pde-check, sweep.

Flags override an optional JSON config file (keys named after the long
flags with dashes replaced by underscores); ``--show-config`` prints the
effective defaults.  All file outputs are deterministic for fixed inputs:
JSON is written with sorted keys and shortest round-trip floats, CSV with
17 significant digits, SVG with fixed-precision coordinates.  Exit codes:
0 success, 2 validation failure, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .core import NumericalError, Params, ValidationError, bendixson_region
from .blowup import blowup_case, circle_equilibria, circle_jacobian
from .compact import infinite_equilibria, to_disk
from .equilibria import classify, eigen_data, finite_equilibria
from .flow import IntegratorControls
from .pde import PdeConfig, speed_estimate
from .portrait import classify_portrait, export_portrait
from .svg import render_portrait_svg
from .wave import shoot_heteroclinic, verify_asymptotics, wave_residual

DEFAULT_SWEEP_CELLS = (
    (1, 1, 0.5), (1, 1, 1.0), (1, 1, 1.5), (1, 1, 2.0),
    (1, 2, 1.0), (1, 2, 3.0),
    (2, 1, 1.0), (2, 1, 2.5),
    (2, 2, 1.0), (2, 2, 3.0),
    (2, 3, 1.0), (2, 3, 2.0),
)


@dataclass
class RunConfig:
    n: int = 1
    k: int = 1
    c: float = 2.0
    out: str = "bhwave-out"
    format: str = "json"
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    seed_eps: float = 1e-7
    xi_min: float | None = None
    xi_max: float | None = None
    N: int = 4096
    T: float = 10.0
    L: float = 60.0
    cells: str | None = None


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, complex):
        return {"re": float(obj.real), "im": float(obj.imag)}
    return obj


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(_jsonify(payload), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8", newline="\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            _g17(v) if isinstance(v, (float, np.floating)) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _params(cfg: RunConfig) -> Params:
    return Params(cfg.n, cfg.k, cfg.c)


def _controls(cfg: RunConfig) -> IntegratorControls:
    return IntegratorControls(rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol)


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_analyze(cfg: RunConfig) -> int:
    p = _params(cfg)
    out = _outdir(cfg)
    finite = []
    for e in finite_equilibria(p):
        data = eigen_data(p, e)
        entry = {
            "label": e.label,
            "location": list(e.location),
            "kind": classify(p, e),
            "eigenvalues": [{"re": v.real, "im": v.imag} for v in data.values],
        }
        if data.is_real:
            entry["eigenvectors"] = [list(v) for v in data.vectors]
        finite.append(entry)
    infinite = []
    for e in infinite_equilibria(p):
        infinite.append({
            "label": e.label, "display": e.display, "chart": e.chart,
            "u": float(e.location[0]), "kind": e.kind,
            "sectors": list(e.sectors),
            "disk": list(to_disk(e.chart, float(e.location[0]), 0.0)),
        })
    circle = []
    try:
        case = blowup_case(p)
    except ValidationError:
        case = None
    if case is not None:
        for ce in circle_equilibria(p, case):
            jac, kind = circle_jacobian(p, case, ce)
            circle.append({
                "label": ce.label, "theta": ce.theta, "kind": kind,
                "radial_sign": ce.radial_sign, "angular_sign": ce.angular_sign,
                "jacobian": [list(row) for row in jac],
            })
    region = bendixson_region(p)
    report = {
        "params": {"n": p.n, "k": p.k, "c": p.c, "m": p.m},
        "finite_equilibria": finite,
        "infinite_equilibria": infinite,
        "blowup_circle": {"case": case, "equilibria": circle},
        "no_closed_orbits": {
            "region": region.tag,
            "x_min": region.x_min,
            "x_max": region.x_max,
            "divergence_negative_inside": True,
            "rules_out_cycles_for_c_at_least_1": p.c >= 1.0,
        },
    }
    _write_json(out / "analyze.json", report)
    kinds = ", ".join(f"{e['label']}={e['kind']}" for e in finite)
    print(f"analyze n={p.n} k={p.k} c={_g17(p.c)}: {kinds}; "
          f"{len(infinite)} infinite points -> {out / 'analyze.json'}")
    return 0


def cmd_portrait(cfg: RunConfig) -> int:
    p = _params(cfg)
    out = _outdir(cfg)
    doc = export_portrait(p, _controls(cfg))
    _write_json(out / "portrait.json", doc)
    (out / "portrait.svg").write_text(render_portrait_svg(doc),
                                      encoding="utf-8", newline="\n")
    cls = doc["classification"]
    caveat = f" caveats={cls['caveats']}" if cls["caveats"] else ""
    print(f"portrait n={p.n} k={p.k} c={_g17(p.c)}: class {cls['tag']} "
          f"({cls['equivalence']}), evidence_match={cls['evidence_match']}{caveat} "
          f"-> {out / 'portrait.svg'}")
    return 0


def cmd_wave(cfg: RunConfig) -> int:
    p = _params(cfg)
    if p.c < 2.0:
        raise ValidationError("the front requires c >= 2; below that the origin "
                              "is a focus and the profile leaves (0, 1)")
    out = _outdir(cfg)
    xi_range = None
    if cfg.xi_min is not None and cfg.xi_max is not None:
        if cfg.xi_max <= cfg.xi_min:
            raise ValidationError("--xi-range needs xi_min < xi_max")
        xi_range = (cfg.xi_min, cfg.xi_max)
    wp = shoot_heteroclinic(p, _controls(cfg), eps=cfg.seed_eps, xi_range=xi_range)
    report = verify_asymptotics(wp)
    residual = wave_residual(wp)
    _write_csv(out / "wave_profile.csv", ["xi", "phi", "dphi"],
               zip(wp.xi, wp.phi, wp.dphi))
    payload = {
        "params": {"n": p.n, "k": p.k, "c": p.c},
        "checks": report.checks,
        "values": report.values,
        "tolerance": report.tol,
        "ode_residual": residual,
        "residual_pass": residual < 1e-6,
        "samples": len(wp.xi),
        "xi_range": [wp.xi[0], wp.xi[-1]],
    }
    _write_json(out / "wave_report.json", payload)
    ok = report.all_pass and residual < 1e-6
    print(f"wave n={p.n} k={p.k} c={_g17(p.c)}: residual={residual:.3e} "
          f"checks={'pass' if ok else 'FAIL'} -> {out / 'wave_profile.csv'}")
    if not ok:
        raise NumericalError("wave verification checks failed; see wave_report.json")
    return 0


def cmd_pde_check(cfg: RunConfig) -> int:
    p = _params(cfg)
    if p.c < 2.0:
        raise ValidationError("the PDE cross-check needs a c >= 2 front")
    out = _outdir(cfg)
    wp = shoot_heteroclinic(p, _controls(cfg), eps=cfg.seed_eps)
    pde_cfg = PdeConfig(L=cfg.L, N=cfg.N, T=cfg.T)
    report = speed_estimate(p, wp, pde_cfg)
    payload = {
        "params": {"n": p.n, "k": p.k, "c": p.c},
        "grid": {"L": pde_cfg.L, "N": pde_cfg.N, "T": pde_cfg.T,
                 "dt": pde_cfg.step_size()},
        "measured_speed": report.c_hat,
        "relative_error": report.rel_err,
        "shape_drift": report.drift,
        "speed_within_2_percent": report.rel_err < 0.02,
    }
    _write_json(out / "pde_report.json", payload)
    print(f"pde-check n={p.n} k={p.k} c={_g17(p.c)}: measured={report.c_hat:.6f} "
          f"rel_err={report.rel_err:.4%} drift={report.drift:.3e} "
          f"-> {out / 'pde_report.json'}")
    if report.rel_err >= 0.02:
        raise NumericalError(f"measured speed off by {report.rel_err:.2%} (>2%)")
    return 0


def _parse_cells(spec: str | None):
    if spec is None:
        return list(DEFAULT_SWEEP_CELLS)
    spec = spec.strip()
    if not spec:
        return []
    cells = []
    for item in spec.split(";"):
        parts = item.split(",")
        if len(parts) != 3:
            raise ValidationError(f"bad cell {item!r}; expected n,k,c")
        cells.append((int(parts[0]), int(parts[1]), float(parts[2])))
    return cells


def cmd_sweep(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    cells = _parse_cells(cfg.cells)
    rows = []
    for (n, k, c) in cells:
        p = Params(n, k, c)
        cls = classify_portrait(p, _controls(cfg))
        rows.append((n, k, c, cls.tag, cls.equivalence,
                     str(cls.evidence_match).lower(),
                     ";".join(cls.caveats)))
        print(f"  ({n},{k},{_g17(c)}): {cls.tag} [{cls.equivalence}] "
              f"match={cls.evidence_match}")
    _write_csv(out / "sweep.csv",
               ["n", "k", "c", "class", "equivalence", "evidence_match", "caveats"],
               rows)
    classes = sorted({r[4] for r in rows})
    print(f"sweep: {len(rows)} cells, {len(classes)} equivalence classes "
          f"-> {out / 'sweep.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bhwave",
        description="Equilibrium analysis, global phase portraits and "
                    "traveling-wave fronts of the planar family "
                    "x'=y, y'=-c*y+x^k*y+x*(x^n-1).")
    parser.add_argument("--config", help="JSON file with defaults (flags override)")
    parser.add_argument("--show-config", action="store_true",
                        help="print the effective configuration and exit")
    sub = parser.add_subparsers(dest="command")
    for name, helptext in (
            ("analyze", "equilibrium inventory, blow-up circle, cycle exclusion"),
            ("portrait", "classify the global portrait and render it to SVG"),
            ("wave", "construct and verify the traveling front (c >= 2)"),
            ("pde-check", "measure the front speed with the method of lines"),
            ("sweep", "classify a grid of (n, k, c) cells")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--k", type=int, default=None)
        sp.add_argument("--c", type=float, default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "csv", "svg"), default=None)
        sp.add_argument("--rel-tol", type=float, default=None)
        sp.add_argument("--abs-tol", type=float, default=None)
        sp.add_argument("--seed-eps", type=float, default=None)
        if name == "wave":
            sp.add_argument("--xi-range", nargs=2, type=float, default=None,
                            metavar=("XI_MIN", "XI_MAX"))
        if name == "pde-check":
            sp.add_argument("--N", type=int, default=None)
            sp.add_argument("--T", type=float, default=None)
            sp.add_argument("--L", type=float, default=None)
        if name == "sweep":
            sp.add_argument("--cells", default=None,
                            help="semicolon-separated n,k,c triples; empty for none")
    return parser


def _merge_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ValidationError(f"config file {path} not found")
        try:
            loaded = json.loads(path.read_text())
        except json.JSONDecodeError as err:
            raise ValidationError(f"config file is not valid JSON: {err}") from None
        known = set(asdict(cfg))
        bad = set(loaded) - known
        if bad:
            raise ValidationError(f"unknown config keys: {sorted(bad)}")
        cfg = replace(cfg, **loaded)
    overrides = {}
    mapping = {"n": "n", "k": "k", "c": "c", "out": "out", "format": "format",
               "rel_tol": "rel_tol", "abs_tol": "abs_tol", "seed_eps": "seed_eps",
               "N": "N", "T": "T", "L": "L", "cells": "cells"}
    for attr, key in mapping.items():
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    xi = getattr(args, "xi_range", None)
    if xi is not None:
        overrides["xi_min"], overrides["xi_max"] = xi
    return replace(cfg, **overrides)


COMMANDS = {
    "analyze": cmd_analyze,
    "portrait": cmd_portrait,
    "wave": cmd_wave,
    "pde-check": cmd_pde_check,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.show_config:
            print(json.dumps(_jsonify(asdict(RunConfig())), indent=2, sort_keys=True))
            return 0
        if args.command is None:
            parser.print_help()
            return 2
        cfg = _merge_config(args)
        return COMMANDS[args.command](cfg)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except NumericalError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
