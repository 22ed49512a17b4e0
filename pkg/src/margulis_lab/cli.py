"""``margulis-lab``: build holonomies and cocycles, run checks and scans.

Exit codes: 0 success, 1 mathematical finding (failed check, obstruction,
construction failure), 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, suites
from .affine import (
    DeformationParams,
    cohomology_coordinates,
    coordinate_words,
    gauge_coefficients,
    phi,
)
from .errors import ConstructionFailed, MargulisLabError
from .fuchsian import DEFAULT_BOUNDARY, DEFAULT_DIVIDING, DEFAULT_TWIST, Holonomy, HolonomySpec, build_holonomy
from .proper import Status, sign_scan

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2
GAUGE_TOL = 1e-9


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    spec: HolonomySpec
    params: DeformationParams
    tolerances: dict
    seed: int
    output_dir: Path
    digest: str = field(default="")


def _floats(raw, key, n, default):
    vals = raw.get(key)
    if vals is None:
        return [default] * n
    if not isinstance(vals, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
        raise UsageError(f"{key} must be a list of numbers")
    return [float(v) for v in vals]


def load_config(path: str, output_dir: str | None = None) -> RunConfig:
    try:
        text = Path(path).read_text()
        raw = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("config must be a JSON object")
    b = raw.get("b")
    if not isinstance(b, int) or isinstance(b, bool):
        raise UsageError("config needs an integer 'b'")
    if b < 3:
        raise UsageError(f"b must be >= 3 (at least four boundary components), got {b}")
    spec = HolonomySpec(
        b,
        _floats(raw, "boundary_lengths", b + 1, DEFAULT_BOUNDARY),
        _floats(raw, "dividing_lengths", b - 2, DEFAULT_DIVIDING),
        _floats(raw, "hyperbolic_twists", b - 2, DEFAULT_TWIST),
    )
    try:
        spec.validate()
        params = DeformationParams(
            _floats(raw, "alpha", b + 1, 0.0),
            _floats(raw, "beta", b - 2, 0.0),
            _floats(raw, "t", b - 2, 0.0),
        )
    except (ConstructionFailed, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    tolerances = raw.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise UsageError("tolerances must be an object")
    unknown = set(tolerances) - set(suites.DEFAULT_TOLERANCES)
    if unknown:
        raise UsageError(f"unknown tolerance keys: {sorted(unknown)}")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise UsageError("seed must be an integer")
    out = Path(output_dir or raw.get("output_dir", "."))
    digest = hashlib.sha256(json.dumps(raw, sort_keys=True).encode()).hexdigest()
    return RunConfig(spec, params, {k: float(v) for k, v in tolerances.items()}, seed, out, digest)


def _header(cfg: RunConfig) -> dict:
    return {"version": __version__, "config_sha256": cfg.digest}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _vec(v) -> list[float]:
    return [float(x) for x in np.asarray(v).ravel()]


def _holonomy(cfg: RunConfig) -> Holonomy:
    return build_holonomy(cfg.spec)


def cmd_holonomy(cfg: RunConfig, args) -> int:
    hol = _holonomy(cfg)
    margins = hol.orientation_margins()
    generators = {}
    for i in range(1, hol.b + 2):
        fr = hol.g_frame(i)
        generators[f"g{i}"] = {
            "matrix": [_vec(r) for r in hol.generators[i]],
            "lift": [_vec(r) for r in hol.lifts[i]],
            "lambda": float(fr.lam),
            "x_minus": _vec(fr.x_minus),
            "x_plus": _vec(fr.x_plus),
            "x_zero": _vec(fr.x_zero),
        }
    pairs = [
        {"m": m, "n": n, "B(X0_m,X0_n)+1": aa + 1.0, "B(X0_m,X-_n)": em, "B(X0_m,X+_n)": ep}
        for (m, n), (aa, em, ep) in sorted(margins.table.items())
    ]
    report = {
        **_header(cfg),
        "b": hol.b,
        "generators": generators,
        "relation_residual": hol.relation_residual(),
        "length_errors": hol.length_errors(),
        "margins": {"axis_axis": margins.axis_axis, "axis_endpoint": margins.axis_endpoint, "pairs": pairs},
    }
    _write_json(cfg.output_dir / "holonomy.json", report)
    print(f"holonomy.json written; relation residual {report['relation_residual']:.3e}")
    return EXIT_OK


def cmd_cocycle(cfg: RunConfig, args) -> int:
    hol = _holonomy(cfg)
    u = phi(hol, cfg.params)
    rows = [[f"g{i}", *map(_fmt, u.generator_value(i))] for i in range(1, hol.b + 2)]
    _write_csv(cfg.output_dir / "cocycle.csv", ["generator", "x1", "x2", "x3"], rows)
    coords = cohomology_coordinates(u)
    names = (
        [f"g{i}" for i in range(1, hol.b + 2)]
        + [f"h{j}" for j in range(1, hol.b - 1)]
        + [f"f{l}" for l in range(1, hol.b - 1)]
    )
    _write_csv(
        cfg.output_dir / "coordinates.csv",
        ["name", "word", "margulis"],
        [[n, str(w), _fmt(a)] for n, w, a in zip(names, coordinate_words(hol), coords)],
    )
    print("cocycle.csv and coordinates.csv written")
    if args.gauge_check:
        gauge = gauge_coefficients(u)
        print(json.dumps(gauge, sort_keys=True))
        bad = {k: v for k, v in gauge.items() if abs(v) > GAUGE_TOL}
        if bad:
            print(f"gauge check failed: {bad}", file=sys.stderr)
            return EXIT_FINDING
        print("gauge check passed: c1-, c1+, c2- vanish")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    hol = _holonomy(cfg)
    rows = suites.run(args.which, hol, cfg.seed, cfg.tolerances)
    table = [
        {"check": r.check, "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual, "tolerance": r.tolerance, "pass": r.passed}
        for r in rows
    ]
    _write_json(cfg.output_dir / "report.json", {**_header(cfg), "which": args.which, "seed": cfg.seed, "rows": table})
    _write_csv(
        cfg.output_dir / "report.csv",
        ["check", "lhs", "rhs", "residual", "tolerance", "pass"],
        [[r.check, _fmt(r.lhs), _fmt(r.rhs), _fmt(r.residual), _fmt(r.tolerance), str(r.passed).lower()] for r in rows],
    )
    failing = [r for r in rows if not r.passed]
    print(f"{len(rows) - len(failing)}/{len(rows)} checks passed")
    if failing:
        r = failing[0]
        print(f"first failure: {r.check}: residual {r.residual:.3e} vs tolerance {r.tolerance:.3e}", file=sys.stderr)
        return EXIT_FINDING
    return EXIT_OK


def cmd_scan(cfg: RunConfig, args) -> int:
    if args.max_len < 1:
        raise UsageError("--max-len must be at least 1")
    hol = _holonomy(cfg)
    verdict = sign_scan(hol, phi(hol, cfg.params), args.max_len)
    witness = None
    if verdict.witness:
        w = verdict.witness
        witness = [
            {"word": str(w.first), "alpha": w.first_alpha},
            {"word": str(w.second), "alpha": w.second_alpha},
        ]
    spectrum = [vars(s) for s in verdict.spectrum]
    _write_json(
        cfg.output_dir / "verdict.json",
        {
            **_header(cfg),
            "status": verdict.status.value,
            "witness": witness,
            "stats": {
                "max_len": verdict.max_len,
                "scanned": verdict.scanned,
                "skipped_non_hyperbolic": verdict.skipped,
                "spectrum": spectrum,
            },
        },
    )
    _write_csv(
        cfg.output_dir / "spectrum.csv",
        ["word", "length", "alpha"],
        [[str(w), len(w), _fmt(a)] for w, a in verdict.records],
    )
    print(verdict.status.value)
    if verdict.status is Status.NOT_PROPER:
        print(f"witness: {witness[0]['word']} ({witness[0]['alpha']:.6g}), {witness[1]['word']} ({witness[1]['alpha']:.6g})")
        return EXIT_FINDING
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="margulis-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--output-dir", help="directory for reports (overrides the config)")
        p.set_defaults(func=func)
        return p

    add("holonomy", cmd_holonomy, "build and certify the holonomy; writes holonomy.json")
    p = add("cocycle", cmd_cocycle, "write the deformation cocycle and its coordinates")
    p.add_argument("--gauge-check", action="store_true", help="confirm c1-, c1+, c2- vanish")
    p = add("verify", cmd_verify, "run verification suites; writes report.json and report.csv")
    p.add_argument("--which", choices=(*suites.SUITES, "all"), default="all")
    p = add("scan", cmd_scan, "opposite-sign scan; writes verdict.json and spectrum.csv")
    p.add_argument("--max-len", type=int, default=6)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.output_dir)
        return args.func(cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConstructionFailed as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_FINDING
    except MargulisLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINDING


if __name__ == "__main__":
    sys.exit(main())
