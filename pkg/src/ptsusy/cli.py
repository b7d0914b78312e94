"""Batch command line front end with machine-readable output.

Four subcommands: spectrum (energy tables), wavefn (eigenfunction samples),
verify (operator identity suite, JSON report, exit status contract), and
coherent (overlap tables plus the completeness-kernel report).  Model
parameters come from an optional flat key=value config file overridden by
flags.  Output is CSV (header row, LF endings, shortest round-trip floats)
or a single JSON object with sorted keys, so identical configs produce
byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from .coherent import CoherentState, PhasePoint, cs_overlap, resolution_kernel
from .errors import DomainError
from .operators import verify_operator_identities
from .quadrature import DEFAULT_CONFIG, integrate_interval
from .spectrum import LevelIndex, ModelParams, energy, gap_factor_M, gap_factor_N
from .wavefn import eigenfunction

_PARAM_KEYS = ("nu", "beta", "hbar", "length", "mass")
_DEFAULTS = {"nu": 1.0, "beta": 0.0, "hbar": 1.0, "length": 1.0, "mass": 0.5}

# config keys that take a single value; q and p take comma lists
_SCALAR_KEYS = _PARAM_KEYS + ("m", "n", "m_max", "n_max", "grid_points", "format", "out")
_ALIASES = {"l": "length", "grid": "grid_points"}


class ConfigError(Exception):
    pass


def _fmt(x: float) -> str:
    # repr gives the shortest decimal that round-trips, at most 17 digits
    return repr(float(x))


def load_config(path: str) -> dict:
    """Parse a flat key=value file; '#' starts a comment, blank lines skipped."""
    out: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip().lower().replace("-", "_")
            key = _ALIASES.get(key, key)
            value = value.strip()
            if key in ("q", "p"):
                try:
                    out[key] = [float(v) for v in value.split(",") if v.strip()]
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: field {key}: bad float list {value!r}")
            elif key.startswith("tol_"):
                try:
                    out.setdefault("tol", {})[key[4:]] = float(value)
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: field {key}: bad float {value!r}")
            elif key in _SCALAR_KEYS:
                if key in ("format", "out"):
                    out[key] = value
                else:
                    try:
                        out[key] = float(value)
                    except ValueError:
                        raise ConfigError(f"{path}:{lineno}: field {key}: bad float {value!r}")
            else:
                raise ConfigError(f"{path}:{lineno}: unknown field {key!r}")
    return out


def _extract_tol_flags(argv: list[str]) -> tuple[list[str], dict]:
    """Pull --tol-<name> <value> (or --tol-<name>=<value>) pairs out of argv."""
    clean: list[str] = []
    tols: dict = {}
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg.startswith("--tol-"):
            body = arg[6:]
            if "=" in body:
                name, _, value = body.partition("=")
            else:
                name = body
                i += 1
                if i >= len(argv):
                    raise ConfigError(f"flag {arg} needs a value")
                value = argv[i]
            try:
                tols[name.replace("-", "_")] = float(value)
            except ValueError:
                raise ConfigError(f"flag {arg}: bad float {value!r}")
        else:
            clean.append(arg)
        i += 1
    return clean, tols


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptsusy",
        description="Poschl-Teller SUSY hierarchy: spectra, eigenfunctions, "
        "operator identity verification, coherent states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="flat key=value config file")
        for key in _PARAM_KEYS:
            sp.add_argument(f"--{key}", type=float, default=None)
        sp.add_argument("--format", choices=("csv", "json"), default=None)
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("spectrum", help="energy table over hierarchy levels")
    common(sp)
    sp.add_argument("--m-max", type=int, default=None)
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("--gap-factors", action="store_true", help="add chain gap factor columns")

    sp = sub.add_parser("wavefn", help="sample a normalized eigenfunction")
    common(sp)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--grid", type=int, default=None, help="sample count including endpoints")

    sp = sub.add_parser("verify", help="run the operator identity suite")
    common(sp)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--grid", type=int, default=None, help="verification grid size")
    sp.add_argument(
        "--corrupt-w-sign",
        action="store_true",
        help="negative control: flip the superpotential sign and expect failures",
    )

    sp = sub.add_parser("coherent", help="coherent state overlaps and completeness kernel")
    common(sp)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--q", type=float, action="append", default=None, help="repeatable position label")
    sp.add_argument("--p", type=float, action="append", default=None, help="repeatable momentum label")
    sp.add_argument("--grid", type=int, default=None, help="interior points for the kernel check")
    sp.add_argument("--skip-resolution", action="store_true", help="omit the kernel integral table")

    return parser


def _merge(args: argparse.Namespace, tol_flags: dict) -> dict:
    cfg = dict(_DEFAULTS)
    cfg.update({"format": "csv", "out": None, "tol": {}})
    if args.config:
        file_cfg = load_config(args.config)
        tols = file_cfg.pop("tol", {})
        cfg.update(file_cfg)
        cfg["tol"] = tols
    for key in _PARAM_KEYS + ("format", "out"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    for key in ("m", "n", "m_max", "n_max"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if getattr(args, "grid", None) is not None:
        cfg["grid_points"] = args.grid
    for key in ("q", "p"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg["tol"].update(tol_flags)
    return cfg


def _params(cfg: dict) -> ModelParams:
    return ModelParams(
        nu=float(cfg["nu"]),
        beta=float(cfg["beta"]),
        hbar=float(cfg["hbar"]),
        length=float(cfg["length"]),
        mass=float(cfg["mass"]),
    )


def _param_header(params: ModelParams) -> str:
    pairs = " ".join(f"{k}={_fmt(getattr(params, k))}" for k in _PARAM_KEYS)
    return f"# params: {pairs}"


def _param_obj(params: ModelParams) -> dict:
    return {k: float(getattr(params, k)) for k in _PARAM_KEYS}


def _sanitize(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(report: dict, out: str | None) -> None:
    _emit(json.dumps(_sanitize(report), sort_keys=True, indent=2) + "\n", out)


def cmd_spectrum(cfg: dict) -> int:
    params = _params(cfg)
    m_max = int(cfg.get("m_max", 2))
    n_max = int(cfg.get("n_max", 5))
    gap = bool(cfg.get("gap_factors", False))
    rows = []
    for m in range(m_max + 1):
        for n in range(n_max + 1):
            row = {"m": m, "n": n, "energy": energy(params, LevelIndex(m=m, n=n))}
            if gap:
                row["gap_factor_m"] = gap_factor_M(params, n, m)
                row["gap_factor_n"] = gap_factor_N(params, n, m)
            rows.append(row)
    if cfg["format"] == "json":
        _emit_json({"command": "spectrum", "params": _param_obj(params), "rows": rows}, cfg["out"])
        return 0
    cols = ["m", "n", "energy"] + (["gap_factor_m", "gap_factor_n"] if gap else [])
    lines = [_param_header(params), ",".join(cols)]
    for row in rows:
        lines.append(",".join(str(row[c]) if c in ("m", "n") else _fmt(row[c]) for c in cols))
    _emit("\n".join(lines) + "\n", cfg["out"])
    return 0


def cmd_wavefn(cfg: dict) -> int:
    params = _params(cfg)
    m = int(cfg.get("m", 0))
    n = int(cfg.get("n", 0))
    grid = int(cfg.get("grid_points", 101))
    if grid < 2:
        raise ConfigError("grid_points must be at least 2")
    func = eigenfunction(params, m, n)
    xs = np.linspace(0.0, params.length, grid)
    vals = func(xs)
    eps = 1e-9 * params.length
    norm = integrate_interval(
        lambda x: np.abs(func(x)) ** 2,
        eps,
        params.length - eps,
        replace(DEFAULT_CONFIG, endpoint_substitution=True),
    ).value.real
    if cfg["format"] == "json":
        report = {
            "command": "wavefn",
            "params": _param_obj(params),
            "indices": {"m": m, "n": n},
            "norm": float(norm),
            "rows": [
                {"x": float(x), "re": float(v.real), "im": float(v.imag), "abs2": float(abs(v) ** 2)}
                for x, v in zip(xs, vals)
            ],
        }
        _emit_json(report, cfg["out"])
        return 0
    lines = [_param_header(params), f"# indices: m={m} n={n}", "x,re,im,abs2"]
    for x, v in zip(xs, vals):
        lines.append(",".join((_fmt(x), _fmt(v.real), _fmt(v.imag), _fmt(abs(v) ** 2))))
    lines.append(f"# norm: {_fmt(norm)}")
    _emit("\n".join(lines) + "\n", cfg["out"])
    return 0


def cmd_verify(cfg: dict) -> int:
    params = _params(cfg)
    m = int(cfg.get("m", 1))
    n = int(cfg.get("n", 2))
    grid = int(cfg.get("grid_points", 161))
    sign = -1.0 if cfg.get("corrupt_w_sign") else 1.0
    results = verify_operator_identities(params, n, m, grid_size=grid, sign=sign)
    tols = cfg.get("tol", {})
    entries = []
    for res in results:
        tol = tols.get(res.name)
        if tol is not None and not res.informational:
            res = replace(res, threshold=tol, passed=bool(res.max_residual <= tol))
        entries.append(res)
    mandatory_pass = all(r.passed for r in entries if not r.informational)
    report = {
        "command": "verify",
        "params": _param_obj(params),
        "indices": {"n": n, "m": m},
        "grid_size": grid,
        "superpotential_sign": sign,
        "identities": [r.to_jsonable() for r in entries],
        "mandatory_pass": bool(mandatory_pass),
    }
    if cfg["format"] == "csv":
        lines = [
            _param_header(params),
            f"# indices: n={n} m={m} sign={_fmt(sign)}",
            "name,max_residual,threshold,passed,informational",
        ]
        for r in entries:
            lines.append(
                ",".join(
                    (
                        r.name,
                        _fmt(r.max_residual) if math.isfinite(r.max_residual) else repr(r.max_residual),
                        "" if r.threshold is None else _fmt(r.threshold),
                        "" if r.passed is None else str(r.passed).lower(),
                        str(r.informational).lower(),
                    )
                )
            )
        lines.append(f"# mandatory_pass: {str(mandatory_pass).lower()}")
        _emit("\n".join(lines) + "\n", cfg["out"])
    else:
        _emit_json(report, cfg["out"])
    return 0 if mandatory_pass else 1


def cmd_coherent(cfg: dict) -> int:
    params = _params(cfg)
    m = int(cfg.get("m", 0))
    L = params.length
    qs = cfg.get("q") or [0.25 * L, 0.5 * L, 0.75 * L]
    ps = cfg.get("p") or [-4.0, 0.0, 4.0]
    grid = int(cfg.get("grid_points", 9))
    tols = cfg.get("tol", {})
    tol_norm = tols.get("normalization", 1e-8)
    tol_overlap = tols.get("overlap", 1e-8)
    tol_resolution = tols.get("resolution", 1e-6)

    points = [PhasePoint(q, p) for q in qs for p in ps]
    states = [CoherentState(params, m, pt) for pt in points]
    quad_cfg = replace(DEFAULT_CONFIG, endpoint_substitution=True)
    eps = 1e-9 * L

    norm_rows = []
    all_pass = True
    for pt, st in zip(points, states):
        self_dev = abs(cs_overlap(st, st) - 1.0)
        quad = integrate_interval(lambda x: np.abs(st(x)) ** 2, eps, L - eps, quad_cfg).value.real
        quad_dev = abs(quad - 1.0)
        ok = self_dev <= tol_overlap and quad_dev <= tol_norm
        all_pass = all_pass and ok
        norm_rows.append(
            {
                "q": pt.q,
                "p": pt.p,
                "self_overlap_dev": float(self_dev),
                "norm_quadrature_dev": float(quad_dev),
                "passed": bool(ok),
            }
        )

    overlap_rows = []
    for i, (pa, sa) in enumerate(zip(points, states)):
        for pb, sb in list(zip(points, states))[i:]:
            val = cs_overlap(sa, sb)
            quad = integrate_interval(
                lambda x: np.conj(sa(x)) * sb(x), eps, L - eps, quad_cfg
            ).value
            dev = abs(val - quad)
            ok = dev <= tol_overlap
            all_pass = all_pass and ok
            overlap_rows.append(
                {
                    "q1": pa.q,
                    "p1": pa.p,
                    "q2": pb.q,
                    "p2": pb.p,
                    "re": float(val.real),
                    "im": float(val.imag),
                    "abs": float(abs(val)),
                    "quadrature_dev": float(dev),
                    "passed": bool(ok),
                }
            )

    resolution = None
    if not cfg.get("skip_resolution"):
        xs = np.array([j * L / (grid + 1.0) for j in range(1, grid + 1)])
        gvals = resolution_kernel(params, m, xs)
        res_rows = []
        for x, g in zip(xs, gvals):
            ok = abs(g - 1.0) <= tol_resolution
            all_pass = all_pass and ok
            res_rows.append({"x": float(x), "kernel": float(g), "passed": bool(ok)})
        resolution = {
            "tolerance": tol_resolution,
            "max_deviation": float(np.max(np.abs(gvals - 1.0))),
            "rows": res_rows,
        }

    if cfg["format"] == "json":
        report = {
            "command": "coherent",
            "params": _param_obj(params),
            "level": m,
            "tolerances": {
                "normalization": tol_norm,
                "overlap": tol_overlap,
                "resolution": tol_resolution,
            },
            "normalization": norm_rows,
            "overlaps": overlap_rows,
            "all_pass": bool(all_pass),
        }
        if resolution is not None:
            report["resolution"] = resolution
        _emit_json(report, cfg["out"])
        return 0 if all_pass else 1

    lines = [_param_header(params), f"# level: m={m}", "# table: normalization"]
    lines.append("q,p,self_overlap_dev,norm_quadrature_dev,passed")
    for row in norm_rows:
        lines.append(
            ",".join(
                (
                    _fmt(row["q"]),
                    _fmt(row["p"]),
                    _fmt(row["self_overlap_dev"]),
                    _fmt(row["norm_quadrature_dev"]),
                    str(row["passed"]).lower(),
                )
            )
        )
    lines.append("# table: overlaps")
    lines.append("q1,p1,q2,p2,re,im,abs,quadrature_dev,passed")
    for row in overlap_rows:
        lines.append(
            ",".join(
                [_fmt(row[c]) for c in ("q1", "p1", "q2", "p2", "re", "im", "abs", "quadrature_dev")]
                + [str(row["passed"]).lower()]
            )
        )
    if resolution is not None:
        lines.append("# table: resolution")
        lines.append("x,kernel,tolerance,passed")
        for row in resolution["rows"]:
            lines.append(
                ",".join(
                    (
                        _fmt(row["x"]),
                        _fmt(row["kernel"]),
                        _fmt(tol_resolution),
                        str(row["passed"]).lower(),
                    )
                )
            )
    lines.append(f"# all_pass: {str(all_pass).lower()}")
    _emit("\n".join(lines) + "\n", cfg["out"])
    return 0 if all_pass else 1


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefn": cmd_wavefn,
    "verify": cmd_verify,
    "coherent": cmd_coherent,
}


def main(argv: list[str] | None = None) -> int:
    raw = list(sys.argv[1:] if argv is None else argv)
    try:
        raw, tol_flags = _extract_tol_flags(raw)
        args = _build_parser().parse_args(raw)
        cfg = _merge(args, tol_flags)
        if args.command == "spectrum":
            cfg["gap_factors"] = bool(getattr(args, "gap_factors", False))
        if args.command == "verify":
            cfg["corrupt_w_sign"] = bool(getattr(args, "corrupt_w_sign", False))
        if args.command == "coherent":
            cfg["skip_resolution"] = bool(getattr(args, "skip_resolution", False))
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"ptsusy: config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, OSError, ValueError) as exc:
        print(f"ptsusy: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
