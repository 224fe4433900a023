"""Batch command-line front end.

Four subcommands cover the pipeline: validate (domain admissibility,
weight sup, contraction), spectrum (matrix-route eigenvalues as CSV),
determinant (trace table, determinant coefficients, zeros, and a
cross-check against the matrix route), bounds (decay-bound table,
verification, crossover report).

Exit codes: 0 success, 1 domain or verification failure, 2 usage or
configuration error. All floats print with 17 significant digits and files
use "\n" endings, so a rerun with the same config is byte-identical; output
filenames are <command>-<system id> with no timestamps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from ._format import g17, json_g17
from .bounds import (
    BoundProfile,
    bound_table,
    bounds_csv_text,
    crossover_report,
    verify_bounds,
)
from .determinant import (
    determinant_coefficients,
    determinant_zeros,
    export_determinant_json,
    trace_table,
)
from .dynamics import (
    DEFAULT_WORD_BUDGET,
    contraction_details,
    enclosing_radius,
)
from .errors import (
    DescriptorError,
    DimensionUnsupported,
    NotEnclosed,
    TransferOperatorError,
)
from .spectra import spectral_sequence
from .systems import system_from_descriptor, validate_system

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_CONFIG_KEYS = {
    "system", "profile", "matrix_size", "trace_order", "word_budget",
    "fixed_point_tol", "agreement_tol", "margin", "contraction_order",
    "grid", "threads", "out_dir",
}


@dataclass
class RunConfig:
    """Merged configuration: JSON file values overridden by CLI flags."""

    system: dict | None = None
    profile: dict | None = None
    matrix_size: int = 32
    trace_order: int = 8
    word_budget: int = DEFAULT_WORD_BUDGET
    fixed_point_tol: float = 1e-13
    agreement_tol: float = 1e-6
    margin: float = 0.1
    contraction_order: int = 2
    grid: int = 1024
    threads: int = 1
    out_dir: str | None = None

    def check(self):
        if self.matrix_size < 4:
            raise DescriptorError("matrix_size must be >= 4")
        if self.trace_order < 1:
            raise DescriptorError("trace_order must be >= 1")
        if self.word_budget < 1:
            raise DescriptorError("word_budget must be >= 1")
        if not (self.fixed_point_tol > 0.0):
            raise DescriptorError("fixed_point_tol must be positive")
        if not (self.agreement_tol > 0.0):
            raise DescriptorError("agreement_tol must be positive")
        if not (0.0 < self.margin < 1.0):
            raise DescriptorError("margin must lie in (0, 1)")
        if self.contraction_order < 1:
            raise DescriptorError("contraction_order must be >= 1")
        if self.grid < 8:
            raise DescriptorError("grid must be >= 8")
        if self.threads < 1:
            raise DescriptorError("threads must be >= 1")
        return self


def _resolve_config(args):
    data = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise DescriptorError("config root must be a JSON object")
        unknown = sorted(set(data) - _CONFIG_KEYS)
        if unknown:
            raise DescriptorError(f"unknown config keys: {', '.join(unknown)}")
    for key in ("system", "profile"):
        if data.get(key) is not None and not isinstance(data[key], dict):
            raise DescriptorError(f"config key {key!r} must be an object")

    def pick(flag, key, default, cast):
        if flag is not None:
            return cast(flag)
        if key in data and data[key] is not None:
            try:
                return cast(data[key])
            except (TypeError, ValueError) as err:
                raise DescriptorError(f"bad config value for {key}: {err}")
        return default

    cfg = RunConfig(
        system=data.get("system"),
        profile=data.get("profile"),
        matrix_size=pick(getattr(args, "matrix_size", None),
                         "matrix_size", 32, int),
        trace_order=pick(getattr(args, "trace_order", None),
                         "trace_order", 8, int),
        word_budget=pick(getattr(args, "word_budget", None),
                         "word_budget", DEFAULT_WORD_BUDGET, int),
        fixed_point_tol=pick(None, "fixed_point_tol", 1e-13, float),
        agreement_tol=pick(None, "agreement_tol", 1e-6, float),
        margin=pick(None, "margin", 0.1, float),
        contraction_order=pick(None, "contraction_order", 2, int),
        grid=pick(None, "grid", 1024, int),
        threads=pick(getattr(args, "threads", None), "threads", 1, int),
        out_dir=getattr(args, "out", None) or data.get("out_dir"),
    )
    return cfg.check()


def _require_system(cfg):
    if cfg.system is None:
        raise DescriptorError("this command needs a config with a "
                              "\"system\" descriptor")
    return system_from_descriptor(cfg.system)


def _emit(cfg, filename, text):
    if not cfg.out_dir:
        return None
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, filename)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(cfg, args):
    sys_ = _require_system(cfg)
    report = validate_system(sys_, margin=cfg.margin, grid=cfg.grid)
    try:
        enc = enclosing_radius(sys_, grid=cfg.grid)
    except NotEnclosed:
        enc = None
    contr = contraction_details(sys_, cfg.contraction_order, grid=cfg.grid,
                                word_budget=cfg.word_budget,
                                threads=cfg.threads)
    ok = report.images_compactly_contained and contr.value < 1.0
    out = {
        "system": sys_.system_id,
        "ok": ok,
        "enclosing_radius": enc,
        "contraction": {
            "order": int(cfg.contraction_order),
            "value": float(contr.value),
            "word": [int(l) for l in contr.word],
        },
    }
    out.update(report.to_dict())
    text = json_g17(out) + "\n"
    sys.stdout.write(text)
    _emit(cfg, f"validate-{sys_.system_id}.json", text)
    return EXIT_OK if ok else EXIT_FAIL


def _spectrum_csv_text(seq):
    lines = ["n,re,im,abs,reliable"]
    for i, v in enumerate(seq.values, start=1):
        flag = "true" if i <= seq.reliable_count else "false"
        lines.append(f"{i},{g17(v.real)},{g17(v.imag)},{g17(abs(v))},{flag}")
    return "\n".join(lines) + "\n"


def cmd_spectrum(cfg, args):
    sys_ = _require_system(cfg)
    seq = spectral_sequence(sys_, N=cfg.matrix_size)
    text = _spectrum_csv_text(seq)
    sys.stdout.write(text)
    _emit(cfg, f"spectrum-{sys_.system_id}.csv", text)
    return EXIT_OK


def cmd_determinant(cfg, args):
    sys_ = _require_system(cfg)
    table = trace_table(sys_, cfg.trace_order, word_budget=cfg.word_budget,
                        tol=cfg.fixed_point_tol, threads=cfg.threads)
    series = determinant_coefficients(table)
    zeros = determinant_zeros(series)
    out = export_determinant_json(table, series)
    out["system"] = sys_.system_id
    out["truncation_bounds"] = [float(b) for b in table.truncation_bounds]
    out["eigenvalues_re"] = [v.real for v in zeros.values]
    out["eigenvalues_im"] = [v.imag for v in zeros.values]
    out["zeros_re"] = [(1.0 / v).real for v in zeros.values]
    out["zeros_im"] = [(1.0 / v).imag for v in zeros.values]
    out["reliable_count"] = int(zeros.reliable_count)

    code = EXIT_OK
    if sys_.dim == 1:
        mat = spectral_sequence(sys_, N=cfg.matrix_size)
        # leading values only: deep determinant zeros drift with the degree
        # truncation faster than the reliability heuristic can certify
        count = min(zeros.reliable_count, mat.reliable_count, 5)
        diff = float(max((abs(zeros.values[k] - mat.values[k])
                          for k in range(count)), default=0.0))
        agree = bool(diff <= cfg.agreement_tol)
        out["cross_check"] = {
            "count": int(count),
            "max_abs_diff": float(diff),
            "tol": float(cfg.agreement_tol),
            "agree": agree,
        }
        if not agree:
            code = EXIT_FAIL
    text = json_g17(out) + "\n"
    sys.stdout.write(text)
    _emit(cfg, f"determinant-{sys_.system_id}.json", text)
    return code


def _profile_from_dict(raw):
    try:
        return BoundProfile(W=float(raw["W"]), r=float(raw["r"]),
                            d=int(raw.get("d", 1)))
    except (KeyError, TypeError, ValueError) as err:
        raise DescriptorError(f"bad bound profile: {err}")


def cmd_bounds(cfg, args):
    cross = None
    if getattr(args, "crossover", None):
        try:
            r = float(args.crossover[0])
            d = int(args.crossover[1])
            cross = crossover_report(r, d)
        except ValueError as err:
            raise DescriptorError(f"bad --crossover arguments: {err}")

    if cfg.profile is not None and cfg.system is not None:
        raise DescriptorError(
            "config supplies both \"system\" and \"profile\"; use one")

    summary = {}
    rows = None
    sid = None
    ok = True
    if cfg.profile is not None:
        prof = _profile_from_dict(cfg.profile)
        rows = bound_table(prof, cfg.matrix_size)
        sid = "profile"
        summary["profile"] = {"W": prof.W, "r": prof.r, "d": prof.d}
    elif cfg.system is not None:
        sys_ = _require_system(cfg)
        val = validate_system(sys_, margin=cfg.margin, grid=cfg.grid)
        r = enclosing_radius(sys_, grid=cfg.grid)
        prof = BoundProfile(val.W, r, sys_.dim)
        seq = spectral_sequence(sys_, N=cfg.matrix_size)
        rep = verify_bounds(seq, prof)
        rows = rep.rows
        sid = sys_.system_id
        ok = rep.all_pass
        summary["profile"] = {"W": prof.W, "r": prof.r, "d": prof.d}
        summary["reliable_count"] = int(rep.reliable_count)
        summary["all_pass"] = rep.all_pass
        summary["weyl"] = [
            {"n": w.n, "product": w.product, "bound": w.bound,
             "pass": w.passed} for w in rep.weyl]
    elif cross is None:
        raise DescriptorError("bounds needs a \"system\" or \"profile\" "
                              "config, or --crossover R D")
    if cross is not None:
        summary["crossover"] = cross

    body = bounds_csv_text(rows) if rows is not None else ""
    text = body + "# " + json_g17(summary) + "\n"
    sys.stdout.write(text)
    if rows is not None:
        _emit(cfg, f"bounds-{sid}.csv", text)
    return EXIT_OK if ok else EXIT_FAIL


_DISPATCH = {
    "validate": cmd_validate,
    "spectrum": cmd_spectrum,
    "determinant": cmd_determinant,
    "bounds": cmd_bounds,
}


def build_parser():
    p = argparse.ArgumentParser(
        prog="transferspec",
        description="Eigenvalue sequences and decay bounds of transfer "
                    "operators attached to contracting analytic map-weight "
                    "systems.")
    sub = p.add_subparsers(dest="command", required=True)
    specs = {
        "validate": "check domain admissibility, weight sup, contraction",
        "spectrum": "matrix-route eigenvalue CSV",
        "determinant": "trace table, determinant coefficients and zeros",
        "bounds": "decay-bound table, verification, crossover report",
    }
    for name, help_ in specs.items():
        q = sub.add_parser(name, help=help_)
        q.add_argument("--config", help="path to JSON run configuration")
        q.add_argument("--matrix-size", type=int, dest="matrix_size",
                       help="basis size N for the matrix route")
        q.add_argument("--trace-order", type=int, dest="trace_order",
                       help="number of trace orders M")
        q.add_argument("--word-budget", type=int, dest="word_budget",
                       help="maximum words enumerated per trace order")
        q.add_argument("--threads", type=int, help="worker threads")
        q.add_argument("--out", help="output directory for result files")
        if name == "bounds":
            q.add_argument("--crossover", nargs=2, metavar=("R", "D"),
                           help="report the crossover index for ratio R, "
                                "dimension D")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = _resolve_config(args)
        return _DISPATCH[args.command](cfg, args)
    except DescriptorError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DimensionUnsupported as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAIL
    except TransferOperatorError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
