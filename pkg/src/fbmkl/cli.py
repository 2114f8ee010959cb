"""Batch command line front-end; writes one CSV or JSON table per run."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass

import numpy as np

from . import estimator, expansion, galerkin, projection, riesz
from .errors import DomainError, TruncationWarning
from .kernel import HurstParams

COMMANDS = ("eigen", "expand", "project", "transfer", "estimate")
DEFAULT_FIT = {
    "eigen": (8, 64),
    "expand": (8, 64),
    "project": (8, 48),
    "transfer": (8, 64),
    "estimate": (4, 20),
}
DEFAULT_SIZE = {"eigen": 256, "expand": 64, "project": 32, "transfer": 64, "estimate": 256}


@dataclass
class RunConfig:
    command: str
    hurst: float
    size: int
    terms: int
    seed: int = 0
    fit_range: tuple[int, int] | None = None
    output_path: str = "-"
    format: str = "csv"
    paths: int = 400
    points: int = 256
    sample_terms: int = 500
    disturbance: str = "none"
    magnitude: float = 0.0

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        HurstParams(self.hurst)
        if self.size < 1 or self.terms < 1:
            raise DomainError("size and terms must be >= 1")
        if self.format not in ("csv", "json"):
            raise DomainError("format must be csv or json")
        lo, hi = self.resolved_fit_range()
        if lo < 1 or hi - lo < 4:
            raise DomainError(f"fit range [{lo}, {hi}] must satisfy 1 <= lo and hi - lo >= 4")
        limit = self.points if self.command == "estimate" else self.size
        if self.command != "expand" and hi > limit:
            raise DomainError(f"fit range end {hi} exceeds size {limit}")

    def resolved_fit_range(self) -> tuple[int, int]:
        if self.fit_range is not None:
            return int(self.fit_range[0]), int(self.fit_range[1])
        lo, hi = DEFAULT_FIT[self.command]
        limit = self.points if self.command == "estimate" else self.size
        hi = min(hi, limit)
        return (min(lo, max(1, hi - 4)), hi)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.11e}"


def _json_value(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    if isinstance(v, str):
        return v
    return float(_fmt(v))


def _eigen(cfg: RunConfig):
    mat = galerkin.assemble(cfg.hurst, cfg.size)
    spec = galerkin.eigen_spectrum(mat, vectors=False)
    fit = galerkin.fit_asymptotics(spec, cfg.resolved_fit_range())
    cols = ["n", "lambda_galerkin", "bronski_prediction", "fit_p", "fit_c"]
    rows = [
        [n, lam, galerkin.bronski_prediction(cfg.hurst, n), fit.exponent_p, fit.prefactor_c]
        for n, lam in enumerate(spec.eigenvalues, start=1)
    ]
    return cols, rows


def _expand(cfg: RunConfig):
    spec = expansion.build_expansion(cfg.hurst, cfg.terms)
    cols = ["n", "x_n", "y_n", "var_z", "var_w"]
    rows = [[k + 1, spec.x[k], spec.y[k], spec.var_z[k], spec.var_w[k]] for k in range(spec.terms)]
    return cols, rows


def _project(cfg: RunConfig):
    spec = expansion.build_expansion(cfg.hurst, cfg.terms)
    table = projection.build_table(spec, cfg.size)
    moments = projection.moment_matrix(table)
    gal = galerkin.assemble(cfg.hurst, cfg.size).entries
    cols = ["n", "lambda_projection", "lambda_galerkin", "rel_diff", "tail_fraction"]
    rows = []
    for n in range(1, cfg.size + 1):
        lp, lg = moments[n - 1, n - 1], gal[n - 1, n - 1]
        rows.append([n, lp, lg, abs(lp - lg) / abs(lg), projection.tail_fraction(n, n, table)])
    return cols, rows


def _transfer(cfg: RunConfig):
    spec = expansion.build_expansion(cfg.hurst, cfg.terms)
    table = projection.build_table(spec, cfg.size)
    mapping = riesz.build_mapping(table)
    lam = riesz.transfer_eigenvalues(mapping, riesz.interleaved_variances(table))
    lo, hi = cfg.resolved_fit_range()
    d7 = riesz.argmax_linearity(mapping, range(lo, hi + 1))
    cols = ["n", "lambda_transfer", "k_star", "d7", "d7_r_squared"]
    rows = [
        [n, lam[n - 1], riesz.argmax_column_row(mapping, n), d7.slope, d7.r_squared]
        for n in range(1, cfg.size + 1)
    ]
    return cols, rows


def _estimate(cfg: RunConfig):
    mat = galerkin.assemble(cfg.hurst, cfg.size)
    spec_fit = galerkin.fit_asymptotics(
        galerkin.eigen_spectrum(mat, vectors=False),
        DEFAULT_FIT["eigen"] if cfg.size >= 64 else (1, cfg.size),
    )
    h_spec = estimator.hurst_from_spectrum(spec_fit).h
    exp = expansion.build_expansion(cfg.hurst, cfg.sample_terms)
    seeds = range(cfg.seed, cfg.seed + cfg.paths)
    ens = estimator.ensemble_from_expansion(exp, cfg.points, seeds)
    ens = estimator.add_disturbance(ens, cfg.disturbance, cfg.magnitude, seed=cfg.seed + cfg.paths)
    h_pca = estimator.pca_hurst(ens, cfg.resolved_fit_range()).h
    cols = ["h_true", "h_spectrum", "h_pca", "disturbance", "error"]
    return cols, [[cfg.hurst, h_spec, h_pca, str(ens.disturbance), abs(h_pca - cfg.hurst)]]


_RUNNERS = {
    "eigen": _eigen,
    "expand": _expand,
    "project": _project,
    "transfer": _transfer,
    "estimate": _estimate,
}


def render(cfg: RunConfig, cols: list[str], rows: list[list]) -> str:
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    config = asdict(cfg)
    config["fit_range"] = list(cfg.resolved_fit_range())
    doc = {
        "command": cfg.command,
        "config": config,
        "columns": cols,
        "rows": [dict(zip(cols, (_json_value(v) for v in row))) for row in rows],
    }
    return json.dumps(doc, indent=1) + "\n"


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fbmkl-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(cfg: RunConfig) -> int:
    """Execute one command; 0 on success, 1 on a numerical failure."""
    import warnings

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            cols, rows = _RUNNERS[cfg.command](cfg)
        text = render(cfg, cols, rows)
    except (ArithmeticError, RuntimeError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"fbmkl {cfg.command}: error: {exc}", file=sys.stderr)
        return 1
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        _write_atomic(cfg.output_path, text)
    return 0


def _hurst(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"hurst must be a number in (0, 1), got {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"hurst must lie in the open range (0, 1), got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fbmkl", description="Karhunen-Loeve spectra of fractional Brownian motion."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eigen": "Galerkin eigenvalues with decay fit",
        "expand": "Bessel zeros and coefficient variances of the series expansion",
        "project": "projected second moments against Galerkin diagonals",
        "transfer": "eigenvalue transfer through the mapping matrix",
        "estimate": "Hurst estimates from spectrum and sample-path PCA",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--hurst", type=_hurst, required=True)
        p.add_argument("--size", type=int, default=DEFAULT_SIZE[name], help="sine basis size N")
        p.add_argument("--terms", type=int, default=2000, help="expansion terms K")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--fit-range", type=int, nargs=2, metavar=("LO", "HI"))
        p.add_argument("--output", default="-", help="output file ('-' for stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "estimate":
            p.add_argument("--paths", type=int, default=400)
            p.add_argument("--points", type=int, default=256)
            p.add_argument("--sample-terms", type=int, default=500)
            p.add_argument("--disturbance", choices=estimator.KINDS, default="none")
            p.add_argument("--magnitude", type=float, default=0.0)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        hurst=args.hurst,
        size=args.size,
        terms=args.terms,
        seed=args.seed,
        fit_range=tuple(args.fit_range) if args.fit_range else None,
        output_path=args.output,
        format=args.format,
    )
    if args.command == "estimate":
        cfg.paths = args.paths
        cfg.points = args.points
        cfg.sample_terms = args.sample_terms
        cfg.disturbance = args.disturbance
        cfg.magnitude = args.magnitude
    try:
        cfg.validate()
    except DomainError as exc:
        parser.error(str(exc))
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
