"""Command-line interface.

Subcommands::

    exprclust run           one algorithm, repeated with seeds seed, seed+1, ...
    exprclust compare       several algorithms on the same data and seed schedule
    exprclust seed-inspect  show CCIA groups and centroids
    exprclust generate      write a synthetic Gaussian benchmark matrix
    exprclust normalize     drop incomplete rows and z-score every row

Exit status: 0 success, 1 usage error, 2 data error, 3 algorithm error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import statistics
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .adaptive import AgmfiParams, IsodataParams, agmfi, isodata
from .errors import AlgorithmError, DataError
from .kmeans import kmeans, objective, random_init
from .matrix_io import (
    DEFAULT_MISSING,
    ExpressionMatrix,
    drop_missing_rows,
    generate_synthetic,
    load_delimited,
    write_delimited,
    zscore_normalize,
)
from .quality import silhouette
from .seeding import ccia_groups, ccia_seed

log = logging.getLogger("exprclust")

ALGORITHMS = ("kmeans", "isodata", "agmfi", "eiagmfi")
INITS = ("random", "ccia", "file")
FORMATS = ("table", "csv", "json-lines")
DEFAULT_COMPARE = "kmeans,ccia-kmeans,agmfi,eiagmfi"
RUN_FIELDS = ("dataset", "algorithm", "init", "run", "seed", "k_init", "final_k",
              "iterations", "objective", "quality")

EXIT_USAGE, EXIT_DATA, EXIT_ALGORITHM = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    algorithm: str
    init: str
    k_init: int = 10
    repeats: int = 7
    seed: int = 0
    init_file: Path | None = None
    max_iter: int | None = None
    kmeans_max_iter: int = 100
    tol: float = 1e-8
    theta_n: int = 1
    theta_s: float = 1.0
    theta_c: float = 1.0
    min_cluster_size: int = 1
    split_factor: float = 1.0
    merge_multiplier: float = 0.5
    name: str = ""
    init_centers: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {self.algorithm!r}")
        if self.init not in INITS:
            raise UsageError(f"unknown init {self.init!r}")
        if self.algorithm == "eiagmfi" and self.init != "ccia":
            raise UsageError("eiagmfi is always CCIA-seeded; --init must be ccia")
        if self.init == "file" and self.init_file is None:
            raise UsageError("--init file requires --init-file")
        if self.repeats < 1:
            raise UsageError("--repeats must be at least 1")
        if self.k_init < 1:
            raise UsageError("--k must be at least 1")
        if not self.name:
            default_init = "ccia" if self.algorithm == "eiagmfi" else "random"
            self.name = self.algorithm if self.init == default_init else f"{self.algorithm}:{self.init}"


@dataclass
class RunRecord:
    dataset: str
    algorithm: str
    init: str
    run: int
    seed: int
    k_init: int
    final_k: int
    iterations: int
    objective: float
    quality: float

    def row(self) -> list:
        return [getattr(self, f) for f in RUN_FIELDS]


def _centers(config: RunConfig, x: np.ndarray, seed: int) -> np.ndarray:
    if config.init == "random":
        return random_init(x, config.k_init, seed)
    if config.init == "ccia":
        return ccia_seed(x, config.k_init)
    if config.init_centers is None:
        config.init_centers = drop_missing_rows(load_delimited(config.init_file)).data
        config.k_init = config.init_centers.shape[0]
    return config.init_centers


def run_once(config: RunConfig, x: np.ndarray, seed: int):
    """Execute the configured algorithm once and return the ClusteringResult."""
    init = _centers(config, x, seed)
    if config.algorithm == "kmeans":
        return kmeans(x, init=init, max_iter=config.max_iter or config.kmeans_max_iter, tol=config.tol)
    if config.algorithm == "isodata":
        params = IsodataParams(k_init=init.shape[0], theta_n=config.theta_n, theta_s=config.theta_s,
                               theta_c=config.theta_c, max_iter=config.max_iter or 20,
                               kmeans_max_iter=config.kmeans_max_iter, tol=config.tol)
        return isodata(x, params, init=init)
    params = AgmfiParams(k_init=init.shape[0], min_cluster_size=config.min_cluster_size,
                         max_iter=config.max_iter or 20, split_factor=config.split_factor,
                         merge_multiplier=config.merge_multiplier,
                         kmeans_max_iter=config.kmeans_max_iter, tol=config.tol)
    # eiagmfi is agmfi from CCIA centroids, which _centers has already produced
    return agmfi(x, params, init=init)


def execute(config: RunConfig, dataset: str, mat: ExpressionMatrix) -> list[RunRecord]:
    x = mat.data
    records = []
    for r in range(config.repeats):
        seed = config.seed + r
        result = run_once(config, x, seed)
        try:
            quality = silhouette(x, result.labels, result.final_k).scaled_score
        except AlgorithmError:
            quality = math.nan
        records.append(RunRecord(dataset, config.name, config.init, r, seed, config.k_init,
                                 result.final_k, result.iterations,
                                 objective(x, result.labels, result.centroids), quality))
        log.info("%s run %d seed %d: final_k=%d quality=%.3f", config.name, r, seed, result.final_k, quality)
    return records


# ---------------------------------------------------------------- data input

_DELIM = {"tab": "\t", "\\t": "\t", "comma": ",", "space": " "}


def _load(args) -> list[tuple[str, ExpressionMatrix]]:
    inputs = args.input or []
    if isinstance(inputs, (str, Path)):
        inputs = [inputs]
    datasets = []
    if not inputs:
        mat, _ = generate_synthetic(args.k_true, args.points_per_cluster, args.dims,
                                    args.separation, args.spread, args.data_seed)
        datasets.append(("synthetic", mat))
    for path in inputs:
        raw = load_delimited(path, delimiter=_DELIM.get(args.delimiter, args.delimiter),
                             missing_token=args.missing or DEFAULT_MISSING)
        mat = drop_missing_rows(raw)
        if mat.n < raw.n:
            log.info("%s: dropped %d incomplete row(s)", path, raw.n - mat.n)
        datasets.append((Path(path).stem, mat))
    if args.normalize:
        datasets = [(name, zscore_normalize(mat)) for name, mat in datasets]
    return datasets


def _add_data_args(p, multiple=False):
    g = p.add_argument_group("data")
    if multiple:
        g.add_argument("--input", action="append", type=Path,
                       help="delimited matrix file; repeat for several datasets (default: synthetic)")
    else:
        g.add_argument("--input", type=Path, help="delimited matrix file (default: synthetic data)")
    g.add_argument("--delimiter", default="\t", help="field delimiter (default: tab)")
    g.add_argument("--missing", action="append", metavar="TOKEN",
                   help="missing-value token, repeatable (default: NA, N/A and empty)")
    g.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=False,
                   help="z-score every row to mean 0 and population std 1 (divisor m)")
    _add_synthetic_args(p)


def _add_synthetic_args(p):
    g = p.add_argument_group("synthetic data")
    g.add_argument("--k-true", type=int, default=5)
    g.add_argument("--points-per-cluster", type=int, default=60)
    g.add_argument("--dims", type=int, default=17)
    g.add_argument("--separation", type=float, default=8.0)
    g.add_argument("--spread", type=float, default=1.0)
    g.add_argument("--data-seed", type=int, default=0)


def _add_algorithm_args(p):
    g = p.add_argument_group("algorithm")
    g.add_argument("--k", "--k-init", dest="k_init", type=int, default=10, help="initial number of clusters")
    g.add_argument("--repeats", type=int, default=7)
    g.add_argument("--seed", type=int, default=0, help="run r uses seed + r")
    g.add_argument("--init-file", type=Path, help="centroid file for --init file")
    g.add_argument("--max-iter", type=int, help="outer iterations (adaptive) or Lloyd iterations (kmeans)")
    g.add_argument("--kmeans-max-iter", type=int, default=100)
    g.add_argument("--tol", type=float, default=1e-8)
    g.add_argument("--theta-n", type=int, default=1, help="isodata: minimum cluster size")
    g.add_argument("--theta-s", type=float, default=1.0, help="isodata: split threshold on per-dimension std")
    g.add_argument("--theta-c", type=float, default=1.0, help="isodata: merge threshold on centroid distance")
    g.add_argument("--min-cluster-size", type=int, default=1, help="agmfi: discard smaller clusters")
    g.add_argument("--split-factor", type=float, default=1.0,
                   help="agmfi: split when a cluster std exceeds this times the data std")
    g.add_argument("--merge-multiplier", type=float, default=0.5,
                   help="agmfi: merge threshold = this times the mean centroid distance")
    g.add_argument("--format", choices=FORMATS, default="table")


def _config(args, algorithm, init) -> RunConfig:
    return RunConfig(
        algorithm=algorithm, init=init, k_init=args.k_init, repeats=args.repeats, seed=args.seed,
        init_file=args.init_file, max_iter=args.max_iter, kmeans_max_iter=args.kmeans_max_iter,
        tol=args.tol, theta_n=args.theta_n, theta_s=args.theta_s, theta_c=args.theta_c,
        min_cluster_size=args.min_cluster_size, split_factor=args.split_factor,
        merge_multiplier=args.merge_multiplier,
    )


def _parse_algorithm(token: str) -> tuple[str, str]:
    token = token.strip()
    if token == "ccia-kmeans":
        return "kmeans", "ccia"
    name, _, init = token.partition(":")
    return name, init or ("ccia" if name == "eiagmfi" else "random")


# -------------------------------------------------------------------- output

def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.3f}"
    return str(v)


def _table(header, rows, out):
    cells = [[str(h) for h in header]] + [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        out.write("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _csv_value(v):
    return repr(v) if isinstance(v, float) else v


def _json_value(v):
    return None if isinstance(v, float) and math.isnan(v) else v


def _emit_runs(records, fmt, out):
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(RUN_FIELDS)
        for rec in records:
            w.writerow([_csv_value(v) for v in rec.row()])
    elif fmt == "json-lines":
        for rec in records:
            out.write(json.dumps({"record": "run", **{k: _json_value(v) for k, v in zip(RUN_FIELDS, rec.row())}}) + "\n")


def _median(values):
    values = [v for v in values if not math.isnan(v)]
    return statistics.median(values) if values else math.nan


def _summary(records):
    quality = [r.quality for r in records]
    finite = [q for q in quality if not math.isnan(q)]
    return {
        "median_quality": _median(quality),
        "best_quality": max(finite) if finite else math.nan,
        "median_final_k": _whole(statistics.median(r.final_k for r in records)),
    }


# ------------------------------------------------------------------ commands

def cmd_run(args, out) -> int:
    init = args.init or ("ccia" if args.algorithm == "eiagmfi" else "random")
    config = _config(args, args.algorithm, init)
    records = []
    for name, mat in _load(args):
        records += execute(config, name, mat)
    if args.format == "table":
        _table(["dataset", "run", "seed", "final_k", "iterations", "objective", "quality"],
               [[r.dataset, r.run, r.seed, r.final_k, r.iterations, r.objective, r.quality] for r in records], out)
        s = _summary(records)
        out.write(f"median quality {_fmt(s['median_quality'])}  best quality {_fmt(s['best_quality'])}"
                  f"  median final_k {_fmt(s['median_final_k'])}\n")
    else:
        _emit_runs(records, args.format, out)
        if args.format == "json-lines":
            out.write(json.dumps({"record": "summary", "algorithm": config.name,
                                  **{k: _json_value(v) for k, v in _summary(records).items()}}) + "\n")
    return 0


def _final_k_column(by_algorithm: dict[str, list[RunRecord]]) -> float:
    # one finalized K per comparison row, taken from the most adaptive method present
    for prefer in ("eiagmfi", "agmfi", "isodata"):
        for name, recs in by_algorithm.items():
            if recs and recs[0].algorithm.split(":")[0] == prefer:
                return _whole(statistics.median(r.final_k for r in recs))
    first = next(iter(by_algorithm.values()))
    return _whole(statistics.median(r.final_k for r in first))


def _whole(v):
    return int(v) if float(v).is_integer() else v


def cmd_compare(args, out) -> int:
    tokens = [t for t in args.algorithms.split(",") if t.strip()]
    if len(tokens) < 2:
        raise UsageError("compare needs at least 2 algorithms")
    configs = []
    for token in tokens:
        algorithm, init = _parse_algorithm(token)
        config = _config(args, algorithm, init)
        config.name = token.strip()
        configs.append(config)
    if len({c.name for c in configs}) != len(configs):
        raise UsageError("duplicate algorithm in --algorithms")

    rows = []
    records = []
    for dataset, mat in _load(args):
        by_algorithm = {}
        for config in configs:
            by_algorithm[config.name] = execute(config, dataset, mat)
            records += by_algorithm[config.name]
        rows.append((dataset, args.k_init, _final_k_column(by_algorithm),
                     {name: _summary(recs)["median_quality"] for name, recs in by_algorithm.items()}))

    if args.format == "table":
        names = [c.name for c in configs]
        _table(["dataset", "k_init", "final_k", *names],
               [[d, k, fk, *(q[n] for n in names)] for d, k, fk, q in rows], out)
    else:
        _emit_runs(records, args.format, out)
        if args.format == "json-lines":
            for d, k, fk, q in rows:
                out.write(json.dumps({"record": "comparison", "dataset": d, "k_init": k, "final_k": fk,
                                      "quality": {n: _json_value(v) for n, v in q.items()}}) + "\n")
    return 0


def cmd_seed_inspect(args, out) -> int:
    if args.k_init < 1:
        raise UsageError("--k must be at least 1")
    (_, mat), = _load(args)
    seeds = ccia_groups(mat.data, args.k_init)
    centers = ccia_seed(mat.data, args.k_init)
    for i, (group, center) in enumerate(zip(seeds.groups, centers), start=1):
        out.write(f"group {i} ({len(group)} rows): {' '.join(mat.labels[j] for j in group)}\n")
        out.write(f"centroid {i}: {' '.join(repr(float(v)) for v in center)}\n")
    return 0


def cmd_generate(args, out) -> int:
    mat, truth = generate_synthetic(args.k_true, args.points_per_cluster, args.dims,
                                    args.separation, args.spread, args.data_seed)
    write_delimited(args.output, mat)
    if args.truth:
        Path(args.truth).write_text("".join(f"{lab}\t{c}\n" for lab, c in zip(mat.labels, truth)))
    out.write(f"wrote {mat.n}x{mat.m} matrix to {args.output}\n")
    return 0


def cmd_normalize(args, out) -> int:
    args.input = [args.input]
    args.normalize = True
    (_, mat), = _load(args)
    write_delimited(args.output, mat, delimiter=_DELIM.get(args.delimiter, args.delimiter))
    out.write(f"wrote {mat.n}x{mat.m} normalized matrix to {args.output}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="exprclust", description="Clustering for gene-expression matrices.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run one algorithm with repeated seeds")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="kmeans")
    p.add_argument("--init", choices=INITS, help="default: ccia for eiagmfi, random otherwise")
    _add_data_args(p)
    _add_algorithm_args(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="compare algorithms on identical data and seeds")
    p.add_argument("--algorithms", default=DEFAULT_COMPARE,
                   help="comma list of NAME or NAME:INIT; 'ccia-kmeans' is kmeans:ccia "
                        f"(default: {DEFAULT_COMPARE})")
    _add_data_args(p, multiple=True)
    _add_algorithm_args(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("seed-inspect", help="print CCIA groups and centroids")
    _add_data_args(p)
    p.add_argument("--k", "--k-init", dest="k_init", type=int, required=True)
    p.set_defaults(func=cmd_seed_inspect)

    p = sub.add_parser("generate", help="write a synthetic Gaussian benchmark matrix")
    p.add_argument("--output", required=True, type=Path)
    p.add_argument("--truth", type=Path, help="also write label<TAB>true-cluster lines here")
    _add_synthetic_args(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("normalize", help="drop incomplete rows and z-score each row")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--output", required=True, type=Path)
    p.add_argument("--delimiter", default="\t")
    p.add_argument("--missing", action="append", metavar="TOKEN")
    p.set_defaults(func=cmd_normalize)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(name)s: %(message)s")
    log.debug("kernel backend: %s", kernels.BACKEND)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"exprclust: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"exprclust: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AlgorithmError as exc:
        print(f"exprclust: algorithm error: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM


if __name__ == "__main__":
    sys.exit(main())
