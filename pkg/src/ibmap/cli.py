"""Experiment command line: gen | learn | eval | landscape | eda | bench.

Every stochastic subcommand takes one 64-bit ``--seed``; internally the
seed fans out into named substreams (structure, params, sampler,
triplets, eda) so each stage is independently reproducible.  Results are
emitted as one JSON object per line (``--format csv`` flattens them).
"""

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone
from math import comb

from . import baselines, eda, evaluation, graph, synth
from .citest import TestCache
from .dataset import load_csv, save_csv
from .search import HCOptions, ibmap_hc
from .seeding import derive_seed, rng_stream

RECORD_FIELDS = (
    "timestamp", "subcommand", "seed", "algorithm", "n", "tau_or_topology",
    "rows", "hamming", "f_edges", "f_nonedges", "f_triplets", "accuracy",
    "runtime_ms", "tests_computed", "cache_hits", "ascents",
    "fitness", "learner", "population_size", "success", "generations", "f_star",
)


@dataclass
class RunRecord:
    timestamp: str = None
    subcommand: str = None
    seed: int = None
    algorithm: str = None
    n: int = None
    tau_or_topology: str = None
    rows: int = None
    hamming: int = None
    f_edges: float = None
    f_nonedges: float = None
    f_triplets: float = None
    accuracy: float = None
    runtime_ms: float = None
    tests_computed: int = None
    cache_hits: int = None
    ascents: int = None
    fitness: str = None
    learner: str = None
    population_size: int = None
    success: bool = None
    generations: int = None
    f_star: int = None


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class _RecordWriter:
    def __init__(self, path, fmt):
        self.fmt = fmt
        self._fh = open(path, "a", encoding="utf-8") if path else sys.stdout
        self._owned = path is not None
        self._csv = None

    def write(self, record):
        row = asdict(record)
        if self.fmt == "csv":
            if self._csv is None:
                self._csv = csv.DictWriter(self._fh, fieldnames=RECORD_FIELDS)
                self._csv.writeheader()
            self._csv.writerow(row)
        else:
            self._fh.write(json.dumps(row, sort_keys=True) + "\n")
        self._fh.flush()

    def close(self):
        if self._owned:
            self._fh.close()


def _generate_pair(n, tau, rows, seed, epsilon, burn_in, thin, grid=None):
    # Substreams keep structure/params/sampler independently reproducible.
    if grid is not None:
        g = synth.ising_structure(*grid)
    else:
        g = synth.random_structure(n, tau, rng_stream(seed, "structure"))
    model = synth.pairwise_model(g, epsilon, rng_stream(seed, "params"))
    d = synth.gibbs_sample(model, rows, burn_in, thin, rng_stream(seed, "sampler"))
    return g, d


def _cmd_gen(args, writer):
    grid = (args.grid_rows, args.grid_cols) if args.ising else None
    if grid is None and args.n is None:
        raise SystemExit("gen: --n is required unless --ising is given")
    g, d = _generate_pair(args.n, args.tau, args.rows, args.seed,
                          args.epsilon, args.burn_in, args.thin, grid)
    save_csv(d, args.out_data)
    graph.save_structure(g, args.out_structure)
    topo = f"ising{args.grid_rows}x{args.grid_cols}" if args.ising else f"tau={args.tau}"
    writer.write(RunRecord(
        timestamp=_now(), subcommand="gen", seed=args.seed, n=g.n,
        tau_or_topology=topo, rows=d.n_rows,
    ))
    return 0


def _run_learner(algo, d, alpha):
    t0 = time.perf_counter()
    if algo == "ibmap-hc":
        result = ibmap_hc(d, options=HCOptions(alpha=alpha))
    elif algo == "gsmn":
        result = baselines.gsmn(d, options=baselines.GsmnOptions(alpha=alpha))
    else:
        raise SystemExit(f"unknown algorithm {algo!r}")
    return result, (time.perf_counter() - t0) * 1000.0


def _cmd_learn(args, writer):
    d = load_csv(args.data)
    result, ms = _run_learner(args.algo, d, args.alpha)
    graph.save_structure(result.structure, args.out)
    writer.write(RunRecord(
        timestamp=_now(), subcommand="learn", seed=args.seed, algorithm=args.algo,
        n=d.n_vars, rows=d.n_rows, runtime_ms=round(ms, 3),
        tests_computed=result.tests_computed, cache_hits=result.cache_hits,
        ascents=result.ascents,
    ))
    return 0


def _metrics(g_learned, g_true, d_test, seed, per_card):
    n = g_true.n
    if per_card is None:
        per_card = max(1, round(100 * comb(n, 2) / max(n - 1, 1)))
    sample = evaluation.sample_triplets(n, per_card, seed=rng_stream(seed, "triplets"))
    record = {
        "hamming": graph.hamming(g_learned, g_true),
        "f_edges": evaluation.f_measure(g_learned, g_true, "edges"),
        "f_nonedges": evaluation.f_measure(g_learned, g_true, "nonedges"),
        "f_triplets": evaluation.f_measure(g_learned, g_true, "triplets", sample),
    }
    if d_test is not None:
        record["accuracy"] = evaluation.accuracy(d_test, g_learned, sample)
    return record


def _cmd_eval(args, writer):
    g_learned = graph.load_structure(args.learned)
    g_true = graph.load_structure(args.true)
    d_test = load_csv(args.data) if args.data else None
    metrics = _metrics(g_learned, g_true, d_test, args.seed, args.triplets_per_card)
    writer.write(RunRecord(
        timestamp=_now(), subcommand="eval", seed=args.seed, n=g_true.n,
        rows=d_test.n_rows if d_test else None, **metrics,
    ))
    return 0


def _cmd_landscape(args, writer):
    if args.n > graph.ENUMERATION_LIMIT:
        raise SystemExit(f"landscape: n must be <= {graph.ENUMERATION_LIMIT}")
    g_true, d = _generate_pair(args.n, args.tau, args.rows, args.seed,
                               args.epsilon, args.burn_in, args.thin)
    t0 = time.perf_counter()
    result = evaluation.landscape(d, g_true, alpha=args.alpha)
    ms = (time.perf_counter() - t0) * 1000.0
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("structure_index\tscore\thamming\n")
        for index, score, ham in result.records():
            fh.write(f"{index}\t{score:.9f}\t{ham}\n")
        fh.write(f"# argmax_index={result.best_index} argmax_score={result.best_score:.9f}\n")
        fh.write(f"# hc_index={result.hc_index} hc_score={result.hc_score:.9f} "
                 f"hc_hamming={result.hc_hamming}\n")
    hc = result.hc_result
    writer.write(RunRecord(
        timestamp=_now(), subcommand="landscape", seed=args.seed,
        algorithm="ibmap-hc", n=args.n, tau_or_topology=f"tau={args.tau}",
        rows=args.rows, hamming=result.hc_hamming, runtime_ms=round(ms, 3),
        tests_computed=hc.tests_computed, cache_hits=hc.cache_hits,
        ascents=hc.ascents,
    ))
    return 0


def _cmd_eda(args, writer):
    cfg = eda.EdaConfig(
        n=args.n, population_size=args.pop_size,
        fitness=args.fitness.replace("-", "_"), gamma=args.gamma,
        learner=args.learner.replace("-", "_"), k=args.k,
        max_generations=args.max_gens, alpha=args.alpha, seed=args.seed,
    )
    if args.critical:
        ladder = [int(v) for v in args.ladder.split(",")]
        result = eda.critical_population_search(cfg, ladder, repetitions=args.seeds)
        writer.write(RunRecord(
            timestamp=_now(), subcommand="eda", seed=args.seed, n=args.n,
            fitness=cfg.fitness, learner=cfg.learner,
            population_size=result.d_star, success=result.d_star is not None,
            f_star=None if result.d_star is None else round(result.f_star_mean),
        ))
        return 0
    for rep in range(args.seeds):
        run_seed = derive_seed(args.seed, "eda", rep)
        t0 = time.perf_counter()
        result = eda.moa_run(replace(cfg, seed=run_seed))
        ms = (time.perf_counter() - t0) * 1000.0
        writer.write(RunRecord(
            timestamp=_now(), subcommand="eda", seed=run_seed, n=args.n,
            fitness=cfg.fitness, learner=cfg.learner,
            population_size=args.pop_size, success=result.success,
            generations=result.generations, f_star=result.f_star,
            runtime_ms=round(ms, 3),
        ))
    return 0


def _bench_cell(cell):
    n, tau, rows, seed, algo, epsilon, alpha = cell
    g_true, d = _generate_pair(n, tau, rows, seed, epsilon,
                               synth.DEFAULT_BURN_IN, synth.DEFAULT_THIN)
    result, ms = _run_learner(algo, d, alpha)
    metrics = _metrics(result.structure, g_true, None, seed, None)
    return RunRecord(
        timestamp=_now(), subcommand="bench", seed=seed, algorithm=algo, n=n,
        tau_or_topology=f"tau={tau}", rows=rows, runtime_ms=round(ms, 3),
        tests_computed=result.tests_computed, cache_hits=result.cache_hits,
        ascents=result.ascents, **metrics,
    )


def _cmd_bench(args, writer):
    cells = []
    for n in _int_list(args.n_list):
        for tau in _float_list(args.tau_list):
            for rows in _int_list(args.d_list):
                for rep in range(args.seeds):
                    seed = derive_seed(args.seed, "bench", n, tau, rows, rep)
                    for algo in args.algos.split(","):
                        cells.append((n, tau, rows, seed, algo.strip(),
                                      args.epsilon, args.alpha))
    workers = args.workers or int(os.environ.get("IBMAP_WORKERS", "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_bench_cell, cells))
    else:
        records = [_bench_cell(c) for c in cells]
    for record in records:
        writer.write(record)
    return 0


def _int_list(text):
    return [int(v) for v in text.split(",")]


def _float_list(text):
    return [float(v) for v in text.split(",")]


def build_parser():
    parser = argparse.ArgumentParser(prog="ibmap")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--records", default=None, help="append records here instead of stdout")
        p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")

    p = sub.add_parser("gen", help="generate a synthetic structure + dataset pair")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--ising", action="store_true")
    p.add_argument("--grid-rows", type=int, default=None)
    p.add_argument("--grid-cols", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=synth.DEFAULT_EPSILON)
    p.add_argument("--burn-in", type=int, default=synth.DEFAULT_BURN_IN)
    p.add_argument("--thin", type=int, default=synth.DEFAULT_THIN)
    p.add_argument("--out-data", default="data.csv")
    p.add_argument("--out-structure", default="structure.json")
    add_common(p)

    p = sub.add_parser("learn", help="learn a structure from a CSV dataset")
    p.add_argument("--algo", choices=("ibmap-hc", "gsmn"), required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    add_common(p)

    p = sub.add_parser("eval", help="compare a learned structure against ground truth")
    p.add_argument("--learned", required=True)
    p.add_argument("--true", required=True)
    p.add_argument("--data", default=None, help="test CSV for triplet accuracy")
    p.add_argument("--triplets-per-card", type=int, default=None)
    add_common(p)

    p = sub.add_parser("landscape", help="exact score of every structure (n <= 6)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=synth.DEFAULT_EPSILON)
    p.add_argument("--burn-in", type=int, default=synth.DEFAULT_BURN_IN)
    p.add_argument("--thin", type=int, default=synth.DEFAULT_THIN)
    p.add_argument("--out", default="landscape.tsv")
    add_common(p)

    p = sub.add_parser("eda", help="run the distribution-estimation optimizer")
    p.add_argument("--fitness", choices=("onemax", "royal-road"), default="onemax")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=int, default=4)
    p.add_argument("--learner", choices=("ibmap-hc", "mi"), default="ibmap-hc")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--pop-size", type=int, default=50)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--max-gens", type=int, default=1000)
    p.add_argument("--critical", action="store_true")
    p.add_argument("--ladder", default=",".join(str(v) for v in eda.POPULATION_LADDER))
    add_common(p)

    p = sub.add_parser("bench", help="sweep a (n, tau, rows) grid with seeded repetitions")
    p.add_argument("--n-list", required=True)
    p.add_argument("--tau-list", required=True)
    p.add_argument("--d-list", required=True)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--algos", default="ibmap-hc,gsmn")
    p.add_argument("--epsilon", type=float, default=synth.DEFAULT_EPSILON)
    p.add_argument("--workers", type=int, default=None)
    add_common(p)

    return parser


_COMMANDS = {
    "gen": _cmd_gen,
    "learn": _cmd_learn,
    "eval": _cmd_eval,
    "landscape": _cmd_landscape,
    "eda": _cmd_eda,
    "bench": _cmd_bench,
}


def run(argv):
    args = build_parser().parse_args(argv)
    writer = _RecordWriter(args.records, args.format)
    try:
        return _COMMANDS[args.subcommand](args, writer)
    finally:
        writer.close()


def main(argv=None):
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except SystemExit:
        raise
    except (OSError, ValueError, LookupError) as exc:
        print(f"ibmap: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
