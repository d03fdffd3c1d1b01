"""Command-line surface: classify | sweep | compare-kmeans | gen.

All randomness flows from --seed; when omitted a fresh seed is drawn
and logged to stderr so any run can be reproduced.  ACDAA_THREADS caps
worker threads for the repeated runs (default 1); the output never
depends on the worker count.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .daa import run_daa
from .dichotomy import DEFAULT_REPETITIONS
from .ensemble import collect_solutions, concordance, kmeans_baseline, run_external
from .graph import DEFAULT_NEIGHBORS, build_neighborhood_graph, repair_connectivity
from .kernel import KERNEL_KIND
from .matrix_io import (
    ParseError,
    generate_blob_plus_ring,
    generate_planted_votes,
    generate_two_blobs,
    generate_two_rings_blob,
    load_dissimilarity_csv,
    load_points_csv,
    load_votes_csv,
    points_to_dissimilarity,
    save_labels_csv,
    save_points_csv,
    save_votes_csv,
    votes_to_dissimilarity,
)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="acdaa",
        description="Automatic classification by repeated divisive-agglomerative runs.",
    )
    parser.add_argument("--version", action="version", version=f"acdaa {__version__}")
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("classify", help="run the full pipeline on one input")
    _common_input_flags(p)
    _common_algo_flags(p)
    p.add_argument("--json", action="store_true", help="emit the solution set as JSON")
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="complexity grid over k and r ranges")
    _common_input_flags(p)
    p.add_argument("--k-range", default="5:10", help="inclusive k range, LO:HI")
    p.add_argument("--r-range", default="5:10", help="inclusive r range, LO:HI")
    p.add_argument("-T", type=int, default=DEFAULT_REPETITIONS, dest="reps")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--neighbors", type=int, default=DEFAULT_NEIGHBORS)
    p.add_argument("--out", help="write the CSV grid to this file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare-kmeans",
                       help="contrast solution stability against a K-means baseline")
    _common_input_flags(p)
    _common_algo_flags(p)
    p.add_argument("--clusters", type=int, default=4, help="K for K-means")
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--out", help="write the report to this file")
    p.set_defaults(func=cmd_compare_kmeans)

    p = sub.add_parser("gen", help="write a synthetic dataset + ground-truth labels")
    p.add_argument("shape", choices=["two-blobs", "blob-ring", "two-rings-blob",
                                     "planted-votes"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output path prefix")
    p.add_argument("--m", type=int, default=450, help="planted-votes voters")
    p.add_argument("--n", type=int, default=250, help="planted-votes propositions")
    p.add_argument("--factions", type=int, default=4)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--n1", type=int, default=50, help="two-blobs first size")
    p.add_argument("--n2", type=int, default=50, help="two-blobs second size")
    p.add_argument("--separation", type=float, default=20.0)
    p.set_defaults(func=cmd_gen)

    return parser


def _common_input_flags(p):
    p.add_argument("--input", required=True, help="input data file")
    p.add_argument("--format", required=True,
                   choices=["dissimilarity", "votes", "points"])
    p.add_argument("--skip-header", action="store_true",
                   help="ignore the first row of a votes CSV")


def _common_algo_flags(p):
    p.add_argument("-k", type=int, default=10, help="number of successive splits")
    p.add_argument("-r", type=int, default=10, help="number of runs")
    p.add_argument("-T", type=int, default=DEFAULT_REPETITIONS, dest="reps",
                   help="paths accumulated per split")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--neighbors", type=int, default=DEFAULT_NEIGHBORS)


def _load(args):
    if args.format == "dissimilarity":
        return load_dissimilarity_csv(args.input), None
    if args.format == "votes":
        votes = load_votes_csv(args.input, skip_header=args.skip_header)
        return votes_to_dissimilarity(votes), votes.entries.astype(float)
    pts = load_points_csv(args.input)
    return points_to_dissimilarity(pts), pts.points


def _resolve_seed(seed):
    if seed is not None:
        return int(seed)
    fresh = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
    print(f"seed: {fresh}", file=sys.stderr)
    return fresh


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_classify(args):
    d, _ = _load(args)
    seed = _resolve_seed(args.seed)
    sol = run_external(d, k=args.k, r=args.r, reps=args.reps,
                       master_seed=seed, neighbors=args.neighbors)
    if args.json:
        text = json.dumps(sol.to_dict(), sort_keys=True) + "\n"
    else:
        lines = [
            f"objects: {d.size}  kernel: {KERNEL_KIND}",
            f"k={sol.k} r={sol.runs} T={sol.reps} seed={sol.seed}",
            f"distinct classifications: {len(sol.solutions)}",
            f"complexity: {sol.complexity:.6f}",
            "",
            f"{'mult':>5} {'stability':>10} {'classes':>8}  sizes",
        ]
        for s in sorted(sol.solutions, key=lambda s: (-s.multiplicity, -s.stability)):
            sizes = ",".join(str(x) for x in sorted(s.classification.class_sizes(), reverse=True))
            tag = " degenerate" if s.degenerate else ""
            lines.append(
                f"{s.multiplicity:>5} {s.stability:>10.4f} {s.num_classes:>8}  {sizes}{tag}"
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _parse_range(spec):
    lo, _, hi = spec.partition(":")
    lo = int(lo)
    hi = int(hi) if hi else lo
    if hi < lo:
        raise ValueError(f"bad range {spec!r}")
    return list(range(lo, hi + 1))


def cmd_sweep(args):
    d, _ = _load(args)
    seed = _resolve_seed(args.seed)
    ks = _parse_range(args.k_range)
    rs = _parse_range(args.r_range)
    grid = sweep_grid(d, ks, rs, reps=args.reps, master_seed=seed,
                      neighbors=args.neighbors)
    lines = ["r\\k," + ",".join(str(k) for k in ks)]
    for r, row in zip(rs, grid):
        lines.append(f"{r}," + ",".join(f"{c:.6f}" for c in row))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def sweep_grid(d, ks, rs, reps=DEFAULT_REPETITIONS, master_seed=0,
               neighbors=DEFAULT_NEIGHBORS):
    """Complexity for every (k, r) cell, reusing one set of run families.

    Runs are computed once at (max k, max r); the cell for smaller k and
    r is obtained from the first r families truncated to their first
    (k+1)k/2 entries.  Because each split draws its seed independently
    of k and runs independently of r, every cell equals what a direct
    computation with the same master seed would produce, and values down
    a column differ only by the runs added.
    """
    k_max, r_max = max(ks), max(rs)
    g = build_neighborhood_graph(d, neighbors)
    g = repair_connectivity(g, d)
    families = [
        run_daa(g, d, k_max, reps=reps, rng=np.random.SeedSequence([int(master_seed), i]))
        for i in range(r_max)
    ]
    grid = []
    for r in rs:
        row = []
        for k in ks:
            take = (k + 1) * k // 2
            distinct = {
                e.classification
                for fam in families[:r]
                for e in fam.entries[:take]
            }
            row.append(len(distinct) / (take * r))
        grid.append(row)
    return grid


def cmd_compare_kmeans(args):
    d, vectors = _load(args)
    if vectors is None:
        raise ValueError("compare-kmeans needs vector input (votes or points)")
    seed = _resolve_seed(args.seed)
    sol = run_external(d, k=args.k, r=args.r, reps=args.reps,
                       master_seed=seed, neighbors=args.neighbors)
    km = [
        kmeans_baseline(vectors, args.clusters,
                        rng=np.random.default_rng(np.random.SeedSequence([seed, 1, i])))
        for i in range(args.restarts)
    ]
    report = compare_report(sol, km)
    _emit(report, args.out)
    return 0


def compare_report(sol, km_results):
    """Textual report contrasting solution stability with K-means restarts."""
    km_conc = concordance(km_results)
    repeated = [s for s in sol.solutions if s.multiplicity >= 2]
    main_best = max((s.stability for s in repeated or sol.solutions))
    lines = [f"K-means restarts: {len(km_results)}"]
    for i, c in enumerate(km_results):
        sizes = ",".join(str(x) for x in sorted(c.class_sizes(), reverse=True))
        lines.append(f"  restart {i}: sizes {sizes}")
    lines.append(f"K-means family concordance: {km_conc:.6f}")
    lines.append("")
    lines.append(f"repeated pipeline solutions: {len(repeated)}")
    for s in sorted(repeated, key=lambda s: -s.stability)[:10]:
        sizes = ",".join(str(x) for x in sorted(s.classification.class_sizes(), reverse=True))
        lines.append(f"  mult {s.multiplicity}: stability {s.stability:.6f} sizes {sizes}")
    lines.append(f"best repeated-solution stability: {main_best:.6f}")
    verdict = "exceeds" if main_best > km_conc else "does not exceed"
    lines.append(f"pipeline stability {verdict} the K-means concordance")
    return "\n".join(lines) + "\n"


def cmd_gen(args):
    if args.shape == "planted-votes":
        votes, labels = generate_planted_votes(args.m, args.n, args.factions,
                                               args.noise, seed=args.seed)
        save_votes_csv(f"{args.out}_votes.csv", votes)
        save_labels_csv(f"{args.out}_labels.csv", labels)
        return 0
    if args.shape == "two-blobs":
        pts, labels = generate_two_blobs(args.n1, args.n2, args.separation,
                                         seed=args.seed)
    elif args.shape == "blob-ring":
        pts, labels = generate_blob_plus_ring(seed=args.seed)
    else:
        pts, labels = generate_two_rings_blob(seed=args.seed)
    save_points_csv(f"{args.out}_points.csv", pts)
    save_labels_csv(f"{args.out}_labels.csv", labels)
    return 0


if __name__ == "__main__":
    sys.exit(main())
